#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tensor_spectra/lemma_lab.hpp"

using namespace tensor_spectra;

TEST_CASE("Stirling expansion of powers into falling factorials") {
  for (int k = 1; k <= 8; ++k)
    for (int x = 0; x <= 10; ++x) CHECK(stirling_identity_check(k, x));
  CHECK(stirling_identity_check(20, 30));
  CHECK(stirling_identity_check(1, 0));
  CHECK_THROWS_AS(stirling_identity_check(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(stirling_identity_check(21, 1), std::invalid_argument);
}

TEST_CASE("multinomial tail on hand-computed cases") {
  // n = 1, two parts: one part is always zero, hence always small
  CHECK(multinomial_tail(2, 0.4, 1).tail_exact == BigRational(1));

  // n = 10, two parts, threshold 1: complement counts both parts >= 2,
  // sum_{p=2}^{8} C(10, p) = 1002 of 1024 sequences
  const TailReport report = multinomial_tail(2, 0.1, 10);
  CHECK(report.tail_exact == BigRational(11, 512));
  CHECK(report.tail == doctest::Approx(11.0 / 512.0).epsilon(1e-15));

  CHECK_THROWS_AS(multinomial_tail(1, 0.1, 10), std::invalid_argument);
  CHECK_THROWS_AS(multinomial_tail(2, 0.6, 10), std::invalid_argument);
  CHECK_THROWS_AS(multinomial_tail(2, 0.1, 0), std::invalid_argument);
}

TEST_CASE("multinomial tail is dominated by the Hoeffding bound") {
  for (int s = 2; s <= 8; ++s)
    for (double gamma = 0.05; gamma < 1.0 / s - 1e-9; gamma += 0.05)
      for (int n : {1, 5, 12, 30, 60}) {
        const TailReport report = multinomial_tail(s, gamma, n);
        CHECK(report.tail <= report.hoeffding + 1e-12);
      }
}

TEST_CASE("multinomial tail vanishes as n grows") {
  CHECK(multinomial_tail(4, 0.1, 60).tail_exact < multinomial_tail(4, 0.1, 12).tail_exact);
}

TEST_CASE("exact binary rank via Bareiss elimination") {
  CHECK(binary_rank(BinaryMatrix::Identity(4, 4)) == 4);
  CHECK(binary_rank(BinaryMatrix::Ones(3, 5)) == 1);
  CHECK(binary_rank(BinaryMatrix::Zero(2, 2)) == 0);

  BinaryMatrix a(3, 3);
  a << 1, 0, 1,
       0, 1, 1,
       1, 1, 0;
  CHECK(binary_rank(a) == 3);

  BinaryMatrix c(2, 4);
  c << 1, 0, 1, 0,
       1, 0, 1, 0;
  CHECK(binary_rank(c) == 1);

  // rank over Q differs from rank over GF(2): parity-singular but Q-regular
  BinaryMatrix d(3, 3);
  d << 0, 1, 1,
       1, 0, 1,
       1, 1, 0;
  CHECK(binary_rank(d) == 3);

  CHECK_THROWS_AS(binary_rank(BinaryMatrix(0, 0)), std::invalid_argument);
  BinaryMatrix bad(1, 1);
  bad(0, 0) = 2;
  CHECK_THROWS_AS(binary_rank(bad), std::invalid_argument);
}

TEST_CASE("rank lower bound for distinct-row matrices with an all-ones column") {
  const RankLemmaReport small = rank_lemma_check(3, 8);
  CHECK_FALSE(small.counterexample_found);
  CHECK(small.matrices_checked > 0);

  const RankLemmaReport full = rank_lemma_check(4, 8);
  CHECK_FALSE(full.counterexample_found);
  CHECK(full.matrices_checked > small.matrices_checked);

  CHECK_THROWS_AS(rank_lemma_check(6, 4), std::invalid_argument);
  CHECK_THROWS_AS(rank_lemma_check(3, 9), std::invalid_argument);
}
