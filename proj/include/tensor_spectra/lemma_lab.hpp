#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

namespace tensor_spectra {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// Matrix with entries in {0, 1}.
using BinaryMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;

struct TailReport {
  int parts = 0;       // s
  double gamma = 0.0;
  int n = 0;
  BigRational tail_exact;  // mass of compositions with some part <= gamma n
  double tail = 0.0;
  double hoeffding = 0.0;  // s exp(-2 n (1/s - gamma)^2)
};

// Exact multinomial tail: P(some part of a uniform s-ary composition of n
// is <= gamma n), computed in exact rational arithmetic through the
// complementary all-parts-large sum.
TailReport multinomial_tail(int s, double gamma, int n);

double hoeffding_bound(int s, double gamma, int n);

// Checks sum_p S(k, p) x(x-1)...(x-p+1) == x^k in exact integers, with
// S(k, p) the Stirling numbers of the second kind.
bool stirling_identity_check(int k, int x);

// Exact rank over the rationals via fraction-free Bareiss elimination.
int binary_rank(const BinaryMatrix& a);

struct RankLemmaReport {
  long long matrices_checked = 0;
  bool counterexample_found = false;
  int bad_k = 0;
  int bad_j = 0;
};

// Exhaustively verifies that every k x j binary matrix with distinct rows,
// distinct columns and an all-ones column has rank >= min(k, floor(log2 j) + 1),
// for all k <= k_max and j <= j_max.
RankLemmaReport rank_lemma_check(int k_max, int j_max);

}  // namespace tensor_spectra
