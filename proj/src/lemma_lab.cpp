#include "tensor_spectra/lemma_lab.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace tensor_spectra {

namespace {

std::vector<std::vector<BigInt>> binomial_table(int n) {
  std::vector<std::vector<BigInt>> c(n + 1);
  for (int i = 0; i <= n; ++i) {
    c[i].resize(i + 1);
    c[i][0] = 1;
    c[i][i] = 1;
    for (int j = 1; j < i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
  }
  return c;
}

}  // namespace

TailReport multinomial_tail(int s, double gamma, int n) {
  if (s < 2 || s > 8) throw std::invalid_argument("multinomial_tail: need 2 <= s <= 8");
  if (n < 1 || n > 60) throw std::invalid_argument("multinomial_tail: need 1 <= n <= 60");
  if (!(gamma > 0.0) || !(gamma < 1.0 / s))
    throw std::invalid_argument("multinomial_tail: need gamma in (0, 1/s)");
  const int threshold = static_cast<int>(std::floor(gamma * n));  // parts <= threshold are small
  const auto binom = binomial_table(n);

  // weighted count of compositions of m into j parts, all parts > threshold
  std::vector<std::vector<BigInt>> large(s + 1, std::vector<BigInt>(n + 1));
  large[0][0] = 1;
  for (int j = 1; j <= s; ++j)
    for (int m = 0; m <= n; ++m) {
      BigInt acc = 0;
      for (int part = threshold + 1; part <= m; ++part)
        acc += binom[m][part] * large[j - 1][m - part];
      large[j][m] = acc;
    }

  BigInt power = 1;
  for (int i = 0; i < n; ++i) power *= s;
  const BigRational complement(large[s][n], power);

  TailReport report;
  report.parts = s;
  report.gamma = gamma;
  report.n = n;
  report.tail_exact = BigRational(1) - complement;
  report.tail = static_cast<double>(report.tail_exact);
  report.hoeffding = hoeffding_bound(s, gamma, n);
  return report;
}

double hoeffding_bound(int s, double gamma, int n) {
  const double slack = 1.0 / s - gamma;
  return s * std::exp(-2.0 * n * slack * slack);
}

bool stirling_identity_check(int k, int x) {
  if (k < 1 || k > 20) throw std::invalid_argument("stirling_identity_check: need 1 <= k <= 20");
  if (x < 0 || x > 30) throw std::invalid_argument("stirling_identity_check: need 0 <= x <= 30");
  // S(k, p) = p S(k-1, p) + S(k-1, p-1)
  std::vector<std::vector<BigInt>> stirling(k + 1, std::vector<BigInt>(k + 1));
  stirling[0][0] = 1;
  for (int row = 1; row <= k; ++row)
    for (int p = 1; p <= row; ++p)
      stirling[row][p] = p * stirling[row - 1][p] + stirling[row - 1][p - 1];

  BigInt sum = 0;
  for (int p = 1; p <= k; ++p) {
    BigInt falling = 1;
    for (int i = 0; i < p; ++i) falling *= (x - i);
    sum += stirling[k][p] * falling;
  }
  BigInt power = 1;
  for (int i = 0; i < k; ++i) power *= x;
  return sum == power;
}

int binary_rank(const BinaryMatrix& a) {
  const int rows = static_cast<int>(a.rows());
  const int cols = static_cast<int>(a.cols());
  if (rows < 1 || cols < 1) throw std::invalid_argument("binary_rank: empty matrix");
  std::vector<std::vector<BigInt>> m(rows, std::vector<BigInt>(cols));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      if (a(i, j) != 0 && a(i, j) != 1)
        throw std::invalid_argument("binary_rank: entries must be 0 or 1");
      m[i][j] = a(i, j);
    }
  // fraction-free Bareiss elimination; exact divisions throughout
  BigInt previous_pivot = 1;
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot_row = -1;
    for (int i = rank; i < rows; ++i)
      if (m[i][col] != 0) {
        pivot_row = i;
        break;
      }
    if (pivot_row < 0) continue;
    std::swap(m[rank], m[pivot_row]);
    for (int i = rank + 1; i < rows; ++i) {
      for (int j = col + 1; j < cols; ++j)
        m[i][j] = (m[rank][col] * m[i][j] - m[i][col] * m[rank][j]) / previous_pivot;
      m[i][col] = 0;
    }
    previous_pivot = m[rank][col];
    ++rank;
  }
  return rank;
}

RankLemmaReport rank_lemma_check(int k_max, int j_max) {
  if (k_max < 1 || k_max > 5) throw std::invalid_argument("rank_lemma_check: need 1 <= k_max <= 5");
  if (j_max < 1 || j_max > (1 << k_max))
    throw std::invalid_argument("rank_lemma_check: need 1 <= j_max <= 2^k_max");

  RankLemmaReport report;
  for (int k = 1; k <= k_max; ++k) {
    const int all_ones = (1 << k) - 1;
    for (int j = 1; j <= std::min(j_max, 1 << k); ++j) {
      // choose j - 1 distinct columns besides the mandatory all-ones one
      const int pool = all_ones;  // candidate masks 0 .. 2^k - 2
      const int picks = j - 1;
      double combos = 1.0;
      for (int i = 0; i < picks; ++i) combos *= static_cast<double>(pool - i) / (i + 1);
      if (combos > 2e7) throw std::invalid_argument("rank_lemma_check: enumeration too large");

      std::vector<int> chosen(picks);
      for (int i = 0; i < picks; ++i) chosen[i] = i;
      const int bound = std::min(k, static_cast<int>(std::floor(std::log2(j))) + 1);
      while (true) {
        // columns: chosen masks plus the all-ones column
        std::vector<int> columns(chosen.begin(), chosen.end());
        columns.push_back(all_ones);

        // rows must be pairwise distinct
        std::vector<unsigned> row_signature(k, 0);
        for (int r = 0; r < k; ++r)
          for (int c = 0; c < j; ++c)
            row_signature[r] |= static_cast<unsigned>((columns[c] >> r) & 1) << c;
        bool rows_distinct = true;
        for (int r = 0; r < k && rows_distinct; ++r)
          for (int t = r + 1; t < k; ++t)
            if (row_signature[r] == row_signature[t]) {
              rows_distinct = false;
              break;
            }

        if (rows_distinct) {
          BinaryMatrix matrix(k, j);
          for (int r = 0; r < k; ++r)
            for (int c = 0; c < j; ++c) matrix(r, c) = (columns[c] >> r) & 1;
          ++report.matrices_checked;
          if (binary_rank(matrix) < bound) {
            report.counterexample_found = true;
            report.bad_k = k;
            report.bad_j = j;
            return report;
          }
        }

        // next combination
        int pos = picks - 1;
        while (pos >= 0 && chosen[pos] == pool - picks + pos) --pos;
        if (pos < 0) break;
        ++chosen[pos];
        for (int i = pos + 1; i < picks; ++i) chosen[i] = chosen[i - 1] + 1;
      }
    }
  }
  return report;
}

}  // namespace tensor_spectra
