#include "tensor_spectra/matrix_core.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace tensor_spectra {

ComplexMatrix sample_ginibre(Eigen::Index n, std::uint64_t seed, std::uint64_t index,
                             std::uint64_t stream, std::uint64_t retry) {
  if (n < 1) throw std::invalid_argument("sample_ginibre: dimension must be >= 1");
  CounterRng rng(seed, index, (stream << 32) + retry);
  ComplexMatrix g(n, n);
  const double scale = std::sqrt(0.5);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double re = rng.next_gaussian();
      const double im = rng.next_gaussian();
      g(i, j) = std::complex<double>(scale * re, scale * im);
    }
  }
  return g;
}

double unitarity_defect(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("unitarity_defect: matrix not square");
  ComplexMatrix gram = a.adjoint() * a;
  gram.diagonal().array() -= 1.0;
  return gram.cwiseAbs().maxCoeff();
}

UnitaryMatrix certify_unitary(ComplexMatrix u) {
  const double defect = unitarity_defect(u);
  if (defect > unitarity_defect_bound(u.rows()))
    throw numerical_error("certify_unitary: defect above certification bound");
  return UnitaryMatrix{std::move(u), defect};
}

UnitaryMatrix haar_unitary_from_ginibre(const ComplexMatrix& g) {
  if (g.rows() != g.cols())
    throw std::invalid_argument("haar_unitary_from_ginibre: matrix not square");
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const auto r_diag = qr.matrixQR().diagonal();
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    const double mag = std::abs(r_diag(j));
    if (mag < 1e-300) throw degenerate_sample("haar_unitary_from_ginibre: rank-deficient draw");
    // absorb the phase of R_jj into Q so that R has positive diagonal
    q.col(j) *= r_diag(j) / mag;
  }
  return certify_unitary(std::move(q));
}

UnitaryMatrix sample_haar_unitary(Eigen::Index n, std::uint64_t seed, std::uint64_t index,
                                  std::uint64_t stream) {
  for (std::uint64_t retry = 0; retry < 64; ++retry) {
    try {
      return haar_unitary_from_ginibre(sample_ginibre(n, seed, index, stream, retry));
    } catch (const degenerate_sample&) {
      // redraw on the next deterministic sub-stream
    }
  }
  throw numerical_error("sample_haar_unitary: retry budget exhausted");
}

double principal_phase(std::complex<double> z) {
  double phase = std::atan2(z.imag(), z.real());
  if (phase < 0.0) phase += kTwoPi;
  if (phase >= kTwoPi) phase -= kTwoPi;
  return phase;
}

namespace {

bool is_diagonal(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (i != j && m(i, j) != std::complex<double>(0.0, 0.0)) return false;
  return true;
}

}  // namespace

PhaseVector eigenphases(const UnitaryMatrix& u) {
  const Eigen::Index n = u.matrix.rows();
  Eigen::VectorXcd eigenvalues(n);
  if (is_diagonal(u.matrix)) {
    eigenvalues = u.matrix.diagonal();
  } else {
    Eigen::ComplexSchur<ComplexMatrix> schur;
    schur.setMaxIterations(40 * n);
    schur.compute(u.matrix, /*computeU=*/false);
    if (schur.info() != Eigen::Success)
      throw numerical_error("eigenphases: Schur iteration did not converge");
    eigenvalues = schur.matrixT().diagonal();
  }
  PhaseVector phases(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::abs(std::abs(eigenvalues(j)) - 1.0) > 1e-8)
      throw numerical_error("eigenphases: eigenvalue modulus departs from the unit circle");
    phases(j) = principal_phase(eigenvalues(j));
  }
  std::sort(phases.begin(), phases.end());
  return phases;
}

}  // namespace tensor_spectra
