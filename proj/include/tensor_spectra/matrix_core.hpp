#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>

#include "tensor_spectra/rng.hpp"

namespace tensor_spectra {

using ComplexMatrix = Eigen::MatrixXcd;

// Sorted eigenphases in [0, 2*pi)
using PhaseVector = Eigen::VectorXd;

struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a Ginibre draw is numerically rank deficient; the caller
// redraws on a deterministic sub-stream.
struct degenerate_sample : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unitary matrix together with its certified departure from U*U = I.
struct UnitaryMatrix {
  ComplexMatrix matrix;
  double defect = 0.0;  // max |(U*U - I)_ij|
};

inline double unitarity_defect_bound(Eigen::Index n) {
  return 1e-12 * std::sqrt(static_cast<double>(n));
}

// n x n matrix of iid standard complex Gaussians (Re and Im each with
// variance 1/2), fully determined by (n, seed, index, stream, retry).
ComplexMatrix sample_ginibre(Eigen::Index n, std::uint64_t seed, std::uint64_t index,
                             std::uint64_t stream = 0, std::uint64_t retry = 0);

double unitarity_defect(const ComplexMatrix& a);

// Certifies the defect bound; throws numerical_error if it is violated.
UnitaryMatrix certify_unitary(ComplexMatrix u);

// QR factorization with the diagonal of R made positive; the resulting Q is
// Haar distributed when g is Ginibre.
UnitaryMatrix haar_unitary_from_ginibre(const ComplexMatrix& g);

UnitaryMatrix sample_haar_unitary(Eigen::Index n, std::uint64_t seed, std::uint64_t index,
                                  std::uint64_t stream = 0);

// arg z mapped to [0, 2*pi)
double principal_phase(std::complex<double> z);

// Sorted eigenphases of a certified unitary.  Diagonal inputs are read off
// directly; otherwise a complex Schur decomposition is used.
PhaseVector eigenphases(const UnitaryMatrix& u);

}  // namespace tensor_spectra
