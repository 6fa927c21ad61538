#pragma once

#include <Eigen/Dense>

namespace tensor_spectra {

// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

// Cached; nodes found by Newton iteration on the Legendre recurrence.
const GaussLegendre& gauss_legendre(int n);

// Same rule mapped to [a, b].
GaussLegendre gauss_legendre_on(int n, double a, double b);

}  // namespace tensor_spectra
