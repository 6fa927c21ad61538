#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <span>

namespace tensor_spectra {

struct KernelContext {
  int n = 1;  // matrix dimension N
};

// S_N(x) = sin(N x / 2) / (2 pi sin(x / 2)); near the singular points the
// analytic limit at the nearest multiple of 2 pi is returned.
double sine_kernel(const KernelContext& ctx, double x);

// (2 pi / N) S_N(2 pi x / N); unit value at the origin.
double rescaled_kernel(const KernelContext& ctx, double x);

// det[kernel(x_s - x_t)] for 1 <= k <= 8 points; tiny negative determinants
// (within -1e-10) are clamped to zero.
double cue_intensity(const KernelContext& ctx, std::span<const double> points, bool rescaled);

// Unclamped determinant, for nonnegativity checks.
double cue_intensity_det(const KernelContext& ctx, std::span<const double> points, bool rescaled);

struct MonteCarloEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

// ((N-k)!/N!) * integral over [0, 2 pi)^k of det[S_N(x_s - x_t)], estimated
// by Monte Carlo; the target value is 1 for every admissible k.
MonteCarloEstimate intensity_integral_check(const KernelContext& ctx, int k,
                                            long long mc_samples, std::uint64_t seed = 2024);

// Deterministic tensorized Gauss-Legendre version, k <= 3.
double intensity_integral_quadrature(const KernelContext& ctx, int k, int nodes = 64);

struct SupCheck {
  double max_intensity = 0.0;     // max rescaled rho_k over the sampled tuples
  double max_kernel_ratio = 0.0;  // max |S_N(x)| * 2 pi / N over the sampled x
};

SupCheck intensity_sup_check(const KernelContext& ctx, int k, long long trials,
                             std::uint64_t seed = 2024);

struct VoidSeriesResult {
  double s = 0.0;
  Eigen::VectorXd terms;         // signed term for ell = 1..ell_max
  Eigen::VectorXd partial_sums;  // 1 + terms[0..ell]
  Eigen::VectorXd term_errors;   // per-term integration error estimates
  double value = 0.0;
  double error_estimate = 0.0;
};

// Alternating series 1 + sum_ell (-1)^ell / ell! * integral over [0,s]^ell
// of the given intensity; dimensions <= 3 use tensorized Gauss-Legendre,
// higher dimensions a shifted rank-1 lattice.
VoidSeriesResult void_series_generic(
    const std::function<double(std::span<const double>)>& intensity, int ell_max, double s,
    int nodes = 64, long long qmc_points = 200000, std::uint64_t seed = 2024);

// Specialization to the rescaled CUE_N determinantal intensities; the series
// truncates at ell = N.
VoidSeriesResult void_series(const KernelContext& ctx, double s, int nodes = 64,
                             long long qmc_points = 200000, std::uint64_t seed = 2024);

// Finite-N pair intensity of the rescaled tensor-product spectrum
// (k = 2 instance of the exact finite-N formula); x1, x2 in [0, N^2).
double tensor_pair_intensity(const KernelContext& ctx, double x1, double x2, int nodes = 96);

}  // namespace tensor_spectra
