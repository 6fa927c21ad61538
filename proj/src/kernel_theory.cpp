#include "tensor_spectra/kernel_theory.hpp"

#include <Eigen/LU>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "tensor_spectra/quadrature.hpp"
#include "tensor_spectra/rng.hpp"

namespace tensor_spectra {

namespace {

void check_context(const KernelContext& ctx) {
  if (ctx.n < 1) throw std::invalid_argument("KernelContext: N must be >= 1");
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

double sine_kernel(const KernelContext& ctx, double x) {
  check_context(ctx);
  const double n = ctx.n;
  // reduce to the nearest multiple of 2 pi first: both half-angle sines then
  // share the rounding error of the reduced argument, which cancels in the
  // ratio and keeps the N/2pi sup bound intact near the singular points
  const double whole = std::round(x / kTwoPi);
  const double r = x - kTwoPi * whole;
  const double sign =
      (static_cast<long long>(whole) * (ctx.n - 1)) % 2 == 0 ? 1.0 : -1.0;
  const double half_sine = std::sin(0.5 * r);
  if (std::abs(half_sine) < 1e-8) return sign * n / kTwoPi;  // analytic limit
  return sign * std::sin(0.5 * n * r) / (kTwoPi * half_sine);
}

double rescaled_kernel(const KernelContext& ctx, double x) {
  return kTwoPi / ctx.n * sine_kernel(ctx, kTwoPi * x / ctx.n);
}

double cue_intensity_det(const KernelContext& ctx, std::span<const double> points,
                         bool rescaled) {
  check_context(ctx);
  const int k = static_cast<int>(points.size());
  if (k < 1 || k > 8) throw std::invalid_argument("cue_intensity: need 1 <= k <= 8");
  Eigen::MatrixXd kernel(k, k);
  for (int s = 0; s < k; ++s)
    for (int t = 0; t < k; ++t)
      kernel(s, t) = rescaled ? rescaled_kernel(ctx, points[s] - points[t])
                              : sine_kernel(ctx, points[s] - points[t]);
  if (k == 1) return kernel(0, 0);
  return Eigen::PartialPivLU<Eigen::MatrixXd>(kernel).determinant();
}

double cue_intensity(const KernelContext& ctx, std::span<const double> points, bool rescaled) {
  double value = cue_intensity_det(ctx, points, rescaled);
  if (value < 0.0 && value > -1e-10) value = 0.0;
  return value;
}

MonteCarloEstimate intensity_integral_check(const KernelContext& ctx, int k,
                                            long long mc_samples, std::uint64_t seed) {
  check_context(ctx);
  if (k < 1 || k > ctx.n) throw std::invalid_argument("intensity_integral_check: need 1 <= k <= N");
  if (mc_samples < 1) throw std::invalid_argument("intensity_integral_check: need samples >= 1");
  double prefactor = 1.0;  // (N-k)!/N! * (2 pi)^k
  for (int i = 0; i < k; ++i) prefactor *= kTwoPi / (ctx.n - i);
  CounterRng rng(seed, 0x11c4);
  std::vector<double> x(k);
  double sum = 0.0, sum_sq = 0.0;
  for (long long i = 0; i < mc_samples; ++i) {
    for (int j = 0; j < k; ++j) x[j] = kTwoPi * rng.next_unit();
    const double v = prefactor * cue_intensity_det(ctx, x, /*rescaled=*/false);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / mc_samples;
  const double variance = std::max(0.0, sum_sq / mc_samples - mean * mean);
  return MonteCarloEstimate{mean, std::sqrt(variance / mc_samples)};
}

double intensity_integral_quadrature(const KernelContext& ctx, int k, int nodes) {
  check_context(ctx);
  if (k < 1 || k > 3) throw std::invalid_argument("intensity_integral_quadrature: need k <= 3");
  if (k > ctx.n) throw std::invalid_argument("intensity_integral_quadrature: need k <= N");
  const GaussLegendre rule = gauss_legendre_on(nodes, 0.0, kTwoPi);
  double prefactor = 1.0;
  for (int i = 0; i < k; ++i) prefactor /= (ctx.n - i);
  std::array<double, 3> x{};
  double total = 0.0;
  std::array<int, 3> idx{};
  const int count = nodes;
  // tensorized loop over k axes
  std::function<void(int, double)> recurse = [&](int depth, double weight) {
    if (depth == k) {
      total += weight * cue_intensity_det(ctx, std::span<const double>(x.data(), k), false);
      return;
    }
    for (idx[depth] = 0; idx[depth] < count; ++idx[depth]) {
      x[depth] = rule.nodes(idx[depth]);
      recurse(depth + 1, weight * rule.weights(idx[depth]));
    }
  };
  recurse(0, prefactor);
  return total;
}

SupCheck intensity_sup_check(const KernelContext& ctx, int k, long long trials,
                             std::uint64_t seed) {
  check_context(ctx);
  if (k < 1 || k > 8) throw std::invalid_argument("intensity_sup_check: need 1 <= k <= 8");
  CounterRng rng(seed, 0x5c);
  SupCheck out;
  std::vector<double> x(k);
  for (long long i = 0; i < trials; ++i) {
    for (int j = 0; j < k; ++j) x[j] = ctx.n * rng.next_unit();
    out.max_intensity = std::max(out.max_intensity, cue_intensity(ctx, x, /*rescaled=*/true));
    const double u = kTwoPi * rng.next_unit();
    out.max_kernel_ratio =
        std::max(out.max_kernel_ratio, std::abs(sine_kernel(ctx, u)) * kTwoPi / ctx.n);
  }
  return out;
}

namespace {

// integral of `intensity` over [0, s]^dim by tensorized Gauss-Legendre
double integrate_box_gl(const std::function<double(std::span<const double>)>& intensity,
                        int dim, double s, int nodes) {
  const GaussLegendre rule = gauss_legendre_on(nodes, 0.0, s);
  std::vector<double> x(dim);
  std::vector<int> idx(dim, 0);
  double total = 0.0;
  std::function<void(int, double)> recurse = [&](int depth, double weight) {
    if (depth == dim) {
      total += weight * intensity(x);
      return;
    }
    for (int i = 0; i < nodes; ++i) {
      x[depth] = rule.nodes(i);
      recurse(depth + 1, weight * rule.weights(i));
    }
  };
  recurse(0, 1.0);
  return total;
}

// shifted rank-1 Kronecker lattice; returns mean over 8 interleaved batches
// together with the batch-spread error estimate
std::pair<double, double> integrate_box_qmc(
    const std::function<double(std::span<const double>)>& intensity, int dim, double s,
    long long points, std::uint64_t seed, std::uint64_t stream) {
  static constexpr std::array<int, 24> primes{2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                                              41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};
  if (dim > static_cast<int>(primes.size()))
    throw std::invalid_argument("integrate_box_qmc: dimension too large");
  CounterRng rng(seed, stream);
  std::vector<double> alpha(dim), shift(dim), x(dim);
  for (int j = 0; j < dim; ++j) {
    double a = std::sqrt(static_cast<double>(primes[j]));
    alpha[j] = a - std::floor(a);
    shift[j] = rng.next_unit();
  }
  constexpr int kBatches = 8;
  std::array<double, kBatches> batch_sum{};
  std::array<long long, kBatches> batch_count{};
  for (long long i = 0; i < points; ++i) {
    for (int j = 0; j < dim; ++j) {
      double u = shift[j] + static_cast<double>(i) * alpha[j];
      u -= std::floor(u);
      x[j] = s * u;
    }
    const int b = static_cast<int>(i % kBatches);
    batch_sum[b] += intensity(x);
    ++batch_count[b];
  }
  double mean = 0.0;
  for (int b = 0; b < kBatches; ++b) mean += batch_sum[b] / batch_count[b];
  mean /= kBatches;
  double spread = 0.0;
  for (int b = 0; b < kBatches; ++b) {
    const double d = batch_sum[b] / batch_count[b] - mean;
    spread += d * d;
  }
  const double volume = std::pow(s, dim);
  const double std_error = std::sqrt(spread / (kBatches * (kBatches - 1.0)));
  return {volume * mean, volume * std_error};
}

}  // namespace

VoidSeriesResult void_series_generic(
    const std::function<double(std::span<const double>)>& intensity, int ell_max, double s,
    int nodes, long long qmc_points, std::uint64_t seed) {
  if (s < 0.0) throw std::invalid_argument("void_series: s must be nonnegative");
  if (ell_max < 0) throw std::invalid_argument("void_series: ell_max must be nonnegative");
  VoidSeriesResult result;
  result.s = s;
  result.terms.resize(ell_max);
  result.partial_sums.resize(ell_max);
  result.term_errors.resize(ell_max);
  double value = 1.0;
  double error_sq = 0.0;
  for (int ell = 1; ell <= ell_max; ++ell) {
    double integral = 0.0, error = 0.0;
    if (s > 0.0) {
      if (ell <= 3) {
        integral = integrate_box_gl(intensity, ell, s, nodes);
        const double coarse = integrate_box_gl(intensity, ell, s, std::max(2, nodes / 2));
        error = std::abs(integral - coarse);
      } else {
        std::tie(integral, error) =
            integrate_box_qmc(intensity, ell, s, qmc_points, seed, static_cast<std::uint64_t>(ell));
      }
    }
    const double sign = (ell % 2 == 0) ? 1.0 : -1.0;
    const double term = sign * integral / factorial(ell);
    result.terms(ell - 1) = term;
    result.term_errors(ell - 1) = error / factorial(ell);
    value += term;
    error_sq += result.term_errors(ell - 1) * result.term_errors(ell - 1);
    result.partial_sums(ell - 1) = value;
  }
  result.value = value;
  result.error_estimate = std::sqrt(error_sq);
  return result;
}

VoidSeriesResult void_series(const KernelContext& ctx, double s, int nodes,
                             long long qmc_points, std::uint64_t seed) {
  check_context(ctx);
  if (s < 0.0 || s > ctx.n)
    throw std::invalid_argument("void_series: s must lie in [0, N] on the rescaled circle");
  auto intensity = [&ctx](std::span<const double> x) {
    return cue_intensity(ctx, x, /*rescaled=*/true);
  };
  // rho_ell vanishes identically beyond ell = N, so the series truncates
  return void_series_generic(intensity, ctx.n, s, nodes, qmc_points, seed);
}

double tensor_pair_intensity(const KernelContext& ctx, double x1, double x2, int nodes) {
  check_context(ctx);
  const double length = static_cast<double>(ctx.n) * ctx.n;
  if (x1 < 0.0 || x1 >= length || x2 < 0.0 || x2 >= length)
    throw std::invalid_argument("tensor_pair_intensity: points must lie in [0, N^2)");
  if (x1 == x2) throw std::invalid_argument("tensor_pair_intensity: coincident points");

  // map back to the circle
  const double a1 = kTwoPi * x1 / length;
  const double a2 = kTwoPi * x2 / length;
  const auto lam = [&](double u) { return kTwoPi / ctx.n * sine_kernel(ctx, u); };

  double total = 0.0;
  for (int eta1 = 0; eta1 <= 1; ++eta1) {
    for (int eta2 = 0; eta2 <= 1; ++eta2) {
      const double lo1 = eta1 ? a1 : 0.0, hi1 = eta1 ? kTwoPi : a1;
      const double lo2 = eta2 ? a2 : 0.0, hi2 = eta2 ? kTwoPi : a2;
      const double offset = kTwoPi * (eta1 - eta2) + a1 - a2;

      // p = 2: both factor phases distinct, 2D quadrature over the block
      if (hi1 > lo1 && hi2 > lo2) {
        const GaussLegendre r1 = gauss_legendre_on(nodes, lo1, hi1);
        const GaussLegendre r2 = gauss_legendre_on(nodes, lo2, hi2);
        double block = 0.0;
        for (int i = 0; i < nodes; ++i) {
          for (int j = 0; j < nodes; ++j) {
            const double q_same = lam(r1.nodes(i) - r2.nodes(j));
            const double q_cross = lam(offset - r1.nodes(i) + r2.nodes(j));
            block += r1.weights(i) * r2.weights(j) * (1.0 - q_same * q_same) *
                     (1.0 - q_cross * q_cross);
          }
        }
        total += block / (kTwoPi * kTwoPi);
      }

      // p = 1: both points share one factor phase, one-dimensional in y;
      // the shared phase can sit in either tensor factor and the two cases
      // contribute equally, hence the weight 2 (pinned by the pair-count
      // Monte Carlo estimator)
      const double lo = std::max(lo1, lo2), hi = std::min(hi1, hi2);
      if (hi > lo) {
        const double q_cross = lam(offset);
        total += 2.0 * (hi - lo) * (1.0 - q_cross * q_cross) / (ctx.n * kTwoPi);
      }
    }
  }
  return total;
}

}  // namespace tensor_spectra
