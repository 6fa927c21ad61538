#include "tensor_spectra/spectral_stats.hpp"

#include <algorithm>
#include <cmath>

#include "tensor_spectra/parallel.hpp"

namespace tensor_spectra {

double Histogram::density_std_error(int bin) const {
  const double p = static_cast<double>(counts(bin)) / static_cast<double>(total);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(total)) / width(bin);
}

namespace {

Histogram histogram_from_pooled(const std::vector<double>& pooled, int bins, double s_max) {
  if (bins < 1) throw std::invalid_argument("spacing_histogram: need bins >= 1");
  if (s_max <= 0.0) throw std::invalid_argument("spacing_histogram: need s_max > 0");
  Histogram hist;
  hist.edges.resize(bins + 1);
  const double width = s_max / bins;
  for (int b = 0; b <= bins; ++b) hist.edges(b) = b * width;
  hist.counts = Eigen::Matrix<long long, Eigen::Dynamic, 1>::Zero(bins);
  hist.total = static_cast<long long>(pooled.size());
  for (double s : pooled) {
    if (s < 0.0 || s > s_max) continue;
    int bin = static_cast<int>(s / width);
    if (bin == bins) bin = bins - 1;  // close the upper edge
    ++hist.counts(bin);
  }
  return hist;
}

VoidCurve void_curve_from_minima(const std::vector<double>& minima,
                                 const std::vector<double>& s_grid) {
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    if (s_grid[i] < 0.0) throw std::invalid_argument("void_curve: s values must be nonnegative");
    if (i > 0 && s_grid[i] <= s_grid[i - 1])
      throw std::invalid_argument("void_curve: s grid must be increasing");
  }
  VoidCurve curve;
  const auto n = static_cast<long long>(minima.size());
  curve.samples = n;
  curve.s.resize(s_grid.size());
  curve.estimate.resize(s_grid.size());
  curve.std_error.resize(s_grid.size());
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    const double s = s_grid[i];
    long long empty = 0;
    for (double m : minima)
      if (m > s) ++empty;  // the closed interval [0, s] holds no point
    const double p = static_cast<double>(empty) / static_cast<double>(n);
    curve.s(i) = s;
    curve.estimate(i) = p;
    curve.std_error(i) = (empty == 0 || empty == n)
                             ? 1.0 / static_cast<double>(n)
                             : std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  }
  return curve;
}

}  // namespace

EnsembleStatistics collect_statistics(const EnsembleSpec& spec, int bins, double s_max,
                                      const std::vector<double>& s_grid, int workers) {
  spec.validate();
  const long long pts = spec.points_per_sample();
  EnsembleStatistics stats;
  stats.pooled_spacings.resize(static_cast<std::size_t>(spec.samples * pts));
  std::vector<double> minima(static_cast<std::size_t>(spec.samples));
  const double count = static_cast<double>(pts);
  parallel_for_index(spec.samples, workers, [&](long long index) {
    const RescaledPointSet set = sample_rescaled(spec, index);
    double* out = stats.pooled_spacings.data() + index * pts;
    out[0] = set.points(0) + count - set.points(pts - 1);
    for (long long j = 1; j < pts; ++j) out[j] = set.points(j) - set.points(j - 1);
    minima[static_cast<std::size_t>(index)] = set.points(0);
  });
  stats.histogram = histogram_from_pooled(stats.pooled_spacings, bins, s_max);
  stats.voids = void_curve_from_minima(minima, s_grid);
  return stats;
}

Histogram spacing_histogram(const EnsembleSpec& spec, int bins, double s_max, int workers) {
  return collect_statistics(spec, bins, s_max, {0.0}, workers).histogram;
}

std::vector<double> pooled_spacings(const EnsembleSpec& spec, int workers) {
  return std::move(collect_statistics(spec, 1, 1.0, {0.0}, workers).pooled_spacings);
}

double ks_exponential(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("ks_exponential: empty input");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double model = 1.0 - std::exp(-values[i]);
    sup = std::max(sup, std::max(model - static_cast<double>(i) / n,
                                 static_cast<double>(i + 1) / n - model));
  }
  return sup;
}

VoidCurve void_curve(const EnsembleSpec& spec, const std::vector<double>& s_grid, int workers) {
  return collect_statistics(spec, 1, 1.0, s_grid, workers).voids;
}

std::vector<std::pair<double, double>> second_difference_density(const VoidCurve& curve) {
  const Eigen::Index n = curve.s.size();
  if (n < 3) throw std::invalid_argument("second_difference_density: need at least 3 grid points");
  const double step = curve.s(1) - curve.s(0);
  for (Eigen::Index i = 2; i < n; ++i)
    if (std::abs(curve.s(i) - curve.s(i - 1) - step) > 1e-9 * std::max(1.0, step))
      throw std::invalid_argument("second_difference_density: grid must be uniform");
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(n - 2));
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    const double second =
        (curve.estimate(i - 1) - 2.0 * curve.estimate(i) + curve.estimate(i + 1)) / (step * step);
    out.emplace_back(curve.s(i), second);
  }
  return out;
}

PairCorrelation pair_correlation_estimate(const EnsembleSpec& spec, double x1, double x2,
                                          double eps, int workers) {
  spec.validate();
  if (eps <= 0.0) throw std::invalid_argument("pair_correlation_estimate: need eps > 0");
  if (std::abs(x1 - x2) <= 2.0 * eps)
    throw std::invalid_argument("pair_correlation_estimate: windows overlap");
  std::vector<double> products(static_cast<std::size_t>(spec.samples));
  parallel_for_index(spec.samples, workers, [&](long long index) {
    const RescaledPointSet set = sample_rescaled(spec, index);
    const auto window_count = [&](double x) {
      const double* begin = set.points.data();
      const double* end = begin + set.points.size();
      return static_cast<double>(std::upper_bound(begin, end, x + eps) -
                                 std::lower_bound(begin, end, x - eps));
    };
    products[static_cast<std::size_t>(index)] = window_count(x1) * window_count(x2);
  });
  double sum = 0.0, sum_sq = 0.0;
  for (double v : products) {
    sum += v;
    sum_sq += v * v;
  }
  const double n = static_cast<double>(spec.samples);
  const double mean = sum / n;
  const double variance = std::max(0.0, sum_sq / n - mean * mean);
  const double area = (2.0 * eps) * (2.0 * eps);
  return PairCorrelation{mean / area, std::sqrt(variance / n) / area};
}

}  // namespace tensor_spectra
