#include "tensor_spectra/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace tensor_spectra {

namespace {

GaussLegendre build_rule(int n) {
  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double derivative = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Legendre recurrence for P_n(x) and P'_n(x)
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      derivative = n * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / derivative;
      x -= step;
      if (std::abs(step) < 1e-15) break;
    }
    rule.nodes(i) = -x;
    rule.nodes(n - 1 - i) = x;
    const double w = 2.0 / ((1.0 - x * x) * derivative * derivative);
    rule.weights(i) = w;
    rule.weights(n - 1 - i) = w;
  }
  return rule;
}

}  // namespace

const GaussLegendre& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need n >= 1");
  static std::map<int, GaussLegendre> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

GaussLegendre gauss_legendre_on(int n, double a, double b) {
  const GaussLegendre& base = gauss_legendre(n);
  GaussLegendre rule;
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  rule.nodes = (half * base.nodes).array() + mid;
  rule.weights = half * base.weights;
  return rule;
}

}  // namespace tensor_spectra
