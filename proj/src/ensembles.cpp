#include "tensor_spectra/ensembles.hpp"

#include <algorithm>
#include <cmath>

namespace tensor_spectra {

namespace {

inline double mod_two_pi(double sum) {
  // both addends live in [0, 2*pi), so one conditional subtraction suffices
  return sum >= kTwoPi ? sum - kTwoPi : sum;
}

}  // namespace

void EnsembleSpec::validate() const {
  if (samples < 1) throw std::invalid_argument("EnsembleSpec: samples must be >= 1");
  if (size < 1) throw std::invalid_argument("EnsembleSpec: size must be >= 1");
  if (kind == EnsembleKind::Cue2Tensor && size > 30)
    throw std::invalid_argument("EnsembleSpec: M capped at 30 (2^M points must fit memory)");
}

long long EnsembleSpec::points_per_sample() const {
  switch (kind) {
    case EnsembleKind::Cue:
    case EnsembleKind::Cpe:
      return size;
    case EnsembleKind::CueTensorCue:
      return static_cast<long long>(size) * size;
    case EnsembleKind::Cue2Tensor:
      return 1LL << size;
  }
  throw std::invalid_argument("EnsembleSpec: unknown kind");
}

PhaseVector sample_cue_phases(int n, std::uint64_t seed, std::uint64_t index,
                              std::uint64_t stream) {
  return eigenphases(sample_haar_unitary(n, seed, index, stream));
}

std::pair<double, double> sample_cue2_phase_pair(std::uint64_t seed, std::uint64_t index,
                                                 std::uint64_t stream) {
  const UnitaryMatrix u = sample_haar_unitary(2, seed, index, stream);
  const auto& m = u.matrix;
  const std::complex<double> trace = m(0, 0) + m(1, 1);
  const std::complex<double> det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const std::complex<double> disc = std::sqrt(trace * trace - 4.0 * det);
  const double a = principal_phase(0.5 * (trace + disc));
  const double b = principal_phase(0.5 * (trace - disc));
  return a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
}

PhaseVector sample_cpe_phases(int n, std::uint64_t seed, std::uint64_t index) {
  if (n < 1) throw std::invalid_argument("sample_cpe_phases: dimension must be >= 1");
  CounterRng rng(seed, index);
  PhaseVector phases(n);
  for (int j = 0; j < n; ++j) phases(j) = kTwoPi * rng.next_unit();
  std::sort(phases.begin(), phases.end());
  return phases;
}

PhaseVector tensor_spectrum_pair(const PhaseVector& theta, const PhaseVector& phi) {
  PhaseVector out(theta.size() * phi.size());
  Eigen::Index pos = 0;
  for (Eigen::Index k = 0; k < theta.size(); ++k)
    for (Eigen::Index l = 0; l < phi.size(); ++l) out(pos++) = mod_two_pi(theta(k) + phi(l));
  std::sort(out.begin(), out.end());
  return out;
}

PhaseVector tensor_spectrum_chain(const std::vector<std::pair<double, double>>& pairs) {
  const std::size_t m = pairs.size();
  if (m < 1 || m > 30)
    throw std::invalid_argument("tensor_spectrum_chain: need 1 <= M <= 30");
  PhaseVector acc(2);
  acc << pairs[0].first, pairs[0].second;
  for (std::size_t i = 1; i < m; ++i) {
    PhaseVector next(2 * acc.size());
    for (Eigen::Index j = 0; j < acc.size(); ++j) {
      next(2 * j) = mod_two_pi(acc(j) + pairs[i].first);
      next(2 * j + 1) = mod_two_pi(acc(j) + pairs[i].second);
    }
    acc.swap(next);
  }
  std::sort(acc.begin(), acc.end());
  return acc;
}

RescaledPointSet rescale(const PhaseVector& phases, double alpha) {
  if (alpha <= 0.0) throw std::invalid_argument("rescale: alpha must be positive");
  return RescaledPointSet{alpha * phases, alpha};
}

SpacingVector spacings(const PhaseVector& phases, double alpha) {
  const Eigen::Index n = phases.size();
  if (n < 1) throw std::invalid_argument("spacings: empty phase vector");
  SpacingVector s(n);
  s(0) = alpha * (phases(0) + kTwoPi - phases(n - 1));
  for (Eigen::Index j = 1; j < n; ++j) s(j) = alpha * (phases(j) - phases(j - 1));
  return s;
}

long long count_in_interval(const RescaledPointSet& set, double a, double b) {
  if (a > b) throw std::invalid_argument("count_in_interval: need a <= b");
  const double* begin = set.points.data();
  const double* end = begin + set.points.size();
  return std::upper_bound(begin, end, b) - std::lower_bound(begin, end, a);
}

RescaledPointSet sample_rescaled(const EnsembleSpec& spec, long long index) {
  spec.validate();
  const auto idx = static_cast<std::uint64_t>(index);
  switch (spec.kind) {
    case EnsembleKind::Cue:
      return rescale(sample_cue_phases(spec.size, spec.seed, idx), spec.alpha());
    case EnsembleKind::Cpe:
      return rescale(sample_cpe_phases(spec.size, spec.seed, idx), spec.alpha());
    case EnsembleKind::CueTensorCue: {
      const PhaseVector theta = sample_cue_phases(spec.size, spec.seed, idx, 0);
      const PhaseVector phi = sample_cue_phases(spec.size, spec.seed, idx, 1);
      return rescale(tensor_spectrum_pair(theta, phi), spec.alpha());
    }
    case EnsembleKind::Cue2Tensor: {
      std::vector<std::pair<double, double>> pairs;
      pairs.reserve(spec.size);
      for (int m = 0; m < spec.size; ++m)
        pairs.push_back(sample_cue2_phase_pair(spec.seed, idx, static_cast<std::uint64_t>(m)));
      return rescale(tensor_spectrum_chain(pairs), spec.alpha());
    }
  }
  throw std::invalid_argument("sample_rescaled: unknown kind");
}

namespace {

// log of the Dyson density up to its normalization constant
double dyson_log_density(const PhaseVector& theta) {
  double acc = 0.0;
  for (Eigen::Index k = 0; k < theta.size(); ++k)
    for (Eigen::Index l = k + 1; l < theta.size(); ++l)
      acc += 2.0 * std::log(std::abs(2.0 * std::sin(0.5 * (theta(k) - theta(l)))));
  return acc;
}

}  // namespace

std::vector<PhaseVector> metropolis_cue_phases(int n, std::uint64_t seed, int n_samples,
                                               int burn_in, int thinning) {
  if (n < 1 || n > 4)
    throw std::invalid_argument("metropolis_cue_phases: oracle supports 1 <= N <= 4");
  if (n_samples < 1) throw std::invalid_argument("metropolis_cue_phases: need samples >= 1");
  CounterRng rng(seed, /*stream=*/0x6d68);
  PhaseVector state(n);
  for (int j = 0; j < n; ++j) state(j) = kTwoPi * rng.next_unit();
  double log_density = dyson_log_density(state);

  auto sweep = [&] {
    for (int j = 0; j < n; ++j) {
      PhaseVector proposal = state;
      double moved = state(j) + (rng.next_unit() - 0.5);
      if (moved < 0.0) moved += kTwoPi;
      if (moved >= kTwoPi) moved -= kTwoPi;
      proposal(j) = moved;
      const double proposed_log = dyson_log_density(proposal);
      const double u = rng.next_unit_open();
      if (std::log(u) < proposed_log - log_density) {
        state = proposal;
        log_density = proposed_log;
      }
    }
  };

  for (int i = 0; i < burn_in; ++i) sweep();
  std::vector<PhaseVector> out;
  out.reserve(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    for (int t = 0; t < thinning; ++t) sweep();
    PhaseVector sorted = state;
    std::sort(sorted.begin(), sorted.end());
    out.push_back(std::move(sorted));
  }
  return out;
}

}  // namespace tensor_spectra
