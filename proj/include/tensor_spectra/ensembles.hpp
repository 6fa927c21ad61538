#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tensor_spectra/matrix_core.hpp"

namespace tensor_spectra {

enum class EnsembleKind { Cue, Cpe, CueTensorCue, Cue2Tensor };

// Declarative description of which random point process to sample.
struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::Cue;
  int size = 1;             // N for the first three kinds, M for Cue2Tensor
  long long samples = 1;
  std::uint64_t seed = 0;

  void validate() const;
  // points per configuration: N, N, N^2 or 2^M
  long long points_per_sample() const;
  // unfolding factor mapping phases to [0, points_per_sample)
  double alpha() const { return static_cast<double>(points_per_sample()) / kTwoPi; }
};

struct RescaledPointSet {
  Eigen::VectorXd points;  // sorted, in [0, alpha * 2*pi)
  double alpha = 1.0;
};

using SpacingVector = Eigen::VectorXd;

PhaseVector sample_cue_phases(int n, std::uint64_t seed, std::uint64_t index,
                              std::uint64_t stream = 0);

// Analytic eigenphases of a 2x2 Haar unitary (quadratic formula, no
// iterative eigensolver); same underlying matrix as the generic route.
std::pair<double, double> sample_cue2_phase_pair(std::uint64_t seed, std::uint64_t index,
                                                 std::uint64_t stream = 0);

PhaseVector sample_cpe_phases(int n, std::uint64_t seed, std::uint64_t index);

// All sums theta_k + phi_l mod 2*pi, sorted with multiplicity.
PhaseVector tensor_spectrum_pair(const PhaseVector& theta, const PhaseVector& phi);

// All 2^M sums over choices of one phase per pair, by iterated merge.
PhaseVector tensor_spectrum_chain(const std::vector<std::pair<double, double>>& pairs);

RescaledPointSet rescale(const PhaseVector& phases, double alpha);

// s_1 = alpha (p_1 + 2*pi - p_n), s_j = alpha (p_j - p_{j-1}); with
// alpha = n/2*pi the spacings sum to n and have mean one.
SpacingVector spacings(const PhaseVector& phases, double alpha);

long long count_in_interval(const RescaledPointSet& set, double a, double b);

// One configuration of the ensemble at the given sample index.
RescaledPointSet sample_rescaled(const EnsembleSpec& spec, long long index);

// Metropolis-Hastings sampler targeting the Dyson eigenphase density;
// distributional cross-check for the QR sampling route (N <= 4).
std::vector<PhaseVector> metropolis_cue_phases(int n, std::uint64_t seed, int n_samples,
                                               int burn_in = 1000, int thinning = 10);

}  // namespace tensor_spectra
