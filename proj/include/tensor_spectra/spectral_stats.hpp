#pragma once

#include <utility>
#include <vector>

#include "tensor_spectra/ensembles.hpp"

namespace tensor_spectra {

struct Histogram {
  Eigen::VectorXd edges;                            // bins + 1 values
  Eigen::Matrix<long long, Eigen::Dynamic, 1> counts;
  long long total = 0;                              // includes overflow beyond the last edge

  int bins() const { return static_cast<int>(counts.size()); }
  double width(int bin) const { return edges(bin + 1) - edges(bin); }
  double center(int bin) const { return 0.5 * (edges(bin) + edges(bin + 1)); }
  double density(int bin) const {
    return static_cast<double>(counts(bin)) / (static_cast<double>(total) * width(bin));
  }
  double density_std_error(int bin) const;
};

struct VoidCurve {
  Eigen::VectorXd s;
  Eigen::VectorXd estimate;
  Eigen::VectorXd std_error;
  long long samples = 0;
};

struct PairCorrelation {
  double value = 0.0;
  double std_error = 0.0;
};

// One pass over the ensemble collecting everything the estimators need.
struct EnsembleStatistics {
  Histogram histogram;
  VoidCurve voids;
  std::vector<double> pooled_spacings;  // in sample-index order
};

EnsembleStatistics collect_statistics(const EnsembleSpec& spec, int bins, double s_max,
                                      const std::vector<double>& s_grid, int workers = 1);

// Density-normalized histogram of all spacings pooled over the sample draws;
// spacings beyond s_max count toward the total but fall in no bin.
Histogram spacing_histogram(const EnsembleSpec& spec, int bins, double s_max, int workers = 1);

std::vector<double> pooled_spacings(const EnsembleSpec& spec, int workers = 1);

// Sup distance between the empirical CDF and 1 - exp(-s), evaluated from
// both one-sided limits at every jump.
double ks_exponential(std::vector<double> values);

// Fraction of configurations with no point in [0, s], with binomial standard
// errors (1/samples at the degenerate estimates).
VoidCurve void_curve(const EnsembleSpec& spec, const std::vector<double>& s_grid,
                     int workers = 1);

// Central second difference of the void curve; requires a uniform grid.
std::vector<std::pair<double, double>> second_difference_density(const VoidCurve& curve);

// Mean number of point pairs hitting the two windows (x1 +- eps, x2 +- eps),
// divided by (2 eps)^2; windows must be disjoint.
PairCorrelation pair_correlation_estimate(const EnsembleSpec& spec, double x1, double x2,
                                          double eps, int workers = 1);

}  // namespace tensor_spectra
