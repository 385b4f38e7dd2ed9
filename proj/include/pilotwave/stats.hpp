#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "pilotwave/errors.hpp"

namespace pilotwave {

using DensityFn = std::function<double(double)>;

/// Piecewise-linear tabulation of the cumulative of a 1-D density over
/// [lo, hi], normalized to F(hi) = 1. Supports forward evaluation and
/// inverse lookup (both by binary search + linear interpolation).
class TabulatedCdf {
 public:
  static TabulatedCdf build(const DensityFn& density, double lo, double hi,
                            std::size_t grid_points);

  double operator()(double x) const;
  double inverse(double u) const;

  double lo() const { return x_.front(); }
  double hi() const { return x_.back(); }
  std::size_t size() const { return x_.size(); }

 private:
  std::vector<double> x_;
  std::vector<double> cdf_;
};

/// Sum_i |empirical_i - expected_i| over matched probability vectors.
double l1_distance(const std::vector<double>& empirical, const std::vector<double>& expected);

/// One-sample Kolmogorov-Smirnov statistic of samples against a CDF.
double ks_statistic(std::vector<double> samples, const TabulatedCdf& cdf);

/// Expected probability mass per histogram bin, from per-bin Simpson
/// integration of the density, normalized to sum 1.
std::vector<double> expected_bin_masses(const DensityFn& density, double lo, double hi,
                                        std::size_t bins);

/// Histogram counts of samples over [lo, hi); out-of-range samples clamp to
/// the edge bins.
std::vector<double> histogram_masses(const std::vector<double>& samples, double lo, double hi,
                                     std::size_t bins);

}  // namespace pilotwave
