#pragma once

#include <functional>
#include <vector>

#include "pilotwave/errors.hpp"

namespace pilotwave {

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
/// Throws QuadratureFailure when recursion depth is exhausted before the
/// local error bound is met.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12, int max_depth = 48);

/// Chebyshev interpolant on [lo, hi] sampled at first-kind nodes (all nodes
/// strictly interior, so f is never evaluated at the endpoints). The degree
/// doubles until the coefficient tail falls below tol relative to the
/// largest coefficient.
class ChebyshevSeries {
 public:
  static ChebyshevSeries fit(const std::function<double(double)>& f, double lo, double hi,
                             double tol = 1e-13, int max_points = 1 << 14);

  double operator()(double x) const;

  /// Term-by-term antiderivative, zero-valued at lo.
  ChebyshevSeries antiderivative() const;

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  std::size_t size() const { return coeffs_.size(); }

 private:
  ChebyshevSeries(std::vector<double> coeffs, double lo, double hi)
      : coeffs_(std::move(coeffs)), lo_(lo), hi_(hi) {}

  // coeffs_[k] multiplies T_k with no implicit halving of c_0.
  std::vector<double> coeffs_;
  double lo_ = -1.0;
  double hi_ = 1.0;
};

}  // namespace pilotwave
