#include "pilotwave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pilotwave {

namespace {

double simpson_recurse(const std::function<double(double)>& f, double a, double b, double fa,
                       double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  if (depth <= 0) {
    raise(Errc::QuadratureFailure, "adaptive Simpson depth exhausted");
  }
  return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_recurse(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

ChebyshevSeries ChebyshevSeries::fit(const std::function<double(double)>& f, double lo, double hi,
                                     double tol, int max_points) {
  using std::numbers::pi;
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);

  for (int n = 64; n <= max_points; n *= 2) {
    // First-kind nodes x_j = cos((2j+1)pi/2n) and the matching discrete
    // cosine transform for interpolation coefficients.
    std::vector<double> values(static_cast<std::size_t>(n));
    std::vector<double> angles(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      angles[static_cast<std::size_t>(j)] = (2.0 * j + 1.0) * pi / (2.0 * n);
      const double x = std::cos(angles[static_cast<std::size_t>(j)]);
      values[static_cast<std::size_t>(j)] = f(mid + half * x);
    }
    std::vector<double> coeffs(static_cast<std::size_t>(n), 0.0);
    for (int k = 0; k < n; ++k) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) {
        acc += values[static_cast<std::size_t>(j)] * std::cos(k * angles[static_cast<std::size_t>(j)]);
      }
      coeffs[static_cast<std::size_t>(k)] = (k == 0 ? 1.0 : 2.0) * acc / n;
    }

    double scale = 0.0;
    for (double c : coeffs) scale = std::max(scale, std::abs(c));
    const int tail = std::max(4, n / 16);
    double tail_max = 0.0;
    for (int k = n - tail; k < n; ++k) tail_max = std::max(tail_max, std::abs(coeffs[static_cast<std::size_t>(k)]));
    if (scale == 0.0 || tail_max <= tol * scale) {
      // Trim negligible high-order terms.
      std::size_t keep = coeffs.size();
      while (keep > 1 && std::abs(coeffs[keep - 1]) <= 0.5 * tol * scale) --keep;
      coeffs.resize(keep);
      return ChebyshevSeries(std::move(coeffs), lo, hi);
    }
  }
  raise(Errc::QuadratureFailure, "Chebyshev fit did not converge at max_points");
}

double ChebyshevSeries::operator()(double x) const {
  const double u = (2.0 * x - (lo_ + hi_)) / (hi_ - lo_);
  // Clenshaw recurrence.
  double b1 = 0.0;
  double b2 = 0.0;
  for (std::size_t i = coeffs_.size(); i-- > 1;) {
    const double b0 = 2.0 * u * b1 - b2 + coeffs_[i];
    b2 = b1;
    b1 = b0;
  }
  return u * b1 - b2 + coeffs_[0];
}

ChebyshevSeries ChebyshevSeries::antiderivative() const {
  const std::size_t n = coeffs_.size();
  std::vector<double> out(n + 1, 0.0);
  const double half = 0.5 * (hi_ - lo_);  // du/dx jacobian inverse
  // Integral relations: int T_0 = T_1, int T_1 = T_2/4,
  // int T_k = T_{k+1}/(2(k+1)) - T_{k-1}/(2(k-1)) for k >= 2.
  if (n > 0) out[1] += coeffs_[0];
  if (n > 1) out[2] += coeffs_[1] / 4.0;
  for (std::size_t k = 2; k < n; ++k) {
    out[k + 1] += coeffs_[k] / (2.0 * (k + 1.0));
    out[k - 1] -= coeffs_[k] / (2.0 * (k - 1.0));
  }
  for (double& c : out) c *= half;
  ChebyshevSeries result(std::move(out), lo_, hi_);
  result.coeffs_[0] -= result(lo_);
  return result;
}

}  // namespace pilotwave
