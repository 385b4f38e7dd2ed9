#include "pilotwave/stats.hpp"

#include <algorithm>
#include <cmath>

namespace pilotwave {

TabulatedCdf TabulatedCdf::build(const DensityFn& density, double lo, double hi,
                                 std::size_t grid_points) {
  if (grid_points < 16 || !(hi > lo)) {
    raise(Errc::BadInput, "CDF tabulation needs a proper interval and >= 16 points");
  }
  TabulatedCdf out;
  out.x_.resize(grid_points);
  out.cdf_.resize(grid_points);
  const double step = (hi - lo) / static_cast<double>(grid_points - 1);
  std::vector<double> f(grid_points);
  for (std::size_t i = 0; i < grid_points; ++i) {
    out.x_[i] = lo + step * static_cast<double>(i);
    f[i] = density(out.x_[i]);
    if (!(f[i] >= 0.0) || !std::isfinite(f[i])) {
      raise(Errc::BadInput, "density must be finite and nonnegative");
    }
  }
  // Cumulative by per-interval Simpson on midpoints.
  out.cdf_[0] = 0.0;
  for (std::size_t i = 1; i < grid_points; ++i) {
    const double fm = density(0.5 * (out.x_[i - 1] + out.x_[i]));
    out.cdf_[i] = out.cdf_[i - 1] + step / 6.0 * (f[i - 1] + 4.0 * fm + f[i]);
  }
  const double total = out.cdf_.back();
  if (!(total > 0.0)) {
    raise(Errc::BadInput, "density integrates to zero");
  }
  for (double& c : out.cdf_) c /= total;
  out.cdf_.back() = 1.0;
  return out;
}

double TabulatedCdf::operator()(double x) const {
  if (x <= x_.front()) return 0.0;
  if (x >= x_.back()) return 1.0;
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - x_.begin());
  const double w = (x - x_[i - 1]) / (x_[i] - x_[i - 1]);
  return cdf_[i - 1] + w * (cdf_[i] - cdf_[i - 1]);
}

double TabulatedCdf::inverse(double u) const {
  u = std::clamp(u, 0.0, 1.0);
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.begin()) return x_.front();
  if (it == cdf_.end()) return x_.back();
  const std::size_t i = static_cast<std::size_t>(it - cdf_.begin());
  const double span = cdf_[i] - cdf_[i - 1];
  const double w = span > 0.0 ? (u - cdf_[i - 1]) / span : 0.0;
  return x_[i - 1] + w * (x_[i] - x_[i - 1]);
}

double l1_distance(const std::vector<double>& empirical, const std::vector<double>& expected) {
  if (empirical.size() != expected.size()) {
    raise(Errc::BadInput, "probability vectors differ in length");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < empirical.size(); ++i) {
    acc += std::abs(empirical[i] - expected[i]);
  }
  return acc;
}

double ks_statistic(std::vector<double> samples, const TabulatedCdf& cdf) {
  if (samples.empty()) {
    raise(Errc::BadInput, "KS statistic of an empty sample");
  }
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double F = cdf(samples[i]);
    d = std::max(d, std::max(F - static_cast<double>(i) / n,
                             static_cast<double>(i + 1) / n - F));
  }
  return d;
}

std::vector<double> expected_bin_masses(const DensityFn& density, double lo, double hi,
                                        std::size_t bins) {
  if (bins < 1 || !(hi > lo)) {
    raise(Errc::BadInput, "bad histogram layout");
  }
  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<double> masses(bins, 0.0);
  constexpr int kSub = 16;  // Simpson panels per bin
  for (std::size_t b = 0; b < bins; ++b) {
    const double x0 = lo + width * static_cast<double>(b);
    double acc = 0.0;
    const double hsub = width / kSub;
    for (int s = 0; s < kSub; ++s) {
      const double a = x0 + hsub * s;
      acc += hsub / 6.0 * (density(a) + 4.0 * density(a + 0.5 * hsub) + density(a + hsub));
    }
    masses[b] = acc;
  }
  double total = 0.0;
  for (double m : masses) total += m;
  if (!(total > 0.0)) {
    raise(Errc::BadInput, "density integrates to zero over the histogram range");
  }
  for (double& m : masses) m /= total;
  return masses;
}

std::vector<double> histogram_masses(const std::vector<double>& samples, double lo, double hi,
                                     std::size_t bins) {
  if (bins < 1 || !(hi > lo)) {
    raise(Errc::BadInput, "bad histogram layout");
  }
  std::vector<double> masses(bins, 0.0);
  if (samples.empty()) return masses;
  const double inv_width = static_cast<double>(bins) / (hi - lo);
  for (double s : samples) {
    auto idx = static_cast<long>(std::floor((s - lo) * inv_width));
    idx = std::clamp<long>(idx, 0, static_cast<long>(bins) - 1);
    masses[static_cast<std::size_t>(idx)] += 1.0;
  }
  const double inv_n = 1.0 / static_cast<double>(samples.size());
  for (double& m : masses) m *= inv_n;
  return masses;
}

}  // namespace pilotwave
