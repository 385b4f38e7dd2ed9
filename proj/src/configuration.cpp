#include "pilotwave/configuration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pilotwave {

namespace {

double distance3(double x, double y, double z) { return std::sqrt(x * x + y * y + z * z); }

}  // namespace

void check_configuration(const Configuration& cfg, const PlanePairParams& params) {
  if (cfg.kind != SystemKind::Pair1D) {
    raise(Errc::BadInput, "expected a 1-D pair configuration");
  }
  if (!params.in_box(cfg.delta())) {
    raise(Errc::OutOfBox, "relative coordinate outside the normalization box");
  }
}

void check_configuration(const Configuration& cfg, const TwoSlitParams& params) {
  if (cfg.kind != SystemKind::Pair3D) {
    raise(Errc::BadInput, "expected a 3-D pair configuration");
  }
  const double m = domain_margin(cfg, params);
  if (m < 0.0) {
    raise(Errc::BadDomain, "configuration outside domain box or inside an exclusion ball");
  }
}

double domain_margin(const Configuration& cfg, const TwoSlitParams& params) {
  const auto& c = cfg.coords;
  const double a = params.slit_half_sep;
  double margin = std::numeric_limits<double>::infinity();
  for (int particle = 0; particle < 2; ++particle) {
    const double x = c[3 * particle + 0];
    const double y = c[3 * particle + 1];
    const double z = c[3 * particle + 2];
    margin = std::min(margin, params.domain_box.x.margin(x));
    margin = std::min(margin, params.domain_box.y.margin(y));
    margin = std::min(margin, params.domain_box.z.margin(z));
    margin = std::min(margin, distance3(x, y - a, z) - params.exclusion_radius);
    margin = std::min(margin, distance3(x, y + a, z) - params.exclusion_radius);
  }
  return margin;
}

}  // namespace pilotwave
