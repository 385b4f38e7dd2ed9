#include "pilotwave/params.hpp"

#include <cmath>
#include <string>

namespace pilotwave {

namespace {

// Inputs rounded to ~7 significant digits still validate; the stored pair is
// rescaled to unit norm so downstream identities hold at working precision.
constexpr double kNormAcceptTol = 1e-6;
constexpr double kNormExactTol = 4e-15;
constexpr double kDegenerateTol = 1e-9;

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    raise(Errc::NonPositive, std::string(name) + " must be positive and finite");
  }
}

}  // namespace

PlanePairParams validate_plane_params(const PlanePairParams& raw) {
  require_positive(raw.p, "p");
  require_positive(raw.constants.hbar, "hbar");
  require_positive(raw.constants.mass, "mass");
  if (raw.boxN < 1) {
    raise(Errc::NonPositive, "boxN must be >= 1");
  }
  if (!std::isfinite(raw.a) || !std::isfinite(raw.b)) {
    raise(Errc::BadInput, "a and b must be finite");
  }

  const double norm2 = raw.a * raw.a + raw.b * raw.b;
  if (std::abs(norm2 - 1.0) > kNormAcceptTol) {
    raise(Errc::NormViolation,
          "a^2 + b^2 = " + std::to_string(norm2) + ", expected 1");
  }

  PlanePairParams out = raw;
  if (std::abs(norm2 - 1.0) > kNormExactTol) {
    const double scale = 1.0 / std::sqrt(norm2);
    out.a = raw.a * scale;
    out.b = raw.b * scale;
  }

  // Both |a - b| and |a + b| appear in velocity numerators/denominators;
  // either degeneracy destroys conditioning (and a = b removes entanglement).
  if (std::abs(out.a - out.b) <= kDegenerateTol) {
    raise(Errc::DegenerateAB, "a = b: wave function factorizes");
  }
  if (std::abs(out.a + out.b) <= kDegenerateTol) {
    raise(Errc::DegenerateAB, "a = -b: standing wave with nodes, guidance ill-conditioned");
  }
  return out;
}

TwoSlitParams validate_twoslit_params(const TwoSlitParams& raw) {
  require_positive(raw.k, "k");
  require_positive(raw.slit_half_sep, "slit_half_sep");
  require_positive(raw.exclusion_radius, "exclusion_radius");
  require_positive(raw.constants.hbar, "hbar");
  require_positive(raw.constants.mass, "mass");

  const DomainBox& box = raw.domain_box;
  if (box.x.lo < 0.0) {
    raise(Errc::BadDomain, "domain box must satisfy x >= 0");
  }
  if (!(box.x.lo < box.x.hi) || !(box.y.lo < box.y.hi) || !(box.z.lo < box.z.hi)) {
    raise(Errc::BadDomain, "domain box has empty extent on some axis");
  }
  if (raw.energy && !std::isfinite(*raw.energy)) {
    raise(Errc::BadInput, "energy must be finite when given");
  }
  return raw;
}

}  // namespace pilotwave
