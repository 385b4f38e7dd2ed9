#pragma once

#include <cmath>
#include <numbers>
#include <optional>

#include "pilotwave/errors.hpp"

namespace pilotwave {

struct PhysicalConstants {
  double hbar = 1.0;
  double mass = 1.0;
};

/// Parameters of the entangled plane-wave pair. The relative coordinate
/// delta = x1 - x2 lives on the open interval (-L/2, L/2) with
/// L = (2*boxN + 1) * pi * hbar / p.
struct PlanePairParams {
  double a = 0.0;
  double b = 0.0;
  double p = 1.0;
  int boxN = 1;
  PhysicalConstants constants{};

  double box_length() const {
    return (2.0 * boxN + 1.0) * std::numbers::pi * constants.hbar / p;
  }
  double half_width() const { return 0.5 * box_length(); }
  double energy() const { return p * p / constants.mass; }
  /// (a - b) / (a + b), the odd/even amplitude ratio entering the velocity law.
  double amplitude_ratio() const { return (a - b) / (a + b); }
  /// Period of the relative-coordinate density, pi * hbar / p.
  double density_period() const { return std::numbers::pi * constants.hbar / p; }

  bool in_box(double delta) const {
    return std::abs(p * delta / constants.hbar) < (2.0 * boxN + 1.0) * std::numbers::pi / 2.0;
  }
  /// Signed distance (length units) from delta to the nearer box edge; > 0 inside.
  double box_margin(double delta) const { return half_width() - std::abs(delta); }
};

struct AxisBounds {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  bool contains(double c) const { return c >= lo && c <= hi; }
  double margin(double c) const { return std::min(c - lo, hi - c); }
};

struct DomainBox {
  AxisBounds x{0.0, 50.0};
  AxisBounds y{-25.0, 25.0};
  AxisBounds z{-25.0, 25.0};
};

/// Parameters of the two-slit spherical-wave pair. Slits sit at
/// (0, +slit_half_sep, 0) and (0, -slit_half_sep, 0); both sources emit
/// into the x >= 0 half-space.
struct TwoSlitParams {
  double k = 5.0;
  double slit_half_sep = 1.0;
  double exclusion_radius = 1e-3;
  DomainBox domain_box{};
  PhysicalConstants constants{};
  // Stationary-state energy is never needed for guidance; kept only when a
  // config file supplies one.
  std::optional<double> energy{};
};

/// Checks invariants, renormalizes (a, b) onto the unit circle when the
/// residual is small, and rejects anything else.
PlanePairParams validate_plane_params(const PlanePairParams& raw);

/// Checks positivity and clips nothing: a domain box with x-min < 0 is an error.
TwoSlitParams validate_twoslit_params(const TwoSlitParams& raw);

}  // namespace pilotwave
