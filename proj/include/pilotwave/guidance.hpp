#pragma once

#include <functional>

#include "pilotwave/configuration.hpp"
#include "pilotwave/params.hpp"
#include "pilotwave/wavefunction.hpp"

namespace pilotwave {

struct VelocityVector {
  SystemKind kind = SystemKind::Pair1D;
  std::array<double, 6> components{};

  std::size_t dim() const { return system_dim(kind); }
  std::span<const double> view() const { return {components.data(), dim()}; }
};

// --- plane-wave pair -------------------------------------------------------

/// Closed-form guidance velocities (v1, v2) with v2 = -v1 exactly.
VelocityVector velocity_plane(double delta, const PlanePairParams& params);

/// d(x1 - x2)/dt = 2 v1; sign follows sign(a^2 - b^2).
double relative_velocity_plane(double delta, const PlanePairParams& params);

// --- two-slit pair ---------------------------------------------------------

/// Partial derivatives of the phase with respect to the four slit distances.
struct PhasePartials {
  double d_r1A = 0.0;
  double d_r1B = 0.0;
  double d_r2A = 0.0;
  double d_r2B = 0.0;
};

/// Chain-rule partials derived from the two-argument-angle phase; valid
/// wherever num^2 + den^2 > 0. This is the form the velocity field uses.
PhasePartials phase_partials_chain(const TwoSlitGeometry& g, double k, double hbar);

/// Literal transcription of the published partial-derivative expressions
/// (and their A <-> B images). Singular where den = 0; kept as a cross-check.
PhasePartials phase_partials_printed(const TwoSlitGeometry& g, double k, double hbar);

/// Cartesian guidance velocities of both particles. Throws SlitSingularity
/// near the slits and NodeEncountered at wave-function zeros.
VelocityVector velocity_twoslit(const Configuration& cfg, const TwoSlitParams& params);

// --- generic finite-difference guidance ------------------------------------

using PhaseField = std::function<double(const Configuration&)>;

struct NumericGradientOptions {
  double step = 1e-5;
  double hbar = 1.0;
  double mass = 1.0;
  /// When half-step and full-step results disagree beyond this relative
  /// tolerance the Richardson extrapolant is returned instead.
  double richardson_rel_tol = 1e-6;
  /// Wrapped phase differences closer than this (times hbar) to the branch
  /// boundary +/- pi hbar are ambiguous and raise StencilFailure.
  double unwrap_guard = 1e-3;
};

/// Central-difference gradient of the (unwrapped) phase divided by mass.
/// Differences across the stencil are mapped to (-pi hbar, pi hbar].
/// Throws StencilFailure when any stencil point raises or unwrapping is
/// ambiguous.
VelocityVector numeric_velocity(const PhaseField& phase, const Configuration& cfg,
                                const NumericGradientOptions& opts);

}  // namespace pilotwave
