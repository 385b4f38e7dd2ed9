#pragma once

#include "pilotwave/configuration.hpp"
#include "pilotwave/params.hpp"

namespace pilotwave {

struct ComplexAmplitude {
  double re = 0.0;
  double im = 0.0;
  double abs2() const { return re * re + im * im; }
};

/// Distances from each particle to each slit. Index convention: the first
/// digit is the particle, the letter is the slit (A at +slit_half_sep on the
/// y axis, B at -slit_half_sep).
struct SlitDistances {
  double r1A = 0.0;
  double r1B = 0.0;
  double r2A = 0.0;
  double r2B = 0.0;
};

// --- plane-wave pair -------------------------------------------------------

/// Full amplitude (1/sqrt(L)) [a e^{ip d/hbar} + b e^{-ip d/hbar}] e^{-iEt/hbar},
/// d = x1 - x2. Throws OutOfBox outside the normalization box.
ComplexAmplitude psi_plane(const Configuration& cfg, const PlanePairParams& params);

/// Stationary relative-coordinate density (1/L)[1 + 2ab cos(2 p d / hbar)].
double prob_density_plane(double delta, const PlanePairParams& params);

/// Phase of psi_plane on the two-argument-angle branch (continuous across the
/// tangent singularities, where it passes through +/- pi hbar / 2), minus E t.
double phase_plane(const Configuration& cfg, const PlanePairParams& params);

// --- two-slit pair ---------------------------------------------------------

/// Distances without admissibility checks; defined everywhere.
SlitDistances slit_distances_unchecked(const Configuration& cfg, const TwoSlitParams& params);

/// Throws SlitSingularity when any distance is below the exclusion radius.
SlitDistances slit_distances(const Configuration& cfg, const TwoSlitParams& params);

/// Interference numerator/denominator pair and the amplitude-product weights.
/// psi * (rho1 rho2 N) = rho2 e^{i alpha} + rho1 e^{i beta} with
/// alpha = k (r1A + r2B), beta = k (r1B + r2A), rho1 = r1A r2B, rho2 = r1B r2A.
struct TwoSlitGeometry {
  SlitDistances r{};
  double alpha = 0.0;
  double beta = 0.0;
  double rho1 = 0.0;
  double rho2 = 0.0;
  double num = 0.0;  // rho2 sin(alpha) + rho1 sin(beta)
  double den = 0.0;  // rho2 cos(alpha) + rho1 cos(beta)
};

TwoSlitGeometry twoslit_geometry(const SlitDistances& r, const TwoSlitParams& params);

/// Relative node threshold on sqrt(num^2 + den^2); phase and velocities are
/// rejected below it.
double node_threshold(const TwoSlitGeometry& g);

/// Stationary amplitude at the t = 0 convention, divided by the cached
/// normalization constant. Throws SlitSingularity.
ComplexAmplitude psi_twoslit(const Configuration& cfg, const TwoSlitParams& params);

/// hbar * atan2(num, den). Throws SlitSingularity near slits and
/// NodeEncountered at wave-function zeros.
double phase_twoslit(const Configuration& cfg, const TwoSlitParams& params);

/// Normalization constant: sqrt of the integral of the unnormalized |psi|^2
/// over the admissible product domain, estimated by importance-sampled Monte
/// Carlo to ~1e-3 relative standard error and cached per parameter set.
double twoslit_normalization(const TwoSlitParams& params);

}  // namespace pilotwave
