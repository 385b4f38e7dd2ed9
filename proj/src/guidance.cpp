#include "pilotwave/guidance.hpp"

#include <cmath>
#include <numbers>

namespace pilotwave {

VelocityVector velocity_plane(double delta, const PlanePairParams& params) {
  if (!params.in_box(delta)) {
    raise(Errc::OutOfBox, "relative coordinate outside the normalization box");
  }
  const double theta = params.p * delta / params.constants.hbar;
  const double r = params.amplitude_ratio();
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double v1 = (params.p / params.constants.mass) * r / (c * c + r * r * s * s);
  VelocityVector v;
  v.kind = SystemKind::Pair1D;
  v.components[0] = v1;
  v.components[1] = -v1;
  return v;
}

double relative_velocity_plane(double delta, const PlanePairParams& params) {
  return 2.0 * velocity_plane(delta, params).components[0];
}

namespace {

// d/dr of hbar*atan2(num, den) where r enters one spherical phase with
// weight k and one amplitude product with the given partner factor.
// `own`/`other` select which of (alpha, beta) the distance appears in.
double partial_wrt_distance(const TwoSlitGeometry& g, double k, double hbar, double own,
                            double other, double other_rho, double partner) {
  const double d_num = k * other_rho * std::cos(own) + partner * std::sin(other);
  const double d_den = -k * other_rho * std::sin(own) + partner * std::cos(other);
  return hbar * (g.den * d_num - g.num * d_den) / (g.num * g.num + g.den * g.den);
}

}  // namespace

PhasePartials phase_partials_chain(const TwoSlitGeometry& g, double k, double hbar) {
  PhasePartials p;
  // r1A and r2B share alpha and the rho1 product; r1B and r2A share beta and
  // rho2. Mirror-image pairs route through identical arithmetic so exactly
  // mirrored states produce exactly mirrored derivatives.
  p.d_r1A = partial_wrt_distance(g, k, hbar, g.alpha, g.beta, g.rho2, g.r.r2B);
  p.d_r2B = partial_wrt_distance(g, k, hbar, g.alpha, g.beta, g.rho2, g.r.r1A);
  p.d_r1B = partial_wrt_distance(g, k, hbar, g.beta, g.alpha, g.rho1, g.r.r2A);
  p.d_r2A = partial_wrt_distance(g, k, hbar, g.beta, g.alpha, g.rho1, g.r.r1B);
  return p;
}

PhasePartials phase_partials_printed(const TwoSlitGeometry& g, double k, double hbar) {
  const double num = g.num;
  const double den = g.den;
  const double pref = hbar / (1.0 + num * num / (den * den));
  auto printed = [&](double own, double other, double other_rho, double partner) {
    return pref * ((k * other_rho * std::cos(own) + partner * std::sin(other)) / den -
                   (num / (den * den)) *
                       (-k * other_rho * std::sin(own) + partner * std::cos(other)));
  };
  PhasePartials p;
  p.d_r1A = printed(g.alpha, g.beta, g.rho2, g.r.r2B);
  p.d_r2B = printed(g.alpha, g.beta, g.rho2, g.r.r1A);
  p.d_r1B = printed(g.beta, g.alpha, g.rho1, g.r.r2A);
  p.d_r2A = printed(g.beta, g.alpha, g.rho1, g.r.r1B);
  return p;
}

VelocityVector velocity_twoslit(const Configuration& cfg, const TwoSlitParams& params) {
  const SlitDistances r = slit_distances(cfg, params);
  const TwoSlitGeometry g = twoslit_geometry(r, params);
  const double thr = node_threshold(g);
  if (g.num * g.num + g.den * g.den < thr * thr) {
    raise(Errc::NodeEncountered, "guidance velocity diverges at a wave-function zero");
  }
  const PhasePartials dS = phase_partials_chain(g, params.k, params.constants.hbar);

  const auto& c = cfg.coords;
  const double a = params.slit_half_sep;
  const double inv_m = 1.0 / params.constants.mass;

  VelocityVector v;
  v.kind = SystemKind::Pair3D;
  // particle 1: geometric factors d r1A/d c = (c - slit)/r1A etc.
  v.components[0] = inv_m * (dS.d_r1A * (c[0] / r.r1A) + dS.d_r1B * (c[0] / r.r1B));
  v.components[1] = inv_m * (dS.d_r1A * ((c[1] - a) / r.r1A) + dS.d_r1B * ((c[1] + a) / r.r1B));
  v.components[2] = inv_m * (dS.d_r1A * (c[2] / r.r1A) + dS.d_r1B * (c[2] / r.r1B));
  // particle 2
  v.components[3] = inv_m * (dS.d_r2A * (c[3] / r.r2A) + dS.d_r2B * (c[3] / r.r2B));
  v.components[4] = inv_m * (dS.d_r2A * ((c[4] - a) / r.r2A) + dS.d_r2B * ((c[4] + a) / r.r2B));
  v.components[5] = inv_m * (dS.d_r2A * (c[5] / r.r2A) + dS.d_r2B * (c[5] / r.r2B));
  return v;
}

namespace {

double wrap_phase_difference(double raw, double hbar, double guard) {
  const double two_pi_h = 2.0 * std::numbers::pi * hbar;
  const double wrapped = raw - two_pi_h * std::round(raw / two_pi_h);
  if (std::numbers::pi * hbar - std::abs(wrapped) < guard * hbar) {
    raise(Errc::StencilFailure, "phase difference too close to the branch boundary");
  }
  return wrapped;
}

double central_difference(const PhaseField& phase, const Configuration& cfg, std::size_t i,
                          double h, double hbar, double guard) {
  Configuration plus = cfg;
  Configuration minus = cfg;
  plus.coords[i] += h;
  minus.coords[i] -= h;
  const double raw = phase(plus) - phase(minus);
  return wrap_phase_difference(raw, hbar, guard) / (2.0 * h);
}

}  // namespace

VelocityVector numeric_velocity(const PhaseField& phase, const Configuration& cfg,
                                const NumericGradientOptions& opts) {
  if (!(opts.step > 0.0)) {
    raise(Errc::BadInput, "finite-difference step must be positive");
  }
  VelocityVector v;
  v.kind = cfg.kind;
  for (std::size_t i = 0; i < cfg.dim(); ++i) {
    double g_full = 0.0;
    double g_half = 0.0;
    try {
      g_full = central_difference(phase, cfg, i, opts.step, opts.hbar, opts.unwrap_guard);
      g_half = central_difference(phase, cfg, i, 0.5 * opts.step, opts.hbar, opts.unwrap_guard);
    } catch (const Error& e) {
      if (e.code() == Errc::StencilFailure) throw;
      raise(Errc::StencilFailure, std::string("stencil point failed: ") + e.what());
    }
    const double scale = std::max(std::abs(g_half), 1e-300);
    double g = g_half;
    if (std::abs(g_full - g_half) > opts.richardson_rel_tol * scale) {
      g = (4.0 * g_half - g_full) / 3.0;  // Richardson step for O(h^2) differences
    }
    v.components[i] = g / opts.mass;
  }
  return v;
}

}  // namespace pilotwave
