#include <doctest.h>

#include <cmath>
#include <iostream>
#include <numbers>

#include "pilotwave/guidance.hpp"
#include "pilotwave/params.hpp"
#include "pilotwave/rng.hpp"
#include "pilotwave/wavefunction.hpp"

using namespace pilotwave;
using std::numbers::pi;

namespace {

PlanePairParams plane_params(double a, double b, double p = 1.0, int boxN = 10,
                             double hbar = 1.0, double mass = 1.0) {
  PlanePairParams raw;
  raw.a = a;
  raw.b = b;
  raw.p = p;
  raw.boxN = boxN;
  raw.constants = {hbar, mass};
  return validate_plane_params(raw);
}

TwoSlitParams twoslit_params(double hbar = 1.0, double mass = 1.0) {
  TwoSlitParams raw;
  raw.k = 5.0;
  raw.slit_half_sep = 1.0;
  raw.exclusion_radius = 1e-3;
  raw.domain_box = {{0.0, 12.0}, {-6.0, 6.0}, {-6.0, 6.0}};
  raw.constants = {hbar, mass};
  return validate_twoslit_params(raw);
}

/// Random configuration away from slits, walls, and interference zeros.
Configuration admissible_twoslit_cfg(const TwoSlitParams& params, CounterRng& rng) {
  for (;;) {
    std::array<double, 6> c{};
    for (int i = 0; i < 2; ++i) {
      c[3 * i + 0] = rng.next_range(0.4, 8.0);
      c[3 * i + 1] = rng.next_range(-4.0, 4.0);
      c[3 * i + 2] = rng.next_range(-4.0, 4.0);
    }
    const Configuration cfg = Configuration::pair3d(c);
    const SlitDistances r = slit_distances_unchecked(cfg, params);
    if (std::min(std::min(r.r1A, r.r1B), std::min(r.r2A, r.r2B)) < 0.3) continue;
    const TwoSlitGeometry g = twoslit_geometry(r, params);
    const double amp = std::sqrt(g.num * g.num + g.den * g.den) / (g.rho1 + g.rho2);
    if (amp < 0.1) continue;  // finite differences degrade near nodes
    return cfg;
  }
}

double max_rel_deviation(const VelocityVector& reference, const VelocityVector& candidate) {
  double scale = 0.0;
  for (double v : reference.view()) scale = std::max(scale, std::abs(v));
  double worst = 0.0;
  for (std::size_t i = 0; i < reference.dim(); ++i) {
    worst = std::max(worst, std::abs(reference.components[i] - candidate.components[i]));
  }
  return worst / std::max(scale, 1e-300);
}

}  // namespace

TEST_CASE("plane velocities at reference points") {
  const PlanePairParams P = plane_params(0.8, 0.6);
  const VelocityVector at_zero = velocity_plane(0.0, P);
  CHECK(at_zero.components[0] == doctest::Approx(1.0 / 7.0).epsilon(1e-14));
  CHECK(at_zero.components[1] == doctest::Approx(-1.0 / 7.0).epsilon(1e-14));

  // p delta / hbar = pi/2: v1 = (p/m) (a+b)/(a-b) = 7
  const VelocityVector quarter = velocity_plane(pi / 2.0, P);
  CHECK(quarter.components[0] == doctest::Approx(7.0).epsilon(1e-13));

  CHECK_THROWS_AS(velocity_plane(P.half_width(), P), Error);
}

TEST_CASE("center of mass is stationary: v1 + v2 == 0 exactly") {
  const PlanePairParams P = plane_params(0.8, 0.6);
  CounterRng rng(31, 0);
  for (int i = 0; i < 300; ++i) {
    const double delta = rng.next_range(-0.999, 0.999) * P.half_width();
    const VelocityVector v = velocity_plane(delta, P);
    CHECK(v.components[0] + v.components[1] == 0.0);
  }
}

TEST_CASE("relative velocity: value, parity, and algebraic equivalence") {
  const PlanePairParams P = plane_params(0.8, 0.6);
  CHECK(relative_velocity_plane(0.0, P) == doctest::Approx(2.0 / 7.0).epsilon(1e-14));

  // Swapping (a, b) mirrors the flow exactly.
  const PlanePairParams swapped = plane_params(0.6, 0.8);
  CounterRng rng(37, 0);
  for (int i = 0; i < 100; ++i) {
    const double delta = rng.next_range(-0.999, 0.999) * P.half_width();
    CHECK(relative_velocity_plane(delta, swapped) == -relative_velocity_plane(delta, P));
  }

  // 2 v1 equals (2p/m)(a^2-b^2) / (1 + 2ab cos(2 p delta / hbar)).
  for (int i = 0; i < 100; ++i) {
    const double delta = rng.next_range(-0.999, 0.999) * P.half_width();
    const double direct = relative_velocity_plane(delta, P);
    const double expanded = (2.0 * P.p / P.constants.mass) * (P.a * P.a - P.b * P.b) /
                            (1.0 + 2.0 * P.a * P.b *
                                       std::cos(2.0 * P.p * delta / P.constants.hbar));
    CHECK(std::abs(direct - expanded) <= 1e-12 * std::abs(expanded));
  }
}

TEST_CASE("relative velocity is bounded by the closed-form extrema") {
  const PlanePairParams P = plane_params(0.8, 0.6);
  const double lo = (2.0 * P.p / P.constants.mass) * std::abs(P.a - P.b) / (P.a + P.b);
  const double hi = (2.0 * P.p / P.constants.mass) * (P.a + P.b) / std::abs(P.a - P.b);
  CounterRng rng(41, 0);
  for (int i = 0; i < 500; ++i) {
    const double delta = rng.next_range(-0.999, 0.999) * P.half_width();
    const double v = std::abs(relative_velocity_plane(delta, P));
    CHECK(v >= lo * (1.0 - 1e-12));
    CHECK(v <= hi * (1.0 + 1e-12));
  }
}

TEST_CASE("density times relative velocity is constant across the box") {
  const PlanePairParams P = plane_params(0.8, 0.6);
  const double reference = prob_density_plane(0.0, P) * relative_velocity_plane(0.0, P);
  CounterRng rng(43, 0);
  for (int i = 0; i < 500; ++i) {
    const double delta = rng.next_range(-0.999, 0.999) * P.half_width();
    const double flux = prob_density_plane(delta, P) * relative_velocity_plane(delta, P);
    CHECK(std::abs(flux - reference) <= 1e-10 * std::abs(reference));
  }
}

TEST_CASE("two-slit velocity mirrors across the symmetry plane exactly") {
  const TwoSlitParams Q = twoslit_params();
  CounterRng rng(47, 0);
  for (int i = 0; i < 50; ++i) {
    std::array<double, 6> c{};
    c[0] = rng.next_range(0.5, 6.0);
    c[1] = rng.next_range(-3.0, 3.0);
    c[2] = rng.next_range(-3.0, 3.0);
    c[3] = c[0];
    c[4] = -c[1];
    c[5] = c[2];
    const Configuration cfg = Configuration::pair3d(c);
    const SlitDistances r = slit_distances_unchecked(cfg, Q);
    if (std::min(std::min(r.r1A, r.r1B), std::min(r.r2A, r.r2B)) < 0.3) continue;
    const TwoSlitGeometry g = twoslit_geometry(r, Q);
    if (g.num * g.num + g.den * g.den <= node_threshold(g) * node_threshold(g)) continue;

    const VelocityVector v = velocity_twoslit(cfg, Q);
    CHECK(v.components[3] == v.components[0]);
    CHECK(v.components[4] == -v.components[1]);
    CHECK(v.components[5] == v.components[2]);
  }
}

TEST_CASE("two-slit velocity components swap under particle interchange") {
  const TwoSlitParams Q = twoslit_params();
  CounterRng rng(53, 0);
  for (int i = 0; i < 25; ++i) {
    const Configuration cfg = admissible_twoslit_cfg(Q, rng);
    Configuration swapped = cfg;
    for (int c = 0; c < 3; ++c) std::swap(swapped.coords[c], swapped.coords[c + 3]);
    const VelocityVector v = velocity_twoslit(cfg, Q);
    const VelocityVector w = velocity_twoslit(swapped, Q);
    for (int c = 0; c < 3; ++c) {
      CHECK(w.components[c] == v.components[c + 3]);
      CHECK(w.components[c + 3] == v.components[c]);
    }
  }
}

TEST_CASE("printed phase partials match the chain-rule derivation") {
  const TwoSlitParams Q = twoslit_params();
  CounterRng rng(59, 0);
  double worst = 0.0;
  int compared = 0;
  for (int i = 0; i < 200; ++i) {
    const Configuration cfg = admissible_twoslit_cfg(Q, rng);
    const TwoSlitGeometry g = twoslit_geometry(slit_distances_unchecked(cfg, Q), Q);
    // The printed expressions carry 1/den factors; keep clear of den = 0
    // where only the chain-rule form is defined.
    if (std::abs(g.den) < 0.2 * std::hypot(g.num, g.den)) continue;
    const PhasePartials chain = phase_partials_chain(g, Q.k, Q.constants.hbar);
    const PhasePartials printed = phase_partials_printed(g, Q.k, Q.constants.hbar);
    const double scale = std::max({std::abs(chain.d_r1A), std::abs(chain.d_r1B),
                                   std::abs(chain.d_r2A), std::abs(chain.d_r2B), 1e-300});
    worst = std::max(worst, std::abs(chain.d_r1A - printed.d_r1A) / scale);
    worst = std::max(worst, std::abs(chain.d_r1B - printed.d_r1B) / scale);
    worst = std::max(worst, std::abs(chain.d_r2A - printed.d_r2A) / scale);
    worst = std::max(worst, std::abs(chain.d_r2B - printed.d_r2B) / scale);
    ++compared;
  }
  std::cout << "printed-vs-chain phase partials: " << compared
            << " configurations, max rel deviation " << worst << "\n";
  CHECK(compared > 100);
  CHECK(worst < 1e-10);
}

TEST_CASE("finite-difference gradient reproduces the plane velocities") {
  const PlanePairParams P = plane_params(0.8, 0.6);
  const PhaseField phase = [&P](const Configuration& c) { return phase_plane(c, P); };
  NumericGradientOptions opts;
  CounterRng rng(61, 0);
  for (int i = 0; i < 100; ++i) {
    const double delta = rng.next_range(-0.95, 0.95) * P.half_width();
    const Configuration cfg = Configuration::pair1d(delta / 2.0, -delta / 2.0, 0.0);
    const VelocityVector numeric = numeric_velocity(phase, cfg, opts);
    const VelocityVector closed = velocity_plane(delta, P);
    CHECK(max_rel_deviation(closed, numeric) < 1e-6);
  }
}

TEST_CASE("finite-difference gradient reproduces the two-slit velocities") {
  const TwoSlitParams Q = twoslit_params();
  const PhaseField phase = [&Q](const Configuration& c) { return phase_twoslit(c, Q); };
  NumericGradientOptions opts;
  CounterRng rng(67, 0);
  for (int i = 0; i < 100; ++i) {
    const Configuration cfg = admissible_twoslit_cfg(Q, rng);
    const VelocityVector numeric = numeric_velocity(phase, cfg, opts);
    const VelocityVector closed = velocity_twoslit(cfg, Q);
    CHECK(max_rel_deviation(closed, numeric) < 1e-6);
  }
}

TEST_CASE("guidance keeps hbar and mass symbolic") {
  // Closed forms and the finite-difference of the phase must stay consistent
  // when natural units are abandoned.
  const PlanePairParams P = plane_params(0.8, 0.6, 1.7, 4, 0.7, 2.3);
  const PhaseField phase = [&P](const Configuration& c) { return phase_plane(c, P); };
  NumericGradientOptions opts;
  opts.hbar = P.constants.hbar;
  opts.mass = P.constants.mass;
  CounterRng rng(71, 0);
  for (int i = 0; i < 50; ++i) {
    const double delta = rng.next_range(-0.9, 0.9) * P.half_width();
    const Configuration cfg = Configuration::pair1d(delta / 2.0, -delta / 2.0, 0.0);
    CHECK(max_rel_deviation(velocity_plane(delta, P), numeric_velocity(phase, cfg, opts)) < 1e-6);
  }

  const TwoSlitParams Q = twoslit_params(0.7, 2.3);
  const PhaseField phase3 = [&Q](const Configuration& c) { return phase_twoslit(c, Q); };
  NumericGradientOptions opts3;
  opts3.hbar = Q.constants.hbar;
  opts3.mass = Q.constants.mass;
  CounterRng rng3(73, 0);
  for (int i = 0; i < 50; ++i) {
    const Configuration cfg = admissible_twoslit_cfg(Q, rng3);
    CHECK(max_rel_deviation(velocity_twoslit(cfg, Q), numeric_velocity(phase3, cfg, opts3)) <
          1e-6);
  }
}

TEST_CASE("numeric velocity of a constant phase field is zero") {
  const PhaseField constant = [](const Configuration&) { return 1.25; };
  const Configuration cfg = Configuration::pair1d(0.3, -0.4, 0.0);
  const VelocityVector v = numeric_velocity(constant, cfg, {});
  CHECK(v.components[0] == 0.0);
  CHECK(v.components[1] == 0.0);
}

TEST_CASE("numeric velocity reports stencil failures") {
  const PlanePairParams P = plane_params(0.8, 0.6);
  const PhaseField phase = [&P](const Configuration& c) { return phase_plane(c, P); };

  // Stencil crossing the box edge: a point raises OutOfBox.
  const double edge = P.half_width();
  const Configuration near_edge = Configuration::pair1d(edge / 2.0 - 1e-9, -edge / 2.0, 0.0);
  try {
    numeric_velocity(phase, near_edge, {});
    FAIL("expected StencilFailure");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::StencilFailure);
  }

  // Phase difference landing within the unwrap guard of +/- pi hbar.
  NumericGradientOptions opts;
  const double slope = pi / (2.0 * opts.step);  // raw jump across stencil = pi
  const PhaseField steep = [slope](const Configuration& c) { return slope * c.coords[0]; };
  const Configuration anywhere = Configuration::pair1d(0.0, 0.0, 0.0);
  try {
    numeric_velocity(steep, anywhere, opts);
    FAIL("expected StencilFailure");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::StencilFailure);
  }
}
