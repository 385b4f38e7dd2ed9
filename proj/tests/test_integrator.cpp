#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pilotwave/first_integral.hpp"
#include "pilotwave/integrator.hpp"
#include "pilotwave/quadrature.hpp"
#include "pilotwave/rng.hpp"

using namespace pilotwave;

namespace {

PlanePairParams ref_plane() {
  PlanePairParams raw;
  raw.a = 0.8;
  raw.b = 0.6;
  raw.p = 1.0;
  raw.boxN = 10;
  return validate_plane_params(raw);
}

Configuration cfg1d(double delta, double t = 0.0) {
  return Configuration::pair1d(delta / 2.0, -delta / 2.0, t);
}

}  // namespace

TEST_CASE("constant field integrates to linear motion") {
  const double c = 0.7;
  const VelocityField field = [c](double, std::span<const double>, std::span<double> dydt) {
    dydt[0] = c;
    dydt[1] = -c;
  };
  const Trajectory traj =
      integrate_trajectory(Configuration::pair1d(0.0, 0.0, 0.0), field, {0.0, 1.0});
  REQUIRE(traj.termination == Termination::ReachedEnd);
  CHECK(traj.final_time() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(traj.final_state().coords[0] == doctest::Approx(c).epsilon(1e-12));
  CHECK(traj.final_state().coords[1] == doctest::Approx(-c).epsilon(1e-12));
}

TEST_CASE("zero-length span returns the initial configuration") {
  const VelocityField field = [](double, std::span<const double>, std::span<double> dydt) {
    dydt[0] = 1.0;
    dydt[1] = 1.0;
  };
  const Trajectory traj = integrate_trajectory(cfg1d(0.5), field, {0.0, 0.0});
  CHECK(traj.samples.size() == 1);
  CHECK(traj.termination == Termination::ReachedEnd);
}

TEST_CASE("plane trajectories keep the center of mass fixed") {
  const PlanePairParams P = ref_plane();
  const VelocityField field = plane_pair_field(P, true);
  CounterRng rng(101, 0);
  for (int i = 0; i < 10; ++i) {
    const double delta0 = rng.next_range(-0.6, 0.2) * P.half_width();
    const double com = rng.next_range(-5.0, 5.0);
    const Configuration start = Configuration::pair1d(com + delta0 / 2.0, com - delta0 / 2.0, 0.0);
    const Trajectory traj = integrate_trajectory(start, field, {0.0, 10.0});
    REQUIRE(traj.termination == Termination::ReachedEnd);
    double drift = 0.0;
    const double sum0 = start.coords[0] + start.coords[1];
    for (const Configuration& s : traj.samples) {
      drift = std::max(drift, std::abs(s.coords[0] + s.coords[1] - sum0));
    }
    CHECK(drift < 1e-9);
    // Sample times are strictly monotone in the integration direction.
    for (std::size_t k = 1; k < traj.samples.size(); ++k) {
      CHECK(traj.samples[k].time > traj.samples[k - 1].time);
    }
  }
}

TEST_CASE("delta-zero crossing time matches the quadrature oracle") {
  const PlanePairParams P = ref_plane();
  const VelocityField field = plane_pair_field(P, true);
  std::vector<EventSpec> specs{{EventKind::DeltaZeroCrossing, 0.0, true}};
  const EventSet events = EventSet::for_plane(P, specs);

  const double delta0 = -1.0;
  const Trajectory traj = integrate_trajectory(cfg1d(delta0), field, {0.0, 20.0}, {}, events);
  REQUIRE(traj.termination == Termination::EventStop);
  REQUIRE(traj.events.size() == 1);
  const double t_star = traj.events.front().time;

  const double oracle = adaptive_simpson(
      [&](double d) { return 1.0 / relative_velocity_plane(d, P); }, delta0, 0.0, 1e-13);
  CHECK(std::abs(t_star - oracle) <= 1e-8 * std::abs(oracle));
}

TEST_CASE("event location is insensitive to the step-size cap") {
  const PlanePairParams P = ref_plane();
  const VelocityField field = plane_pair_field(P, true);
  std::vector<EventSpec> specs{{EventKind::DeltaZeroCrossing, 0.0, true}};
  const EventSet events = EventSet::for_plane(P, specs);

  double times[2] = {0.0, 0.0};
  const double caps[2] = {0.1, 0.01};
  for (int i = 0; i < 2; ++i) {
    IntegratorSettings settings;
    settings.max_step = caps[i];
    const Trajectory traj = integrate_trajectory(cfg1d(-2.5), field, {0.0, 40.0}, settings, events);
    REQUIRE(traj.events.size() == 1);
    times[i] = traj.events.front().time;
  }
  CHECK(std::abs(times[0] - times[1]) < 1e-8);
}

TEST_CASE("an initial configuration already at the event records it at t0") {
  const PlanePairParams P = ref_plane();
  const VelocityField field = plane_pair_field(P, true);
  std::vector<EventSpec> specs{{EventKind::DeltaZeroCrossing, 0.0, true}};
  const EventSet events = EventSet::for_plane(P, specs);
  const Trajectory traj = integrate_trajectory(cfg1d(0.0), field, {0.0, 5.0}, {}, events);
  REQUIRE(traj.events.size() == 1);
  CHECK(traj.events.front().time == 0.0);
  CHECK(traj.termination == Termination::EventStop);
}

TEST_CASE("non-terminal events are recorded and integration continues") {
  const PlanePairParams P = ref_plane();
  const VelocityField field = plane_pair_field(P, true);
  std::vector<EventSpec> specs{{EventKind::DeltaZeroCrossing, 0.0, false}};
  const EventSet events = EventSet::for_plane(P, specs);
  const Trajectory traj = integrate_trajectory(cfg1d(-1.0), field, {0.0, 8.0}, {}, events);
  CHECK(traj.termination == Termination::ReachedEnd);
  REQUIRE(traj.events.size() == 1);
  CHECK(traj.final_time() == doctest::Approx(8.0).epsilon(1e-15));
  // The crossing state is part of the sample list.
  bool found = false;
  for (const Configuration& s : traj.samples) {
    if (s.time == traj.events.front().time) found = true;
  }
  CHECK(found);
}

TEST_CASE("box exit terminates the trajectory at the bisected boundary") {
  const PlanePairParams P = ref_plane();
  const VelocityField field = plane_pair_field(P, true);
  std::vector<EventSpec> specs{{EventKind::BoxExit, 0.0, true}};
  const EventSet events = EventSet::for_plane(P, specs);

  const double start = 0.98 * P.half_width();
  const Trajectory traj = integrate_trajectory(cfg1d(start), field, {0.0, 50.0}, {}, events);
  CHECK(traj.termination == Termination::BoxExit);
  CHECK(traj.final_time() < 50.0);
  CHECK(std::abs(traj.final_state().delta()) ==
        doctest::Approx(P.half_width()).epsilon(1e-9));
}

TEST_CASE("forward-then-backward integration returns to the start") {
  const PlanePairParams P = ref_plane();
  const VelocityField field = plane_pair_field(P, true);
  IntegratorSettings settings;
  const Configuration start = cfg1d(-2.0);
  const Trajectory fwd = integrate_trajectory(start, field, {0.0, 5.0}, settings);
  REQUIRE(fwd.termination == Termination::ReachedEnd);
  const Trajectory back = integrate_trajectory(fwd.final_state(), field, {5.0, 0.0}, settings);
  REQUIRE(back.termination == Termination::ReachedEnd);
  for (int i = 0; i < 2; ++i) {
    CHECK(std::abs(back.final_state().coords[i] - start.coords[i]) <
          10.0 * settings.rel_tol * std::max(1.0, std::abs(start.coords[i])));
  }
}

TEST_CASE("tightening tolerances converges the endpoint") {
  const PlanePairParams P = ref_plane();
  const VelocityField field = plane_pair_field(P, true);
  IntegratorSettings coarse;
  coarse.rel_tol = 1e-7;
  coarse.abs_tol = 1e-9;
  IntegratorSettings fine;
  fine.rel_tol = 1e-8;
  fine.abs_tol = 1e-10;
  const Configuration start = cfg1d(-3.0);
  const double end_coarse =
      integrate_trajectory(start, field, {0.0, 10.0}, coarse).final_state().coords[0];
  const double end_fine =
      integrate_trajectory(start, field, {0.0, 10.0}, fine).final_state().coords[0];
  CHECK(std::abs(end_coarse - end_fine) < 1e-7 * std::max(1.0, std::abs(end_fine)));
}

TEST_CASE("field failures terminate with the reason recorded") {
  const VelocityField field = [](double, std::span<const double> y, std::span<double> dydt) {
    if (y[0] > 1.0) {
      raise(Errc::NodeEncountered, "synthetic singularity");
    }
    dydt[0] = 1.0;
    dydt[1] = 0.0;
  };
  const Trajectory traj =
      integrate_trajectory(Configuration::pair1d(0.0, 0.0, 0.0), field, {0.0, 5.0});
  CHECK(traj.termination == Termination::FieldFailure);
  CHECK(traj.final_state().coords[0] <= 1.0 + 1e-9);
  CHECK(traj.final_state().coords[0] > 0.9);
}

TEST_CASE("step budget exhaustion is reported") {
  const PlanePairParams P = ref_plane();
  const VelocityField field = plane_pair_field(P, true);
  IntegratorSettings settings;
  settings.max_steps = 3;
  const Trajectory traj = integrate_trajectory(cfg1d(-1.0), field, {0.0, 100.0}, settings);
  CHECK(traj.termination == Termination::MaxStepsExceeded);
}

TEST_CASE("a discontinuous field drives the step below min_step") {
  const VelocityField field = [](double, std::span<const double> y, std::span<double> dydt) {
    dydt[0] = y[0] < 1.0 ? 1.0 : 2.0;
    dydt[1] = 0.0;
  };
  IntegratorSettings settings;
  settings.min_step = 1e-4;
  settings.rel_tol = 1e-13;
  settings.abs_tol = 1e-15;
  const Trajectory traj =
      integrate_trajectory(Configuration::pair1d(0.0, 0.0, 0.0), field, {0.0, 5.0}, settings);
  CHECK(traj.termination == Termination::StepUnderflow);
}

TEST_CASE("settings are validated") {
  const PlanePairParams P = ref_plane();
  const VelocityField field = plane_pair_field(P, true);
  IntegratorSettings bad;
  bad.rel_tol = -1.0;
  CHECK_THROWS_AS(integrate_trajectory(cfg1d(0.0), field, {0.0, 1.0}, bad), Error);
  IntegratorSettings inverted;
  inverted.min_step = 1.0;
  inverted.max_step = 0.5;
  CHECK_THROWS_AS(integrate_trajectory(cfg1d(0.0), field, {0.0, 1.0}, inverted), Error);
}

TEST_CASE("conserved residual: center of mass, derived integral, and a non-integral") {
  const PlanePairParams P = ref_plane();
  const VelocityField field = plane_pair_field(P, true);
  const Trajectory traj = integrate_trajectory(cfg1d(-2.0), field, {0.0, 10.0});
  REQUIRE(traj.termination == Termination::ReachedEnd);

  const double com_res = conserved_residual(
      traj, [](const Configuration& c) { return c.coords[0] + c.coords[1]; });
  CHECK(com_res < 1e-9);

  const DerivedFirstIntegral derived(P);
  const double derived_res = conserved_residual(
      traj, [&](const Configuration& c) { return derived(c.delta(), c.time); });
  CHECK(derived_res < 1e-8);

  // Sanity: the relative coordinate itself is NOT conserved.
  const double delta_res =
      conserved_residual(traj, [](const Configuration& c) { return c.delta(); });
  CHECK(delta_res > 1.0);
}
