#include <doctest.h>

#include <charconv>
#include <cmath>

#include "pilotwave/integrator.hpp"
#include "pilotwave/report_io.hpp"
#include "pilotwave/rng.hpp"

using namespace pilotwave;

TEST_CASE("CSV doubles round-trip exactly at 17 significant digits") {
  CounterRng rng(0xABCD, 0);
  for (int i = 0; i < 200; ++i) {
    const double x = (rng.next_unit() - 0.5) * std::pow(10.0, rng.next_range(-12.0, 12.0));
    const std::string text = format_double(x);
    CHECK(text.find(',') == std::string::npos);
    double back = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), back);
    REQUIRE(res.ec == std::errc());
    CHECK(back == x);
  }
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-0.5) == "-0.5");
}

TEST_CASE("trajectory CSV carries time, coordinates, and event flags") {
  PlanePairParams raw;
  raw.a = 0.8;
  raw.b = 0.6;
  raw.p = 1.0;
  raw.boxN = 10;
  const PlanePairParams P = validate_plane_params(raw);
  const VelocityField field = plane_pair_field(P, true);
  std::vector<EventSpec> specs{{EventKind::DeltaZeroCrossing, 0.0, false}};
  const EventSet events = EventSet::for_plane(P, specs);
  const Trajectory traj = integrate_trajectory(
      Configuration::pair1d(-0.5, 0.5, 0.0), field, {0.0, 6.0}, {}, events);
  REQUIRE(traj.events.size() == 1);

  const std::string csv = trajectory_csv(traj);
  CHECK(csv.rfind("t,x1,x2,event\n", 0) == 0);
  CHECK(csv.find("delta_zero_crossing") != std::string::npos);
  // One row per sample plus the header.
  std::size_t lines = 0;
  for (char ch : csv) {
    if (ch == '\n') ++lines;
  }
  CHECK(lines == traj.samples.size() + 1);
}

TEST_CASE("trajectory JSON records settings, stats, events, and termination") {
  PlanePairParams raw;
  raw.a = 0.8;
  raw.b = 0.6;
  raw.p = 1.0;
  raw.boxN = 10;
  const PlanePairParams P = validate_plane_params(raw);
  const VelocityField field = plane_pair_field(P, true);
  const IntegratorSettings settings;
  const Trajectory traj =
      integrate_trajectory(Configuration::pair1d(-0.5, 0.5, 0.0), field, {0.0, 2.0}, settings);
  const Json j = trajectory_json(traj, settings);
  CHECK(j.at("termination") == "reached_end");
  CHECK(j.at("steps").at("accepted").get<long>() > 0);
  CHECK(j.at("samples").size() == traj.samples.size());
  CHECK(j.at("settings").at("rel_tol").get<double>() == settings.rel_tol);
}

TEST_CASE("manifest serialization covers reproduction inputs") {
  RunManifest m;
  m.command = "qeh";
  m.argv = {"pilotwave", "qeh", "--a", "0.8"};
  m.parameters = Json{{"a", 0.8}};
  m.seed = 42;
  m.timestamp = "2026-01-01T00:00:00Z";
  m.outputs = {"report.json"};
  const Json j = manifest_json(m);
  CHECK(j.at("tool") == "pilotwave");
  CHECK(j.at("command") == "qeh");
  CHECK(j.at("argv").size() == 4);
  CHECK(j.at("seed").get<std::uint64_t>() == 42);
  CHECK(j.at("outputs").at(0) == "report.json");
}

TEST_CASE("plane parameters survive a JSON round trip") {
  PlanePairParams raw;
  raw.a = 0.6;
  raw.b = 0.8;
  raw.p = 2.25;
  raw.boxN = 6;
  raw.constants = {0.5, 3.0};
  const PlanePairParams P = validate_plane_params(raw);
  const PlanePairParams back = plane_params_from_json(plane_params_json(P));
  CHECK(back.a == P.a);
  CHECK(back.b == P.b);
  CHECK(back.p == P.p);
  CHECK(back.boxN == P.boxN);
  CHECK(back.constants.hbar == P.constants.hbar);
  CHECK(back.constants.mass == P.constants.mass);
}

TEST_CASE("two-slit parameters survive a JSON round trip") {
  TwoSlitParams raw;
  raw.k = 4.5;
  raw.slit_half_sep = 0.75;
  raw.exclusion_radius = 0.01;
  raw.domain_box = {{0.0, 30.0}, {-12.0, 12.0}, {-9.0, 9.0}};
  raw.energy = 2.5;
  const TwoSlitParams Q = validate_twoslit_params(raw);
  const TwoSlitParams back = twoslit_params_from_json(twoslit_params_json(Q));
  CHECK(back.k == Q.k);
  CHECK(back.slit_half_sep == Q.slit_half_sep);
  CHECK(back.exclusion_radius == Q.exclusion_radius);
  CHECK(back.domain_box.y.lo == Q.domain_box.y.lo);
  REQUIRE(back.energy.has_value());
  CHECK(*back.energy == 2.5);
}

TEST_CASE("crossing map CSV layout") {
  CrossingMap map;
  map.delta_init = {-1.0, 2.0};
  map.t_star = {2.5651120801363696, -5.0};
  const std::string csv = crossing_map_csv(map);
  CHECK(csv.rfind("delta_init,t_star\n", 0) == 0);
  CHECK(csv.find("2.5651120801363696") != std::string::npos);
}
