#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pilotwave/params.hpp"
#include "pilotwave/report_io.hpp"

using namespace pilotwave;

namespace {

PlanePairParams plane(double a, double b, double p = 1.0, int boxN = 10) {
  PlanePairParams raw;
  raw.a = a;
  raw.b = b;
  raw.p = p;
  raw.boxN = boxN;
  return raw;
}

}  // namespace

TEST_CASE("plane validation accepts the reference parameters and derives L, E") {
  const PlanePairParams p = validate_plane_params(plane(0.8, 0.6, 1.0, 10));
  CHECK(p.box_length() == doctest::Approx(21.0 * std::numbers::pi).epsilon(1e-15));
  CHECK(p.energy() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.a == 0.8);
  CHECK(p.b == 0.6);
}

TEST_CASE("plane validation rejects a = b") {
  const double r = 1.0 / std::sqrt(2.0);
  try {
    validate_plane_params(plane(r, r));
    FAIL("expected DegenerateAB");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DegenerateAB);
  }
}

TEST_CASE("plane validation rejects norm violations") {
  try {
    validate_plane_params(plane(0.9, 0.6));
    FAIL("expected NormViolation");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NormViolation);
  }
}

TEST_CASE("plane validation rejects nonpositive inputs") {
  for (auto broken : {plane(0.8, 0.6, -1.0), plane(0.8, 0.6, 1.0, 0)}) {
    try {
      validate_plane_params(broken);
      FAIL("expected NonPositive");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::NonPositive);
    }
  }
  PlanePairParams bad_hbar = plane(0.8, 0.6);
  bad_hbar.constants.hbar = 0.0;
  CHECK_THROWS_AS(validate_plane_params(bad_hbar), Error);
}

TEST_CASE("plane validation renormalizes slightly-off inputs onto the unit circle") {
  // 8-decimal rounding of sqrt(0.0199): residual ~6e-11 must validate.
  const PlanePairParams p = validate_plane_params(plane(0.99, 0.14106736));
  CHECK(p.a * p.a + p.b * p.b == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("plane validation is idempotent") {
  const PlanePairParams once = validate_plane_params(plane(0.99, 0.14106736));
  const PlanePairParams twice = validate_plane_params(once);
  CHECK(once.a == twice.a);
  CHECK(once.b == twice.b);
  CHECK(once.p == twice.p);
  CHECK(once.boxN == twice.boxN);
}

TEST_CASE("derived quantities are pure functions of the inputs") {
  const PlanePairParams p1 = validate_plane_params(plane(0.8, 0.6, 2.5, 3));
  const PlanePairParams p2 = validate_plane_params(plane(0.8, 0.6, 2.5, 3));
  CHECK(p1.box_length() == p2.box_length());
  CHECK(p1.energy() == p2.energy());
  CHECK(p1.box_length() == doctest::Approx(7.0 * std::numbers::pi / 2.5).epsilon(1e-15));
}

TEST_CASE("two-slit validation accepts a sane setup") {
  TwoSlitParams raw;
  raw.k = 5.0;
  raw.slit_half_sep = 1.0;
  raw.exclusion_radius = 1e-3;
  raw.domain_box = {{0.0, 20.0}, {-10.0, 10.0}, {-10.0, 10.0}};
  CHECK_NOTHROW(validate_twoslit_params(raw));
}

TEST_CASE("two-slit validation rejects bad inputs") {
  TwoSlitParams raw;
  raw.slit_half_sep = -1.0;
  try {
    validate_twoslit_params(raw);
    FAIL("expected NonPositive");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonPositive);
  }

  TwoSlitParams bad_box;
  bad_box.domain_box.x = {-1.0, 1.0};
  try {
    validate_twoslit_params(bad_box);
    FAIL("expected BadDomain");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::BadDomain);
  }
}

TEST_CASE("parameters load from flat JSON config objects") {
  const Json j = Json::parse(R"({"a":0.8,"b":0.6,"p":2.0,"boxN":4,"hbar":0.5,"mass":2.0})");
  const PlanePairParams p = validate_plane_params(plane_params_from_json(j));
  CHECK(p.p == 2.0);
  CHECK(p.boxN == 4);
  CHECK(p.constants.hbar == 0.5);
  CHECK(p.energy() == doctest::Approx(2.0));

  const Json j2 =
      Json::parse(R"({"k":3.0,"slit_half_sep":0.5,"exclusion_radius":0.01,
                      "domain_box":[[0,30],[-15,15],[-12,12]]})");
  const TwoSlitParams q = validate_twoslit_params(twoslit_params_from_json(j2));
  CHECK(q.k == 3.0);
  CHECK(q.domain_box.z.hi == 12.0);
  CHECK_FALSE(q.energy.has_value());
}
