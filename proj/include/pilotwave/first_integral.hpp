#pragma once

#include <memory>
#include <span>
#include <vector>

#include "pilotwave/configuration.hpp"
#include "pilotwave/integrator.hpp"
#include "pilotwave/params.hpp"
#include "pilotwave/quadrature.hpp"

namespace pilotwave {

/// The published candidate first integral, as printed:
///   delta/(2(a^2-b^2)) + (hbar/p)(ab/(a^2-b^2)) sin(2 p delta / hbar) - (2p/m) t.
/// Constancy along trajectories is measured, not assumed.
double first_integral_candidate(double delta, double t, const PlanePairParams& params);

/// First integral built directly from the relative velocity:
///   G(delta) - t with G(delta) = integral_0^delta d(delta') / v_rel(delta'),
/// evaluated from a Chebyshev antiderivative of 1 / relative_velocity_plane.
/// Conserved along exact trajectories by construction.
class DerivedFirstIntegral {
 public:
  explicit DerivedFirstIntegral(const PlanePairParams& params);

  /// G(delta): signed time of flight from delta = 0.
  double time_of_flight(double delta) const;
  double operator()(double delta, double t) const { return time_of_flight(delta) - t; }

  const PlanePairParams& params() const { return params_; }

 private:
  PlanePairParams params_;
  std::shared_ptr<const ChebyshevSeries> g_;  // antiderivative, zero at box lo
  double g_at_zero_ = 0.0;
};

enum class IntegralForm { CandidateClosedForm, DerivedQuadrature };

inline const char* integral_form_name(IntegralForm f) {
  return f == IntegralForm::CandidateClosedForm ? "candidate_closed_form" : "derived_quadrature";
}

/// A first-integral candidate bound to its parameters; callable as F(delta, t).
class FirstIntegralForm {
 public:
  FirstIntegralForm(IntegralForm kind, const PlanePairParams& params);
  double operator()(double delta, double t) const;
  IntegralForm kind() const { return kind_; }
  const PlanePairParams& params() const { return params_; }

 private:
  IntegralForm kind_;
  PlanePairParams params_;
  std::shared_ptr<const DerivedFirstIntegral> derived_;  // only for DerivedQuadrature
};

struct RootReport {
  IntegralForm form = IntegralForm::CandidateClosedForm;
  std::vector<double> roots;  // sorted delta values
  long bracket_count = 0;
  bool monotone = false;
  double threshold_value = 0.0;  // 4ab
};

/// Scans F(delta) = form(delta, t) - form(0, t0) on a uniform grid
/// (grid_per_period samples per density period, >= 64), brackets sign
/// changes, bisects to |delta| tolerance 1e-12 and deduplicates roots closer
/// than 1e-9 times the box length.
RootReport count_roots(const FirstIntegralForm& form, double t, double t0,
                       std::size_t grid_per_period = 4096);

struct UniquenessReport {
  double four_ab = 0.0;
  bool threshold_satisfied = false;  // 4ab < 1
  RootReport candidate;
  RootReport derived;
  bool forms_agree = false;
  bool unique_under_candidate = false;
  bool unique_under_derived = false;
  /// True when "4ab < 1 implies a unique root" held for the given form.
  bool threshold_prediction_holds_candidate = false;
  bool threshold_prediction_holds_derived = false;
  std::string verdict;
};

UniquenessReport uniqueness_report(const PlanePairParams& params, double t0 = 0.0,
                                   std::size_t grid_per_period = 4096);

enum class ConservationVerdict { Conserved, ConservedUpToRescaling, NotConserved };

inline const char* conservation_verdict_name(ConservationVerdict v) {
  switch (v) {
    case ConservationVerdict::Conserved: return "conserved";
    case ConservationVerdict::ConservedUpToRescaling: return "conserved_up_to_rescaling";
    case ConservationVerdict::NotConserved: return "not_conserved";
  }
  return "unknown";
}

/// Adjudicates the published combination along an integrated trajectory.
/// With P(delta) the spatial part and tau = (2p/m) t, the combination is
/// conserved as printed iff P - tau is constant, and conserved up to a
/// constant rescaling iff P is an affine function of t (slope != 2p/m).
struct CandidateDriftReport {
  double raw_drift = 0.0;       // max |(P - tau) - (P - tau)_0|
  double fitted_slope = 0.0;    // least-squares dP/dt along the trajectory
  double expected_slope = 0.0;  // 2p/m
  double affine_residual = 0.0; // max deviation from the affine fit
  double scale = 0.0;           // spread of P used for thresholds
  ConservationVerdict verdict = ConservationVerdict::NotConserved;
};

CandidateDriftReport classify_candidate_drift(const Trajectory& traj, const PlanePairParams& params);

struct CrossingMap {
  std::vector<double> delta_init;
  std::vector<double> t_star;
  bool monotone = false;
  bool coincidence = false;  // any two crossing times closer than 1e-8
  double min_gap = 0.0;      // smallest |t*_i - t*_j| over distinct pairs
};

/// Integrates each initial relative coordinate (forward or backward,
/// whichever reaches delta = 0) and records the crossing time. Throws
/// NoCrossingInBox when a trajectory leaves the box first.
CrossingMap crossing_time_map(std::span<const double> delta_inits, const PlanePairParams& params,
                              const IntegratorSettings& settings = {}, int jobs = 1);

/// (|r1A - r2B|, |r1B - r2A|): zero exactly on the mirror manifold where the
/// two-slit velocity equations decouple.
std::pair<double, double> mirror_residual(const Configuration& cfg, const TwoSlitParams& params);

}  // namespace pilotwave
