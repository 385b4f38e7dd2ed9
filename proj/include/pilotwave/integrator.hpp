#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "pilotwave/configuration.hpp"
#include "pilotwave/guidance.hpp"
#include "pilotwave/params.hpp"

namespace pilotwave {

struct IntegratorSettings {
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  double max_step = 0.25;
  double min_step = 1e-13;
  long max_steps = 5'000'000;
};

struct EventSpec {
  EventKind kind = EventKind::DeltaZeroCrossing;
  double threshold = 0.0;
  bool terminal = false;
};

/// dy/dt = field(t, y); implementations throw Error (OutOfBox,
/// SlitSingularity, NodeEncountered, ...) where the velocity is undefined.
using VelocityField =
    std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

/// Event gauges paired with their specs. A crossing is a sign change of
/// value(cfg) - threshold between accepted steps; BoxExit gauges are
/// "positive inside" margins and always terminate.
class EventSet {
 public:
  struct Gauge {
    EventSpec spec;
    std::function<double(const Configuration&)> value;
  };

  void add(const EventSpec& spec, std::function<double(const Configuration&)> value) {
    gauges_.push_back({spec, std::move(value)});
  }

  /// Standard gauges for the plane pair: delta-zero crossing on the relative
  /// coordinate and box-exit on the normalization box.
  static EventSet for_plane(const PlanePairParams& params, std::span<const EventSpec> specs);
  /// Standard gauges for the two-slit pair: mirror-residual threshold and
  /// domain-box exit (domain walls plus exclusion balls).
  static EventSet for_twoslit(const TwoSlitParams& params, std::span<const EventSpec> specs);

  const std::vector<Gauge>& gauges() const { return gauges_; }
  bool empty() const { return gauges_.empty(); }

 private:
  std::vector<Gauge> gauges_;
};

/// Adaptive embedded Runge-Kutta 5(4) integration of dy/dt = field(t, y) from
/// initial.time over t_span. Backward spans (t1 < t0) are supported. Events
/// are located to time tolerance 1e-10 by bisection (Hermite dense output for
/// bracketing, re-integration from the step start for refinement) and the
/// event state is inserted into the sample list. Early termination reasons
/// are recorded on the trajectory instead of being thrown.
Trajectory integrate_trajectory(const Configuration& initial, const VelocityField& field,
                                std::pair<double, double> t_span,
                                const IntegratorSettings& settings = {},
                                const EventSet& events = {});

/// Endpoint-only integration used for ensemble evolution; no sample storage.
struct AdvanceResult {
  Configuration state;
  Termination termination = Termination::ReachedEnd;
  StepStats step_stats{};
};
AdvanceResult advance_configuration(const Configuration& initial, const VelocityField& field,
                                    double t1, const IntegratorSettings& settings = {});

/// Max drift of a candidate first integral along a trajectory:
/// max_i |F(sample_i) - F(sample_0)|.
double conserved_residual(const Trajectory& traj,
                          const std::function<double(const Configuration&)>& first_integral);

/// Velocity field of the plane pair in (x1, x2). With `periodic` the closed
/// form is evaluated for any delta (it is box-periodic), otherwise leaving
/// the box raises OutOfBox.
VelocityField plane_pair_field(const PlanePairParams& params, bool periodic = false);

/// Velocity field of the two-slit pair in (x1, y1, z1, x2, y2, z2).
VelocityField twoslit_field(const TwoSlitParams& params);

}  // namespace pilotwave
