#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pilotwave/errors.hpp"
#include "pilotwave/params.hpp"

namespace pilotwave {

enum class SystemKind { Pair1D, Pair3D };

inline std::size_t system_dim(SystemKind kind) { return kind == SystemKind::Pair1D ? 2 : 6; }

/// A point in configuration space at a given time: (x1, x2) for the 1-D pair,
/// (x1, y1, z1, x2, y2, z2) for the 3-D pair.
struct Configuration {
  SystemKind kind = SystemKind::Pair1D;
  std::array<double, 6> coords{};
  double time = 0.0;

  static Configuration pair1d(double x1, double x2, double t = 0.0) {
    Configuration c;
    c.kind = SystemKind::Pair1D;
    c.coords = {x1, x2, 0.0, 0.0, 0.0, 0.0};
    c.time = t;
    return c;
  }
  static Configuration pair3d(const std::array<double, 6>& xyzxyz, double t = 0.0) {
    Configuration c;
    c.kind = SystemKind::Pair3D;
    c.coords = xyzxyz;
    c.time = t;
    return c;
  }

  std::size_t dim() const { return system_dim(kind); }
  std::span<const double> view() const { return {coords.data(), dim()}; }
  std::span<double> view() { return {coords.data(), dim()}; }

  /// Relative coordinate x1 - x2 (1-D pair only).
  double delta() const { return coords[0] - coords[1]; }
  double center_of_mass() const { return 0.5 * (coords[0] + coords[1]); }
};

enum class EventKind { DeltaZeroCrossing, MirrorResidualThreshold, BoxExit };

inline const char* event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::DeltaZeroCrossing: return "delta_zero_crossing";
    case EventKind::MirrorResidualThreshold: return "mirror_residual_threshold";
    case EventKind::BoxExit: return "box_exit";
  }
  return "unknown";
}

struct EventRecord {
  EventKind kind;
  double time;
  Configuration state;
};

enum class Termination {
  ReachedEnd,
  EventStop,
  BoxExit,
  FieldFailure,
  StepUnderflow,
  MaxStepsExceeded,
};

inline const char* termination_name(Termination t) {
  switch (t) {
    case Termination::ReachedEnd: return "reached_end";
    case Termination::EventStop: return "event_stop";
    case Termination::BoxExit: return "box_exit";
    case Termination::FieldFailure: return "field_failure";
    case Termination::StepUnderflow: return "step_underflow";
    case Termination::MaxStepsExceeded: return "max_steps_exceeded";
  }
  return "unknown";
}

struct StepStats {
  long accepted = 0;
  long rejected = 0;
  double max_local_error = 0.0;  // largest accepted error norm, tolerance units
};

struct Trajectory {
  std::vector<Configuration> samples;
  StepStats step_stats{};
  std::vector<EventRecord> events;
  Termination termination = Termination::ReachedEnd;
  std::string termination_detail;

  bool empty() const { return samples.empty(); }
  const Configuration& initial() const { return samples.front(); }
  const Configuration& final_state() const { return samples.back(); }
  double final_time() const { return samples.back().time; }
};

/// Throws OutOfBox when the relative coordinate leaves the open box.
void check_configuration(const Configuration& cfg, const PlanePairParams& params);
/// Throws SlitSingularity / BadDomain when a particle sits inside an
/// exclusion ball or outside the domain box.
void check_configuration(const Configuration& cfg, const TwoSlitParams& params);

/// Positive inside the admissible region, negative outside; used as the
/// BoxExit event gauge. Accounts for domain walls and exclusion balls.
double domain_margin(const Configuration& cfg, const TwoSlitParams& params);

}  // namespace pilotwave
