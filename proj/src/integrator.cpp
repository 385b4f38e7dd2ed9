#include "pilotwave/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pilotwave {

EventSet EventSet::for_plane(const PlanePairParams& params, std::span<const EventSpec> specs) {
  EventSet set;
  for (const EventSpec& spec : specs) {
    switch (spec.kind) {
      case EventKind::DeltaZeroCrossing:
        set.add(spec, [threshold = spec.threshold](const Configuration& c) {
          return c.delta() - threshold;
        });
        break;
      case EventKind::BoxExit:
        set.add(spec, [params](const Configuration& c) { return params.box_margin(c.delta()); });
        break;
      case EventKind::MirrorResidualThreshold:
        raise(Errc::BadInput, "mirror residual events apply to the two-slit system");
    }
  }
  return set;
}

EventSet EventSet::for_twoslit(const TwoSlitParams& params, std::span<const EventSpec> specs) {
  EventSet set;
  for (const EventSpec& spec : specs) {
    switch (spec.kind) {
      case EventKind::MirrorResidualThreshold:
        set.add(spec, [params, threshold = spec.threshold](const Configuration& c) {
          const SlitDistances r = slit_distances_unchecked(c, params);
          return std::max(std::abs(r.r1A - r.r2B), std::abs(r.r1B - r.r2A)) - threshold;
        });
        break;
      case EventKind::BoxExit:
        set.add(spec, [params](const Configuration& c) { return domain_margin(c, params); });
        break;
      case EventKind::DeltaZeroCrossing:
        raise(Errc::BadInput, "delta-zero events apply to the plane system");
    }
  }
  return set;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA2[1] = {1.0 / 5};
constexpr double kA3[2] = {3.0 / 40, 9.0 / 40};
constexpr double kA4[3] = {44.0 / 45, -56.0 / 15, 32.0 / 9};
constexpr double kA5[4] = {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729};
constexpr double kA6[5] = {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
                           -5103.0 / 18656};
constexpr double kB[6] = {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84};
constexpr double kBStar[7] = {5179.0 / 57600, 0.0,           7571.0 / 16695, 393.0 / 640,
                              -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

constexpr double kEventTimeTol = 1e-10;

using State = std::vector<double>;

struct StepResult {
  bool accepted = false;
  double err = 0.0;
  State y_new;
  State f_new;  // derivative at the new point (7th stage)
};

class Stepper {
 public:
  Stepper(const VelocityField& field, const IntegratorSettings& settings, std::size_t dim)
      : field_(field), settings_(settings), dim_(dim) {
    for (auto& k : k_) k.assign(dim, 0.0);
    y_stage_.assign(dim, 0.0);
  }

  // One trial step from (t, y, f0 = field(t, y)). Throws whatever the field
  // throws; err <= 1 means acceptable.
  StepResult try_step(double t, const State& y, const State& f0, double h) {
    k_[0] = f0;
    stage(t + kC[1] * h, y, h, kA2, 1);
    stage(t + kC[2] * h, y, h, kA3, 2);
    stage(t + kC[3] * h, y, h, kA4, 3);
    stage(t + kC[4] * h, y, h, kA5, 4);
    stage(t + kC[5] * h, y, h, kA6, 5);

    StepResult out;
    out.y_new.assign(dim_, 0.0);
    for (std::size_t i = 0; i < dim_; ++i) {
      double acc = 0.0;
      for (int s = 0; s < 6; ++s) acc += kB[s] * k_[static_cast<std::size_t>(s)][i];
      out.y_new[i] = y[i] + h * acc;
    }
    out.f_new.assign(dim_, 0.0);
    field_(t + h, out.y_new, out.f_new);
    k_[6] = out.f_new;

    double err_sq = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      double acc = 0.0;
      for (int s = 0; s < 7; ++s) {
        const double b = (s < 6 ? kB[s] : 0.0) - kBStar[s];
        acc += b * k_[static_cast<std::size_t>(s)][i];
      }
      const double scale =
          settings_.abs_tol +
          settings_.rel_tol * std::max(std::abs(y[i]), std::abs(out.y_new[i]));
      const double e = h * acc / scale;
      err_sq += e * e;
    }
    out.err = std::sqrt(err_sq / static_cast<double>(dim_));
    out.accepted = out.err <= 1.0;
    return out;
  }

 private:
  void stage(double ts, const State& y, double h, const double* a, int count) {
    for (std::size_t i = 0; i < dim_; ++i) {
      double acc = 0.0;
      for (int s = 0; s < count; ++s) acc += a[s] * k_[static_cast<std::size_t>(s)][i];
      y_stage_[i] = y[i] + h * acc;
    }
    field_(ts, y_stage_, k_[static_cast<std::size_t>(count)]);
  }

  const VelocityField& field_;
  const IntegratorSettings& settings_;
  std::size_t dim_;
  State k_[7];
  State y_stage_;
};

void validate_settings(const IntegratorSettings& s) {
  if (!(s.rel_tol > 0.0) || !(s.abs_tol > 0.0)) {
    raise(Errc::BadInput, "tolerances must be positive");
  }
  if (!(s.min_step > 0.0) || !(s.min_step < s.max_step)) {
    raise(Errc::BadInput, "require 0 < min_step < max_step");
  }
  if (s.max_steps <= 0) {
    raise(Errc::BadInput, "max_steps must be positive");
  }
}

Configuration make_config(SystemKind kind, double t, const State& y) {
  Configuration c;
  c.kind = kind;
  c.time = t;
  std::copy(y.begin(), y.end(), c.coords.begin());
  return c;
}

// Cubic Hermite interpolation within an accepted step.
State hermite(const State& y0, const State& f0, const State& y1, const State& f1, double h,
              double theta) {
  State out(y0.size());
  const double t2 = theta * theta;
  const double t3 = t2 * theta;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + theta;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i];
  }
  return out;
}

struct PiController {
  double err_prev = 1.0;
  static constexpr double kSafety = 0.9;
  static constexpr double kAlpha = 0.7 / 5.0;
  static constexpr double kBeta = 0.4 / 5.0;

  double next_factor(double err) {
    const double e = std::max(err, 1e-10);
    double fac = kSafety * std::pow(e, -kAlpha) * std::pow(err_prev, kBeta);
    fac = std::clamp(fac, 0.2, 5.0);
    err_prev = e;
    return fac;
  }
  static double reject_factor(double err) {
    return std::clamp(kSafety * std::pow(std::max(err, 1e-10), -0.2), 0.1, 0.9);
  }
};

struct Frame {
  double t;
  State y;
  State f;
};

// Outcome of one driver run; `last` is the state where integration stopped.
struct CoreOutcome {
  Termination termination = Termination::ReachedEnd;
  std::string detail;
  Frame last;
};

class Driver {
 public:
  Driver(const VelocityField& field, const IntegratorSettings& settings, SystemKind kind)
      : field_(field), settings_(settings), kind_(kind), stepper_(field, settings, system_dim(kind)) {}

  StepStats stats;

  CoreOutcome run(Frame start, double t1,
                  const std::function<bool(const Frame& prev, const Frame& next)>& on_accept) {
    const double dir = t1 >= start.t ? 1.0 : -1.0;
    Frame cur = std::move(start);
    double h = dir * std::min(settings_.max_step, std::max(1e-6, std::abs(t1 - cur.t) / 100.0));
    PiController controller;
    long halvings_left = 60;

    for (;;) {
      if ((cur.t - t1) * dir >= 0.0) {
        return {Termination::ReachedEnd, "", std::move(cur)};
      }
      if (stats.accepted >= settings_.max_steps) {
        return {Termination::MaxStepsExceeded, "accepted step budget exhausted", std::move(cur)};
      }
      // Clamp the final step onto t1 exactly; a remainder too small to move
      // the clock counts as arrival.
      if ((cur.t + h - t1) * dir > 0.0) h = t1 - cur.t;
      if (cur.t + h == cur.t) {
        cur.t = t1;
        return {Termination::ReachedEnd, "", std::move(cur)};
      }

      StepResult result;
      bool field_failed = false;
      std::string field_error;
      try {
        result = stepper_.try_step(cur.t, cur.y, cur.f, h);
      } catch (const Error& e) {
        field_failed = true;
        field_error = e.what();
      }

      if (field_failed) {
        ++stats.rejected;
        h *= 0.5;
        if (std::abs(h) < settings_.min_step || --halvings_left <= 0) {
          return {Termination::FieldFailure, field_error, std::move(cur)};
        }
        continue;
      }

      if (!result.accepted) {
        ++stats.rejected;
        const double fac = PiController::reject_factor(result.err);
        h *= fac;
        if (std::abs(h) < settings_.min_step) {
          return {Termination::StepUnderflow, "error control pushed the step below min_step",
                  std::move(cur)};
        }
        continue;
      }

      ++stats.accepted;
      stats.max_local_error = std::max(stats.max_local_error, result.err);
      Frame next{cur.t + h, std::move(result.y_new), std::move(result.f_new)};
      const double used_h = h;

      h = used_h * controller.next_factor(result.err);
      if (std::abs(h) > settings_.max_step) h = dir * settings_.max_step;
      if (std::abs(h) < settings_.min_step) h = dir * settings_.min_step;

      const bool keep_going = on_accept(cur, next);
      cur = std::move(next);
      if (!keep_going) {
        return {Termination::EventStop, "", std::move(cur)};
      }
      halvings_left = 60;
    }
  }

  // Controlled integration from a frozen frame to an interior target time;
  // used for event refinement. Returns the state at exactly t_target.
  State propagate(const Frame& from, double t_target) {
    Driver sub(field_, settings_, kind_);
    Frame start{from.t, from.y, from.f};
    CoreOutcome out = sub.run(std::move(start), t_target,
                              [](const Frame&, const Frame&) { return true; });
    if (out.termination != Termination::ReachedEnd) {
      raise(Errc::FieldFailure, "event refinement integration failed: " + out.detail);
    }
    return std::move(out.last.y);
  }

 private:
  const VelocityField& field_;
  const IntegratorSettings& settings_;
  SystemKind kind_;
  Stepper stepper_;
};

}  // namespace

Trajectory integrate_trajectory(const Configuration& initial, const VelocityField& field,
                                std::pair<double, double> t_span,
                                const IntegratorSettings& settings, const EventSet& events) {
  validate_settings(settings);
  const auto [t0, t1] = t_span;
  if (initial.time != t0) {
    raise(Errc::BadInput, "initial configuration time must equal t_span start");
  }
  if (t0 == t1) {
    Trajectory traj;
    traj.samples.push_back(initial);
    return traj;
  }

  const std::size_t dim = initial.dim();
  Driver driver(field, settings, initial.kind);

  Trajectory traj;
  traj.samples.push_back(initial);

  Frame start;
  start.t = t0;
  start.y.assign(initial.coords.begin(), initial.coords.begin() + static_cast<long>(dim));
  start.f.assign(dim, 0.0);
  try {
    field(t0, start.y, start.f);
  } catch (const Error& e) {
    traj.termination = Termination::FieldFailure;
    traj.termination_detail = e.what();
    return traj;
  }

  // Gauge values at the current sample; events fire on sign changes.
  const auto& gauges = events.gauges();
  std::vector<double> g_prev(gauges.size(), 0.0);
  for (std::size_t gi = 0; gi < gauges.size(); ++gi) {
    g_prev[gi] = gauges[gi].value(initial);
    if (g_prev[gi] == 0.0) {
      traj.events.push_back({gauges[gi].spec.kind, t0, initial});
      if (gauges[gi].spec.terminal || gauges[gi].spec.kind == EventKind::BoxExit) {
        traj.termination = gauges[gi].spec.kind == EventKind::BoxExit ? Termination::BoxExit
                                                                      : Termination::EventStop;
        return traj;
      }
    }
  }

  bool stop_requested = false;
  Termination stop_reason = Termination::EventStop;

  auto on_accept = [&](const Frame& prev, const Frame& next) -> bool {
    const double h = next.t - prev.t;
    Configuration next_cfg = make_config(initial.kind, next.t, next.y);

    struct Hit {
      std::size_t gauge;
      double time;
      Configuration state;
    };
    std::vector<Hit> hits;

    for (std::size_t gi = 0; gi < gauges.size(); ++gi) {
      const double g0 = g_prev[gi];
      const double g1 = gauges[gi].value(next_cfg);
      const bool crossed = (g0 > 0.0 && g1 <= 0.0) || (g0 < 0.0 && g1 >= 0.0);
      g_prev[gi] = g1;
      if (!crossed || g0 == 0.0) continue;

      // Phase 1: bisection on the cubic Hermite interpolant for a bracket.
      double lo = 0.0, hi_t = 1.0;
      for (int it = 0; it < 20; ++it) {
        const double mid = 0.5 * (lo + hi_t);
        const State ym = hermite(prev.y, prev.f, next.y, next.f, h, mid);
        const double gm = gauges[gi].value(make_config(initial.kind, prev.t + mid * h, ym));
        if ((gm > 0.0) == (g0 > 0.0)) {
          lo = mid;
        } else {
          hi_t = mid;
        }
      }
      // Phase 2: refine against the actual flow, bisecting on states
      // re-integrated from the step start.
      double ta = prev.t + lo * h;
      double tb = prev.t + hi_t * h;
      // Guard: the Hermite bracket may be slightly off the true crossing;
      // widen back to the full step if the sign condition fails.
      State ya, yb;
      try {
        ya = driver.propagate(prev, ta);
        yb = driver.propagate(prev, tb);
        double ga = gauges[gi].value(make_config(initial.kind, ta, ya));
        double gb = gauges[gi].value(make_config(initial.kind, tb, yb));
        if ((ga > 0.0) == (gb > 0.0)) {
          ta = prev.t;
          tb = next.t;
          ya = prev.y;
          yb = next.y;
          ga = g0;
        }
        while (std::abs(tb - ta) > kEventTimeTol) {
          const double tm = 0.5 * (ta + tb);
          State ym = driver.propagate(prev, tm);
          const double gm = gauges[gi].value(make_config(initial.kind, tm, ym));
          if ((gm > 0.0) == (ga > 0.0)) {
            ta = tm;
            ya = std::move(ym);
            ga = gm;
          } else {
            tb = tm;
            yb = std::move(ym);
          }
        }
      } catch (const Error&) {
        // Refinement integration failed (field singular inside the step);
        // fall back to the Hermite estimate.
        tb = prev.t + hi_t * h;
        yb = hermite(prev.y, prev.f, next.y, next.f, h, hi_t);
      }
      hits.push_back({gi, tb, make_config(initial.kind, tb, yb)});
    }

    if (!hits.empty()) {
      const double dir = h > 0.0 ? 1.0 : -1.0;
      std::sort(hits.begin(), hits.end(),
                [dir](const Hit& a, const Hit& b) { return a.time * dir < b.time * dir; });
      for (const Hit& hit : hits) {
        const EventSpec& spec = gauges[hit.gauge].spec;
        traj.events.push_back({spec.kind, hit.time, hit.state});
        traj.samples.push_back(hit.state);
        if (spec.terminal || spec.kind == EventKind::BoxExit) {
          stop_requested = true;
          stop_reason =
              spec.kind == EventKind::BoxExit ? Termination::BoxExit : Termination::EventStop;
          return false;  // trajectory ends at the event sample
        }
      }
    }

    traj.samples.push_back(next_cfg);
    return true;
  };

  CoreOutcome out = driver.run(std::move(start), t1, on_accept);
  traj.step_stats = driver.stats;
  if (stop_requested) {
    traj.termination = stop_reason;
  } else {
    traj.termination = out.termination;
    traj.termination_detail = out.detail;
    if (out.termination != Termination::ReachedEnd &&
        out.termination != Termination::EventStop) {
      // Record where integration stopped.
      if (traj.samples.back().time != out.last.t) {
        traj.samples.push_back(make_config(initial.kind, out.last.t, out.last.y));
      }
    }
  }
  return traj;
}

AdvanceResult advance_configuration(const Configuration& initial, const VelocityField& field,
                                    double t1, const IntegratorSettings& settings) {
  validate_settings(settings);
  AdvanceResult result;
  if (initial.time == t1) {
    result.state = initial;
    return result;
  }
  const std::size_t dim = initial.dim();
  Driver driver(field, settings, initial.kind);
  Frame start;
  start.t = initial.time;
  start.y.assign(initial.coords.begin(), initial.coords.begin() + static_cast<long>(dim));
  start.f.assign(dim, 0.0);
  try {
    field(start.t, start.y, start.f);
  } catch (const Error&) {
    result.state = initial;
    result.termination = Termination::FieldFailure;
    return result;
  }
  CoreOutcome out = driver.run(std::move(start), t1, [](const Frame&, const Frame&) { return true; });
  result.state = make_config(initial.kind, out.last.t, out.last.y);
  result.termination = out.termination;
  result.step_stats = driver.stats;
  return result;
}

double conserved_residual(const Trajectory& traj,
                          const std::function<double(const Configuration&)>& first_integral) {
  if (traj.empty()) {
    raise(Errc::BadInput, "trajectory is empty");
  }
  const double f0 = first_integral(traj.initial());
  double residual = 0.0;
  for (const Configuration& cfg : traj.samples) {
    residual = std::max(residual, std::abs(first_integral(cfg) - f0));
  }
  return residual;
}

VelocityField plane_pair_field(const PlanePairParams& params, bool periodic) {
  return [params, periodic](double, std::span<const double> y, std::span<double> dydt) {
    const double delta = y[0] - y[1];
    if (!periodic && !params.in_box(delta)) {
      raise(Errc::OutOfBox, "relative coordinate outside the normalization box");
    }
    const double theta = params.p * delta / params.constants.hbar;
    const double r = params.amplitude_ratio();
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double v1 = (params.p / params.constants.mass) * r / (c * c + r * r * s * s);
    dydt[0] = v1;
    dydt[1] = -v1;
  };
}

VelocityField twoslit_field(const TwoSlitParams& params) {
  return [params](double, std::span<const double> y, std::span<double> dydt) {
    Configuration cfg;
    cfg.kind = SystemKind::Pair3D;
    std::copy(y.begin(), y.end(), cfg.coords.begin());
    const VelocityVector v = velocity_twoslit(cfg, params);
    std::copy(v.components.begin(), v.components.begin() + 6, dydt.begin());
  };
}

}  // namespace pilotwave
