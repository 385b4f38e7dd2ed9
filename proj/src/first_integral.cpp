#include "pilotwave/first_integral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pilotwave/guidance.hpp"
#include "pilotwave/parallel.hpp"
#include "pilotwave/wavefunction.hpp"

namespace pilotwave {

double first_integral_candidate(double delta, double t, const PlanePairParams& params) {
  if (!params.in_box(delta)) {
    raise(Errc::OutOfBox, "relative coordinate outside the normalization box");
  }
  const double a = params.a;
  const double b = params.b;
  const double hbar = params.constants.hbar;
  const double diff2 = a * a - b * b;
  const double term_linear = delta / (2.0 * diff2);
  const double term_sin = (hbar / params.p) * (a * b / diff2) * std::sin(2.0 * params.p * delta / hbar);
  return term_linear + term_sin - (2.0 * params.p / params.constants.mass) * t;
}

DerivedFirstIntegral::DerivedFirstIntegral(const PlanePairParams& params)
    : params_(validate_plane_params(params)) {
  // Chebyshev antiderivative of the reciprocal relative velocity over the
  // box. First-kind nodes keep every sample strictly inside the open box.
  const double h = params_.half_width();
  auto reciprocal = [this](double delta) { return 1.0 / relative_velocity_plane(delta, params_); };
  const ChebyshevSeries fit = ChebyshevSeries::fit(reciprocal, -h, h, 1e-13);
  g_ = std::make_shared<const ChebyshevSeries>(fit.antiderivative());
  g_at_zero_ = (*g_)(0.0);
}

double DerivedFirstIntegral::time_of_flight(double delta) const {
  if (!params_.in_box(delta)) {
    raise(Errc::OutOfBox, "relative coordinate outside the normalization box");
  }
  return (*g_)(delta) - g_at_zero_;
}

FirstIntegralForm::FirstIntegralForm(IntegralForm kind, const PlanePairParams& params)
    : kind_(kind), params_(validate_plane_params(params)) {
  if (kind_ == IntegralForm::DerivedQuadrature) {
    derived_ = std::make_shared<const DerivedFirstIntegral>(params_);
  }
}

double FirstIntegralForm::operator()(double delta, double t) const {
  if (kind_ == IntegralForm::CandidateClosedForm) {
    return first_integral_candidate(delta, t, params_);
  }
  return (*derived_)(delta, t);
}

RootReport count_roots(const FirstIntegralForm& form, double t, double t0,
                       std::size_t grid_per_period) {
  const PlanePairParams& params = form.params();
  if (grid_per_period < 64) {
    raise(Errc::GridTooCoarse, "need at least 64 samples per density period");
  }
  const double h = params.half_width();
  const double margin = h * 1e-9;
  const double lo = -h + margin;
  const double hi = h - margin;
  const std::size_t periods = static_cast<std::size_t>(2 * params.boxN + 1);
  const std::size_t n = grid_per_period * periods + 1;

  const double reference = form(0.0, t0);
  auto f = [&](double delta) { return form(delta, t) - reference; };

  std::vector<double> xs(n);
  std::vector<double> fs(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    fs[i] = f(xs[i]);
  }

  // A grid fine enough for the period resolves F smoothly; adjacent samples
  // jumping by more than the full per-period swing indicate aliasing.
  double swing = 0.0;
  for (std::size_t start = 0; start + grid_per_period < n; start += grid_per_period) {
    const auto [mn, mx] = std::minmax_element(fs.begin() + static_cast<long>(start),
                                              fs.begin() + static_cast<long>(start + grid_per_period + 1));
    swing = std::max(swing, *mx - *mn);
  }
  const double jump_bound = swing * 64.0 / static_cast<double>(grid_per_period) + 1e-300;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(fs[i + 1] - fs[i]) > jump_bound) {
      raise(Errc::GridTooCoarse, "adjacent samples exceed the period-resolution bound");
    }
  }

  RootReport report;
  report.form = form.kind();
  report.threshold_value = 4.0 * params.a * params.b;

  bool monotone = true;
  int direction = 0;
  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double df = fs[i + 1] - fs[i];
    if (df != 0.0) {
      const int s = df > 0.0 ? 1 : -1;
      if (direction == 0) direction = s;
      else if (s != direction) monotone = false;
    }
    if (fs[i] == 0.0) {
      roots.push_back(xs[i]);
      continue;
    }
    const bool crossing = (fs[i] > 0.0 && fs[i + 1] < 0.0) || (fs[i] < 0.0 && fs[i + 1] > 0.0);
    if (!crossing) continue;
    ++report.bracket_count;
    double a_x = xs[i], b_x = xs[i + 1];
    double fa = fs[i];
    while (b_x - a_x > 1e-12) {
      const double m = 0.5 * (a_x + b_x);
      const double fm = f(m);
      if (fm == 0.0) {
        a_x = b_x = m;
        break;
      }
      if ((fm > 0.0) == (fa > 0.0)) {
        a_x = m;
        fa = fm;
      } else {
        b_x = m;
      }
    }
    roots.push_back(0.5 * (a_x + b_x));
  }
  if (!fs.empty() && fs.back() == 0.0) roots.push_back(xs.back());

  std::sort(roots.begin(), roots.end());
  const double sep = 1e-9 * params.box_length();
  for (double r : roots) {
    if (report.roots.empty() || r - report.roots.back() > sep) {
      report.roots.push_back(r);
    }
  }
  report.monotone = monotone;
  return report;
}

UniquenessReport uniqueness_report(const PlanePairParams& raw, double t0,
                                   std::size_t grid_per_period) {
  const PlanePairParams params = validate_plane_params(raw);
  UniquenessReport rep;
  rep.four_ab = 4.0 * params.a * params.b;
  rep.threshold_satisfied = rep.four_ab < 1.0;
  rep.candidate = count_roots(FirstIntegralForm(IntegralForm::CandidateClosedForm, params), t0, t0,
                          grid_per_period);
  rep.derived = count_roots(FirstIntegralForm(IntegralForm::DerivedQuadrature, params), t0, t0,
                            grid_per_period);
  rep.unique_under_candidate = rep.candidate.roots.size() == 1;
  rep.unique_under_derived = rep.derived.roots.size() == 1;
  rep.forms_agree = rep.candidate.roots.size() == rep.derived.roots.size();
  rep.threshold_prediction_holds_candidate = !rep.threshold_satisfied || rep.unique_under_candidate;
  rep.threshold_prediction_holds_derived = !rep.threshold_satisfied || rep.unique_under_derived;

  std::string verdict = rep.threshold_satisfied ? "threshold satisfied" : "threshold violated";
  if (rep.unique_under_candidate && rep.unique_under_derived) {
    verdict += ", unique";
  } else if (!rep.unique_under_candidate && !rep.unique_under_derived) {
    verdict += ", multiple roots under both forms";
  } else {
    verdict += ", forms disagree";
  }
  rep.verdict = verdict;
  return rep;
}

CandidateDriftReport classify_candidate_drift(const Trajectory& traj, const PlanePairParams& params) {
  if (traj.samples.size() < 3) {
    raise(Errc::BadInput, "need at least 3 samples to classify drift");
  }
  const double slope_ref = 2.0 * params.p / params.constants.mass;
  const std::size_t n = traj.samples.size();

  std::vector<double> ts(n), ps(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Configuration& c = traj.samples[i];
    ts[i] = c.time;
    ps[i] = first_integral_candidate(c.delta(), 0.0, params);
  }

  CandidateDriftReport rep;
  rep.expected_slope = slope_ref;
  const double f0 = ps[0] - slope_ref * ts[0];
  double p_min = ps[0], p_max = ps[0];
  for (std::size_t i = 0; i < n; ++i) {
    rep.raw_drift = std::max(rep.raw_drift, std::abs(ps[i] - slope_ref * ts[i] - f0));
    p_min = std::min(p_min, ps[i]);
    p_max = std::max(p_max, ps[i]);
  }

  // Least-squares line P ~ alpha + beta t.
  double mt = 0.0, mp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mt += ts[i];
    mp += ps[i];
  }
  mt /= static_cast<double>(n);
  mp /= static_cast<double>(n);
  double stt = 0.0, stp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    stt += (ts[i] - mt) * (ts[i] - mt);
    stp += (ts[i] - mt) * (ps[i] - mp);
  }
  if (!(stt > 0.0)) {
    raise(Errc::BadInput, "trajectory does not span time");
  }
  rep.fitted_slope = stp / stt;
  const double alpha = mp - rep.fitted_slope * mt;
  for (std::size_t i = 0; i < n; ++i) {
    rep.affine_residual =
        std::max(rep.affine_residual, std::abs(ps[i] - alpha - rep.fitted_slope * ts[i]));
  }

  rep.scale = std::max(p_max - p_min, std::abs(slope_ref * (ts.back() - ts.front())));
  const double tol = 1e-6 * rep.scale + 1e-12;
  if (rep.raw_drift <= tol) {
    rep.verdict = ConservationVerdict::Conserved;
  } else if (rep.affine_residual <= tol) {
    rep.verdict = ConservationVerdict::ConservedUpToRescaling;
  } else {
    rep.verdict = ConservationVerdict::NotConserved;
  }
  return rep;
}

CrossingMap crossing_time_map(std::span<const double> delta_inits, const PlanePairParams& raw,
                              const IntegratorSettings& settings, int jobs) {
  const PlanePairParams params = validate_plane_params(raw);
  CrossingMap map;
  map.delta_init.assign(delta_inits.begin(), delta_inits.end());
  map.t_star.assign(delta_inits.size(), 0.0);

  const double v_sign = params.a * params.a > params.b * params.b ? 1.0 : -1.0;
  // Worst-case time to reach zero, from the velocity lower bound.
  const double v_min = 2.0 * params.p * std::abs(params.a * params.a - params.b * params.b) /
                       (params.constants.mass * (1.0 + 2.0 * std::abs(params.a * params.b)));

  // The periodic extension keeps stage evaluations smooth at the box edge;
  // the BoxExit gauge still terminates any trajectory that leaves.
  const VelocityField field = plane_pair_field(params, /*periodic=*/true);
  std::vector<EventSpec> specs{{EventKind::DeltaZeroCrossing, 0.0, true},
                               {EventKind::BoxExit, 0.0, true}};
  const EventSet events = EventSet::for_plane(params, specs);

  parallel_for(delta_inits.size(), jobs, [&](std::size_t i) {
    const double d0 = delta_inits[i];
    if (!params.in_box(d0)) {
      raise(Errc::OutOfBox, "initial relative coordinate outside the box");
    }
    if (d0 == 0.0) {
      map.t_star[i] = 0.0;
      return;
    }
    const double direction = d0 * v_sign < 0.0 ? 1.0 : -1.0;
    const double t_end = direction * (std::abs(d0) / v_min * 1.05 + 1.0);
    const Configuration start = Configuration::pair1d(d0 / 2.0, -d0 / 2.0, 0.0);
    const Trajectory traj = integrate_trajectory(start, field, {0.0, t_end}, settings, events);
    for (const EventRecord& ev : traj.events) {
      if (ev.kind == EventKind::DeltaZeroCrossing) {
        map.t_star[i] = ev.time;
        return;
      }
    }
    raise(Errc::NoCrossingInBox,
          "no delta = 0 crossing before box exit (termination: " +
              std::string(termination_name(traj.termination)) + ")");
  });

  // Monotonicity of delta_init -> t*.
  std::vector<std::size_t> order(map.delta_init.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t l, std::size_t r) { return map.delta_init[l] < map.delta_init[r]; });
  bool increasing = true, decreasing = true;
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    const double t_a = map.t_star[order[i]];
    const double t_b = map.t_star[order[i + 1]];
    if (!(t_b > t_a)) increasing = false;
    if (!(t_b < t_a)) decreasing = false;
  }
  map.monotone = order.size() < 2 || increasing || decreasing;

  std::vector<double> sorted_t = map.t_star;
  std::sort(sorted_t.begin(), sorted_t.end());
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < sorted_t.size(); ++i) {
    min_gap = std::min(min_gap, sorted_t[i + 1] - sorted_t[i]);
  }
  map.min_gap = sorted_t.size() < 2 ? std::numeric_limits<double>::infinity() : min_gap;
  map.coincidence = map.min_gap < 1e-8;
  return map;
}

std::pair<double, double> mirror_residual(const Configuration& cfg, const TwoSlitParams& params) {
  const SlitDistances r = slit_distances_unchecked(cfg, params);
  return {std::abs(r.r1A - r.r2B), std::abs(r.r1B - r.r2A)};
}

}  // namespace pilotwave
