#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pilotwave/ensemble.hpp"
#include "pilotwave/first_integral.hpp"
#include "pilotwave/guidance.hpp"
#include "pilotwave/integrator.hpp"
#include "pilotwave/parallel.hpp"
#include "pilotwave/report_io.hpp"
#include "pilotwave/rng.hpp"
#include "pilotwave/version.hpp"
#include "pilotwave/wavefunction.hpp"

using namespace pilotwave;

namespace {

struct PendingFile {
  std::string path;
  std::string content;
};

// Outputs are buffered and written only after a run fully succeeds, so a
// failing run never leaves partial files behind.
struct RunContext {
  std::string command;
  std::vector<std::string> argv;
  Json parameters;
  std::uint64_t seed = 0;
  std::vector<PendingFile> files;

  void stage(const std::string& path, std::string content) {
    files.push_back({path, std::move(content)});
  }

  void commit() {
    RunManifest manifest;
    manifest.command = command;
    manifest.argv = argv;
    manifest.parameters = parameters;
    manifest.seed = seed;
    manifest.tool_version = kToolVersion;
    manifest.timestamp = iso8601_utc_now();
    for (const PendingFile& f : files) manifest.outputs.push_back(f.path);
    for (const PendingFile& f : files) write_text_file(f.path, f.content);
    if (!files.empty()) {
      write_text_file(files.front().path + ".manifest.json",
                      manifest_json(manifest).dump(2) + "\n");
    }
  }
};

Json load_config(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) {
      return Json::parse(read_text_file(argv[i + 1]));
    }
    if (arg.rfind("--config=", 0) == 0) {
      return Json::parse(read_text_file(arg.substr(9)));
    }
  }
  return Json::object();
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

struct PlaneFlags {
  PlanePairParams raw{0.8, 0.6, 1.0, 10, {}};
  void attach(CLI::App* cmd) {
    cmd->add_option("--a", raw.a, "even amplitude");
    cmd->add_option("--b", raw.b, "odd amplitude");
    cmd->add_option("--p", raw.p, "momentum");
    cmd->add_option("--boxN", raw.boxN, "box size integer N");
  }
  PlanePairParams validated(const PhysicalConstants& constants) const {
    PlanePairParams p = raw;
    p.constants = constants;
    return validate_plane_params(p);
  }
};

struct TwoSlitFlags {
  TwoSlitParams raw;
  std::string box_text;
  void attach(CLI::App* cmd) {
    cmd->add_option("--k", raw.k, "wavenumber");
    cmd->add_option("--slit-half-sep", raw.slit_half_sep, "slit half separation");
    cmd->add_option("--exclusion-radius", raw.exclusion_radius, "slit exclusion radius");
    cmd->add_option("--box", box_text, "domain box: xlo,xhi,ylo,yhi,zlo,zhi");
  }
  TwoSlitParams validated(const PhysicalConstants& constants) const {
    TwoSlitParams p = raw;
    p.constants = constants;
    if (!box_text.empty()) {
      const std::vector<double> v = parse_number_list(box_text);
      if (v.size() != 6) {
        raise(Errc::BadInput, "--box expects 6 comma-separated numbers");
      }
      p.domain_box = {{v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]}};
    }
    return validate_twoslit_params(p);
  }
};

struct SettingsFlags {
  IntegratorSettings settings;
  void attach(CLI::App* cmd) {
    cmd->add_option("--rel-tol", settings.rel_tol, "relative tolerance");
    cmd->add_option("--abs-tol", settings.abs_tol, "absolute tolerance");
    cmd->add_option("--max-step", settings.max_step, "largest time step");
    cmd->add_option("--min-step", settings.min_step, "smallest time step");
    cmd->add_option("--max-steps", settings.max_steps, "step budget");
  }
};

Json settings_json(const IntegratorSettings& s) {
  return Json{{"rel_tol", s.rel_tol},
              {"abs_tol", s.abs_tol},
              {"max_step", s.max_step},
              {"min_step", s.min_step},
              {"max_steps", s.max_steps}};
}

// --- subcommand bodies ------------------------------------------------------

void run_trajectory(RunContext& ctx, const PhysicalConstants& constants,
                    const std::string& system, const PlaneFlags& plane,
                    const TwoSlitFlags& twoslit, const SettingsFlags& sf, double delta0,
                    double com0, const std::string& start_text, double t0, double t1,
                    bool track_crossing, double mirror_threshold, const std::string& out,
                    const std::string& json_out) {
  Trajectory traj;
  if (system == "plane") {
    const PlanePairParams P = plane.validated(constants);
    ctx.parameters = plane_params_json(P);
    const Configuration start =
        Configuration::pair1d(com0 + delta0 / 2.0, com0 - delta0 / 2.0, t0);
    try {
      check_configuration(start, P);
    } catch (const Error& e) {
      raise(Errc::BadInput, std::string("initial configuration: ") + e.what());
    }
    std::vector<EventSpec> specs{{EventKind::BoxExit, 0.0, true}};
    if (track_crossing) specs.push_back({EventKind::DeltaZeroCrossing, 0.0, false});
    traj = integrate_trajectory(start, plane_pair_field(P, true), {t0, t1}, sf.settings,
                                EventSet::for_plane(P, specs));
  } else {
    const TwoSlitParams Q = twoslit.validated(constants);
    ctx.parameters = twoslit_params_json(Q);
    const std::vector<double> coords = parse_number_list(start_text);
    if (coords.size() != 6) {
      raise(Errc::BadInput, "--start expects 6 comma-separated coordinates");
    }
    const Configuration start = Configuration::pair3d(
        {coords[0], coords[1], coords[2], coords[3], coords[4], coords[5]}, t0);
    try {
      check_configuration(start, Q);
    } catch (const Error& e) {
      raise(Errc::BadInput, std::string("initial configuration: ") + e.what());
    }
    std::vector<EventSpec> specs{{EventKind::BoxExit, 0.0, true}};
    if (mirror_threshold > 0.0) {
      specs.push_back({EventKind::MirrorResidualThreshold, mirror_threshold, false});
    }
    traj = integrate_trajectory(start, twoslit_field(Q), {t0, t1}, sf.settings,
                                EventSet::for_twoslit(Q, specs));
  }
  ctx.parameters["t0"] = t0;
  ctx.parameters["t1"] = t1;
  ctx.parameters["settings"] = settings_json(sf.settings);
  ctx.stage(out, trajectory_csv(traj));
  if (!json_out.empty()) {
    ctx.stage(json_out, trajectory_json(traj, sf.settings).dump(2) + "\n");
  }
  std::cout << "trajectory: " << traj.samples.size() << " samples, termination "
            << termination_name(traj.termination) << ", " << traj.events.size() << " events\n";
}

void run_ensemble(RunContext& ctx, const PhysicalConstants& constants,
                  const PlaneFlags& plane, const SettingsFlags& sf,
                  std::size_t n, std::uint64_t seed, double t1, double com_half_width, int jobs,
                  std::size_t bins, const std::string& out, const std::string& report_out) {
  const PlanePairParams P = plane.validated(constants);
  ctx.parameters = plane_params_json(P);
  ctx.parameters["n"] = n;
  ctx.parameters["t1"] = t1;
  ctx.parameters["com_half_width"] = com_half_width;
  ctx.parameters["settings"] = settings_json(sf.settings);
  ctx.seed = seed;

  const Ensemble initial = sample_initial(P, n, seed, com_half_width);
  const EvolveOutcome evolved =
      evolve_ensemble(initial, plane_pair_field(P, true), t1, sf.settings, jobs);
  const Ensemble wrapped = wrap_relative_into_box(evolved.ensemble, P);
  ctx.stage(out, ensemble_csv(wrapped));
  if (!report_out.empty()) {
    const DensityFn density = [P](double d) { return prob_density_plane(d, P); };
    Json rep;
    rep["n"] = n;
    rep["seed"] = seed;
    rep["t1"] = t1;
    rep["failed_members"] = evolved.failed;
    const DistributionComparison cmp = compare_distribution(wrapped, density, bins, P);
    rep["final"] = {{"l1_distance", cmp.l1_distance},
                    {"ks_statistic", cmp.ks_statistic},
                    {"histogram_bins", cmp.histogram_bins},
                    {"sample_count", cmp.sample_count}};
    ctx.stage(report_out, rep.dump(2) + "\n");
  }
  std::cout << "ensemble: evolved " << wrapped.members.size() << " of " << n << " members to t="
            << t1 << " (" << evolved.failed << " failed)\n";
}

void run_roots(RunContext& ctx, const PhysicalConstants& constants,
               const PlaneFlags& plane, double t, double t0,
               std::size_t grid_per_period, const std::string& out) {
  const PlanePairParams P = plane.validated(constants);
  ctx.parameters = plane_params_json(P);
  ctx.parameters["t"] = t;
  ctx.parameters["t0"] = t0;
  ctx.parameters["grid_per_period"] = grid_per_period;

  Json j;
  if (t == t0) {
    j = uniqueness_report_json(uniqueness_report(P, t0, grid_per_period));
  } else {
    j["four_ab"] = 4.0 * P.a * P.b;
    j["candidate_form"] = root_report_json(
        count_roots(FirstIntegralForm(IntegralForm::CandidateClosedForm, P), t, t0, grid_per_period));
    j["derived_form"] = root_report_json(count_roots(
        FirstIntegralForm(IntegralForm::DerivedQuadrature, P), t, t0, grid_per_period));
  }
  ctx.stage(out, j.dump(2) + "\n");
  std::cout << "roots: candidate form " << j["candidate_form"]["root_count"] << ", derived form "
            << j["derived_form"]["root_count"] << "\n";
}

void run_crossing_times(RunContext& ctx, const PhysicalConstants& constants,
                        const PlaneFlags& plane, const SettingsFlags& sf,
                        const std::string& deltas_text, double delta_min, double delta_max,
                        std::size_t count, int jobs, const std::string& out,
                        const std::string& summary_out) {
  const PlanePairParams P = plane.validated(constants);
  std::vector<double> inits;
  if (!deltas_text.empty()) {
    inits = parse_number_list(deltas_text);
  } else {
    if (count < 2) {
      raise(Errc::BadInput, "--count must be at least 2");
    }
    for (std::size_t i = 0; i < count; ++i) {
      inits.push_back(delta_min + (delta_max - delta_min) * static_cast<double>(i) /
                                      static_cast<double>(count - 1));
    }
  }
  ctx.parameters = plane_params_json(P);
  ctx.parameters["delta_init"] = inits;
  ctx.parameters["settings"] = settings_json(sf.settings);

  const CrossingMap map = crossing_time_map(inits, P, sf.settings, jobs);
  ctx.stage(out, crossing_map_csv(map));
  Json summary{{"count", map.delta_init.size()},
               {"monotone", map.monotone},
               {"coincidence", map.coincidence},
               {"min_gap", map.min_gap}};
  if (!summary_out.empty()) {
    ctx.stage(summary_out, summary.dump(2) + "\n");
  }
  std::cout << "crossing-times: " << summary.dump() << "\n";
}

void run_grad_check(RunContext& ctx, const PhysicalConstants& constants,
                    const std::string& system, const PlaneFlags& plane,
                    const TwoSlitFlags& twoslit, std::size_t points, std::uint64_t seed,
                    double step, double tolerance, const std::string& out) {
  CounterRng rng(seed, 0);
  double worst = 0.0;
  double sum = 0.0;
  std::size_t checked = 0;

  if (system == "plane") {
    const PlanePairParams P = plane.validated(constants);
    ctx.parameters = plane_params_json(P);
    const PhaseField phase = [P](const Configuration& c) { return phase_plane(c, P); };
    NumericGradientOptions opts;
    opts.step = step;
    opts.hbar = P.constants.hbar;
    opts.mass = P.constants.mass;
    while (checked < points) {
      const double delta = rng.next_range(-0.95, 0.95) * P.half_width();
      const Configuration cfg = Configuration::pair1d(delta / 2.0, -delta / 2.0, 0.0);
      const VelocityVector closed = velocity_plane(delta, P);
      const VelocityVector numeric = numeric_velocity(phase, cfg, opts);
      double scale = 0.0, err = 0.0;
      for (std::size_t i = 0; i < 2; ++i) {
        scale = std::max(scale, std::abs(closed.components[i]));
        err = std::max(err, std::abs(closed.components[i] - numeric.components[i]));
      }
      const double rel = err / std::max(scale, 1e-300);
      worst = std::max(worst, rel);
      sum += rel;
      ++checked;
    }
  } else {
    const TwoSlitParams Q = twoslit.validated(constants);
    ctx.parameters = twoslit_params_json(Q);
    const PhaseField phase = [Q](const Configuration& c) { return phase_twoslit(c, Q); };
    NumericGradientOptions opts;
    opts.step = step;
    opts.hbar = Q.constants.hbar;
    opts.mass = Q.constants.mass;
    const double x_hi = std::min(8.0 * Q.slit_half_sep, Q.domain_box.x.hi - 1.0);
    const double y_span = std::min(4.0 * Q.slit_half_sep, Q.domain_box.y.hi - 1.0);
    while (checked < points) {
      std::array<double, 6> c{};
      for (int i = 0; i < 2; ++i) {
        c[3 * i + 0] = rng.next_range(0.4 * Q.slit_half_sep, x_hi);
        c[3 * i + 1] = rng.next_range(-y_span, y_span);
        c[3 * i + 2] = rng.next_range(-y_span, y_span);
      }
      const Configuration cfg = Configuration::pair3d(c);
      const SlitDistances r = slit_distances_unchecked(cfg, Q);
      if (std::min(std::min(r.r1A, r.r1B), std::min(r.r2A, r.r2B)) < 0.3 * Q.slit_half_sep) {
        continue;
      }
      const TwoSlitGeometry g = twoslit_geometry(r, Q);
      const double amp = std::sqrt(g.num * g.num + g.den * g.den) / (g.rho1 + g.rho2);
      if (amp < 0.1) continue;  // precondition: away from nodes
      const VelocityVector closed = velocity_twoslit(cfg, Q);
      const VelocityVector numeric = numeric_velocity(phase, cfg, opts);
      double scale = 0.0, err = 0.0;
      for (std::size_t i = 0; i < 6; ++i) {
        scale = std::max(scale, std::abs(closed.components[i]));
        err = std::max(err, std::abs(closed.components[i] - numeric.components[i]));
      }
      const double rel = err / std::max(scale, 1e-300);
      worst = std::max(worst, rel);
      sum += rel;
      ++checked;
    }
  }

  const bool pass = worst < tolerance;
  ctx.parameters["points"] = points;
  ctx.parameters["step"] = step;
  ctx.parameters["tolerance"] = tolerance;
  ctx.seed = seed;
  Json j{{"system", system},
         {"points", checked},
         {"max_rel_err", worst},
         {"mean_rel_err", sum / static_cast<double>(checked)},
         {"tolerance", tolerance},
         {"pass", pass}};
  ctx.stage(out, j.dump(2) + "\n");
  std::cout << "grad-check: " << j.dump() << "\n";
  if (!pass) {
    raise(Errc::StencilFailure, "analytic and finite-difference velocities disagree");
  }
}

void run_mirror_check(RunContext& ctx, const PhysicalConstants& constants,
                      const TwoSlitFlags& twoslit, const SettingsFlags& sf,
                      std::size_t trajectories, double t1, std::uint64_t seed, double tolerance,
                      const std::string& out) {
  const TwoSlitParams Q = twoslit.validated(constants);
  ctx.parameters = twoslit_params_json(Q);
  ctx.parameters["trajectories"] = trajectories;
  ctx.parameters["t1"] = t1;
  ctx.parameters["settings"] = settings_json(sf.settings);
  ctx.seed = seed;

  double worst = 0.0;
  std::size_t completed = 0;
  Json runs = Json::array();
  for (std::size_t i = 0; i < trajectories; ++i) {
    CounterRng rng(seed, i);
    // Mirror-symmetric start near the interference region.
    const double x = rng.next_range(0.8, 3.0) * Q.slit_half_sep;
    const double y = rng.next_range(0.3, 2.0) * Q.slit_half_sep;
    const double z = rng.next_range(-1.0, 1.0) * Q.slit_half_sep;
    const Configuration start = Configuration::pair3d({x, y, z, x, -y, z});
    const Trajectory traj = integrate_trajectory(start, twoslit_field(Q), {0.0, t1}, sf.settings);
    double residual = 0.0;
    for (const Configuration& s : traj.samples) {
      const auto [ra, rb] = mirror_residual(s, Q);
      residual = std::max({residual, ra, rb});
    }
    worst = std::max(worst, residual);
    if (traj.termination == Termination::ReachedEnd) ++completed;
    runs.push_back(Json{{"start", {x, y, z}},
                        {"termination", termination_name(traj.termination)},
                        {"max_residual", residual}});
  }
  const bool pass = worst < tolerance && completed == trajectories;
  Json j{{"trajectories", trajectories}, {"completed", completed},
         {"max_residual", worst},        {"tolerance", tolerance},
         {"pass", pass},                 {"runs", runs}};
  ctx.stage(out, j.dump(2) + "\n");
  std::cout << "mirror-check: max residual " << worst << ", completed " << completed << "/"
            << trajectories << "\n";
  if (!pass) {
    raise(Errc::FieldFailure, "mirror-manifold residual check failed");
  }
}

void run_qeh(RunContext& ctx, const PhysicalConstants& constants, const PlaneFlags& plane,
             const SettingsFlags& sf, std::size_t n,
             double t1, std::uint64_t seed, std::size_t bins, int jobs, const std::string& out) {
  const PlanePairParams P = plane.validated(constants);
  ctx.parameters = plane_params_json(P);
  ctx.parameters["n"] = n;
  ctx.parameters["t1"] = t1;
  ctx.parameters["bins"] = bins;
  ctx.parameters["settings"] = settings_json(sf.settings);
  ctx.seed = seed;

  const QehReport rep = qeh_report(P, n, t1, seed, sf.settings, bins, jobs);
  ctx.stage(out, qeh_report_json(rep).dump(2) + "\n");
  std::cout << "qeh: initial L1=" << rep.initial.l1_distance
            << " final L1=" << rep.final.l1_distance << " failed=" << rep.failed_members << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Numerical laboratory for guidance dynamics of two entangled two-particle systems"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  RunContext ctx;
  for (int i = 0; i < argc; ++i) ctx.argv.emplace_back(argv[i]);

  Json config;
  try {
    config = load_config(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }

  std::string config_path;
  PlaneFlags plane;
  TwoSlitFlags twoslit;
  PhysicalConstants constants;
  if (!config.empty()) {
    plane.raw = plane_params_from_json(config, plane.raw);
    twoslit.raw = twoslit_params_from_json(config, twoslit.raw);
    constants = plane.raw.constants;
  }

  SettingsFlags sf;
  int jobs = 0;
  std::string system = "plane";
  double delta0 = -1.0, com0 = 0.0, t0 = 0.0, t1 = 10.0;
  std::string start_text = "2,1,0,2,-1,0";
  bool track_crossing = false;
  double mirror_threshold = 0.0;
  std::string out, json_out, report_out, summary_out;
  std::size_t n = 10000, bins = 128, count = 32, points = 100, trajectories = 20;
  std::uint64_t seed = 1;
  double com_half_width = -1.0;
  double t_roots = 0.0, t0_roots = 0.0;
  std::size_t grid_per_period = 4096;
  std::string deltas_text;
  double delta_min = -1.0, delta_max = 1.0;
  double fd_step = 1e-5, tolerance = 1e-6, mirror_tolerance = 1e-7;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file with parameter defaults");
    cmd->add_option("--jobs", jobs, "worker cap (default: PILOTWAVE_JOBS or hardware)");
    cmd->add_option("--hbar", constants.hbar, "reduced Planck constant");
    cmd->add_option("--mass", constants.mass, "particle mass");
  };

  CLI::App* traj_cmd = app.add_subcommand("trajectory", "integrate a single trajectory");
  traj_cmd->add_option("--system", system, "plane or twoslit")
      ->check(CLI::IsMember({"plane", "twoslit"}));
  plane.attach(traj_cmd);
  twoslit.attach(traj_cmd);
  sf.attach(traj_cmd);
  add_common(traj_cmd);
  traj_cmd->add_option("--delta0", delta0, "initial relative coordinate (plane)");
  traj_cmd->add_option("--com0", com0, "initial center of mass (plane)");
  traj_cmd->add_option("--start", start_text, "x1,y1,z1,x2,y2,z2 (twoslit)");
  traj_cmd->add_option("--t0", t0, "start time");
  traj_cmd->add_option("--t1", t1, "end time");
  traj_cmd->add_flag("--track-delta-crossing", track_crossing,
                     "record relative-coordinate zero crossings (plane)");
  traj_cmd->add_option("--mirror-threshold", mirror_threshold,
                       "record mirror-residual threshold crossings (twoslit)");
  traj_cmd->add_option("--out", out, "CSV output path")->required();
  traj_cmd->add_option("--json", json_out, "JSON output path");
  traj_cmd->callback([&] {
    ctx.command = "trajectory";
    run_trajectory(ctx, constants, system, plane, twoslit, sf, delta0, com0, start_text, t0,
                   t1, track_crossing, mirror_threshold, out, json_out);
  });

  CLI::App* ens_cmd = app.add_subcommand("ensemble", "sample, evolve, and export an ensemble");
  plane.attach(ens_cmd);
  sf.attach(ens_cmd);
  add_common(ens_cmd);
  ens_cmd->add_option("--n", n, "ensemble size");
  ens_cmd->add_option("--seed", seed, "sampling seed");
  ens_cmd->add_option("--t1", t1, "evolution time");
  ens_cmd->add_option("--com-half-width", com_half_width,
                      "center-of-mass half width (default: half box length)");
  ens_cmd->add_option("--bins", bins, "histogram bins for the report");
  ens_cmd->add_option("--out", out, "CSV output path")->required();
  ens_cmd->add_option("--report", report_out, "JSON report path");
  ens_cmd->callback([&] {
    ctx.command = "ensemble";
    run_ensemble(ctx, constants, plane, sf, n, seed, t1, com_half_width, jobs, bins, out,
                 report_out);
  });

  CLI::App* roots_cmd = app.add_subcommand("roots", "count constraint roots under both forms");
  plane.attach(roots_cmd);
  add_common(roots_cmd);
  roots_cmd->add_option("--t", t_roots, "evaluation time");
  roots_cmd->add_option("--t0", t0_roots, "reference time");
  roots_cmd->add_option("--grid-per-period", grid_per_period, "scan resolution per period");
  roots_cmd->add_option("--out", out, "JSON output path")->default_val("roots.json");
  roots_cmd->callback([&] {
    ctx.command = "roots";
    run_roots(ctx, constants, plane, t_roots, t0_roots, grid_per_period, out);
  });

  CLI::App* cross_cmd =
      app.add_subcommand("crossing-times", "map initial separations to zero-crossing times");
  plane.attach(cross_cmd);
  sf.attach(cross_cmd);
  add_common(cross_cmd);
  cross_cmd->add_option("--deltas", deltas_text, "comma-separated initial separations");
  cross_cmd->add_option("--delta-min", delta_min, "grid start");
  cross_cmd->add_option("--delta-max", delta_max, "grid end");
  cross_cmd->add_option("--count", count, "grid size");
  cross_cmd->add_option("--out", out, "CSV output path")->required();
  cross_cmd->add_option("--summary", summary_out, "JSON summary path");
  cross_cmd->callback([&] {
    ctx.command = "crossing-times";
    run_crossing_times(ctx, constants, plane, sf, deltas_text, delta_min, delta_max, count,
                       jobs, out, summary_out);
  });

  CLI::App* grad_cmd =
      app.add_subcommand("grad-check", "compare analytic and finite-difference velocities");
  grad_cmd->add_option("--system", system, "plane or twoslit")
      ->check(CLI::IsMember({"plane", "twoslit"}));
  plane.attach(grad_cmd);
  twoslit.attach(grad_cmd);
  add_common(grad_cmd);
  grad_cmd->add_option("--points", points, "sample count");
  grad_cmd->add_option("--seed", seed, "sampling seed");
  grad_cmd->add_option("--step", fd_step, "finite-difference step");
  grad_cmd->add_option("--tolerance", tolerance, "max allowed relative error");
  grad_cmd->add_option("--out", out, "JSON output path")->default_val("grad_check.json");
  grad_cmd->callback([&] {
    ctx.command = "grad-check";
    run_grad_check(ctx, constants, system, plane, twoslit, points, seed, fd_step, tolerance,
                   out);
  });

  CLI::App* mirror_cmd =
      app.add_subcommand("mirror-check", "mirror-manifold preservation along trajectories");
  twoslit.attach(mirror_cmd);
  sf.attach(mirror_cmd);
  add_common(mirror_cmd);
  mirror_cmd->add_option("--trajectories", trajectories, "number of symmetric starts");
  mirror_cmd->add_option("--t1", t1, "integration time");
  mirror_cmd->add_option("--seed", seed, "start sampling seed");
  mirror_cmd->add_option("--tolerance", mirror_tolerance, "max allowed residual");
  mirror_cmd->add_option("--out", out, "JSON output path")->default_val("mirror_check.json");
  mirror_cmd->callback([&] {
    ctx.command = "mirror-check";
    run_mirror_check(ctx, constants, twoslit, sf, trajectories, t1, seed, mirror_tolerance,
                     out);
  });

  CLI::App* qeh_cmd = app.add_subcommand("qeh", "equilibrium sampling / evolution report");
  plane.attach(qeh_cmd);
  sf.attach(qeh_cmd);
  add_common(qeh_cmd);
  qeh_cmd->add_option("--n", n, "ensemble size");
  qeh_cmd->add_option("--t1", t1, "evolution time");
  qeh_cmd->add_option("--seed", seed, "sampling seed");
  qeh_cmd->add_option("--bins", bins, "histogram bins");
  qeh_cmd->add_option("--out", out, "JSON report path")->default_val("qeh_report.json");
  qeh_cmd->callback([&] {
    ctx.command = "qeh";
    run_qeh(ctx, constants, plane, sf, n, t1, seed, bins, jobs, out);
  });

  try {
    app.parse(argc, argv);
    ctx.commit();
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_validation_error(e.code()) ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
