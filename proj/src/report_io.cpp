#include "pilotwave/report_io.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "pilotwave/version.hpp"

namespace pilotwave {

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

void append_config_row(std::string& out, const Configuration& cfg, const char* event_name) {
  out += format_double(cfg.time);
  for (double c : cfg.view()) {
    out += ',';
    out += format_double(c);
  }
  out += ',';
  if (event_name) out += event_name;
  out += '\n';
}

}  // namespace

std::string trajectory_csv(const Trajectory& traj) {
  std::string out;
  if (!traj.samples.empty() && traj.samples.front().kind == SystemKind::Pair3D) {
    out = "t,x1,y1,z1,x2,y2,z2,event\n";
  } else {
    out = "t,x1,x2,event\n";
  }
  std::size_t next_event = 0;
  for (const Configuration& cfg : traj.samples) {
    const char* name = nullptr;
    while (next_event < traj.events.size() && traj.events[next_event].time == cfg.time) {
      name = event_kind_name(traj.events[next_event].kind);
      ++next_event;
    }
    append_config_row(out, cfg, name);
  }
  return out;
}

namespace {

Json configuration_json(const Configuration& cfg) {
  Json j;
  j["t"] = cfg.time;
  j["coords"] = std::vector<double>(cfg.view().begin(), cfg.view().end());
  return j;
}

}  // namespace

Json trajectory_json(const Trajectory& traj, const IntegratorSettings& settings) {
  Json j;
  j["system"] = traj.samples.empty() || traj.samples.front().kind == SystemKind::Pair1D
                    ? "plane"
                    : "twoslit";
  j["termination"] = termination_name(traj.termination);
  if (!traj.termination_detail.empty()) j["termination_detail"] = traj.termination_detail;
  j["settings"] = {{"rel_tol", settings.rel_tol},
                   {"abs_tol", settings.abs_tol},
                   {"max_step", settings.max_step},
                   {"min_step", settings.min_step},
                   {"max_steps", settings.max_steps}};
  j["steps"] = {{"accepted", traj.step_stats.accepted},
                {"rejected", traj.step_stats.rejected},
                {"max_local_error", traj.step_stats.max_local_error}};
  Json events = Json::array();
  for (const EventRecord& ev : traj.events) {
    Json e;
    e["kind"] = event_kind_name(ev.kind);
    e["time"] = ev.time;
    e["state"] = configuration_json(ev.state);
    events.push_back(e);
  }
  j["events"] = events;
  Json samples = Json::array();
  for (const Configuration& cfg : traj.samples) samples.push_back(configuration_json(cfg));
  j["samples"] = samples;
  return j;
}

std::string ensemble_csv(const Ensemble& ens) {
  std::string out;
  const bool three_d = !ens.members.empty() && ens.members.front().kind == SystemKind::Pair3D;
  out = three_d ? "member,t,x1,y1,z1,x2,y2,z2\n" : "member,t,x1,x2\n";
  for (std::size_t i = 0; i < ens.members.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += format_double(ens.members[i].time);
    for (double c : ens.members[i].view()) {
      out += ',';
      out += format_double(c);
    }
    out += '\n';
  }
  return out;
}

std::string crossing_map_csv(const CrossingMap& map) {
  std::string out = "delta_init,t_star\n";
  for (std::size_t i = 0; i < map.delta_init.size(); ++i) {
    out += format_double(map.delta_init[i]);
    out += ',';
    out += format_double(map.t_star[i]);
    out += '\n';
  }
  return out;
}

Json root_report_json(const RootReport& report) {
  Json j;
  j["form"] = integral_form_name(report.form);
  j["roots"] = report.roots;
  j["root_count"] = report.roots.size();
  j["bracket_count"] = report.bracket_count;
  j["monotone"] = report.monotone;
  j["threshold_value"] = report.threshold_value;
  return j;
}

Json uniqueness_report_json(const UniquenessReport& report) {
  Json j;
  j["four_ab"] = report.four_ab;
  j["threshold_satisfied"] = report.threshold_satisfied;
  j["candidate_form"] = root_report_json(report.candidate);
  j["derived_form"] = root_report_json(report.derived);
  j["forms_agree"] = report.forms_agree;
  j["unique_under_candidate"] = report.unique_under_candidate;
  j["unique_under_derived"] = report.unique_under_derived;
  j["threshold_prediction_holds_candidate"] = report.threshold_prediction_holds_candidate;
  j["threshold_prediction_holds_derived"] = report.threshold_prediction_holds_derived;
  j["verdict"] = report.verdict;
  return j;
}

Json plane_params_json(const PlanePairParams& params) {
  Json j;
  j["a"] = params.a;
  j["b"] = params.b;
  j["p"] = params.p;
  j["boxN"] = params.boxN;
  j["hbar"] = params.constants.hbar;
  j["mass"] = params.constants.mass;
  j["box_length"] = params.box_length();
  j["energy"] = params.energy();
  return j;
}

Json twoslit_params_json(const TwoSlitParams& params) {
  Json j;
  j["k"] = params.k;
  j["slit_half_sep"] = params.slit_half_sep;
  j["exclusion_radius"] = params.exclusion_radius;
  j["domain_box"] = {{params.domain_box.x.lo, params.domain_box.x.hi},
                     {params.domain_box.y.lo, params.domain_box.y.hi},
                     {params.domain_box.z.lo, params.domain_box.z.hi}};
  j["hbar"] = params.constants.hbar;
  j["mass"] = params.constants.mass;
  if (params.energy) j["energy"] = *params.energy;
  return j;
}

PlanePairParams plane_params_from_json(const Json& j, PlanePairParams base) {
  PlanePairParams p = std::move(base);
  if (j.contains("a")) p.a = j.at("a").get<double>();
  if (j.contains("b")) p.b = j.at("b").get<double>();
  if (j.contains("p")) p.p = j.at("p").get<double>();
  if (j.contains("boxN")) p.boxN = j.at("boxN").get<int>();
  if (j.contains("hbar")) p.constants.hbar = j.at("hbar").get<double>();
  if (j.contains("mass")) p.constants.mass = j.at("mass").get<double>();
  return p;
}

TwoSlitParams twoslit_params_from_json(const Json& j, TwoSlitParams base) {
  TwoSlitParams p = std::move(base);
  if (j.contains("k")) p.k = j.at("k").get<double>();
  if (j.contains("slit_half_sep")) p.slit_half_sep = j.at("slit_half_sep").get<double>();
  if (j.contains("exclusion_radius")) p.exclusion_radius = j.at("exclusion_radius").get<double>();
  if (j.contains("hbar")) p.constants.hbar = j.at("hbar").get<double>();
  if (j.contains("mass")) p.constants.mass = j.at("mass").get<double>();
  if (j.contains("energy")) p.energy = j.at("energy").get<double>();
  if (j.contains("domain_box")) {
    const auto& box = j.at("domain_box");
    p.domain_box.x = {box.at(0).at(0).get<double>(), box.at(0).at(1).get<double>()};
    p.domain_box.y = {box.at(1).at(0).get<double>(), box.at(1).at(1).get<double>()};
    p.domain_box.z = {box.at(2).at(0).get<double>(), box.at(2).at(1).get<double>()};
  }
  return p;
}

Json qeh_report_json(const QehReport& report) {
  Json j;
  j["system"] = "plane";
  j["params"] = plane_params_json(report.params);
  j["n"] = report.n;
  j["seed"] = report.seed;
  j["t1"] = report.t1;
  j["bins"] = report.bins;
  auto cmp = [](const DistributionComparison& c) {
    Json out;
    out["l1_distance"] = c.l1_distance;
    out["ks_statistic"] = c.ks_statistic;
    out["histogram_bins"] = c.histogram_bins;
    out["sample_count"] = c.sample_count;
    return out;
  };
  j["initial"] = cmp(report.initial);
  j["final"] = cmp(report.final);
  j["failed_members"] = report.failed_members;
  j["crossing"] = {{"monotone", report.crossing_monotone},
                   {"coincidence", report.crossing_coincidence},
                   {"min_gap", report.crossing_min_gap}};
  return j;
}

Json manifest_json(const RunManifest& manifest) {
  Json j;
  j["tool"] = kToolName;
  j["version"] = manifest.tool_version.empty() ? kToolVersion : manifest.tool_version;
  j["command"] = manifest.command;
  j["argv"] = manifest.argv;
  j["parameters"] = manifest.parameters;
  j["seed"] = manifest.seed;
  j["timestamp"] = manifest.timestamp;
  j["outputs"] = manifest.outputs;
  return j;
}

std::string iso8601_utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[80];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    raise(Errc::BadInput, "cannot open for writing: " + path);
  }
  out << content;
  if (!out) {
    raise(Errc::BadInput, "write failed: " + path);
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    raise(Errc::BadInput, "cannot open for reading: " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace pilotwave
