#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "pilotwave/configuration.hpp"
#include "pilotwave/ensemble.hpp"
#include "pilotwave/first_integral.hpp"
#include "pilotwave/params.hpp"

namespace pilotwave {

// Key order is preserved everywhere so identical runs serialize to identical
// bytes.
using Json = nlohmann::ordered_json;

/// Shortest round-trip or 17-significant-digit decimal text for a double;
/// '.' decimal separator, no grouping. Used for every CSV number.
std::string format_double(double v);

std::string trajectory_csv(const Trajectory& traj);
Json trajectory_json(const Trajectory& traj, const IntegratorSettings& settings);

std::string ensemble_csv(const Ensemble& ens);
std::string crossing_map_csv(const CrossingMap& map);

Json root_report_json(const RootReport& report);
Json uniqueness_report_json(const UniquenessReport& report);
Json qeh_report_json(const QehReport& report);
Json plane_params_json(const PlanePairParams& params);
Json twoslit_params_json(const TwoSlitParams& params);

/// Fields present in `j` override the corresponding fields of `base`.
PlanePairParams plane_params_from_json(const Json& j, PlanePairParams base = {});
TwoSlitParams twoslit_params_from_json(const Json& j, TwoSlitParams base = {});

/// Everything needed to reproduce a run: the exact argv, resolved parameters,
/// seed, tool version, and the files the run wrote. The timestamp lives here
/// and never inside report payloads.
struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  Json parameters;
  std::uint64_t seed = 0;
  std::string tool_version;
  std::string timestamp;
  std::vector<std::string> outputs;
};

Json manifest_json(const RunManifest& manifest);
std::string iso8601_utc_now();

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace pilotwave
