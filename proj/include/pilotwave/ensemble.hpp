#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pilotwave/configuration.hpp"
#include "pilotwave/integrator.hpp"
#include "pilotwave/params.hpp"
#include "pilotwave/stats.hpp"

namespace pilotwave {

enum class Provenance { SampledFromDensity, UserSupplied };

struct Ensemble {
  std::vector<Configuration> members;
  std::uint64_t seed = 0;
  Provenance provenance = Provenance::UserSupplied;

  double common_time() const { return members.empty() ? 0.0 : members.front().time; }
};

/// Draws the relative coordinate from the stationary density by stratified
/// inverse-CDF sampling (member i maps (i + jitter_i)/n through the tabulated
/// inverse cumulative; jitter is a counter-based stream, so the ensemble is a
/// pure function of (params, n, seed)). The center of mass is uniform over
/// [-com_half_width, com_half_width), one box length by default.
Ensemble sample_initial(const PlanePairParams& params, std::size_t n, std::uint64_t seed,
                        double com_half_width = -1.0);

struct EvolveOutcome {
  Ensemble ensemble;                     // surviving members, input order
  std::size_t attempted = 0;
  std::size_t failed = 0;
  std::vector<std::size_t> failed_indices;
  std::vector<Termination> failed_reasons;
};

/// Integrates every member to t1 under the supplied field. Members whose
/// integration terminates early are excluded and reported; more than 1%
/// failures raises TooManyFailures.
EvolveOutcome evolve_ensemble(const Ensemble& ens, const VelocityField& field, double t1,
                              const IntegratorSettings& settings = {}, int jobs = 0);

/// Wraps each member's relative coordinate back into the open box by whole
/// box lengths (the plane-pair density and velocity are box-periodic); the
/// center of mass is untouched.
Ensemble wrap_relative_into_box(const Ensemble& ens, const PlanePairParams& params);

struct DistributionComparison {
  double l1_distance = 0.0;
  double ks_statistic = 0.0;
  std::size_t histogram_bins = 0;
  std::size_t sample_count = 0;
};

/// Histogram/CDF comparison of member relative coordinates against a target
/// 1-D density over the box.
DistributionComparison compare_distribution(const Ensemble& ens, const DensityFn& density,
                                            std::size_t bins, const PlanePairParams& params);

struct QehReport {
  PlanePairParams params{};
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double t1 = 0.0;
  std::size_t bins = 0;
  DistributionComparison initial{};
  DistributionComparison final{};
  std::size_t failed_members = 0;
  bool crossing_monotone = false;
  bool crossing_coincidence = false;
  double crossing_min_gap = 0.0;
};

/// Samples from the stationary density, evolves to t1, compares initial and
/// final ensembles against the density, and attaches the crossing-time
/// coincidence diagnostics for the sampled relative coordinates.
QehReport qeh_report(const PlanePairParams& params, std::size_t n, double t1, std::uint64_t seed,
                     const IntegratorSettings& settings = {}, std::size_t bins = 128,
                     int jobs = 0);

}  // namespace pilotwave
