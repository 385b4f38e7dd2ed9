#include "pilotwave/ensemble.hpp"

#include <cmath>

#include "pilotwave/first_integral.hpp"
#include "pilotwave/parallel.hpp"
#include "pilotwave/rng.hpp"
#include "pilotwave/wavefunction.hpp"

namespace pilotwave {

namespace {

TabulatedCdf plane_delta_cdf(const PlanePairParams& params) {
  const double h = params.half_width();
  // Stay strictly inside the open box; the lost sliver is ~1e-13 relative.
  const double edge = h * (1.0 - 1e-13);
  const std::size_t periods = static_cast<std::size_t>(2 * params.boxN + 1);
  const std::size_t points = 4096 * periods + 1;
  return TabulatedCdf::build([&](double d) { return prob_density_plane(d, params); }, -edge, edge,
                             points);
}

}  // namespace

Ensemble sample_initial(const PlanePairParams& raw, std::size_t n, std::uint64_t seed,
                        double com_half_width) {
  const PlanePairParams params = validate_plane_params(raw);
  if (n < 1) {
    raise(Errc::BadInput, "ensemble size must be >= 1");
  }
  if (com_half_width < 0.0) com_half_width = params.half_width();

  const TabulatedCdf cdf = plane_delta_cdf(params);
  Ensemble ens;
  ens.members.resize(n);
  ens.seed = seed;
  ens.provenance = Provenance::SampledFromDensity;
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    CounterRng rng(seed, i);
    const double u = (static_cast<double>(i) + rng.next_unit()) * inv_n;
    const double delta = cdf.inverse(u);
    const double com = (2.0 * rng.next_unit() - 1.0) * com_half_width;
    ens.members[i] = Configuration::pair1d(com + 0.5 * delta, com - 0.5 * delta, 0.0);
  }
  return ens;
}

EvolveOutcome evolve_ensemble(const Ensemble& ens, const VelocityField& field, double t1,
                              const IntegratorSettings& settings, int jobs) {
  if (ens.members.empty()) {
    raise(Errc::BadInput, "ensemble is empty");
  }
  const std::size_t n = ens.members.size();
  std::vector<Configuration> evolved(n);
  std::vector<Termination> outcome(n, Termination::ReachedEnd);

  parallel_for(n, jobs, [&](std::size_t i) {
    const AdvanceResult r = advance_configuration(ens.members[i], field, t1, settings);
    evolved[i] = r.state;
    outcome[i] = r.termination;
  });

  EvolveOutcome out;
  out.attempted = n;
  out.ensemble.seed = ens.seed;
  out.ensemble.provenance = ens.provenance;
  out.ensemble.members.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (outcome[i] == Termination::ReachedEnd) {
      out.ensemble.members.push_back(evolved[i]);
    } else {
      ++out.failed;
      out.failed_indices.push_back(i);
      out.failed_reasons.push_back(outcome[i]);
    }
  }
  if (static_cast<double>(out.failed) > 0.01 * static_cast<double>(n)) {
    raise(Errc::TooManyFailures, std::to_string(out.failed) + " of " + std::to_string(n) +
                                     " members failed to evolve");
  }
  return out;
}

Ensemble wrap_relative_into_box(const Ensemble& ens, const PlanePairParams& params) {
  const double box = params.box_length();
  Ensemble out = ens;
  for (Configuration& cfg : out.members) {
    const double com = cfg.center_of_mass();
    double delta = cfg.delta();
    delta -= box * std::floor((delta + 0.5 * box) / box);
    cfg.coords[0] = com + 0.5 * delta;
    cfg.coords[1] = com - 0.5 * delta;
  }
  return out;
}

DistributionComparison compare_distribution(const Ensemble& ens, const DensityFn& density,
                                            std::size_t bins, const PlanePairParams& params) {
  if (bins < 8) {
    raise(Errc::BadInput, "need at least 8 histogram bins");
  }
  if (ens.members.empty()) {
    raise(Errc::BadInput, "ensemble is empty");
  }
  const double h = params.half_width();
  std::vector<double> deltas;
  deltas.reserve(ens.members.size());
  for (const Configuration& cfg : ens.members) deltas.push_back(cfg.delta());

  // Histogram and CDF grids touch the box edges where densities defined on
  // the open box are not evaluable; clamp just inside.
  const double edge = h * (1.0 - 1e-13);
  const DensityFn clamped = [&density, edge](double d) {
    return density(std::clamp(d, -edge, edge));
  };

  const std::vector<double> empirical = histogram_masses(deltas, -h, h, bins);
  const std::vector<double> expected = expected_bin_masses(clamped, -h, h, bins);

  const std::size_t grid = std::max<std::size_t>(8192, bins * 64) + 1;
  const TabulatedCdf cdf = TabulatedCdf::build(clamped, -edge, edge, grid);

  DistributionComparison cmp;
  cmp.l1_distance = l1_distance(empirical, expected);
  cmp.ks_statistic = ks_statistic(deltas, cdf);
  cmp.histogram_bins = bins;
  cmp.sample_count = ens.members.size();
  return cmp;
}

QehReport qeh_report(const PlanePairParams& raw, std::size_t n, double t1, std::uint64_t seed,
                     const IntegratorSettings& settings, std::size_t bins, int jobs) {
  const PlanePairParams params = validate_plane_params(raw);
  const DensityFn density = [params](double d) { return prob_density_plane(d, params); };

  QehReport report;
  report.params = params;
  report.n = n;
  report.seed = seed;
  report.t1 = t1;
  report.bins = bins;

  const Ensemble initial = sample_initial(params, n, seed);
  report.initial = compare_distribution(initial, density, bins, params);

  // The stationary state is box-periodic in the relative coordinate, so
  // members are evolved under the periodic extension of the velocity field
  // and wrapped back into the box afterwards.
  const VelocityField field = plane_pair_field(params, /*periodic=*/true);
  EvolveOutcome evolved = evolve_ensemble(initial, field, t1, settings, jobs);
  report.failed_members = evolved.failed;
  const Ensemble wrapped = wrap_relative_into_box(evolved.ensemble, params);
  report.final = compare_distribution(wrapped, density, bins, params);

  std::vector<double> deltas;
  deltas.reserve(initial.members.size());
  for (const Configuration& cfg : initial.members) deltas.push_back(cfg.delta());
  const CrossingMap crossings = crossing_time_map(deltas, params, settings, jobs);
  report.crossing_monotone = crossings.monotone;
  report.crossing_coincidence = crossings.coincidence;
  report.crossing_min_gap = crossings.min_gap;
  return report;
}

}  // namespace pilotwave
