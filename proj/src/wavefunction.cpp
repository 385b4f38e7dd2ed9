#include "pilotwave/wavefunction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>
#include <vector>

#include "pilotwave/rng.hpp"

namespace pilotwave {

ComplexAmplitude psi_plane(const Configuration& cfg, const PlanePairParams& params) {
  check_configuration(cfg, params);
  const double hbar = params.constants.hbar;
  const double theta = params.p * cfg.delta() / hbar;
  const double inv_sqrt_l = 1.0 / std::sqrt(params.box_length());
  // a e^{i theta} + b e^{-i theta} = (a+b) cos + i (a-b) sin
  const double re_s = (params.a + params.b) * std::cos(theta) * inv_sqrt_l;
  const double im_s = (params.a - params.b) * std::sin(theta) * inv_sqrt_l;
  const double phi = -params.energy() * cfg.time / hbar;
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  return {re_s * c - im_s * s, re_s * s + im_s * c};
}

double prob_density_plane(double delta, const PlanePairParams& params) {
  if (!params.in_box(delta)) {
    raise(Errc::OutOfBox, "relative coordinate outside the normalization box");
  }
  const double two_theta = 2.0 * params.p * delta / params.constants.hbar;
  return (1.0 + 2.0 * params.a * params.b * std::cos(two_theta)) / params.box_length();
}

double phase_plane(const Configuration& cfg, const PlanePairParams& params) {
  check_configuration(cfg, params);
  const double hbar = params.constants.hbar;
  const double theta = params.p * cfg.delta() / hbar;
  const double im = (params.a - params.b) * std::sin(theta);
  const double re = (params.a + params.b) * std::cos(theta);
  return hbar * std::atan2(im, re) - params.energy() * cfg.time;
}

SlitDistances slit_distances_unchecked(const Configuration& cfg, const TwoSlitParams& params) {
  const auto& c = cfg.coords;
  const double a = params.slit_half_sep;
  auto dist = [](double x, double y, double z) { return std::sqrt(x * x + y * y + z * z); };
  SlitDistances r;
  r.r1A = dist(c[0], c[1] - a, c[2]);
  r.r1B = dist(c[0], c[1] + a, c[2]);
  r.r2A = dist(c[3], c[4] - a, c[5]);
  r.r2B = dist(c[3], c[4] + a, c[5]);
  return r;
}

SlitDistances slit_distances(const Configuration& cfg, const TwoSlitParams& params) {
  if (cfg.kind != SystemKind::Pair3D) {
    raise(Errc::BadInput, "expected a 3-D pair configuration");
  }
  const SlitDistances r = slit_distances_unchecked(cfg, params);
  const double rmin = std::min(std::min(r.r1A, r.r1B), std::min(r.r2A, r.r2B));
  if (rmin < params.exclusion_radius) {
    raise(Errc::SlitSingularity, "particle inside a slit exclusion ball");
  }
  return r;
}

TwoSlitGeometry twoslit_geometry(const SlitDistances& r, const TwoSlitParams& params) {
  TwoSlitGeometry g;
  g.r = r;
  g.alpha = params.k * (r.r1A + r.r2B);
  g.beta = params.k * (r.r1B + r.r2A);
  g.rho1 = r.r1A * r.r2B;
  g.rho2 = r.r1B * r.r2A;
  g.num = g.rho2 * std::sin(g.alpha) + g.rho1 * std::sin(g.beta);
  g.den = g.rho2 * std::cos(g.alpha) + g.rho1 * std::cos(g.beta);
  return g;
}

double node_threshold(const TwoSlitGeometry& g) { return 1e-12 * (g.rho1 + g.rho2); }

ComplexAmplitude psi_twoslit(const Configuration& cfg, const TwoSlitParams& params) {
  const SlitDistances r = slit_distances(cfg, params);
  const double norm = twoslit_normalization(params);
  const double k = params.k;
  const double w1 = 1.0 / (r.r1A * r.r2B);
  const double w2 = 1.0 / (r.r1B * r.r2A);
  const double a1 = k * (r.r1A + r.r2B);
  const double a2 = k * (r.r1B + r.r2A);
  return {(w1 * std::cos(a1) + w2 * std::cos(a2)) / norm,
          (w1 * std::sin(a1) + w2 * std::sin(a2)) / norm};
}

double phase_twoslit(const Configuration& cfg, const TwoSlitParams& params) {
  const SlitDistances r = slit_distances(cfg, params);
  const TwoSlitGeometry g = twoslit_geometry(r, params);
  const double thr = node_threshold(g);
  if (g.num * g.num + g.den * g.den < thr * thr) {
    raise(Errc::NodeEncountered, "phase undefined at a wave-function zero");
  }
  return params.constants.hbar * std::atan2(g.num, g.den);
}

namespace {

// The unnormalized |psi|^2 has integrable 1/r^2 spikes at the slits, so a
// plain uniform estimator has far too much variance. The proposal mixes a
// uniform component with truncated 1/r^2 balls centered on each slit, which
// bounds the integrand/proposal ratio everywhere.
struct SlitBall {
  double cx, cy, cz;
  double radius;     // outer radius, > exclusion
  double exclusion;  // inner radius
  bool half;         // true when the ball is cut by the x = 0 wall
  double weight;     // mixture weight; 0 disables
};

struct Proposal {
  const TwoSlitParams* params;
  double uniform_weight;
  double inv_volume;
  std::vector<SlitBall> balls;

  double density(double x, double y, double z) const {
    double q = uniform_weight * inv_volume;
    for (const auto& ball : balls) {
      if (ball.weight == 0.0) continue;
      const double dx = x - ball.cx;
      const double dy = y - ball.cy;
      const double dz = z - ball.cz;
      const double r2 = dx * dx + dy * dy + dz * dz;
      const double r = std::sqrt(r2);
      if (r < ball.exclusion || r > ball.radius) continue;
      const double solid = ball.half ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi;
      q += ball.weight / (solid * r2 * (ball.radius - ball.exclusion));
    }
    return q;
  }

  void sample(CounterRng& rng, double& x, double& y, double& z) const {
    for (;;) {
      const double pick = rng.next_unit();
      if (pick < uniform_weight || balls.empty()) {
        x = rng.next_range(params->domain_box.x.lo, params->domain_box.x.hi);
        y = rng.next_range(params->domain_box.y.lo, params->domain_box.y.hi);
        z = rng.next_range(params->domain_box.z.lo, params->domain_box.z.hi);
        return;
      }
      const SlitBall& ball = pick < uniform_weight + balls[0].weight ? balls[0] : balls[1];
      const double r = ball.exclusion + (ball.radius - ball.exclusion) * rng.next_unit();
      const double cos_t = 2.0 * rng.next_unit() - 1.0;
      const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
      const double phi = 2.0 * std::numbers::pi * rng.next_unit();
      double dx = r * sin_t * std::cos(phi);
      if (ball.half) dx = std::abs(dx);
      x = ball.cx + dx;
      y = ball.cy + r * sin_t * std::sin(phi);
      z = ball.cz + r * cos_t;
      return;
    }
  }
};

Proposal make_proposal(const TwoSlitParams& params) {
  const DomainBox& box = params.domain_box;
  Proposal prop;
  prop.params = &params;
  prop.inv_volume = 1.0 / (box.x.width() * box.y.width() * box.z.width());

  auto make_ball = [&](double sy) {
    SlitBall ball{0.0, sy, 0.0, 0.0, params.exclusion_radius, box.x.lo <= 1e-12, 0.0};
    // Largest radius keeping the (half-)ball inside the box and clear of the
    // other slit's near zone.
    double rmax = params.slit_half_sep * 0.9;
    rmax = std::min(rmax, box.x.hi);
    rmax = std::min(rmax, box.y.hi - sy);
    rmax = std::min(rmax, sy - box.y.lo);
    rmax = std::min(rmax, std::min(box.z.hi, -box.z.lo));
    if (!ball.half) rmax = std::min(rmax, -box.x.lo);  // slit outside domain
    ball.radius = rmax;
    ball.weight = (rmax > 4.0 * params.exclusion_radius && box.x.lo <= 1e-12) ? 0.25 : 0.0;
    return ball;
  };
  prop.balls.push_back(make_ball(+params.slit_half_sep));
  prop.balls.push_back(make_ball(-params.slit_half_sep));
  prop.uniform_weight = 1.0 - prop.balls[0].weight - prop.balls[1].weight;
  return prop;
}

double unnormalized_density(const TwoSlitParams& params, const double* r1, const double* r2) {
  const double a = params.slit_half_sep;
  auto dist = [](double x, double y, double z) { return std::sqrt(x * x + y * y + z * z); };
  const double r1A = dist(r1[0], r1[1] - a, r1[2]);
  const double r1B = dist(r1[0], r1[1] + a, r1[2]);
  const double r2A = dist(r2[0], r2[1] - a, r2[2]);
  const double r2B = dist(r2[0], r2[1] + a, r2[2]);
  const double eps = params.exclusion_radius;
  if (std::min(std::min(r1A, r1B), std::min(r2A, r2B)) < eps) return 0.0;
  const double rho1 = r1A * r2B;
  const double rho2 = r1B * r2A;
  const double dphi = params.k * ((r1A + r2B) - (r1B + r2A));
  return 1.0 / (rho1 * rho1) + 1.0 / (rho2 * rho2) + 2.0 * std::cos(dphi) / (rho1 * rho2);
}

double estimate_normalization(const TwoSlitParams& params) {
  const Proposal prop = make_proposal(params);
  CounterRng rng(0x70696C6F74ULL, 0x77617665ULL);  // fixed internal stream

  const std::size_t batch = 1 << 16;
  const std::size_t max_batches = 128;
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;
  for (std::size_t bi = 0; bi < max_batches; ++bi) {
    for (std::size_t i = 0; i < batch; ++i) {
      double r1[3], r2[3];
      prop.sample(rng, r1[0], r1[1], r1[2]);
      prop.sample(rng, r2[0], r2[1], r2[2]);
      if (!params.domain_box.x.contains(r1[0]) || !params.domain_box.y.contains(r1[1]) ||
          !params.domain_box.z.contains(r1[2]) || !params.domain_box.x.contains(r2[0]) ||
          !params.domain_box.y.contains(r2[1]) || !params.domain_box.z.contains(r2[2])) {
        // Ball component spilling past a wall: counts as zero integrand, the
        // proposal density is still evaluated exactly.
        ++count;
        continue;
      }
      const double f = unnormalized_density(params, r1, r2);
      const double q = prop.density(r1[0], r1[1], r1[2]) * prop.density(r2[0], r2[1], r2[2]);
      const double w = f / q;
      sum += w;
      sum_sq += w * w;
      ++count;
    }
    const double mean = sum / static_cast<double>(count);
    const double var =
        std::max(0.0, sum_sq / static_cast<double>(count) - mean * mean) / static_cast<double>(count);
    if (mean > 0.0 && std::sqrt(var) < 2e-3 * mean && bi >= 1) {
      return std::sqrt(mean);  // rel err on sqrt is half that of the integral
    }
  }
  const double mean = sum / static_cast<double>(count);
  if (!(mean > 0.0)) {
    raise(Errc::QuadratureFailure, "normalization estimate is not positive");
  }
  return std::sqrt(mean);
}

using NormKey = std::tuple<double, double, double, double, double, double, double, double, double,
                           double, double>;

NormKey norm_key(const TwoSlitParams& p) {
  return {p.k,
          p.slit_half_sep,
          p.exclusion_radius,
          p.domain_box.x.lo,
          p.domain_box.x.hi,
          p.domain_box.y.lo,
          p.domain_box.y.hi,
          p.domain_box.z.lo,
          p.domain_box.z.hi,
          p.constants.hbar,
          p.constants.mass};
}

}  // namespace

double twoslit_normalization(const TwoSlitParams& params) {
  static std::mutex mutex;
  static std::map<NormKey, double> cache;
  const NormKey key = norm_key(params);
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const double value = estimate_normalization(params);
  std::lock_guard<std::mutex> lock(mutex);
  return cache.emplace(key, value).first->second;
}

}  // namespace pilotwave
