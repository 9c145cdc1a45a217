#include "ltk/bridge.hpp"

#include <algorithm>
#include <cmath>

#include "ltk/parallel.hpp"
#include "ltk/rng.hpp"

namespace ltk {

double free_kernel(const PhysicalParams& params, double x_a, double x_b, double beta) {
  const double s2 = beta * params.hbar * params.hbar / params.mass;  // (x_b - x_a) variance
  const double d = x_b - x_a;
  return std::exp(-0.5 * d * d / s2) / std::sqrt(2.0 * M_PI * s2);
}

BridgePath sample_bridge(const PhysicalParams& params, double x_a, double x_b,
                         const MCConfig& cfg, long path_index) {
  cfg.validate();
  params.validate();
  RandomStream rng(cfg.seed, static_cast<std::uint64_t>(path_index));
  const int n = cfg.n_slices;
  const double T = cfg.beta * params.hbar;
  const double eps = T / n;
  const double step_sd = std::sqrt(eps * params.hbar / params.mass);

  BridgePath path;
  path.x_a = x_a;
  path.x_b = x_b;
  path.eps = eps;
  path.positions.resize(n + 1);
  path.positions[0] = x_a;
  double w = 0.0;
  for (int k = 1; k <= n; ++k) {
    w += step_sd * rng.normal();
    path.positions[k] = w;  // free Wiener path for now
  }
  const double drift = x_b - x_a - w;
  for (int k = 1; k < n; ++k) {
    const double frac = static_cast<double>(k) / n;
    path.positions[k] = x_a + path.positions[k] + frac * drift;
  }
  path.positions[n] = x_b;  // pinned bit-exactly
  return path;
}

long LocalTimeProfile::total_counts() const {
  long s = 0;
  for (long c : counts) s += c;
  return s;
}

double LocalTimeProfile::value_at(double x) const {
  const long j = static_cast<long>(std::floor(x / bin_width + 0.5));
  const long idx = j - first_bin;
  if (idx < 0 || idx >= static_cast<long>(counts.size())) return 0.0;
  return value(static_cast<std::size_t>(idx));
}

LocalTimeProfile local_time_profile(const BridgePath& path, double bin_width) {
  if (!(bin_width > 0.0)) throw ConfigError("local_time_profile: bin_width must be positive");
  const int n = path.n_slices();
  auto bin_of = [&](double x) { return static_cast<long>(std::floor(x / bin_width + 0.5)); };
  long lo = bin_of(path.positions[0]), hi = lo;
  for (int k = 0; k < n; ++k) {
    const long b = bin_of(path.positions[k]);
    lo = std::min(lo, b);
    hi = std::max(hi, b);
  }
  LocalTimeProfile prof;
  prof.bin_width = bin_width;
  prof.eps = path.eps;
  prof.first_bin = lo;
  prof.counts.assign(static_cast<std::size_t>(hi - lo + 1), 0);
  for (int k = 0; k < n; ++k) ++prof.counts[static_cast<std::size_t>(bin_of(path.positions[k]) - lo)];
  return prof;
}

double potential_via_localtime(const LocalTimeProfile& profile, const Potential& spec,
                               const PhysicalParams& params) {
  double s = 0.0;
  for (std::size_t j = 0; j < profile.counts.size(); ++j)
    if (profile.counts[j] != 0)
      s += static_cast<double>(profile.counts[j]) * eval_potential(spec, profile.center(j), params);
  return s * profile.eps;
}

namespace {

/// Midpoint-rule potential action sum_k eps V((x_k + x_{k+1})/2), with the
/// variant dispatch hoisted out of the slice loop.
double midpoint_action(const BridgePath& path, const Potential& spec,
                       const PhysicalParams& params) {
  const int n = path.n_slices();
  const auto& xs = path.positions;
  const double s = std::visit(
      [&](const auto& p) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) acc += eval_family(p, 0.5 * (xs[k] + xs[k + 1]), params);
        return acc;
      },
      spec);
  return s * path.eps;
}

MCEstimate reduce_in_path_order(const std::vector<double>& values, double prefactor,
                                const MCConfig& cfg) {
  const long n = static_cast<long>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
  MCEstimate est;
  est.mean = prefactor * mean;
  est.std_error = prefactor * sd / std::sqrt(static_cast<double>(n));
  est.n_paths = n;
  est.seed = cfg.seed;
  est.variance_warning = std::abs(est.std_error) > 0.05 * std::abs(est.mean);
  return est;
}

constexpr long kChunk = 1024;

}  // namespace

MCEstimate functional_expectation(const LocalTimeFunctional& F, const Potential& spec,
                                  const PhysicalParams& params, const BlochQuery& q,
                                  const MCConfig& cfg, double bin_width) {
  cfg.validate();
  q.validate();
  MCConfig c = cfg;
  c.beta = q.beta;
  std::vector<double> vals(static_cast<std::size_t>(c.n_paths));
  const std::size_t n_chunks = (c.n_paths + kChunk - 1) / kChunk;
  parallel_for_chunks(n_chunks, [&](std::size_t chunk) {
    const long begin = static_cast<long>(chunk) * kChunk;
    const long end = std::min(begin + kChunk, c.n_paths);
    for (long i = begin; i < end; ++i) {
      const BridgePath path = sample_bridge(params, q.x_a, q.x_b, c, i);
      const double w = std::exp(-midpoint_action(path, spec, params) / params.hbar);
      double v = w;
      if (F) v = w * F(local_time_profile(path, bin_width));
      vals[static_cast<std::size_t>(i)] = v;
    }
  });
  return reduce_in_path_order(vals, free_kernel(params, q.x_a, q.x_b, q.beta), c);
}

MCEstimate feynman_kac(const Potential& spec, const PhysicalParams& params, const BlochQuery& q,
                       const MCConfig& cfg) {
  return functional_expectation(nullptr, spec, params, q, cfg, 1.0);
}

namespace {

/// Exact draw from the conditional law of a bridge segment's local time at 0.
/// Endpoints a, b relative to the measurement point, duration eps, diffusion
/// sigma2 per unit time. Survival function
///   P(l > u) = exp{-[(c + sigma u)^2 - d^2] / (2 sigma2 eps)},
/// c = |a|+|b|, d = b-a, sigma = sqrt(sigma2); inverse-transform sampled.
double sample_segment_local_time(double a, double b, double eps, double sigma2,
                                 RandomStream& rng) {
  const double t = sigma2 * eps;
  const double ab = a * b;
  const double no_hit_exponent = ab > 0.0 ? 2.0 * ab / t : 0.0;
  if (no_hit_exponent > 41.0) return 0.0;  // P(visit) < 1e-18, skip the draw
  const double u = rng.uniform();
  if (u > std::exp(-no_hit_exponent)) return 0.0;
  const double d = b - a;
  const double c = std::abs(a) + std::abs(b);
  const double root = std::sqrt(d * d - 2.0 * t * std::log(u));
  return std::max(0.0, root - c) / sigma2;
}

}  // namespace

OnepointHistogram onepoint_histogram(const Potential& spec, const PhysicalParams& params,
                                     double beta, double X, const MCConfig& cfg,
                                     double bin_width_L, LocalTimeEstimator estimator,
                                     double max_L) {
  return onepoint_histogram(spec, params, beta, X, X, X, cfg, bin_width_L, estimator, max_L);
}

double OnepointHistogram::joint_std_error(std::size_t j, const PhysicalParams& params, double x_a,
                                          double x_b, double beta) const {
  // per-path observable z = w 1{L in bin}/width; error = pref * std(z)/sqrt(n)
  const double n = static_cast<double>(n_paths);
  const double mean = weights[j] / n;
  const double var = std::max(0.0, weights_sq[j] / n - mean * mean);
  return free_kernel(params, x_a, x_b, beta) * std::sqrt(var / n) / bin_width_L;
}

std::vector<double> sample_local_times(const PhysicalParams& params, double beta, double X,
                                       double x_a, double x_b, const MCConfig& cfg) {
  cfg.validate();
  MCConfig c = cfg;
  c.beta = beta;
  const double sigma2 = params.hbar / params.mass;
  std::vector<double> out(static_cast<std::size_t>(c.n_paths));
  const std::size_t n_chunks = (c.n_paths + kChunk - 1) / kChunk;
  parallel_for_chunks(n_chunks, [&](std::size_t chunk) {
    const long begin = static_cast<long>(chunk) * kChunk;
    const long end = std::min(begin + kChunk, c.n_paths);
    for (long i = begin; i < end; ++i) {
      const BridgePath path = sample_bridge(params, x_a, x_b, c, i);
      RandomStream rng(c.seed ^ 0x5851F42D4C957F2DULL, static_cast<std::uint64_t>(i));
      double L = 0.0;
      for (int k = 0; k < path.n_slices(); ++k)
        L += sample_segment_local_time(path.positions[k] - X, path.positions[k + 1] - X, path.eps,
                                       sigma2, rng);
      out[static_cast<std::size_t>(i)] = L;
    }
  });
  return out;
}

OnepointHistogram onepoint_histogram(const Potential& spec, const PhysicalParams& params,
                                     double beta, double X, double x_a, double x_b,
                                     const MCConfig& cfg, double bin_width_L,
                                     LocalTimeEstimator estimator, double max_L) {
  cfg.validate();
  if (!(bin_width_L > 0.0)) throw ConfigError("onepoint_histogram: bin width must be positive");
  MCConfig c = cfg;
  c.beta = beta;
  const double sigma2 = params.hbar / params.mass;

  // default range: eight times the Rayleigh scale sqrt(beta M)/hbar
  const double l_scale = std::sqrt(beta * params.mass) / params.hbar;
  const double range = max_L > 0.0 ? max_L : 8.0 * l_scale;
  const std::size_t n_bins =
      static_cast<std::size_t>(std::ceil(range / bin_width_L)) + 1;

  const std::size_t n_chunks = (c.n_paths + kChunk - 1) / kChunk;
  std::vector<std::vector<double>> partial(n_chunks), partial_sq(n_chunks);
  parallel_for_chunks(n_chunks, [&](std::size_t chunk) {
    auto& hist = partial[chunk];
    auto& hist_sq = partial_sq[chunk];
    hist.assign(n_bins + 1, 0.0);  // last slot collects overflow
    hist_sq.assign(n_bins + 1, 0.0);
    const long begin = static_cast<long>(chunk) * kChunk;
    const long end = std::min(begin + kChunk, c.n_paths);
    for (long i = begin; i < end; ++i) {
      const BridgePath path = sample_bridge(params, x_a, x_b, c, i);
      const double w = std::exp(-midpoint_action(path, spec, params) / params.hbar);
      double L;
      if (estimator == LocalTimeEstimator::ExactConditional) {
        RandomStream rng(c.seed ^ 0x5851F42D4C957F2DULL, static_cast<std::uint64_t>(i));
        L = 0.0;
        for (int k = 0; k < path.n_slices(); ++k)
          L += sample_segment_local_time(path.positions[k] - X, path.positions[k + 1] - X,
                                         path.eps, sigma2, rng);
      } else {
        L = local_time_profile(path, bin_width_L).value_at(X);
      }
      std::size_t j = static_cast<std::size_t>(L / bin_width_L);
      if (j >= n_bins) j = n_bins;
      hist[j] += w;
      hist_sq[j] += w * w;
    }
  });

  OnepointHistogram out;
  out.bin_width_L = bin_width_L;
  out.n_paths = c.n_paths;
  out.seed = c.seed;
  out.weights.assign(n_bins, 0.0);
  out.weights_sq.assign(n_bins, 0.0);
  double overflow = 0.0, total = 0.0;
  for (std::size_t ci = 0; ci < n_chunks; ++ci) {  // chunk order: deterministic merge
    const auto& hist = partial[ci];
    if (hist.empty()) continue;
    for (std::size_t j = 0; j < n_bins; ++j) {
      out.weights[j] += hist[j];
      out.weights_sq[j] += partial_sq[ci][j];
    }
    overflow += hist[n_bins];
  }
  for (double wv : out.weights) total += wv;
  total += overflow;

  const double pref = free_kernel(params, x_a, x_b, beta);
  out.joint.resize(n_bins);
  out.conditional.resize(n_bins);
  for (std::size_t j = 0; j < n_bins; ++j) {
    out.joint[j] = pref * out.weights[j] / (static_cast<double>(c.n_paths) * bin_width_L);
    out.conditional[j] = total > 0 ? out.weights[j] / (total * bin_width_L) : 0.0;
  }
  const double top = out.weights.empty() ? 0.0 : out.weights.back() + overflow;
  out.top_bin_fraction = total > 0 ? top / total : 0.0;
  out.binning_warning = out.top_bin_fraction > 0.01;
  return out;
}

}  // namespace ltk
