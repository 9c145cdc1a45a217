#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ltk/potential.hpp"
#include "ltk/types.hpp"

namespace ltk {

/// Monte Carlo run parameters. The slice duration is eps = beta hbar /
/// n_slices (imaginary time units).
struct MCConfig {
  long n_paths = 10000;
  int n_slices = 1024;
  std::uint64_t seed = 1;
  double beta = 1.0;

  void validate() const {
    if (n_paths < 1) throw ConfigError("mc: n_paths must be >= 1");
    if (n_slices < 2) throw ConfigError("mc: n_slices must be >= 2");
    if (!(beta > 0.0)) throw ConfigError("mc: beta must be positive");
  }
};

/// One sampled Brownian bridge: positions at tau_k = k eps, endpoints pinned
/// bit-exactly to x_a and x_b.
struct BridgePath {
  double x_a = 0.0, x_b = 0.0;
  double eps = 0.0;  // slice duration beta hbar / n_slices
  std::vector<double> positions;

  int n_slices() const { return static_cast<int>(positions.size()) - 1; }
};

/// Exact Gaussian bridge construction: a free Wiener path of per-slice
/// variance eps hbar/M, then the bridge correction pinning both endpoints.
/// Deterministic in (cfg.seed, path_index).
BridgePath sample_bridge(const PhysicalParams& params, double x_a, double x_b,
                         const MCConfig& cfg, long path_index);

/// Binned local time of one path. Bin j covers [(j-1/2) w, (j+1/2) w) so bin
/// centers sit on multiples of the bin width; integer slice counts are the
/// source of truth and values are counts * eps / width, which makes
/// sum L_j Delta_j = (number of slices) * eps an exact counting identity.
struct LocalTimeProfile {
  double bin_width = 0.0;
  double eps = 0.0;
  long first_bin = 0;            // absolute index of counts[0]
  std::vector<long> counts;      // left-point rule, slices k = 0 .. n-1

  double center(std::size_t j) const { return (first_bin + static_cast<long>(j)) * bin_width; }
  double lower_edge(std::size_t j) const { return center(j) - 0.5 * bin_width; }
  double value(std::size_t j) const { return counts[j] * eps / bin_width; }
  long total_counts() const;
  /// sum_j values_j * width_j, computed as (total slice count) * eps.
  double total_time() const { return static_cast<double>(total_counts()) * eps; }
  /// Binned local-time estimate at point x (0 outside the support).
  double value_at(double x) const;
};

LocalTimeProfile local_time_profile(const BridgePath& path, double bin_width);

/// sum_j L_j V(center_j) Delta_j: the potential part of the action read off
/// the local-time profile. Computed as eps * sum_j count_j V_j, so for a
/// potential constant on each bin it reproduces the time-domain Riemann sum
/// exactly.
double potential_via_localtime(const LocalTimeProfile& profile, const Potential& spec,
                               const PhysicalParams& params = {});

/// Feynman-Kac estimate of rho(x_a, x_b, beta): free kernel times the bridge
/// average of exp(-(1/hbar) sum_k eps V(midpoint_k)). Reduction is in fixed
/// path order whatever the thread count.
MCEstimate feynman_kac(const Potential& spec, const PhysicalParams& params, const BlochQuery& q,
                       const MCConfig& cfg);

using LocalTimeFunctional = std::function<double(const LocalTimeProfile&)>;

/// Weighted expectation of an arbitrary local-time functional:
/// free kernel * E[ F[L] e^{-(1/hbar) int L V} ], the potential action taken
/// in its midpoint time-domain form (identical arithmetic to feynman_kac, so
/// F = 1 reproduces it bitwise). bin_width controls the profile handed to F.
MCEstimate functional_expectation(const LocalTimeFunctional& F, const Potential& spec,
                                  const PhysicalParams& params, const BlochQuery& q,
                                  const MCConfig& cfg, double bin_width);

/// How the per-path local time at the measurement point is extracted.
///  - ExactConditional: every inter-slice segment contributes a draw from the
///    exact conditional law of its local time given the endpoints, so the
///    sampled total has the continuum distribution with no slicing bias.
///  - BinnedProfile: the profile bin containing X (left-point counting);
///    carries the usual O(sqrt(eps)) discretization width.
enum class LocalTimeEstimator { ExactConditional, BinnedProfile };

struct OnepointHistogram {
  double bin_width_L = 0.0;
  std::vector<double> joint;        // estimates p(L;beta); bin j = [j w, (j+1) w)
  std::vector<double> conditional;  // normalized density given the bridge
  std::vector<double> weights;      // accumulated path weights per bin
  std::vector<double> weights_sq;   // accumulated squared weights (error bars)
  long n_paths = 0;
  std::uint64_t seed = 0;
  double top_bin_fraction = 0.0;
  bool binning_warning = false;  // > 1% of mass in the top bin

  double mid(std::size_t j) const { return (j + 0.5) * bin_width_L; }
  /// Standard error of the joint-density estimate in bin j.
  double joint_std_error(std::size_t j, const PhysicalParams& params, double x_a, double x_b,
                         double beta) const;
};

/// Empirical one-point distribution of L^X over bridges x_a -> x_b (defaults
/// to the pinned case x_a = x_b = X). Paths carry their Feynman-Kac potential
/// weight, so `joint` estimates p(L;beta) and `conditional` the V-weighted
/// bridge-conditioned density. max_L caps the binned range (0 = eight
/// Rayleigh scales); mass above it lands in the top bin and trips the
/// binning warning.
OnepointHistogram onepoint_histogram(const Potential& spec, const PhysicalParams& params,
                                     double beta, double X, const MCConfig& cfg,
                                     double bin_width_L,
                                     LocalTimeEstimator estimator = LocalTimeEstimator::ExactConditional,
                                     double max_L = 0.0);
OnepointHistogram onepoint_histogram(const Potential& spec, const PhysicalParams& params,
                                     double beta, double X, double x_a, double x_b,
                                     const MCConfig& cfg, double bin_width_L,
                                     LocalTimeEstimator estimator, double max_L = 0.0);

/// Free heat kernel sqrt(M/(2 pi beta hbar^2)) e^{-M (xb-xa)^2/(2 beta hbar^2)}.
double free_kernel(const PhysicalParams& params, double x_a, double x_b, double beta);

/// One exact local-time draw L^X per bridge, in path order: the raw samples
/// behind the ExactConditional histogram, exposed for distribution tests.
std::vector<double> sample_local_times(const PhysicalParams& params, double beta, double X,
                                       double x_a, double x_b, const MCConfig& cfg);

}  // namespace ltk
