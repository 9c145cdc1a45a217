#pragma once

#include <functional>
#include <vector>

#include "ltk/types.hpp"

namespace ltk {

/// A Laplace transform f(E) with its declared abscissa of validity: the
/// inverter must never evaluate it at E <= e_min. Green functions of H + E
/// have a pole at -E_0, so e_min = -E_0 is the natural declaration.
struct LaplaceEvaluable {
  std::function<double(double)> f;
  double e_min = -1e300;
};

/// Gaver-Stehfest numerical inverse Laplace transform,
///   rho(beta) ~= (ln 2 / beta) sum_k V_k f(k ln2 / beta),
/// order in {8, 10, 12, 14, 16}. Real-axis nodes only; intended for smooth,
/// completely monotone transforms. Truncation error is pair-dependent
/// (1e-4 .. 1e-7 relative at order 14 in double precision); the roundoff
/// floor is sum|V_k| * eps ~ 1e-7 at order 14. Nodes are evaluated in fixed
/// index order for bit reproducibility.
double gaver_stehfest_invert(const LaplaceEvaluable& f, double beta, int order = 14);

/// Tabulated original rho(beta_i), beta ascending.
struct BetaTable {
  std::vector<double> beta;
  std::vector<double> rho;
};

struct ForwardLaplaceInfo {
  double tail_estimate = 0.0;   // analytic exponential-tail correction added
  bool truncation_warning = false;  // tail > 1e-12 of the accumulated value
};

/// Forward transform rho~(E) = int_0^inf e^{-beta E} rho(beta) d beta from a
/// dense table. Integrates in t = sqrt(beta) (which regularizes the
/// beta^{-1/2} short-time behavior of heat kernels) with sliding degree-7
/// interpolation and per-panel Gauss-Legendre, so a few thousand log-spaced
/// samples reach near machine precision. The region below the first sample
/// uses even polynomial extrapolation in t; the region beyond the last one an
/// exponential-decay fit.
double forward_laplace(const BetaTable& samples, double E, ForwardLaplaceInfo* info = nullptr);

}  // namespace ltk
