#include "ltk/bessel.hpp"

#include <cmath>
#include <limits>

#include "ltk/errors.hpp"

namespace ltk {

namespace {

constexpr double kSeriesCut = 50.0;
constexpr double kOverflowGuard = 700.0;

/// Power series sum_k (x/2)^{nu+2k} / (k! Gamma(nu+k+1)). All terms positive
/// for nu >= -1 (the k = 0 term drops at nu = -1 where 1/Gamma(0) = 0), so
/// there is no cancellation at any x; only term count grows.
double series_i(double nu, double x, bool scaled) {
  const double xh = 0.5 * x;
  // first non-vanishing k
  int k0 = 0;
  while (nu + k0 + 1 <= 0.0) ++k0;
  double term;
  {
    const double lg = std::lgamma(nu + k0 + 1);
    double lt = (nu + 2.0 * k0) * std::log(xh) - lg;
    for (int j = 2; j <= k0; ++j) lt -= std::log(static_cast<double>(j));
    term = std::exp(lt);
  }
  double sum = term;
  const double x2 = xh * xh;
  for (int k = k0; k < 600; ++k) {
    term *= x2 / ((k + 1.0) * (nu + k + 1.0));
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return scaled ? sum * std::exp(-x) : sum;
}

/// Large-x expansion I_nu(x) ~ e^x/sqrt(2 pi x) sum_k (-1)^k a_k(nu)/x^k,
/// a_k = prod_{j<=k} (4nu^2-(2j-1)^2)/(8j). Truncated at the smallest term.
double asymptotic_i(double nu, double x, bool scaled) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0, sum = 1.0, prev = std::numeric_limits<double>::max();
  for (int k = 1; k <= 40; ++k) {
    term *= -(mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * x);
    if (std::abs(term) >= prev) break;  // divergent tail reached
    sum += term;
    prev = std::abs(term);
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  const double pref = 1.0 / std::sqrt(2.0 * M_PI * x);
  return scaled ? pref * sum : std::exp(x) * pref * sum;
}

double bessel_i_impl(double nu, double x, bool scaled) {
  if (!(nu >= -1.0)) throw ConfigError("bessel_i: order must be >= -1");
  if (!(x >= 0.0)) throw ConfigError("bessel_i: argument must be >= 0");
  if (x == 0.0) {
    if (nu == 0.0) return 1.0;
    return 0.0;  // nu > 0; nu in (-1,0) diverges but is never queried at 0
  }
  if (x <= kSeriesCut) return series_i(nu, x, scaled);
  return asymptotic_i(nu, x, scaled);
}

}  // namespace

double bessel_i(double nu, double x) {
  if (x > kOverflowGuard) throw OverflowError("bessel_i: argument beyond e^700 overflow guard");
  return bessel_i_impl(nu, x, false);
}

double bessel_i_scaled(double nu, double x) { return bessel_i_impl(nu, x, true); }

namespace {

/// Trapezoid sum of (1/2) int_R e^{x - x cosh t} cosh(p t) dt at step h.
double k_trapezoid(double p, double x, double h) {
  // stop once x(cosh t - 1) > 750 or the cosh(pt) growth is dominated away
  double sum = 0.5;  // t = 0 term, half weight of the symmetric pair
  for (int j = 1;; ++j) {
    const double t = j * h;
    // x (cosh t - 1) = 2 x sinh^2(t/2), exact for small t
    const double arg = 2.0 * x * std::sinh(0.5 * t) * std::sinh(0.5 * t);
    const double term = std::exp(-arg) * std::cosh(p * t);
    sum += term;
    if (arg > 760.0 || (term < 1e-20 * sum && arg > 40.0)) break;
    if (j > 200000) throw ConvergenceError("bessel_k: trapezoid failed to decay");
  }
  return sum * h;
}

}  // namespace

double bessel_k_scaled(double p, double x) {
  if (!(x > 0.0)) throw ConfigError("bessel_k: argument must be positive");
  p = std::abs(p);  // K_{-p} = K_p
  double h = 0.5;
  double prev = k_trapezoid(p, x, h);
  for (int round = 0; round < 8; ++round) {
    h *= 0.5;
    const double cur = k_trapezoid(p, x, h);
    if (std::abs(cur - prev) <= 4e-16 * std::abs(cur)) return cur;
    prev = cur;
  }
  return prev;
}

double bessel_k(double p, double x) {
  return bessel_k_scaled(p, x) * std::exp(-x);
}

double psi_p(double p, double x) {
  if (!(x > 0.0)) throw ConfigError("psi_p: defined for x > 0 only");
  return std::sqrt(2.0 * x / M_PI) * bessel_k_scaled(p, x);
}

}  // namespace ltk
