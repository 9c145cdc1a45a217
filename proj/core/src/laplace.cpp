#include "ltk/laplace.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "ltk/errors.hpp"
#include "ltk/quadrature.hpp"

namespace ltk {

namespace {

// Gaver-Stehfest weights V_k; computed from the exact rational formula and
// frozen as doubles.
const std::vector<double>& gs_weights(int order) {
  static const std::array<std::pair<int, std::vector<double>>, 5> tables{{
      {8,
       {-0.33333333333333331, 48.333333333333336, -906, 5464.666666666667, -14376.666666666666,
        18730, -11946.666666666666, 2986.6666666666665}},
      {10,
       {0.083333333333333329, -32.083333333333336, 1279, -15623.666666666666, 84244.166666666672,
        -236957.5, 375911.66666666669, -340071.66666666669, 164062.5, -32812.5}},
      {12,
       {-0.016666666666666666, 16.016666666666666, -1247, 27554.333333333332, -263280.83333333331,
        1324138.7, -3891705.5333333332, 7053286.333333333, -8005336.5, 5552830.5,
        -2155507.2000000002, 359251.20000000001}},
      {14,
       {0.0027777777777777779, -6.4027777777777777, 924.04999999999995, -34597.927777777775,
        540321.11111111112, -4398346.3666666662, 21087591.777777776, -63944913.044444442,
        127597579.55, -170137188.08333334, 150327467.03333333, -84592161.5, 27478884.766666666,
        -3925554.9666666668}},
      {16,
       {-0.00039682539682539683, 2.1337301587301587, -551.01666666666665, 33500.161111111112,
        -812665.11111111112, 10076183.766666668, -73241382.977777779, 339059632.07301587,
        -1052539536.2785715, 2259013328.5833335, -3399701984.4333334, 3582450461.6999998,
        -2591494081.3666668, 1227049828.7666667, -342734555.4285714, 42841819.428571425}},
  }};
  for (const auto& [n, w] : tables)
    if (n == order) return w;
  throw ConfigError("gaver_stehfest_invert: order must be one of {8, 10, 12, 14, 16}");
}

}  // namespace

double gaver_stehfest_invert(const LaplaceEvaluable& f, double beta, int order) {
  if (!(beta > 0.0)) throw ConfigError("gaver_stehfest_invert: beta must be positive");
  const auto& V = gs_weights(order);
  const double ln2 = 0.69314718055994530941723212145818;
  const double node0 = ln2 / beta;
  if (node0 <= f.e_min)
    throw AbscissaError("gaver_stehfest_invert: node " + std::to_string(node0) +
                        " at or below the declared abscissa " + std::to_string(f.e_min));
  double sum = 0.0;
  for (int k = 1; k <= order; ++k) sum += V[k - 1] * f.f(k * node0);
  return node0 * sum;
}

namespace {

/// Degree-7 Lagrange interpolation through nodes xs[j0..j0+7] at x.
double lagrange8(const std::vector<double>& xs, const std::vector<double>& ys, std::size_t j0,
                 double x) {
  double acc = 0.0;
  for (std::size_t i = 0; i < 8; ++i) {
    double num = 1.0, den = 1.0;
    const double xi = xs[j0 + i];
    for (std::size_t j = 0; j < 8; ++j) {
      if (j == i) continue;
      num *= (x - xs[j0 + j]);
      den *= (xi - xs[j0 + j]);
    }
    acc += ys[j0 + i] * num / den;
  }
  return acc;
}

}  // namespace

double forward_laplace(const BetaTable& samples, double E, ForwardLaplaceInfo* info) {
  const std::size_t n = samples.beta.size();
  if (n < 8 || samples.rho.size() != n)
    throw ConfigError("forward_laplace: need at least 8 matching (beta, rho) samples");
  for (std::size_t i = 1; i < n; ++i)
    if (!(samples.beta[i] > samples.beta[i - 1]))
      throw ConfigError("forward_laplace: beta samples must be ascending");
  if (!(samples.beta.front() > 0.0))
    throw ConfigError("forward_laplace: beta samples must be positive");

  // g(t) = 2 t rho(t^2) so that rho ~ c/sqrt(beta) short-time behavior maps
  // to a smooth, finite g near t = 0.
  std::vector<double> ts(n), gs(n);
  for (std::size_t i = 0; i < n; ++i) {
    ts[i] = std::sqrt(samples.beta[i]);
    gs[i] = 2.0 * ts[i] * samples.rho[i];
  }

  const auto& rule = gauss_legendre(12);
  double total = 0.0;

  auto add_panel = [&](double a, double b, std::size_t window) {
    const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double t = c + hw * rule.nodes[i];
      s += rule.weights[i] * lagrange8(ts, gs, window, t) * std::exp(-E * t * t);
    }
    total += hw * s;
  };

  // Head [0, t_0]: fit g ~ a + b t + c t^2 through three geometrically spread
  // nodes and integrate the stub analytically; error O(t_0^4) of an already
  // O(t_0)-sized contribution. (A degree-7 window extrapolated many node
  // spacings below t_0 would amplify sample roundoff instead. The linear term
  // matters: g = 2 t rho(t^2) is even only for 1/sqrt(beta)-type kernels.)
  {
    const double t0 = ts[0];
    std::size_t j1 = 1, j2;
    while (j1 + 2 < n && ts[j1] < 2.0 * t0) ++j1;
    j2 = j1 + 1;
    while (j2 + 1 < n && ts[j2] < 2.0 * ts[j1]) ++j2;
    const double x0 = ts[0], x1 = ts[j1], x2 = ts[j2];
    const double d0 = (x0 - x1) * (x0 - x2), d1 = (x1 - x0) * (x1 - x2),
                 d2 = (x2 - x0) * (x2 - x1);
    const double c2 = gs[0] / d0 + gs[j1] / d1 + gs[j2] / d2;
    const double c1 =
        -(gs[0] * (x1 + x2) / d0 + gs[j1] * (x0 + x2) / d1 + gs[j2] * (x0 + x1) / d2);
    const double c0 = gs[0] * x1 * x2 / d0 + gs[j1] * x0 * x2 / d1 + gs[j2] * x0 * x1 / d2;
    const double t2 = t0 * t0, t3 = t2 * t0;
    total += c0 * t0 + 0.5 * c1 * t2 + c2 * t3 / 3.0 -
             E * (c0 * t3 / 3.0 + 0.25 * c1 * t2 * t2 + 0.2 * c2 * t2 * t3);
  }
  // interior panels with sliding centered windows
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::size_t w = (i >= 3) ? i - 3 : 0;
    w = std::min(w, n - 8);
    add_panel(ts[i], ts[i + 1], w);
  }

  // exponential tail rho ~ A e^{-mu beta} fitted on the last two samples
  double tail = 0.0;
  {
    const double b1 = samples.beta[n - 2], b2 = samples.beta[n - 1];
    const double r1 = samples.rho[n - 2], r2 = samples.rho[n - 1];
    if (r1 > 0.0 && r2 > 0.0 && r2 < r1) {
      const double mu = std::log(r1 / r2) / (b2 - b1);
      tail = r2 * std::exp(-E * b2) / (mu + E);
    } else {
      tail = std::abs(r2) * std::exp(-E * b2) * b2;  // crude bound
    }
    total += tail;
  }
  if (info) {
    info->tail_estimate = tail;
    info->truncation_warning = std::abs(tail) > 1e-12 * std::abs(total);
  }
  return total;
}

}  // namespace ltk
