#include "ltk/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace ltk {
namespace {

GaussLegendreRule compute_rule(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-node starting guess, then Newton on P_n(x) = 0.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int n) {
  static std::map<int, GaussLegendreRule> cache;
  static std::mutex mutex;
  std::scoped_lock lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
  return it->second;
}

double gl_integrate(const std::function<double(double)>& f, double a, double b, int n) {
  const auto& rule = gauss_legendre(n);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += rule.weights[i] * f(c + h * rule.nodes[i]);
  return h * sum;
}

double gl_integrate_composite(const std::function<double(double)>& f, double a, double b, int n,
                              int panels) {
  double sum = 0.0;
  const double w = (b - a) / panels;
  for (int p = 0; p < panels; ++p) sum += gl_integrate(f, a + p * w, a + (p + 1) * w, n);
  return sum;
}

namespace {

double adaptive_panel(const std::function<double(double)>& f, double a, double b, double coarse,
                      double tol, int depth, int max_depth) {
  const double mid = 0.5 * (a + b);
  const double left = gl_integrate(f, a, mid, 15);
  const double right = gl_integrate(f, mid, b, 15);
  const double fine = left + right;
  if (depth >= max_depth || std::abs(fine - coarse) <= tol) return fine;
  return adaptive_panel(f, a, mid, left, 0.5 * tol, depth + 1, max_depth) +
         adaptive_panel(f, mid, b, right, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double abs_tol, int max_depth) {
  const double coarse = gl_integrate(f, a, b, 15);
  const double tol = abs_tol + rel_tol * std::abs(coarse);
  return adaptive_panel(f, a, b, coarse, tol > 0 ? tol : 1e-300, 0, max_depth);
}

}  // namespace ltk
