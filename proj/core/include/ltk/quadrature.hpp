#pragma once

#include <functional>
#include <vector>

namespace ltk {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Rule of order n (nodes computed by Newton iteration on P_n, cached).
const GaussLegendreRule& gauss_legendre(int n);

/// Integral of f over [a, b] with an n-point Gauss-Legendre rule.
double gl_integrate(const std::function<double(double)>& f, double a, double b, int n);

/// Composite Gauss-Legendre: [a, b] split into `panels` equal panels,
/// n points each.
double gl_integrate_composite(const std::function<double(double)>& f, double a, double b, int n,
                              int panels);

/// Adaptive panel-splitting quadrature (Gauss-Legendre 15/31 difference as
/// the local error estimate). abs_tol and rel_tol are combined additively.
double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-10, double abs_tol = 0.0, int max_depth = 48);

}  // namespace ltk
