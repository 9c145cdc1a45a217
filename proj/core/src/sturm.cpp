#include "ltk/sturm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace ltk {

namespace detail {

namespace {
constexpr double kRescaleThreshold = 1e250;
}

std::vector<double> lattice(double a, double b, double h_max, int min_steps) {
  const double len = std::abs(b - a);
  int n = std::max<int>(min_steps, static_cast<int>(std::ceil(len / h_max)));
  if (len == 0.0) n = 0;
  std::vector<double> xs(n + 1);
  for (int i = 0; i <= n; ++i) xs[i] = a + (b - a) * (static_cast<double>(i) / std::max(n, 1));
  xs.front() = a;
  xs.back() = b;
  return xs;
}

OdeTrack integrate_schrodinger(const std::function<double(double)>& q,
                               const std::vector<double>& xs, double y0, double yp0) {
  OdeTrack t;
  t.x = xs;
  const std::size_t n = xs.size();
  t.y.resize(n);
  t.yp.resize(n);
  t.ls.assign(n, 0.0);
  double y = y0, yp = yp0, ls = 0.0;
  t.y[0] = y;
  t.yp[0] = yp;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double h = xs[k + 1] - xs[k];
    const double x = xs[k];
    const double q1 = q(x), q2 = q(x + 0.5 * h), q3 = q(xs[k + 1]);
    // classical RK4 on (y, y')
    const double k1y = yp, k1p = q1 * y;
    const double k2y = yp + 0.5 * h * k1p, k2p = q2 * (y + 0.5 * h * k1y);
    const double k3y = yp + 0.5 * h * k2p, k3p = q2 * (y + 0.5 * h * k2y);
    const double k4y = yp + h * k3p, k4p = q3 * (y + h * k3y);
    y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    yp += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    if (!std::isfinite(y) || !std::isfinite(yp))
      throw NumericError("integrate_schrodinger: non-finite state");
    const double mag = std::max(std::abs(y), std::abs(yp));
    if (mag > kRescaleThreshold) {
      const double m = std::log(mag);
      const double f = std::exp(-m);
      y *= f;
      yp *= f;
      ls += m;
      t.rescaled = true;
    }
    t.y[k + 1] = y;
    t.yp[k + 1] = yp;
    t.ls[k + 1] = ls;
  }
  return t;
}

}  // namespace detail

namespace {

std::function<double(double)> make_q(const Potential& spec, const PhysicalParams& params,
                                     double E) {
  const double c = 2.0 * params.mass / (params.hbar * params.hbar);
  return [spec, params, c, E](double x) { return c * (eval_potential(spec, x, params) + E); };
}

}  // namespace

CauchySolution::Scaled CauchySolution::at(double x) const {
  const double h = grid.spacing();
  if (x <= grid.x_minus) return {y.front(), y_prime.front(), log_scale.front()};
  if (x >= grid.x_plus) return {y.back(), y_prime.back(), log_scale.back()};
  const double s = (x - grid.x_minus) / h;
  int i = static_cast<int>(s);
  if (i >= grid.n_points - 1) i = grid.n_points - 2;
  const double t = s - i;
  if (t == 0.0) return {y[i], y_prime[i], log_scale[i]};
  // bring both nodes to the larger scale, then cubic Hermite
  const double L = std::max(log_scale[i], log_scale[i + 1]);
  const double f0 = std::exp(log_scale[i] - L), f1 = std::exp(log_scale[i + 1] - L);
  const double y0 = y[i] * f0, y1 = y[i + 1] * f1;
  const double p0 = y_prime[i] * f0, p1 = y_prime[i + 1] * f1;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  const double val = h00 * y0 + h10 * h * p0 + h01 * y1 + h11 * h * p1;
  const double d00 = 6 * t2 - 6 * t, d10 = 3 * t2 - 4 * t + 1;
  const double d01 = -6 * t2 + 6 * t, d11 = 3 * t2 - 2 * t;
  const double der = (d00 * y0 + d01 * y1) / h + d10 * p0 + d11 * p1;
  return {val, der, L};
}

double CauchySolution::value(double x) const {
  const auto s = at(x);
  return s.y * std::exp(s.log_scale);
}

double CauchySolution::derivative(double x) const {
  const auto s = at(x);
  return s.y_prime * std::exp(s.log_scale);
}

double CauchySolution::log_derivative(double x) const {
  const auto s = at(x);
  if (s.y == 0.0) throw PoleError("log_derivative: solution vanishes at evaluation point");
  return s.y_prime / s.y;
}

double CauchySolution::ratio(double x2, double x1) const {
  const auto a = at(x2), b = at(x1);
  if (b.y == 0.0) throw PoleError("ratio: solution vanishes at reference point");
  return a.y / b.y * std::exp(a.log_scale - b.log_scale);
}

CauchySolution solve_cauchy(const Potential& spec, const PhysicalParams& params, double E,
                            double x0, double y0, double y0p, const GridSpec& grid) {
  grid.validate();
  params.validate();
  if (!grid.contains(x0)) throw ConfigError("solve_cauchy: anchor outside the box");
  const auto q = make_q(spec, params, E);

  CauchySolution sol;
  sol.grid = grid;
  sol.energy_shift = E;
  sol.anchor_x = x0;
  sol.anchor_y = y0;
  sol.anchor_yp = y0p;
  sol.y.assign(grid.n_points, 0.0);
  sol.y_prime.assign(grid.n_points, 0.0);
  sol.log_scale.assign(grid.n_points, 0.0);

  // nearest node; integrate one fractional step to it when x0 is off-grid
  const int i0 = grid.nearest_node(x0);
  const double snap = grid.node(i0) - x0;
  double ny = y0, nyp = y0p;
  if (snap != 0.0) {
    auto t = detail::integrate_schrodinger(q, {x0, grid.node(i0)}, y0, y0p);
    ny = t.y.back();
    nyp = t.yp.back();
  }
  // rightward sweep
  if (i0 < grid.n_points - 1) {
    std::vector<double> xs(grid.n_points - i0);
    for (int i = i0; i < grid.n_points; ++i) xs[i - i0] = grid.node(i);
    auto t = detail::integrate_schrodinger(q, xs, ny, nyp);
    for (std::size_t k = 0; k < xs.size(); ++k) {
      sol.y[i0 + k] = t.y[k];
      sol.y_prime[i0 + k] = t.yp[k];
      sol.log_scale[i0 + k] = t.ls[k];
    }
    sol.rescaled = sol.rescaled || t.rescaled;
  } else {
    sol.y[i0] = ny;
    sol.y_prime[i0] = nyp;
  }
  // leftward sweep
  if (i0 > 0) {
    std::vector<double> xs(i0 + 1);
    for (int i = i0; i >= 0; --i) xs[i0 - i] = grid.node(i);
    auto t = detail::integrate_schrodinger(q, xs, ny, nyp);
    for (std::size_t k = 1; k < xs.size(); ++k) {
      sol.y[i0 - k] = t.y[k];
      sol.y_prime[i0 - k] = t.yp[k];
      sol.log_scale[i0 - k] = t.ls[k];
    }
    sol.rescaled = sol.rescaled || t.rescaled;
  }
  // exact anchor values on an on-grid anchor
  if (snap == 0.0) {
    sol.y[i0] = y0;
    sol.y_prime[i0] = y0p;
    sol.log_scale[i0] = 0.0;
  }
  return sol;
}

double wronskian(const CauchySolution& f, const CauchySolution& g, double x) {
  if (f.energy_shift != g.energy_shift)
    throw ConfigError("wronskian: solutions have different energy shifts");
  if (f.grid.n_points != g.grid.n_points || f.grid.x_minus != g.grid.x_minus ||
      f.grid.x_plus != g.grid.x_plus)
    throw ConfigError("wronskian: solutions live on different grids");
  const int i = f.grid.nearest_node(x);
  const double w = f.y[i] * g.y_prime[i] - f.y_prime[i] * g.y[i];
  return w * std::exp(f.log_scale[i] + g.log_scale[i]);
}

GreenValue green_function(const Potential& spec, const PhysicalParams& params, double E,
                          double x_a, double x_b, const GridSpec& grid) {
  grid.validate();
  params.validate();
  if (!grid.contains(x_a) || !grid.contains(x_b))
    throw ConfigError("green_function: query point outside the box");
  const auto q = make_q(spec, params, E);
  const double xlo = std::min(x_a, x_b), xhi = std::max(x_a, x_b);
  const double h = grid.spacing();

  // Lattices land exactly on xlo and xhi, no interpolation anywhere.
  auto seg1 = detail::lattice(grid.x_minus, xlo, h);
  auto seg2 = detail::lattice(xlo, xhi, h, xlo == xhi ? 0 : 8);
  auto seg3 = detail::lattice(xhi, grid.x_plus, h);

  std::vector<double> xsF = seg1;
  xsF.insert(xsF.end(), seg2.begin() + (seg2.empty() ? 0 : 1), seg2.end());
  auto F = detail::integrate_schrodinger(q, xsF, 0.0, 1.0);

  std::vector<double> xsG(seg3.rbegin(), seg3.rend());
  xsG.insert(xsG.end(), seg2.rbegin() + (seg2.empty() ? 0 : 1), seg2.rend());
  auto G = detail::integrate_schrodinger(q, xsG, 0.0, -1.0);

  const std::size_t iF_hi = xsF.size() - 1;   // xhi
  const std::size_t iF_lo = seg1.size() - 1;  // xlo
  const std::size_t iG_hi = seg3.size() - 1;  // xhi

  // Wronskian at xhi, where both tracks carry their own scales.
  const double wm = F.y[iF_hi] * G.yp[iG_hi] - F.yp[iF_hi] * G.y[iG_hi];
  const double wscale = std::abs(F.y[iF_hi] * G.yp[iG_hi]) + std::abs(F.yp[iF_hi] * G.y[iG_hi]);
  if (std::abs(wm) < 1e-12 * wscale)
    throw PoleError("green_function: Wronskian vanishes; E is at a negated box eigenvalue");

  const double c = 2.0 * params.mass / (params.hbar * params.hbar);
  // -(2M/hbar^2) F(xlo) G(xhi) / W. The G scale at xhi cancels against the
  // Wronskian's; what survives is ls_F(xlo) - ls_F(xhi) <= 0, safe to expose.
  const double factor = std::exp(F.ls[iF_lo] - F.ls[iF_hi]);
  const double result = -c * F.y[iF_lo] * G.y[iG_hi] / wm * factor;
  return GreenValue{x_a, x_b, E, result};
}

CauchySolution compose_solution(const CauchySolution& f1, const CauchySolution& g3, double x_b) {
  if (f1.energy_shift != g3.energy_shift)
    throw ConfigError("compose_solution: energy shifts differ");
  if (f1.grid.n_points != g3.grid.n_points || f1.grid.x_minus != g3.grid.x_minus ||
      f1.grid.x_plus != g3.grid.x_plus)
    throw ConfigError("compose_solution: grids differ");
  const auto fb = f1.at(x_b);
  const auto gb = g3.at(x_b);
  const double w_m = fb.y * gb.y_prime - fb.y_prime * gb.y;  // scale fb.ls + gb.ls
  const double w_scale = std::abs(fb.y * gb.y_prime) + std::abs(fb.y_prime * gb.y);
  if (std::abs(w_m) < 1e-12 * w_scale) throw PoleError("compose_solution: Wronskian vanishes");

  CauchySolution out;
  out.grid = f1.grid;
  out.energy_shift = f1.energy_shift;
  out.anchor_x = x_b;
  out.anchor_y = 0.0;
  out.anchor_yp = -1.0;
  const int n = f1.grid.n_points;
  out.y.resize(n);
  out.y_prime.resize(n);
  out.log_scale.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    // G2(x) = [F1(x) G3(x_b) - F1(x_b) G3(x)] / W, each term on its own scale
    const double t1 = f1.y[i] * gb.y * std::exp(f1.log_scale[i] + gb.log_scale);
    const double t2 = fb.y * g3.y[i] * std::exp(fb.log_scale + g3.log_scale[i]);
    const double d1 = f1.y_prime[i] * gb.y * std::exp(f1.log_scale[i] + gb.log_scale);
    const double d2 = fb.y * g3.y_prime[i] * std::exp(fb.log_scale + g3.log_scale[i]);
    const double w = w_m * std::exp(fb.log_scale + gb.log_scale);
    if (!std::isfinite(t1) || !std::isfinite(t2) || !std::isfinite(w))
      throw OverflowError("compose_solution: scales too large for plain doubles");
    out.y[i] = (t1 - t2) / w;
    out.y_prime[i] = (d1 - d2) / w;
  }
  return out;
}

}  // namespace ltk
