#include "ltk/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ltk/quadrature.hpp"
#include "ltk/sturm.hpp"

namespace ltk {

double GroundState::at(double x) const {
  if (x <= grid.x_minus) return wavefunction.front();
  if (x >= grid.x_plus) return wavefunction.back();
  const double s = (x - grid.x_minus) / grid.spacing();
  int i = static_cast<int>(s);
  if (i >= grid.n_points - 1) i = grid.n_points - 2;
  const double t = s - i;
  return wavefunction[i] + t * (wavefunction[i + 1] - wavefunction[i]);
}

namespace {

double rayleigh_quotient(const DiscreteHamiltonian& H, const std::vector<double>& x) {
  const int n = H.interior_points();
  const double e = H.off_diagonal;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < n; ++i) {
    double hx = H.diagonal[i] * x[i];
    if (i > 0) hx += e * x[i - 1];
    if (i + 1 < n) hx += e * x[i + 1];
    num += x[i] * hx;
    den += x[i] * x[i];
  }
  return num / den;
}

void solve_shifted(const DiscreteHamiltonian& H, double sigma, std::vector<double>& x) {
  const int n = H.interior_points();
  const double e = H.off_diagonal;
  std::vector<double> diag(n), upper(n);
  double scale = 0.0;
  for (double v : H.diagonal) scale = std::max(scale, std::abs(v));
  const double tiny = 1e-300 + scale * 1e-18;
  diag[0] = H.diagonal[0] - sigma;
  if (std::abs(diag[0]) < tiny) diag[0] = tiny;
  for (int i = 1; i < n; ++i) {
    upper[i - 1] = e / diag[i - 1];
    diag[i] = H.diagonal[i] - sigma - e * upper[i - 1];
    if (std::abs(diag[i]) < tiny) diag[i] = (diag[i] < 0 ? -tiny : tiny);
  }
  for (int i = 1; i < n; ++i) x[i] -= upper[i - 1] * x[i - 1];
  x[n - 1] /= diag[n - 1];
  for (int i = n - 1; i-- > 0;) x[i] = (x[i] - e * x[i + 1]) / diag[i];
}

}  // namespace

GroundState ground_state(const DiscreteHamiltonian& H) {
  const int n = H.interior_points();
  const double h = H.grid.spacing();
  // shift safely below the spectrum (Gershgorin)
  double lo = H.diagonal[0] - 2.0 * std::abs(H.off_diagonal);
  for (double v : H.diagonal) lo = std::min(lo, v - 2.0 * std::abs(H.off_diagonal));
  double sigma = lo - 1.0;

  std::vector<double> x(n, 1.0);
  double rq = rayleigh_quotient(H, x), prev_rq;
  int it = 0;
  const int max_it = 500;
  for (;; ++it) {
    if (it >= max_it)
      throw ConvergenceError("ground_state: no convergence after " + std::to_string(max_it) +
                             " iterations");
    solve_shifted(H, sigma, x);
    double nrm = 0.0;
    for (double v : x) nrm += v * v;
    nrm = std::sqrt(nrm);
    for (double& v : x) v /= nrm;
    prev_rq = rq;
    rq = rayleigh_quotient(H, x);
    // switch to Rayleigh shifts once the fixed shift has settled in
    if (it > 3) sigma = rq;
    if (std::abs(rq - prev_rq) <= 1e-13 * std::max(1.0, std::abs(rq)) && it >= 6) break;
  }

  double sign_fix = 0.0;
  for (double v : x) sign_fix += v;
  if (sign_fix < 0.0)
    for (double& v : x) v = -v;
  const double nrm_h = 1.0 / std::sqrt(h);  // unit l2 -> unit lattice integral

  GroundState gs;
  gs.grid = H.grid;
  gs.energy = rq;
  gs.wavefunction.assign(H.grid.n_points, 0.0);
  for (int i = 0; i < n; ++i) gs.wavefunction[i + 1] = x[i] * nrm_h;
  return gs;
}

double low_temperature_leading(const GroundState& gs, const BlochQuery& q) {
  q.validate();
  return std::exp(-q.beta * gs.energy) * gs.at(q.x_a) * gs.at(q.x_b);
}

DeterminantResult gelfand_yaglom(const Potential& spec, const PhysicalParams& params, double E0,
                                 const GridSpec& grid) {
  grid.validate();
  params.validate();
  const double c = 2.0 * params.mass / (params.hbar * params.hbar);
  auto q = [&](double x) { return c * (eval_potential(spec, x, params) - E0); };

  // initial-value problem on the grid nodes
  std::vector<double> xs(grid.n_points);
  for (int i = 0; i < grid.n_points; ++i) xs[i] = grid.node(i);
  const auto track = detail::integrate_schrodinger(q, xs, 0.0, 1.0);
  const double ode_m = track.y.back();
  const double ode_ls = track.ls.back();

  // lattice determinant: P_i = (2 + eps^2 q_i) P_{i-1} - P_{i-2} over the
  // interior nodes, P_0 = 1. Rescaled like the ODE track.
  const double eps = grid.spacing();
  double pm2 = 0.0, pm1 = 1.0, lat_ls = 0.0;
  for (int i = 1; i <= grid.n_points - 2; ++i) {
    const double p = (2.0 + eps * eps * q(grid.node(i))) * pm1 - pm2;
    pm2 = pm1;
    pm1 = p;
    const double mag = std::max(std::abs(pm1), std::abs(pm2));
    if (mag > 1e250) {
      const double m = std::log(mag);
      const double f = std::exp(-m);
      pm1 *= f;
      pm2 *= f;
      lat_ls += m;
    }
    if (!std::isfinite(pm1)) throw NumericError("gelfand_yaglom: lattice recursion overflow");
  }
  double lat_m = eps * pm1;

  // bring both mantissas onto a shared scale
  DeterminantResult r;
  r.log_scale = std::max(ode_ls, lat_ls);
  r.d_value = ode_m * std::exp(ode_ls - r.log_scale);
  r.lattice_det_times_eps = lat_m * std::exp(lat_ls - r.log_scale);
  return r;
}

double gelfand_yaglom_dalembert(const std::function<double(double)>& eta0, const GridSpec& grid) {
  grid.validate();
  // log-space quadrature of int dxi / eta0^2, factoring the dominant scale out
  const int panels = std::max(512, 4 * grid.n_points);
  const auto& rule = gauss_legendre(8);
  const double a = grid.x_minus, b = grid.x_plus;
  const double w = (b - a) / panels;

  double m = -1e300;  // max of -2 log eta0 over sample points
  std::vector<double> log_eta(static_cast<std::size_t>(panels) * rule.nodes.size());
  std::size_t idx = 0;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * w, hw = 0.5 * w;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i, ++idx) {
      const double e = eta0(c + hw * rule.nodes[i]);
      if (!(e > 0.0))
        throw NumericError("gelfand_yaglom_dalembert: eta0 has a node; reduction invalid");
      log_eta[idx] = std::log(e);
      m = std::max(m, -2.0 * log_eta[idx]);
    }
  }
  double integral = 0.0;
  idx = 0;
  for (int p = 0; p < panels; ++p) {
    const double hw = 0.5 * w;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i, ++idx)
      integral += hw * rule.weights[i] * std::exp(-2.0 * log_eta[idx] - m);
  }
  const double ea = eta0(a), eb = eta0(b);
  if (!(ea > 0.0) || !(eb > 0.0))
    throw NumericError("gelfand_yaglom_dalembert: eta0 vanishes at a box end");
  return eb * ea * integral * std::exp(m);
}

std::pair<std::vector<double>, std::vector<double>> lattice_derivatives(
    std::span<const double> f, double eps) {
  const std::size_t n = f.size();
  std::vector<double> fwd(n, 0.0), bwd(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) fwd[i] = (f[i + 1] - f[i]) / eps;
  for (std::size_t i = 1; i < n; ++i) bwd[i] = (f[i] - f[i - 1]) / eps;
  return {std::move(fwd), std::move(bwd)};
}

double laplace_method(const std::function<double(double)>& f,
                      const std::function<double(double)>& g, double beta, double bracket_lo,
                      double bracket_hi) {
  if (!(beta > 0.0)) throw ConfigError("laplace_method: beta must be positive");
  if (!(bracket_lo < bracket_hi)) throw ConfigError("laplace_method: empty bracket");
  auto dg = [&](double t) {
    const double d = 1e-6 * (1.0 + std::abs(t));
    return (g(t + d) - g(t - d)) / (2.0 * d);
  };
  double a = bracket_lo, b = bracket_hi;
  double fa = dg(a), fb = dg(b);
  if (fa == 0.0) b = a;
  else if (fb == 0.0) a = b;
  else if (fa * fb > 0.0)
    throw BracketError("laplace_method: g' has no sign change in the bracket");
  for (int it = 0; it < 200 && b - a > 1e-14 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    const double m = 0.5 * (a + b);
    const double fm = dg(m);
    if (fm == 0.0) {
      a = b = m;
      break;
    }
    (fa * fm < 0.0 ? b : a) = m;
    (fa * fm < 0.0 ? fb : fa) = fm;
  }
  const double t0 = 0.5 * (a + b);
  const double d = 1e-4 * (1.0 + std::abs(t0));
  const double g2 =
      (-g(t0 + 2 * d) + 16 * g(t0 + d) - 30 * g(t0) + 16 * g(t0 - d) - g(t0 - 2 * d)) /
      (12 * d * d);
  if (!(g2 > 0.0))
    throw NumericError("laplace_method: g'' at the stationary point is not positive");
  return std::sqrt(2.0 * M_PI / (beta * g2)) * f(t0) * std::exp(-beta * g(t0));
}

double high_temperature_leading(const Potential& spec, const PhysicalParams& params, double x,
                                double beta) {
  if (!(beta > 0.0)) throw ConfigError("high_temperature_leading: beta must be positive");
  const double v = eval_potential(spec, x, params);
  return std::exp(-beta * v) * std::sqrt(params.mass / (2.0 * M_PI * beta * params.hbar * params.hbar));
}

}  // namespace ltk
