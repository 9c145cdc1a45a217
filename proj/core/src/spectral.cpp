#include "ltk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ltk {

double SpectralDecomposition::eigenfunction_at(int n, double x) const {
  const auto& psi = eigenfunctions[n];
  if (x <= grid.x_minus) return psi.front();
  if (x >= grid.x_plus) return psi.back();
  const double h = grid.spacing();
  const double s = (x - grid.x_minus) / h;
  int i = static_cast<int>(s);
  if (i >= grid.n_points - 1) i = grid.n_points - 2;
  const double t = s - i;
  return psi[i] + t * (psi[i + 1] - psi[i]);
}

DiscreteHamiltonian discretize(const Potential& spec, const GridSpec& grid,
                               const PhysicalParams& params) {
  grid.validate();
  params.validate();
  validate_potential(spec);
  const double h = grid.spacing();
  const double kin = params.hbar * params.hbar / (params.mass * h * h);
  DiscreteHamiltonian H{grid, params, {}, -0.5 * kin};
  H.diagonal.resize(grid.n_points - 2);
  for (int i = 0; i < grid.n_points - 2; ++i)
    H.diagonal[i] = kin + eval_potential(spec, grid.node(i + 1), params);
  return H;
}

namespace {

/// Number of eigenvalues of the tridiagonal matrix strictly below sigma
/// (Sturm sequence sign count with the standard underflow guard).
int sturm_count(const std::vector<double>& d, double e, double sigma) {
  const double e2 = e * e;
  int count = 0;
  double q = d[0] - sigma;
  if (q < 0) ++count;
  for (std::size_t i = 1; i < d.size(); ++i) {
    if (q == 0.0) q = std::numeric_limits<double>::min();
    q = d[i] - sigma - e2 / q;
    if (q < 0) ++count;
  }
  return count;
}

/// Solve (T - sigma I) x = b in place; T tridiagonal with constant
/// off-diagonal e. Near-singular pivots are nudged, which is exactly what
/// inverse iteration wants.
void shifted_solve(const std::vector<double>& d, double e, double sigma, std::vector<double>& x) {
  const std::size_t n = d.size();
  static thread_local std::vector<double> diag, upper;
  diag.resize(n);
  upper.resize(n);
  double scale = 0.0;
  for (double v : d) scale = std::max(scale, std::abs(v));
  const double tiny = 1e-300 + scale * 1e-18;
  diag[0] = d[0] - sigma;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) diag[i] = d[i] - sigma - e * (upper[i - 1] = e / diag[i - 1]);
    if (std::abs(diag[i]) < tiny) diag[i] = (diag[i] < 0 ? -tiny : tiny);
  }
  // forward elimination of b, then back substitution
  for (std::size_t i = 1; i < n; ++i) x[i] -= upper[i - 1] * x[i - 1];
  x[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (x[i] - e * x[i + 1]) / diag[i];
}

double norm_h(const std::vector<double>& x, double h) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s * h);
}

}  // namespace

SpectralDecomposition eigendecompose(const DiscreteHamiltonian& H, int n_states) {
  const int n = H.interior_points();
  if (n_states < 1 || n_states > n)
    throw ConfigError("eigendecompose: need 1 <= n_states <= interior point count");
  const auto& d = H.diagonal;
  const double e = H.off_diagonal;

  // Gershgorin bounds for the whole spectrum.
  double lo = d[0] - 2.0 * std::abs(e), hi = d[0] + 2.0 * std::abs(e);
  for (double v : d) {
    lo = std::min(lo, v - 2.0 * std::abs(e));
    hi = std::max(hi, v + 2.0 * std::abs(e));
  }
  const double span = hi - lo;

  SpectralDecomposition dec;
  dec.grid = H.grid;
  dec.energies.resize(n_states);
  dec.eigenfunctions.resize(n_states);

  const double h = H.grid.spacing();
  for (int k = 0; k < n_states; ++k) {
    // Bisection: find the k-th eigenvalue.
    double a = lo, b = hi;
    while (b - a > 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b)) &&
           b - a > 1e-15 * span) {
      const double mid = 0.5 * (a + b);
      if (sturm_count(d, e, mid) > k) b = mid;
      else a = mid;
    }
    double lambda = 0.5 * (a + b);

    // Inverse iteration from a fixed, reproducible start vector, with a
    // Rayleigh-quotient polish of the bisected eigenvalue: the bisection
    // width scales with the spectral span, and without the polish it caps
    // the eigenvector accuracy.
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = 1.0 + 1e-3 * std::sin(0.7 * (i + 1));
    bool converged = false;
    const double res_tol = 1e-12 * std::max(span, 1.0);
    double res = 0.0;
    for (int it = 0; it < 10; ++it) {
      shifted_solve(d, e, lambda, x);
      const double nrm = norm_h(x, h);
      if (!(nrm > 0.0) || !std::isfinite(nrm))
        throw ConvergenceError("eigendecompose: inverse iteration broke down at index " +
                               std::to_string(k));
      for (double& v : x) v /= nrm;
      double rq = 0.0;
      res = 0.0;
      {
        double r0 = (d[0] - lambda) * x[0] + e * x[1];
        rq += x[0] * (d[0] * x[0] + e * x[1]);
        res += r0 * r0;
        for (int i = 1; i < n - 1; ++i) {
          const double hx = e * x[i - 1] + d[i] * x[i] + e * x[i + 1];
          rq += x[i] * hx;
          const double r = hx - lambda * x[i];
          res += r * r;
        }
        const double hxn = e * x[n - 2] + d[n - 1] * x[n - 1];
        rq += x[n - 1] * hxn;
        res += (hxn - lambda * x[n - 1]) * (hxn - lambda * x[n - 1]);
      }
      rq *= h;  // unit h-norm
      if (it >= 1) lambda = rq;
      if (std::sqrt(res * h) <= res_tol && it >= 2) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw ConvergenceError("eigendecompose: eigenvector " + std::to_string(k) +
                             " did not converge");
    dec.energies[k] = lambda;
    // Full modified Gram-Schmidt against the lower states pins pairwise
    // orthogonality at roundoff level even when residuals sit at 1e-12 span.
    for (int m = 0; m < k; ++m) {
      const auto& prev = dec.eigenfunctions[m];
      double dot = 0.0;
      for (int i = 0; i < n; ++i) dot += prev[i + 1] * x[i];
      dot *= h;
      for (int i = 0; i < n; ++i) x[i] -= dot * prev[i + 1];
    }
    if (k > 0) {
      const double nrm = norm_h(x, h);
      for (double& v : x) v /= nrm;
    }
    // Sign convention: first component after X- positive.
    int first = 0;
    while (first < n && x[first] == 0.0) ++first;
    if (first < n && x[first] < 0.0)
      for (double& v : x) v = -v;

    auto& psi = dec.eigenfunctions[k];
    psi.assign(H.grid.n_points, 0.0);
    std::copy(x.begin(), x.end(), psi.begin() + 1);
  }
  return dec;
}

namespace {

double spectral_sum(const SpectralDecomposition& dec, double beta,
                    const std::function<double(int)>& weight, SpectralTail* tail) {
  double sum = 0.0;
  for (int k = 0; k < dec.n_states(); ++k) sum += std::exp(-beta * dec.energies[k]) * weight(k);
  if (tail) {
    tail->bound = std::exp(-beta * dec.energies.back());
    tail->warn = tail->bound > 1e-12 * std::abs(sum);
  }
  return sum;
}

}  // namespace

double bloch_spectral(const SpectralDecomposition& dec, const BlochQuery& q, SpectralTail* tail) {
  q.validate();
  return spectral_sum(
      dec, q.beta,
      [&](int k) { return dec.eigenfunction_at(k, q.x_a) * dec.eigenfunction_at(k, q.x_b); },
      tail);
}

double partition_function(const SpectralDecomposition& dec, double beta, SpectralTail* tail) {
  if (!(beta > 0.0)) throw ConfigError("partition_function requires beta > 0");
  return spectral_sum(dec, beta, [](int) { return 1.0; }, tail);
}

std::vector<double> heat_propagate(const DiscreteHamiltonian& H, double x_a, double beta,
                                   int n_steps) {
  if (n_steps < 1) throw ConfigError("heat_propagate requires n_steps >= 1");
  if (!(beta > 0.0)) throw ConfigError("heat_propagate requires beta > 0");
  const int n = H.interior_points();
  const double h = H.grid.spacing();
  const double dt = beta / n_steps;
  const double e = H.off_diagonal;

  std::vector<double> u(n, 0.0);
  {
    // discrete delta: 1/h at the node when x_a lies on the grid, otherwise
    // split between the two neighbors so the unit charge keeps its first
    // moment (the trace stays exactly 1 either way)
    const double s = (x_a - H.grid.x_minus) / h;
    const int j = std::clamp(static_cast<int>(s), 0, H.grid.n_points - 2);
    const double t = s - j;
    const int jl = std::clamp(j - 1, 0, n - 1);
    const int jr = std::clamp(j, 0, n - 1);
    u[jl] += (1.0 - t) / h;
    u[jr] += t / h;
  }
  // (I + dt/2 H) u' = (I - dt/2 H) u, Thomas solve per step.
  const double a = 0.5 * dt * e;  // off-diagonal of dt/2 * H
  std::vector<double> diag(n), rhs(n), upper(n);
  for (int s = 0; s < n_steps; ++s) {
    rhs[0] = (1.0 - 0.5 * dt * H.diagonal[0]) * u[0] - a * u[1];
    for (int i = 1; i < n - 1; ++i)
      rhs[i] = -a * u[i - 1] + (1.0 - 0.5 * dt * H.diagonal[i]) * u[i] - a * u[i + 1];
    rhs[n - 1] = -a * u[n - 2] + (1.0 - 0.5 * dt * H.diagonal[n - 1]) * u[n - 1];

    diag[0] = 1.0 + 0.5 * dt * H.diagonal[0];
    for (int i = 1; i < n; ++i) {
      upper[i - 1] = a / diag[i - 1];
      diag[i] = 1.0 + 0.5 * dt * H.diagonal[i] - a * upper[i - 1];
      rhs[i] -= upper[i - 1] * rhs[i - 1];
    }
    u[n - 1] = rhs[n - 1] / diag[n - 1];
    for (int i = n - 1; i-- > 0;) u[i] = (rhs[i] - a * u[i + 1]) / diag[i];

    for (double v : u)
      if (!std::isfinite(v)) throw NumericError("heat_propagate: non-finite intermediate value");
  }
  std::vector<double> full(H.grid.n_points, 0.0);
  std::copy(u.begin(), u.end(), full.begin() + 1);
  return full;
}

}  // namespace ltk
