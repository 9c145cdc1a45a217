#pragma once

#include <functional>
#include <vector>

#include "ltk/potential.hpp"
#include "ltk/types.hpp"

namespace ltk {

/// Solution y(x) of (H + E) y = 0, i.e. y'' = (2M/hbar^2)(V + E) y, sampled
/// on the grid together with its derivative. True values are
/// y[i] * exp(log_scale[i]): growing solutions are rescaled whenever the
/// mantissa passes 1e250 so that sinh-type growth never overflows, and only
/// scale-invariant ratios leave this module.
struct CauchySolution {
  GridSpec grid;
  double energy_shift = 0.0;
  std::vector<double> y;
  std::vector<double> y_prime;
  std::vector<double> log_scale;
  double anchor_x = 0.0, anchor_y = 0.0, anchor_yp = 0.0;
  bool rescaled = false;

  /// Mantissa/scale pair at an arbitrary point (cubic Hermite between nodes).
  struct Scaled {
    double y, y_prime, log_scale;
  };
  Scaled at(double x) const;
  /// Plain value; overflows honestly if exp(log_scale) does.
  double value(double x) const;
  double derivative(double x) const;
  /// Logarithmic derivative y'/y at x (scale-free).
  double log_derivative(double x) const;
  /// Ratio y(x2)/y(x1) with scales folded in.
  double ratio(double x2, double x1) const;
};

struct GreenValue {
  double x_a = 0.0, x_b = 0.0;
  double energy = 0.0;
  double value = 0.0;
};

/// Integrate y'' = (2M/hbar^2)(V+E) y from the anchor (x0, y0, y0p) out to
/// both box ends, sampling on the grid nodes. Left-anchored F-type solutions
/// use (X-, 0, 1), right-anchored G-type ones (X+, 0, -1).
CauchySolution solve_cauchy(const Potential& spec, const PhysicalParams& params, double E,
                            double x0, double y0, double y0p, const GridSpec& grid);

/// F(x)G'(x) - F'(x)G(x), evaluated from the stored samples at the grid node
/// nearest x. Constant in x for two solutions of the same equation.
double wronskian(const CauchySolution& f, const CauchySolution& g, double x);

/// Resolvent kernel of H + E on the Dirichlet box:
///   rho~(x_a, x_b, E) = -(2M/hbar^2) F(x<) G(x>) / W(F, G),
/// F left-anchored, G right-anchored. Throws PoleError when W vanishes,
/// which happens exactly when -E hits a box eigenvalue.
GreenValue green_function(const Potential& spec, const PhysicalParams& params, double E,
                          double x_a, double x_b, const GridSpec& grid);

/// G2(x) = [F1(x) G3(x_b) - F1(x_b) G3(x)] / W(F1, G3): the solution
/// right-anchored at x_b (G2(x_b) = 0, G2'(x_b) = -1) composed from an
/// existing F1/G3 pair.
CauchySolution compose_solution(const CauchySolution& f1, const CauchySolution& g3, double x_b);

namespace detail {

/// RK4 for y'' = q(x) y over an explicit node sequence (ascending or
/// descending), with per-node log rescaling. Shared by the Green-function,
/// radial-kernel and determinant code.
struct OdeTrack {
  std::vector<double> x, y, yp, ls;
  bool rescaled = false;
};
OdeTrack integrate_schrodinger(const std::function<double(double)>& q,
                               const std::vector<double>& xs, double y0, double yp0);

/// Node sequence from a to b with steps no larger than h_max (at least
/// min_steps of them), endpoints exact.
std::vector<double> lattice(double a, double b, double h_max, int min_steps = 8);

}  // namespace detail

}  // namespace ltk
