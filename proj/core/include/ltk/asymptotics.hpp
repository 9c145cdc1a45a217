#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "ltk/potential.hpp"
#include "ltk/spectral.hpp"
#include "ltk/types.hpp"

namespace ltk {

/// Variational ground state: nodeless, positive wavefunction on the full
/// grid, normalized sum psi^2 h = 1; energy is its Rayleigh quotient.
struct GroundState {
  GridSpec grid;
  double energy = 0.0;
  std::vector<double> wavefunction;

  double at(double x) const;
};

/// Rayleigh-quotient minimizer by shifted inverse iteration, refined with a
/// Rayleigh shift. Agrees with the lowest eigendecompose pair to 1e-10.
GroundState ground_state(const DiscreteHamiltonian& H);

/// e^{-beta E_0} psi_0(x_a) psi_0(x_b), the leading low-temperature term of
/// the spectral sum.
double low_temperature_leading(const GroundState& gs, const BlochQuery& q);

/// Gelfand-Yaglom data for the operator -d^2/dx^2 + (2M/hbar^2)(V - E_0):
/// d_value is D(X+) from the initial-value problem D'' = (2M/hbar^2)(V-E0) D,
/// D(X-) = 0, D'(X-) = 1; lattice_det_times_eps is eps times the determinant
/// of the (N-1)x(N-1) lattice operator -eps^2 grad gradbar + eps^2 q from the
/// two-term recursion. Both mantissas share log_scale (true value =
/// mantissa * exp(log_scale)).
struct DeterminantResult {
  double d_value = 0.0;
  double lattice_det_times_eps = 0.0;
  double log_scale = 0.0;
};

DeterminantResult gelfand_yaglom(const Potential& spec, const PhysicalParams& params, double E0,
                                 const GridSpec& grid);

/// D(X+) from d'Alembert's reduction D(x) = eta0(x) eta0(X-) int dxi/eta0^2
/// for a supplied nodeless solution eta0 of the same equation. Throws
/// NumericError if eta0 has a node on the box.
double gelfand_yaglom_dalembert(const std::function<double(double)>& eta0, const GridSpec& grid);

/// Forward and backward lattice derivatives. forward[i] = (f[i+1]-f[i])/eps
/// (last entry zero), backward[i] = (f[i]-f[i-1])/eps (first entry zero).
std::pair<std::vector<double>, std::vector<double>> lattice_derivatives(
    std::span<const double> f, double eps);

/// Laplace's asymptotic formula for int f(t) e^{-beta g(t)} dt:
/// sqrt(2 pi/(beta g''(t0))) f(t0) e^{-beta g(t0)}, t0 the interior minimum
/// of g located by bisection on g' inside [bracket_lo, bracket_hi].
double laplace_method(const std::function<double(double)>& f,
                      const std::function<double(double)>& g, double beta, double bracket_lo,
                      double bracket_hi);

/// Leading small-beta diagonal term e^{-beta V(x)} sqrt(M/(2 pi beta hbar^2)),
/// i.e. the Boltzmann factor over the normalized thermal width.
double high_temperature_leading(const Potential& spec, const PhysicalParams& params, double x,
                                double beta);

}  // namespace ltk
