#pragma once

#include <vector>

#include "ltk/potential.hpp"
#include "ltk/types.hpp"

namespace ltk {

/// Second-difference discretization of H = p^2/2M + V on the interior nodes
/// of a Dirichlet box. Symmetric tridiagonal: the off-diagonal is the single
/// constant -hbar^2/(2 M h^2).
struct DiscreteHamiltonian {
  GridSpec grid;
  PhysicalParams params;
  std::vector<double> diagonal;  // size grid.n_points - 2
  double off_diagonal = 0.0;

  int interior_points() const { return static_cast<int>(diagonal.size()); }
};

/// Lowest eigenpairs of a DiscreteHamiltonian. Eigenfunctions are stored on
/// the full grid (zeros at the box ends), normalized so sum psi^2 h = 1, and
/// sign-fixed so the first interior component is positive.
struct SpectralDecomposition {
  GridSpec grid;
  std::vector<double> energies;                  // ascending
  std::vector<std::vector<double>> eigenfunctions;  // [state][grid node]

  int n_states() const { return static_cast<int>(energies.size()); }
  /// psi_n(x) by linear interpolation between grid nodes.
  double eigenfunction_at(int n, double x) const;
};

/// Tail diagnostics for truncated spectral sums.
struct SpectralTail {
  double bound = 0.0;      // e^{-beta E_last}
  bool warn = false;       // bound > 1e-12 * |value|
};

DiscreteHamiltonian discretize(const Potential& spec, const GridSpec& grid,
                               const PhysicalParams& params);

/// Lowest n_states eigenpairs by bisection (Sturm sequence counts) plus
/// inverse iteration. Throws ConvergenceError naming the failing index.
SpectralDecomposition eigendecompose(const DiscreteHamiltonian& H, int n_states);

/// sum_n e^{-beta E_n} psi_n(x_a) psi_n(x_b) over the available states.
double bloch_spectral(const SpectralDecomposition& dec, const BlochQuery& q,
                      SpectralTail* tail = nullptr);

/// sum_n e^{-beta E_n}.
double partition_function(const SpectralDecomposition& dec, double beta,
                          SpectralTail* tail = nullptr);

/// Crank-Nicolson imaginary-time evolution of a discrete delta (height 1/h at
/// the node nearest x_a) through beta. Returns the column rho(x_a, . , beta)
/// on the full grid. Second-order in both h and beta/n_steps.
std::vector<double> heat_propagate(const DiscreteHamiltonian& H, double x_a, double beta,
                                   int n_steps);

}  // namespace ltk
