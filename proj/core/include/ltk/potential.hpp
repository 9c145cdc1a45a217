#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ltk/types.hpp"

namespace ltk {

struct FreePotential {};

/// V(x) = (1/2) M omega^2 x^2.
struct HarmonicPotential {
  double omega = 1.0;
};

/// Symmetric quartic well, V(x) = barrier * ((2x/d)^2 - 1)^2 with
/// d = minima_separation: height `barrier` at x = 0, zeros at x = +-d/2.
struct DoubleWellPotential {
  double barrier = 1.0;
  double minima_separation = 2.0;
};

/// Piecewise-linear interpolation through (nodes, values), constant
/// beyond the last node on each side.
struct TabulatedPotential {
  std::vector<double> nodes;
  std::vector<double> values;
};

using Potential =
    std::variant<FreePotential, HarmonicPotential, DoubleWellPotential, TabulatedPotential>;

/// Per-family evaluators; keeping them visible lets hot loops hoist the
/// variant dispatch out of per-slice code.
inline double eval_family(const FreePotential&, double, const PhysicalParams&) { return 0.0; }
inline double eval_family(const HarmonicPotential& p, double x, const PhysicalParams& params) {
  return 0.5 * params.mass * p.omega * p.omega * x * x;
}
inline double eval_family(const DoubleWellPotential& p, double x, const PhysicalParams&) {
  const double u = 2.0 * x / p.minima_separation;
  const double w = u * u - 1.0;
  return p.barrier * w * w;
}
double eval_family(const TabulatedPotential& p, double x, const PhysicalParams&);

/// V(x). Total on finite inputs; params supplies the mass in the harmonic
/// family (V = M omega^2 x^2 / 2), every other family ignores it.
double eval_potential(const Potential& spec, double x, const PhysicalParams& params = {});

void validate_potential(const Potential& spec);
std::string potential_name(const Potential& spec);

/// lambda = sqrt(beta hbar^2 / M), the length scale of path fluctuations.
double thermal_wavelength(const PhysicalParams& params, double beta);

/// Box holding all centers padded by 10 lambda(beta_max) per side, with
/// node spacing at most lambda(beta_max)/50. Keeps the Dirichlet-box
/// truncation error far below the 1e-6 tolerances used by the validation
/// suite for confining potentials.
GridSpec auto_box(const Potential& spec, const PhysicalParams& params, double beta_max,
                  std::span<const double> centers);

}  // namespace ltk
