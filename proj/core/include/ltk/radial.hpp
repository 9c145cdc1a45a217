#pragma once

#include <span>

#include "ltk/potential.hpp"
#include "ltk/sturm.hpp"
#include "ltk/types.hpp"

namespace ltk {

/// Arguments of the radial-oscillator kernel (eta2 x2 | eta1 x1)_D: radial
/// amplitudes eta >= 0 at positions x1 < x2, continuous dimension D >= 0,
/// energy shift E. The amplitude carries eta^2(x) = L^x / hbar.
struct RadialKernelArgs {
  double eta1 = 0.0, eta2 = 0.0;
  double x1 = 0.0, x2 = 1.0;
  double dimension = 2.0;
  double energy = 0.0;
};

/// Closed form of the radial path integral with x-dependent frequency
/// V(x) + E:
///   (eta2 x2|eta1 x1)_D = mu sqrt(eta1 eta2)/G(x1) I_{D/2-1}(mu eta1 eta2 / G(x1))
///       * exp[-(mu/2)(F'(x2)/F(x2) eta2^2 - G'(x1)/G(x1) eta1^2)],
/// mu = hbar^2/M, F(x1)=0, F'(x1)=1, G(x2)=0, G'(x2)=-1. Uses the identity
/// F(x2) = G(x1). Evaluated with the scaled Bessel so large arguments do not
/// overflow.
double radial_ho_kernel(const Potential& spec, const PhysicalParams& params,
                        const RadialKernelArgs& args, const GridSpec& grid);

enum class BoundarySide { Left, Right };

/// The D -> 0, eta_pm -> 0 limit of the kernel attached to a box end, taken
/// analytically:
///   left : eta^{-1/2} exp(-(mu/2) (F1'(x)/F1(x)) eta^2)
///   right: eta^{-1/2} exp(+(mu/2) (G3'(x)/G3(x)) eta^2)
/// where sol is the matching box-end-anchored solution.
double boundary_limit(BoundarySide side, const CauchySolution& sol, double eta, double x,
                      const PhysicalParams& params);

/// The resolvent rho~(x_a, x_b, E), x_a < x_b, evaluated through the radial
/// representation after the boundary limits:
///   (2M/hbar^2) G2(x_a) int_0^inf deta_a deta_b eta_a eta_b I_0(eta_a eta_b)
///       exp[-F1(x_b)/(2F1(x_a)) eta_a^2 - G3(x_a)/(2G3(x_b)) eta_b^2],
/// by 2-D Gauss-Legendre quadrature (G2 solved directly, anchored at x_b).
/// Must reproduce green_function; the agreement is the numerically checkable
/// content of the equivalence with the Sturm-Liouville form.
double offdiag_green_via_radial(const Potential& spec, const PhysicalParams& params, double E,
                                double x_a, double x_b, const GridSpec& grid);

/// Fits the small-eta_- power of eta_-^{(1-D)/2} (eta_a x_a|eta_- X-)_{D+2l}
/// in the D -> 0 limit. The exponent is l: only the s-wave survives the
/// boundary limit. Throws FitError if the sweep leaves the small-argument
/// Bessel regime.
double angular_momentum_scaling(const Potential& spec, const PhysicalParams& params, double E,
                                int ell, std::span<const double> eta_minus_sweep,
                                const GridSpec& grid);

/// One-point local-time distribution in the Laplace picture at X = x_a = x_b:
///   p~(L;E) = exp[-(L hbar^2 / 2M)(F1'(X)/F1(X) - G3'(X)/G3(X))].
double localtime_onepoint_laplace(const Potential& spec, const PhysicalParams& params, double E,
                                  double L, double X, const GridSpec& grid);

/// Joint density p(L;beta): Gaver-Stehfest inversion of the Laplace form.
/// For the free particle at X = 0 this is L exp(-L^2 hbar^2/(2 beta M)) /
/// sqrt(2 pi M beta^3 / hbar^2).
double localtime_onepoint_density(const Potential& spec, const PhysicalParams& params, double beta,
                                  double L, double X, const GridSpec& grid, int laplace_order = 14);

/// Bridge-conditioned density for the free particle at the origin,
///   hbar^2 L exp(-L^2 hbar^2/(2 beta M)) / (beta M),
/// normalized to 1 over L in [0, inf).
double localtime_conditional_density(const PhysicalParams& params, double beta, double L);

/// log of the sliced weight factor W_D for a sampled amplitude profile:
///   log(2/D^2) + ((1-D)/2) log(eta_- eta_+) + log(eta(x_a) eta(x_b))
///   - int [ (hbar^2/2M) eta'^2 + (M/hbar^2) Delta(x)/(8 eta^2) ] dx,
/// Delta = -1 on [x_a, x_b] and (D-1)(D-3) elsewhere. Diagnostic only; the
/// result carries no beta dependence by construction.
double weight_factor_diagnostic(std::span<const double> eta_path, const GridSpec& grid,
                                const PhysicalParams& params, double x_a, double x_b, double D,
                                double eta_minus, double eta_plus);

}  // namespace ltk
