#include <doctest.h>

#include <cmath>
#include <vector>

#include "ltk/bessel.hpp"
#include "ltk/bridge.hpp"
#include "ltk/quadrature.hpp"
#include "ltk/radial.hpp"
#include "ltk/sturm.hpp"
#include "oracles.hpp"

using namespace ltk;

namespace {
const PhysicalParams params;

/// Short-x sliced composition of the radial kernel on an eta grid: the
/// independent lattice oracle for the closed form. Uses the scaled Bessel and
/// explicit exponents so large slice arguments stay finite.
double sliced_radial_kernel(double E, double x1, double x2, double e1, double e2, double D,
                            int n_slices, int n_eta, double eta_max) {
  const GridSpec fine{x1, x2, 257};
  const double dx = (x2 - x1) / n_slices;
  std::vector<double> eta(n_eta), psi(n_eta);
  const double de = eta_max / n_eta;
  for (int i = 0; i < n_eta; ++i) eta[i] = (i + 1) * de;

  auto slice = [&](double a, double b, double ea, double eb) {
    RadialKernelArgs args{ea, eb, a, b, D, E};
    return radial_ho_kernel(FreePotential{}, params, args, fine);
  };
  for (int i = 0; i < n_eta; ++i) psi[i] = slice(x1, x1 + dx, e1, eta[i]);
  std::vector<double> next(n_eta);
  for (int j = 1; j < n_slices - 1; ++j) {
    const double a = x1 + j * dx, b = a + dx;
    for (int i = 0; i < n_eta; ++i) {
      double acc = 0.0;
      for (int k = 0; k < n_eta; ++k) acc += slice(a, b, eta[k], eta[i]) * psi[k] * de;
      next[i] = acc;
    }
    psi.swap(next);
  }
  double acc = 0.0;
  for (int k = 0; k < n_eta; ++k)
    acc += slice(x2 - dx, x2, eta[k], e2) * psi[k] * de;
  return acc;
}

}  // namespace

TEST_CASE("radial_ho_kernel") {
  const GridSpec grid{-2.0, 2.0, 801};
  const RadialKernelArgs args{1.0, 1.0, 0.0, 1.0, 2.0, 0.5};
  const double closed = radial_ho_kernel(FreePotential{}, params, args, grid);

  SUBCASE("free value at D = 2 against the analytic evaluation") {
    // sinh solutions: mu sqrt(e1 e2)/sinh(1) I_0(1/sinh 1) e^{-coth 1}
    const double ref = (1.0 / oracles::kSinh1) * bessel_i(0.0, 1.0 / oracles::kSinh1) *
                       std::exp(-std::cosh(1.0) / oracles::kSinh1);
    CHECK(closed == doctest::Approx(ref).epsilon(1e-10));
    CHECK(closed == doctest::Approx(0.2722463878).epsilon(1e-6));
  }
  SUBCASE("sliced lattice path-integral oracle reproduces the closed form") {
    const double lattice = sliced_radial_kernel(0.5, 0.0, 1.0, 1.0, 1.0, 2.0, 4, 500, 10.0);
    CHECK(lattice == doctest::Approx(closed).epsilon(1e-3));
  }
  SUBCASE("Chapman-Kolmogorov composition at an interior slice") {
    const double mid = 0.45;
    const double composed = gl_integrate(
        [&](double e) {
          RadialKernelArgs left{1.0, e, 0.0, mid, 2.0, 0.5};
          RadialKernelArgs right{e, 1.0, mid, 1.0, 2.0, 0.5};
          return radial_ho_kernel(FreePotential{}, params, left, grid) *
                 radial_ho_kernel(FreePotential{}, params, right, grid);
        },
        0.0, 12.0, 400);
    CHECK(composed == doctest::Approx(closed).epsilon(1e-6));
  }
  SUBCASE("prefactor endpoint identity F(x2) = G(x1)") {
    const auto f = solve_cauchy(HarmonicPotential{1.0}, params, 0.5, 0.0, 0.0, 1.0, grid);
    const auto g = solve_cauchy(HarmonicPotential{1.0}, params, 0.5, 1.0, 0.0, -1.0, grid);
    CHECK(f.value(1.0) == doctest::Approx(g.value(0.0)).epsilon(1e-10));
  }
}

TEST_CASE("boundary_limit") {
  const GridSpec grid{-30.0, 30.0, 6001};
  const auto f1 = solve_cauchy(FreePotential{}, params, 0.5, grid.x_minus, 0.0, 1.0, grid);
  SUBCASE("free left factor tends to e^{-1/2} in the wide box") {
    // F1'/F1 = coth(x - X-) -> 1
    CHECK(boundary_limit(BoundarySide::Left, f1, 1.0, 0.0, params) ==
          doctest::Approx(oracles::kExpMHalf).epsilon(1e-10));
  }
  SUBCASE("value * sqrt(eta) is a pure Gaussian in eta") {
    const double ld = f1.log_derivative(0.0);
    for (double eta : {0.3, 0.9, 1.7}) {
      const double v = boundary_limit(BoundarySide::Left, f1, eta, 0.0, params);
      CHECK(v * std::sqrt(eta) == doctest::Approx(std::exp(-0.5 * ld * eta * eta)).epsilon(1e-12));
    }
  }
  SUBCASE("left and right factors multiply to the Laplace-picture integrand") {
    const auto g3 = solve_cauchy(FreePotential{}, params, 0.5, grid.x_plus, 0.0, -1.0, grid);
    for (double eta : {0.5, 1.0}) {
      // (1/eta) e^{-(mu/2)(F'/F - G'/G) eta^2} = ptilde(L = hbar eta^2; E)/eta
      const double prod = boundary_limit(BoundarySide::Left, f1, eta, 0.0, params) *
                          boundary_limit(BoundarySide::Right, g3, eta, 0.0, params);
      const double L = eta * eta;  // hbar = 1
      const double ptilde = localtime_onepoint_laplace(FreePotential{}, params, 0.5, L, 0.0, grid);
      CHECK(prod * eta == doctest::Approx(ptilde).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(boundary_limit(BoundarySide::Left, f1, 0.0, 0.0, params), ConfigError);
}

TEST_CASE("offdiag_green_via_radial") {
  SUBCASE("free value e^{-1}") {
    const GridSpec grid{-14.0, 14.0, 5601};
    const double v = offdiag_green_via_radial(FreePotential{}, params, 0.5, 0.0, 1.0, grid);
    CHECK(v == doctest::Approx(oracles::kExpM1).epsilon(1e-7));
    CHECK(v == doctest::Approx(
                   green_function(FreePotential{}, params, 0.5, 0.0, 1.0, grid).value)
                   .epsilon(1e-7));
  }
  SUBCASE("harmonic point matches green_function to 1e-6") {
    const GridSpec grid{-12.0, 12.0, 4801};
    const double v = offdiag_green_via_radial(HarmonicPotential{1.0}, params, 1.0, -0.3, 0.5, grid);
    const double g = green_function(HarmonicPotential{1.0}, params, 1.0, -0.3, 0.5, grid).value;
    CHECK(v == doctest::Approx(g).epsilon(1e-6));
  }
  SUBCASE("inner Bessel-Gauss reduction: a = 2, b = 1") {
    const double got = gl_integrate(
        [&](double z) { return z * bessel_i_scaled(0.0, z) * std::exp(z - z * z); }, 0.0, 40.0,
        400);
    CHECK(got == doctest::Approx(oracles::kGaussBessel_a2b1).epsilon(1e-12));
  }
  SUBCASE("requires x_a < x_b") {
    const GridSpec grid{-10.0, 10.0, 1001};
    CHECK_THROWS_AS(offdiag_green_via_radial(FreePotential{}, params, 0.5, 1.0, 0.0, grid),
                    ConfigError);
  }
}

TEST_CASE("angular_momentum_scaling") {
  const GridSpec grid{-5.0, 5.0, 2001};
  std::vector<double> sweep;
  for (int i = 0; i < 6; ++i) sweep.push_back(1e-6 * std::pow(10.0, i / 5.0));
  CHECK(angular_momentum_scaling(FreePotential{}, params, 0.5, 0, sweep, grid) ==
        doctest::Approx(0.0).epsilon(0.01));
  CHECK(angular_momentum_scaling(FreePotential{}, params, 0.5, 1, sweep, grid) ==
        doctest::Approx(1.0).epsilon(0.01));
  CHECK(angular_momentum_scaling(FreePotential{}, params, 0.5, 2, sweep, grid) ==
        doctest::Approx(2.0).epsilon(0.01));

  SUBCASE("sweep outside the small-argument regime is rejected") {
    std::vector<double> big{10.0, 20.0, 40.0};
    CHECK_THROWS_AS(angular_momentum_scaling(FreePotential{}, params, 0.5, 1, big, grid),
                    FitError);
  }
}

TEST_CASE("localtime one-point laws") {
  const GridSpec grid{-12.5, 12.5, 2501};
  SUBCASE("Laplace picture: free particle") {
    CHECK(localtime_onepoint_laplace(FreePotential{}, params, 0.5, 1.0, 0.0, grid) ==
          doctest::Approx(oracles::kExpM1).epsilon(1e-8));
    CHECK(localtime_onepoint_laplace(HarmonicPotential{1.0}, params, 0.7, 0.0, 0.3, grid) == 1.0);
  }
  SUBCASE("joint density: free closed form") {
    // Gaver-Stehfest order 14 truncation on this pair measures ~5e-4
    CHECK(localtime_onepoint_density(FreePotential{}, params, 1.0, 1.0, 0.0, grid) ==
          doctest::Approx(oracles::kLTfree11).epsilon(2e-3));
    // at L = 0 the transform is identically 1 and the inversion collapses to
    // the roundoff of the zero-sum weight table
    CHECK(std::abs(localtime_onepoint_density(FreePotential{}, params, 1.0, 0.0, 0.0, grid)) <=
          1e-6);
  }
  SUBCASE("joint density integrates to the bridge density") {
    const double total = gl_integrate_composite(
        [&](double L) {
          return localtime_onepoint_density(FreePotential{}, params, 1.0, L, 0.0, grid);
        },
        0.0, 12.0, 12, 24);
    CHECK(total == doctest::Approx(oracles::kInvSqrt2Pi).epsilon(1e-3));
  }
  SUBCASE("conditional density: values and normalization") {
    CHECK(localtime_conditional_density(params, 1.0, 1.0) ==
          doctest::Approx(oracles::kExpMHalf).epsilon(1e-14));
    const double total = adaptive_integrate(
        [&](double L) { return localtime_conditional_density(params, 1.0, L); }, 0.0, 30.0,
        1e-12);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    // mode at L* = sqrt(beta M)/hbar
    const double b4m = localtime_conditional_density(params, 4.0, 2.0);
    CHECK(b4m > localtime_conditional_density(params, 4.0, 1.9));
    CHECK(b4m > localtime_conditional_density(params, 4.0, 2.1));
  }
  SUBCASE("harmonic form is gated by the Monte Carlo histogram") {
    // the general-V Laplace form has no independent closed form; compare its
    // inversion against the weighted bridge histogram bin by bin
    const double beta = 1.0;
    MCConfig cfg{40000, 2048, 97531u, beta};
    const auto hist = onepoint_histogram(HarmonicPotential{1.0}, params, beta, 0.0, cfg, 0.25);
    const GridSpec hgrid{-9.0, 9.0, 1801};
    int checked = 0;
    for (std::size_t j = 1; j < hist.joint.size() && checked < 8; ++j) {
      if (hist.weights[j] < 400.0) continue;  // skip noisy bins
      const double L = hist.mid(j);
      const double closed =
          localtime_onepoint_density(HarmonicPotential{1.0}, params, beta, L, 0.0, hgrid);
      const double err = hist.joint_std_error(j, params, 0.0, 0.0, beta);
      // bin-averaged density vs midpoint value: allow 3 sigma + 2% shape bias
      CHECK(std::abs(hist.joint[j] - closed) <= 3.0 * err + 0.02 * closed);
      ++checked;
    }
    CHECK(checked >= 5);
  }
}

TEST_CASE("weight_factor_diagnostic") {
  const GridSpec grid{-1.0, 1.0, 401};
  std::vector<double> eta(grid.n_points);
  for (int i = 0; i < grid.n_points; ++i) {
    const double t = (grid.node(i) - grid.x_minus) / (grid.x_plus - grid.x_minus);
    eta[i] = std::sin(M_PI * t) + 1e-3;
  }
  const double w = weight_factor_diagnostic(eta, grid, params, -0.3, 0.4, 0.1, 1e-4, 1e-4);
  CHECK(std::isfinite(w));

  SUBCASE("no beta anywhere: the same profile gives the same weight") {
    // relabeling the underlying beta leaves every input unchanged
    CHECK(weight_factor_diagnostic(eta, grid, params, -0.3, 0.4, 0.1, 1e-4, 1e-4) == w);
  }
  SUBCASE("window dependence isolates the centrifugal switch") {
    // constant profile: only Delta(x) changes between two windows
    std::vector<double> flat(grid.n_points, 2.0);
    const double D = 0.1;
    const double wa = weight_factor_diagnostic(flat, grid, params, -0.5, 0.5, D, 1e-4, 1e-4);
    const double wb = weight_factor_diagnostic(flat, grid, params, -0.25, 0.25, D, 1e-4, 1e-4);
    // log W gains ((D-1)(D-3) - (-1))/(8 eta^2) per unit length moved out of
    // the window
    const double expected = ((D - 1.0) * (D - 3.0) + 1.0) / (8.0 * 4.0) * 0.5;
    CHECK(wa - wb == doctest::Approx(expected).epsilon(1e-6));
  }
  SUBCASE("interior zero raises SingularityError") {
    std::vector<double> bad = eta;
    bad[grid.n_points / 2] = 0.0;
    CHECK_THROWS_AS(weight_factor_diagnostic(bad, grid, params, -0.3, 0.4, 0.1, 1e-4, 1e-4),
                    SingularityError);
  }
}
