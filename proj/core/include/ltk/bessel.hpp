#pragma once

namespace ltk {

/// Modified Bessel function I_nu(x) for nu >= -1, 0 <= x <= 700.
/// Power series below x = 50, asymptotic expansion above; relative accuracy
/// ~1e-13 on [1e-8, 50]. Throws OverflowError past the x = 700 guard.
double bessel_i(double nu, double x);

/// e^{-x} I_nu(x); no overflow guard needed, valid for any x >= 0.
double bessel_i_scaled(double nu, double x);

/// Modified Bessel function K_p(x) for real p, x > 0, computed from the
/// integral K_p(x) = int_0^inf e^{-x cosh t} cosh(p t) dt by the symmetric
/// trapezoidal rule, which converges exponentially for this integrand. The
/// step is halved until two rounds agree to machine precision.
double bessel_k(double p, double x);

/// e^{+x} K_p(x), stable for large x.
double bessel_k_scaled(double p, double x);

/// psi_p(x) = e^x sqrt(2x/pi) K_p(x), the sliced-measure companion of the
/// centrifugal weight. Equals e^x sqrt(pi x/2) [I_{-p}(x) - I_p(x)]/sin(pi p)
/// for non-integer p; defined here for x > 0 only.
double psi_p(double p, double x);

}  // namespace ltk
