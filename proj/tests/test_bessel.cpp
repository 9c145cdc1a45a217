#include <doctest.h>

#include <cmath>

#include "ltk/bessel.hpp"
#include "ltk/errors.hpp"
#include "ltk/validate.hpp"
#include "oracles.hpp"

using namespace ltk;

namespace {
// reference values computed with 25-digit arithmetic
struct IRef { double nu, x, value, scaled; };
constexpr IRef kIRefs[] = {
    {-0.5, 0.3, 1.52277727073192322, 1.12810114819818594},
    {0.0, 1e-06, 1.00000000000025, 0.99999900000075},
    {1.3, 7.2, 178.789674625442633, 0.133481833759639543},
    {0.0, 30.0, 781672297823.97749, 0.0731459464822372939},
    {2.0, 49.0, 1.04580901986583696e+20, 0.0548305711687079265},
    {0.25, 120.0, 4.75333025761070871e+50, 0.0364468635935332469},
    {-1.0, 2.5, 2.51671624528869844, 0.206584649531266554},
    {3.0, 650.0, 3.04047363405446954e+280, 0.0155427551184272081},
};
struct KRef { double p, x, value, scaled; };
constexpr KRef kKRefs[] = {
    {0.0, 0.1, 2.42706902470201656, 2.68232610226289434},
    {0.25, 2.0, 0.115378276840856757, 0.852536560175041615},
    {1.3, 5.0, 0.0043070788241686095, 0.639227174798674401},
    {0.7, 20.0, 5.81030388328016069e-10, 0.281895721892188244},
    {0.0, 100.0, 4.65662822917590202e-45, 0.125175621659126579},
};
}  // namespace

TEST_CASE("bessel_i") {
  CHECK(bessel_i(0.0, 0.0) == 1.0);
  CHECK(bessel_i(0.5, 1.0) == doctest::Approx(oracles::kI_half_1).epsilon(1e-12));

  SUBCASE("reference sweep across series and asymptotic branches") {
    for (const auto& r : kIRefs) {
      if (r.value < 1e250)
        CHECK(bessel_i(r.nu, r.x) == doctest::Approx(r.value).epsilon(1e-12));
      CHECK(bessel_i_scaled(r.nu, r.x) == doctest::Approx(r.scaled).epsilon(1e-12));
    }
  }
  SUBCASE("small-argument law I_{D/2-1}(z) ~ (z/2)^{D/2-1}/Gamma(D/2) at D = 1") {
    const double z = 1e-6, nu = -0.5;
    const double law = std::pow(0.5 * z, nu) / std::tgamma(0.5);
    CHECK(bessel_i(nu, z) == doctest::Approx(law).epsilon(1e-8));
  }
  SUBCASE("overflow guard past x = 700") {
    CHECK_THROWS_AS(bessel_i(0.0, 701.0), OverflowError);
    CHECK_NOTHROW(bessel_i_scaled(0.0, 5000.0));
  }
  CHECK_THROWS_AS(bessel_i(-1.5, 1.0), ConfigError);
}

TEST_CASE("bessel_k against references") {
  for (const auto& r : kKRefs) {
    CHECK(bessel_k(r.p, r.x) == doctest::Approx(r.value).epsilon(1e-12));
    CHECK(bessel_k_scaled(r.p, r.x) == doctest::Approx(r.scaled).epsilon(1e-12));
  }
  CHECK(bessel_k(-0.25, 2.0) == doctest::Approx(kKRefs[1].value).epsilon(1e-13));  // K_{-p} = K_p
}

TEST_CASE("psi_p") {
  SUBCASE("psi_{1/2} is identically one") {
    for (double x : {1e-3, 0.1, 1.0, 10.0, 300.0})
      CHECK(psi_p(0.5, x) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("reference values") {
    for (const auto& r : oracles::kPsiRefs)
      CHECK(psi_p(r.p, r.x) == doctest::Approx(r.value).epsilon(1e-12));
  }
  SUBCASE("K-form equals I-form at x = 2 (double precision suffices there)") {
    const double p = 0.25, x = 2.0;
    const double iform = std::exp(x) * std::sqrt(M_PI * x / 2.0) *
                         (bessel_i(-p, x) - bessel_i(p, x)) / std::sin(M_PI * p);
    CHECK(psi_p(p, x) == doctest::Approx(iform).epsilon(1e-10));
  }
  SUBCASE("K-form equals I-form across [0.1, 20] via the double-double oracle") {
    for (double p : {0.1, 0.25, 0.4})
      for (double x : {0.1, 0.9, 3.7, 11.0, 20.0})
        CHECK(psi_p(p, x) == doctest::Approx(psi_p_iform_oracle(p, x)).epsilon(1e-10));
  }
  SUBCASE("large-x law psi_p ~ 1 + (4p^2 - 1)/(8x), residual O(1/x^2)") {
    const double x = 50.0;
    for (double p : {0.1, 0.25, 0.4}) {
      const double lead = 1.0 + (4.0 * p * p - 1.0) / (8.0 * x);
      const double resid = std::abs(psi_p(p, x) - lead);
      CHECK(resid <= 5.0 / (x * x));  // next coefficient is O(1)
    }
  }
  CHECK_THROWS_AS(psi_p(0.25, 0.0), ConfigError);
  CHECK_THROWS_AS(psi_p(0.25, -1.0), ConfigError);
}

TEST_CASE("double-double oracle agrees with 25-digit references") {
  CHECK(psi_p_iform_oracle(0.25, 2.0) ==
        doctest::Approx(0.9619844936887868).epsilon(1e-14));
  CHECK(psi_p_iform_oracle(0.1, 20.0) ==
        doctest::Approx(0.9941598720965666).epsilon(1e-13));
  CHECK_THROWS_AS(psi_p_iform_oracle(0.3, 1.0), ConfigError);
}
