#include <doctest.h>

#include <cmath>

#include "ltk/config.hpp"
#include "oracles.hpp"

using namespace ltk;

namespace {
const char* kHarmonicConfig = R"(
# cross-method harmonic profile
method = spectral

[potential]
family = harmonic
omega = 1.0

[physics]
mass = 1.0
hbar = 1.0

[grid]
auto = true

[query]
xa = 0.0
xb = 0.0
beta = 1.0

[mc]
paths = 4000
slices = 256
seed = 99
)";
}

TEST_CASE("config parsing") {
  const auto cfg = parse_config_text(kHarmonicConfig);
  CHECK(cfg.method == Method::Spectral);
  CHECK(std::holds_alternative<HarmonicPotential>(cfg.potential));
  CHECK(cfg.query.beta == std::vector<double>{1.0});
  CHECK(cfg.mc.seed == 99);
  CHECK_FALSE(cfg.grid.has_value());

  SUBCASE("number lists and sweeps") {
    CHECK(parse_number_list("1, 2.5, -3") == std::vector<double>{1.0, 2.5, -3.0});
    CHECK(parse_number_list("0:1:5") == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK_THROWS_AS(parse_number_list(""), ConfigError);
    CHECK_THROWS_AS(parse_number_list("1, two, 3"), ConfigError);
  }
  SUBCASE("errors carry ConfigError for the CLI exit-code contract") {
    CHECK_THROWS_AS(parse_config_text("method = warp\n[potential]\nfamily = free\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[potential]\nfamily = nosuch\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[potential]\nfamily = tabulated\nnodes = 1,0\nvalues = 0,0\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config_text("[potential]\nfamily = free\n[query]\nbeta = -1\n"),
                    ConfigError);
    CHECK_THROWS_AS(
        parse_config_text("method = mc\n[potential]\nfamily = free\n"),  // no seed
        ConfigError);
  }
}

TEST_CASE("compute_rho dispatch") {
  SUBCASE("spectral harmonic diagonal") {
    auto cfg = parse_config_text(kHarmonicConfig);
    const auto rows = compute_rho(cfg);
    REQUIRE(rows.size() == 1);
    // auto_box spacing lambda/50 leaves ~7e-5 relative discretization error
    CHECK(rows[0].value == doctest::Approx(oracles::kMehler00b1).epsilon(2e-4));
    CHECK_FALSE(rows[0].std_error.has_value());
  }
  SUBCASE("mc on the free particle: exact mean, zero error") {
    auto cfg = parse_config_text(kHarmonicConfig);
    cfg.method = Method::Mc;
    cfg.potential = FreePotential{};
    cfg.mc_seed_set = true;
    const auto rows = compute_rho(cfg);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].value == doctest::Approx(oracles::kInvSqrt2Pi).epsilon(1e-15));
    CHECK(rows[0].std_error.value() == 0.0);
  }
  SUBCASE("sturm-laplace free off-diagonal") {
    auto cfg = parse_config_text(kHarmonicConfig);
    cfg.method = Method::SturmLaplace;
    cfg.potential = FreePotential{};
    cfg.query.x_b = {1.0};
    const auto rows = compute_rho(cfg);
    // Gaver-Stehfest order-14 truncation on this pair measures 2.2e-5
    CHECK(rows[0].value == doctest::Approx(oracles::kLTfree11).epsilon(5e-5));
  }
  SUBCASE("heat route agrees with spectral") {
    auto cfg = parse_config_text(kHarmonicConfig);
    cfg.method = Method::Heat;
    cfg.heat_steps = 1500;
    const auto rows = compute_rho(cfg);
    CHECK(rows[0].value == doctest::Approx(oracles::kMehler00b1).epsilon(1e-4));
  }
  SUBCASE("radial route, diagonal and off-diagonal") {
    auto cfg = parse_config_text(kHarmonicConfig);
    cfg.method = Method::Radial;
    cfg.grid = GridSpec{-12.0, 12.0, 2401};
    const auto d = compute_rho(cfg);
    CHECK(d[0].value == doctest::Approx(oracles::kMehler00b1).epsilon(1e-3));
    cfg.query.x_b = {0.6};
    const auto o = compute_rho(cfg);
    CHECK(o[0].value == doctest::Approx(oracles::mehler(0.0, 0.6, 1.0)).epsilon(1e-3));
  }
  SUBCASE("sweeps preserve input order") {
    auto cfg = parse_config_text(kHarmonicConfig);
    cfg.query.beta = {0.5, 1.0};
    cfg.query.x_a = {0.0, 0.3};
    const auto rows = compute_rho(cfg);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].beta == 0.5);
    CHECK(rows[1].x_a == 0.3);
    CHECK(rows[2].beta == 1.0);
  }
}
