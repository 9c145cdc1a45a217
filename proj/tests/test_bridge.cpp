#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "ltk/bridge.hpp"
#include "oracles.hpp"

using namespace ltk;

namespace {
const PhysicalParams params;
}

TEST_CASE("sample_bridge") {
  MCConfig cfg{1, 512, 42u, 1.7};
  SUBCASE("endpoints pinned bit-exactly for every sample") {
    for (long i = 0; i < 200; ++i) {
      const auto p = sample_bridge(params, -0.311, 0.777, cfg, i);
      CHECK(p.positions.front() == -0.311);
      CHECK(p.positions.back() == 0.777);
    }
  }
  SUBCASE("deterministic in (seed, path_index)") {
    const auto a = sample_bridge(params, 0.0, 1.0, cfg, 7);
    const auto b = sample_bridge(params, 0.0, 1.0, cfg, 7);
    CHECK(a.positions == b.positions);
    const auto c = sample_bridge(params, 0.0, 1.0, cfg, 8);
    CHECK(a.positions != c.positions);
  }
  SUBCASE("midpoint variance beta hbar^2/(4M) and linear mean") {
    MCConfig c2{1, 256, 9u, 2.0};
    const long n = 40000;
    const int mid = c2.n_slices / 2;
    double sum = 0.0, sumsq = 0.0;
    for (long i = 0; i < n; ++i) {
      const double v = sample_bridge(params, -1.0, 1.0, c2, i).positions[mid];
      sum += v;
      sumsq += v * v;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    const double want_var = c2.beta / 4.0;  // t(1 - t/T) hbar/M at t = T/2
    // 3 sigma bands: sd of sample variance ~ var sqrt(2/n); of mean ~ sd/sqrt(n)
    CHECK(std::abs(mean - 0.0) <= 3.0 * std::sqrt(want_var / n));
    CHECK(std::abs(var - want_var) <= 3.0 * want_var * std::sqrt(2.0 / n));
  }
}

TEST_CASE("local_time_profile") {
  SUBCASE("degenerate constant path fills a single bin") {
    BridgePath path;
    path.x_a = path.x_b = 0.4;
    path.eps = 2.0 / 128;
    path.positions.assign(129, 0.4);
    const auto prof = local_time_profile(path, 0.1);
    long nonzero = 0;
    for (std::size_t j = 0; j < prof.counts.size(); ++j)
      if (prof.counts[j]) {
        ++nonzero;
        CHECK(prof.value(j) == doctest::Approx(2.0 / 0.1));  // beta hbar / bin width
      }
    CHECK(nonzero == 1);
  }
  MCConfig cfg{1, 4096, 5u, 1.0};
  SUBCASE("normalization sum L dx = beta hbar holds bit-exactly") {
    for (long i = 0; i < 500; ++i) {
      const auto prof = local_time_profile(sample_bridge(params, 0.0, 0.5, cfg, i), 0.03125);
      CHECK(prof.total_time() == 1.0);
    }
  }
  SUBCASE("nonnegative, compactly supported") {
    const auto path = sample_bridge(params, 0.0, 0.5, cfg, 3);
    const auto prof = local_time_profile(path, 0.05);
    double pmin = 1e300, pmax = -1e300;
    for (double x : path.positions) {
      pmin = std::min(pmin, x);
      pmax = std::max(pmax, x);
    }
    CHECK(prof.lower_edge(0) >= pmin - 0.05);
    CHECK(prof.lower_edge(prof.counts.size()) <= pmax + 0.05);
    CHECK(prof.value_at(pmax + 1.0) == 0.0);
    CHECK(prof.value_at(pmin - 1.0) == 0.0);
  }
}

TEST_CASE("potential_via_localtime") {
  MCConfig cfg{1, 4096, 11u, 1.0};
  const auto path = sample_bridge(params, 0.0, 0.3, cfg, 0);
  SUBCASE("free potential gives zero exactly") {
    const auto prof = local_time_profile(path, 0.05);
    CHECK(potential_via_localtime(prof, FreePotential{}, params) == 0.0);
  }
  SUBCASE("constant dyadic potential gives c * beta hbar exactly") {
    const auto prof = local_time_profile(path, 0.25);
    TabulatedPotential flat{{-100.0, 100.0}, {0.75, 0.75}};
    CHECK(potential_via_localtime(prof, flat, params) == 0.75);
  }
  SUBCASE("bin refinement converges linearly to the time-domain sum") {
    double time_sum = 0.0;
    for (int k = 0; k < path.n_slices(); ++k) {
      const double x = path.positions[k];
      time_sum += 0.5 * x * x;
    }
    time_sum *= path.eps;
    double prev_err = 1e300;
    for (double w : {0.2, 0.1, 0.05, 0.025}) {
      const auto prof = local_time_profile(path, w);
      const double err =
          std::abs(potential_via_localtime(prof, HarmonicPotential{1.0}, params) - time_sum);
      CHECK(err < prev_err);
      prev_err = err;
    }
  }
}

TEST_CASE("feynman_kac") {
  SUBCASE("free estimator has zero variance and the exact mean") {
    MCConfig cfg{2000, 128, 31u, 1.0};
    const auto est = feynman_kac(FreePotential{}, params, {0.0, 0.0, 1.0}, cfg);
    CHECK(est.mean == doctest::Approx(oracles::kInvSqrt2Pi).epsilon(1e-15));
    CHECK(est.std_error == 0.0);
    CHECK_FALSE(est.variance_warning);
  }
  SUBCASE("harmonic diagonal and off-diagonal against the closed form") {
    MCConfig cfg{40000, 1024, 77u, 1.0};
    const auto d = feynman_kac(HarmonicPotential{1.0}, params, {0.0, 0.0, 1.0}, cfg);
    CHECK(std::abs(d.mean - oracles::mehler(0.0, 0.0, 1.0)) <= 3.0 * d.std_error);
    const auto o = feynman_kac(HarmonicPotential{1.0}, params, {0.0, 1.0, 1.0}, cfg);
    CHECK(std::abs(o.mean - oracles::mehler(0.0, 1.0, 1.0)) <= 3.0 * o.std_error);
  }
  SUBCASE("slicing bias shrinks ~1/n^2 for a linear potential") {
    // V = x: Gaussian integration gives rho(0,0,beta) = free * e^{beta^3/24}
    // exactly, and the midpoint-rule bias sits only in the variance term.
    TabulatedPotential ramp{{-100.0, 100.0}, {-100.0, 100.0}};
    const double beta = 2.0;
    const double want = oracles::free_kernel(0.0, 0.0, beta) * std::exp(beta * beta * beta / 24.0);
    double bias[2];
    int idx = 0;
    for (int slices : {4, 8}) {
      MCConfig cfg{600000, slices, 123u, beta};
      bias[idx++] = feynman_kac(ramp, params, {0.0, 0.0, beta}, cfg).mean - want;
    }
    // quartering expected; shared seeds cancel most sampling noise in the ratio
    CHECK(std::abs(bias[1]) < 0.45 * std::abs(bias[0]));
  }
}

TEST_CASE("functional_expectation") {
  MCConfig cfg{5000, 256, 99u, 1.0};
  SUBCASE("F = 1 reproduces feynman_kac bitwise") {
    const auto a = feynman_kac(HarmonicPotential{1.0}, params, {0.0, 0.5, 1.0}, cfg);
    const auto b = functional_expectation([](const LocalTimeProfile&) { return 1.0; },
                                          HarmonicPotential{1.0}, params, {0.0, 0.5, 1.0}, cfg,
                                          0.05);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
  }
  SUBCASE("F = int L V dX vanishes identically for the free weight") {
    const auto est = functional_expectation(
        [](const LocalTimeProfile& prof) {
          return potential_via_localtime(prof, FreePotential{}, params);
        },
        FreePotential{}, params, {0.0, 0.0, 1.0}, cfg, 0.05);
    CHECK(est.mean == 0.0);
    CHECK(est.std_error == 0.0);
  }
}

TEST_CASE("onepoint_histogram") {
  const double beta = 1.0;
  SUBCASE("free conditional law: KS against the Rayleigh form") {
    MCConfig cfg{30000, 2048, 2718u, beta};
    const auto ls = sample_local_times(params, beta, 0.0, 0.0, 0.0, cfg);
    const double ks =
        oracles::ks_statistic(ls, [](double l) { return 1.0 - std::exp(-0.5 * l * l); });
    CHECK(ks < 0.012);  // noise floor ~0.008 at 3e4 samples
  }
  SUBCASE("joint histogram integrates to the bridge density within 2%") {
    MCConfig cfg{30000, 1024, 555u, beta};
    const auto hist = onepoint_histogram(FreePotential{}, params, beta, 0.0, cfg, 0.05);
    double total = 0.0;
    for (double j : hist.joint) total += j * hist.bin_width_L;
    CHECK(total == doctest::Approx(oracles::kInvSqrt2Pi).epsilon(0.02));
    CHECK_FALSE(hist.binning_warning);
  }
  SUBCASE("binned-profile estimator sharpens as slices double") {
    auto ks_at = [&](int slices) {
      MCConfig cfg{30000, slices, 1234u, beta};
      const auto hist = onepoint_histogram(FreePotential{}, params, beta, 0.0, cfg, 0.02,
                                           LocalTimeEstimator::BinnedProfile);
      // KS between the cumulative conditional histogram and the Rayleigh law
      double ks = 0.0, cum = 0.0;
      for (std::size_t j = 0; j < hist.conditional.size(); ++j) {
        cum += hist.conditional[j] * hist.bin_width_L;
        const double edge = (j + 1) * hist.bin_width_L;
        ks = std::max(ks, std::abs(cum - (1.0 - std::exp(-0.5 * edge * edge))));
      }
      return ks;
    };
    const double coarse = ks_at(1024);
    const double fine = ks_at(4096);
    CHECK(fine < coarse);
  }
  SUBCASE("top-bin overflow warning") {
    MCConfig cfg{2000, 512, 5u, beta};
    const auto hist = onepoint_histogram(FreePotential{}, params, beta, 0.0, cfg, 0.05,
                                         LocalTimeEstimator::ExactConditional);
    CHECK_FALSE(hist.binning_warning);
    // cap the range below the Rayleigh bulk: mass spills into the top bin
    const auto cramped = onepoint_histogram(FreePotential{}, params, beta, 0.0, cfg, 0.05,
                                            LocalTimeEstimator::ExactConditional, 0.5);
    CHECK(cramped.binning_warning);
  }
}

TEST_CASE("reproducibility across thread counts") {
  MCConfig cfg{6000, 256, 31337u, 1.0};
  const char* saved = std::getenv("LTK_THREADS");
  const std::string saved_value = saved ? saved : "";

  setenv("LTK_THREADS", "1", 1);
  const auto serial = feynman_kac(HarmonicPotential{1.0}, params, {0.0, 0.4, 1.0}, cfg);
  const auto ls1 = sample_local_times(params, 1.0, 0.0, 0.0, 0.0, cfg);
  setenv("LTK_THREADS", "4", 1);
  const auto threaded = feynman_kac(HarmonicPotential{1.0}, params, {0.0, 0.4, 1.0}, cfg);
  const auto ls4 = sample_local_times(params, 1.0, 0.0, 0.0, 0.0, cfg);
  if (saved) setenv("LTK_THREADS", saved_value.c_str(), 1);
  else unsetenv("LTK_THREADS");

  CHECK(serial.mean == threaded.mean);
  CHECK(serial.std_error == threaded.std_error);
  CHECK(ls1 == ls4);
}
