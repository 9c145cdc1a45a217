#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "ltk/errors.hpp"

namespace ltk {

/// Particle mass M and reduced Planck constant hbar. Defaults M = hbar = 1;
/// both stay configurable because every formula carries them explicitly.
struct PhysicalParams {
  double mass = 1.0;
  double hbar = 1.0;

  void validate() const {
    if (!(mass > 0.0) || !std::isfinite(mass)) throw ConfigError("mass must be positive");
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw ConfigError("hbar must be positive");
  }
};

/// Uniform grid on a Dirichlet box [x_minus, x_plus], endpoints included.
struct GridSpec {
  double x_minus = -10.0;
  double x_plus = 10.0;
  int n_points = 1001;

  void validate() const {
    if (!(x_minus < x_plus)) throw ConfigError("grid requires x_minus < x_plus");
    if (n_points < 3) throw ConfigError("grid requires n_points >= 3");
  }
  double spacing() const { return (x_plus - x_minus) / (n_points - 1); }
  double node(int i) const { return x_minus + i * spacing(); }
  /// Index of the grid node nearest to x.
  int nearest_node(double x) const {
    int i = static_cast<int>(std::lround((x - x_minus) / spacing()));
    if (i < 0) i = 0;
    if (i >= n_points) i = n_points - 1;
    return i;
  }
  bool contains(double x) const { return x >= x_minus && x <= x_plus; }
};

/// One evaluation request for the Bloch density matrix <x_b|e^{-beta H}|x_a>.
struct BlochQuery {
  double x_a = 0.0;
  double x_b = 0.0;
  double beta = 1.0;

  void validate() const {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("beta must be positive");
    if (!std::isfinite(x_a) || !std::isfinite(x_b)) throw ConfigError("query points must be finite");
  }
};

/// Monte Carlo sample mean with its standard error (sample std / sqrt(n)).
struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long n_paths = 0;
  std::uint64_t seed = 0;
  /// Set when std_error/|mean| exceeded 5%.
  bool variance_warning = false;
};

}  // namespace ltk
