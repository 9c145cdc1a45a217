#include "ltk/potential.hpp"

#include <algorithm>
#include <cmath>

namespace ltk {

double eval_family(const TabulatedPotential& p, double x, const PhysicalParams&) {
  const auto& nodes = p.nodes;
  if (x <= nodes.front()) return p.values.front();
  if (x >= nodes.back()) return p.values.back();
  const auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - nodes.begin());
  const double t = (x - nodes[j - 1]) / (nodes[j] - nodes[j - 1]);
  return p.values[j - 1] + t * (p.values[j] - p.values[j - 1]);
}

double eval_potential(const Potential& spec, double x, const PhysicalParams& params) {
  return std::visit([&](const auto& p) -> double { return eval_family(p, x, params); }, spec);
}

void validate_potential(const Potential& spec) {
  std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, HarmonicPotential>) {
          if (!(p.omega > 0.0)) throw ConfigError("harmonic omega must be positive");
        } else if constexpr (std::is_same_v<T, DoubleWellPotential>) {
          if (!(p.barrier > 0.0)) throw ConfigError("double-well barrier must be positive");
          if (!(p.minima_separation > 0.0))
            throw ConfigError("double-well minima_separation must be positive");
        } else if constexpr (std::is_same_v<T, TabulatedPotential>) {
          if (p.nodes.size() < 2 || p.nodes.size() != p.values.size())
            throw ConfigError("tabulated potential needs matching nodes/values, at least two");
          for (std::size_t i = 1; i < p.nodes.size(); ++i)
            if (!(p.nodes[i] > p.nodes[i - 1]))
              throw ConfigError("tabulated nodes must be strictly ascending");
          for (double v : p.values)
            if (!std::isfinite(v)) throw ConfigError("tabulated values must be finite");
        }
      },
      spec);
}

std::string potential_name(const Potential& spec) {
  return std::visit(
      [](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, FreePotential>) return "free";
        else if constexpr (std::is_same_v<T, HarmonicPotential>) return "harmonic";
        else if constexpr (std::is_same_v<T, DoubleWellPotential>) return "double-well";
        else return "tabulated";
      },
      spec);
}

double thermal_wavelength(const PhysicalParams& params, double beta) {
  params.validate();
  if (!(beta > 0.0)) throw ConfigError("thermal_wavelength requires beta > 0");
  return std::sqrt(beta * params.hbar * params.hbar / params.mass);
}

GridSpec auto_box(const Potential& spec, const PhysicalParams& params, double beta_max,
                  std::span<const double> centers) {
  validate_potential(spec);
  if (centers.empty()) throw ConfigError("auto_box needs at least one center");
  const double lambda = thermal_wavelength(params, beta_max);
  const double lo = *std::min_element(centers.begin(), centers.end());
  const double hi = *std::max_element(centers.begin(), centers.end());
  GridSpec g;
  g.x_minus = lo - 10.0 * lambda;
  g.x_plus = hi + 10.0 * lambda;
  const double target = lambda / 50.0;
  long n = static_cast<long>(std::ceil((g.x_plus - g.x_minus) / target)) + 1;
  if (n > 4'000'000) throw ConfigError("auto_box grid would exceed 4e6 points; set the grid manually");
  g.n_points = static_cast<int>(std::max<long>(n, 3));
  g.validate();
  return g;
}

}  // namespace ltk
