#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ltk/bridge.hpp"
#include "ltk/potential.hpp"
#include "ltk/types.hpp"

namespace ltk {

enum class Method { Spectral, Heat, SturmLaplace, Radial, Mc };

Method method_from_string(const std::string& s);
std::string method_name(Method m);

enum class OutputFormat { Csv, Json };

/// Cartesian sweep of query points: every (x_a, x_b, beta) combination.
struct QuerySpec {
  std::vector<double> x_a{0.0};
  std::vector<double> x_b{0.0};
  std::vector<double> beta{1.0};
};

/// One fully-resolved run: a single config file drives everything, flags may
/// override scalar fields only.
struct RunConfig {
  Potential potential = FreePotential{};
  PhysicalParams physics;
  std::optional<GridSpec> grid;  // nullopt -> auto_box from the query sweep
  Method method = Method::Spectral;
  QuerySpec query;
  MCConfig mc;
  bool mc_seed_set = false;
  int laplace_order = 14;
  int heat_steps = 1000;
  std::string output_path;  // empty -> stdout
  OutputFormat output_format = OutputFormat::Csv;

  void validate() const;
  /// The grid to use: explicit, or auto_box over the sweep points.
  GridSpec resolve_grid() const;
};

/// Key-value text with nested [section] headers, '#'/';' comments. Lists are
/// comma-separated; "start:stop:count" expands to a linear sweep.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

std::vector<double> parse_number_list(const std::string& text);

struct RhoRow {
  double x_a, x_b, beta, value;
  std::optional<double> std_error;
};

/// Dispatch to the selected representation and evaluate the whole sweep in
/// input order.
std::vector<RhoRow> compute_rho(const RunConfig& cfg);

}  // namespace ltk
