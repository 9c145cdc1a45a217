#include "ltk/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ltk/laplace.hpp"
#include "ltk/quadrature.hpp"
#include "ltk/radial.hpp"
#include "ltk/spectral.hpp"
#include "ltk/sturm.hpp"

namespace ltk {

Method method_from_string(const std::string& s) {
  if (s == "spectral") return Method::Spectral;
  if (s == "heat") return Method::Heat;
  if (s == "sturm-laplace") return Method::SturmLaplace;
  if (s == "radial") return Method::Radial;
  if (s == "mc") return Method::Mc;
  throw ConfigError("unknown method '" + s + "'");
}

std::string method_name(Method m) {
  switch (m) {
    case Method::Spectral: return "spectral";
    case Method::Heat: return "heat";
    case Method::SturmLaplace: return "sturm-laplace";
    case Method::Radial: return "radial";
    case Method::Mc: return "mc";
  }
  return "?";
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw ConfigError("trailing characters in number '" + s + "'");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse number '" + s + "'");
  }
}

}  // namespace

std::vector<double> parse_number_list(const std::string& text) {
  const std::string t = trim(text);
  // start:stop:count sweep
  if (std::count(t.begin(), t.end(), ':') == 2) {
    std::stringstream ss(t);
    std::string a, b, c;
    std::getline(ss, a, ':');
    std::getline(ss, b, ':');
    std::getline(ss, c, ':');
    const double lo = parse_number(trim(a)), hi = parse_number(trim(b));
    const long n = static_cast<long>(parse_number(trim(c)));
    if (n < 1) throw ConfigError("sweep count must be >= 1");
    std::vector<double> out(n);
    for (long i = 0; i < n; ++i)
      out[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    return out;
  }
  std::vector<double> out;
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_number(item));
  }
  if (out.empty()) throw ConfigError("empty number list");
  return out;
}

namespace {

using KvMap = std::map<std::string, std::string>;

std::map<std::string, KvMap> parse_sections(const std::string& text) {
  std::map<std::string, KvMap> sections;
  std::string current;  // "" = top level
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
      current = trim(line.substr(1, line.size() - 2));
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    sections[current][key] = value;
  }
  return sections;
}

const std::string* find(const std::map<std::string, KvMap>& s, const std::string& sec,
                        const std::string& key) {
  const auto it = s.find(sec);
  if (it == s.end()) return nullptr;
  const auto kv = it->second.find(key);
  if (kv == it->second.end()) return nullptr;
  return &kv->second;
}

Potential parse_potential(const std::map<std::string, KvMap>& s) {
  const std::string* family = find(s, "potential", "family");
  if (!family) throw ConfigError("[potential] family is required");
  if (*family == "free") return FreePotential{};
  if (*family == "harmonic") {
    HarmonicPotential p;
    if (const auto* v = find(s, "potential", "omega")) p.omega = parse_number(*v);
    return p;
  }
  if (*family == "double-well") {
    DoubleWellPotential p;
    if (const auto* v = find(s, "potential", "barrier")) p.barrier = parse_number(*v);
    if (const auto* v = find(s, "potential", "minima_separation"))
      p.minima_separation = parse_number(*v);
    return p;
  }
  if (*family == "tabulated") {
    TabulatedPotential p;
    const auto* nodes = find(s, "potential", "nodes");
    const auto* values = find(s, "potential", "values");
    if (!nodes || !values) throw ConfigError("tabulated potential needs nodes and values");
    p.nodes = parse_number_list(*nodes);
    p.values = parse_number_list(*values);
    return p;
  }
  throw ConfigError("unknown potential family '" + *family + "'");
}

}  // namespace

void RunConfig::validate() const {
  validate_potential(potential);
  physics.validate();
  if (grid) grid->validate();
  if (query.x_a.empty() || query.x_b.empty() || query.beta.empty())
    throw ConfigError("query sweep must be nonempty");
  for (double b : query.beta)
    if (!(b > 0.0)) throw ConfigError("query beta values must be positive");
  if (method == Method::Mc) {
    if (!mc_seed_set) throw ConfigError("[mc] seed is mandatory for method = mc");
    mc.validate();
  }
  if (laplace_order != 8 && laplace_order != 10 && laplace_order != 12 && laplace_order != 14 &&
      laplace_order != 16)
    throw ConfigError("laplace order must be in {8, 10, 12, 14, 16}");
  if (heat_steps < 1) throw ConfigError("heat steps must be >= 1");
  if (grid) {
    for (double x : query.x_a)
      if (!(x > grid->x_minus && x < grid->x_plus))
        throw ConfigError("query x_a outside the grid box");
    for (double x : query.x_b)
      if (!(x > grid->x_minus && x < grid->x_plus))
        throw ConfigError("query x_b outside the grid box");
  }
}

GridSpec RunConfig::resolve_grid() const {
  if (grid) return *grid;
  std::vector<double> centers;
  centers.insert(centers.end(), query.x_a.begin(), query.x_a.end());
  centers.insert(centers.end(), query.x_b.begin(), query.x_b.end());
  const double beta_max = *std::max_element(query.beta.begin(), query.beta.end());
  return auto_box(potential, physics, beta_max, centers);
}

RunConfig parse_config_text(const std::string& text) {
  const auto s = parse_sections(text);
  RunConfig cfg;
  cfg.potential = parse_potential(s);
  if (const auto* v = find(s, "physics", "mass")) cfg.physics.mass = parse_number(*v);
  if (const auto* v = find(s, "physics", "hbar")) cfg.physics.hbar = parse_number(*v);

  const auto* auto_grid = find(s, "grid", "auto");
  if (auto_grid && (*auto_grid == "true" || *auto_grid == "1")) {
    cfg.grid.reset();
  } else if (s.count("grid") && !s.at("grid").empty()) {
    GridSpec g;
    const auto* xm = find(s, "grid", "x_minus");
    const auto* xp = find(s, "grid", "x_plus");
    const auto* np = find(s, "grid", "n_points");
    if (!xm || !xp || !np)
      throw ConfigError("[grid] needs x_minus, x_plus, n_points (or auto = true)");
    g.x_minus = parse_number(*xm);
    g.x_plus = parse_number(*xp);
    g.n_points = static_cast<int>(parse_number(*np));
    cfg.grid = g;
  }

  if (const auto* v = find(s, "", "method")) cfg.method = method_from_string(*v);
  else if (const auto* w = find(s, "run", "method")) cfg.method = method_from_string(*w);

  if (const auto* v = find(s, "query", "xa")) cfg.query.x_a = parse_number_list(*v);
  if (const auto* v = find(s, "query", "xb")) cfg.query.x_b = parse_number_list(*v);
  if (const auto* v = find(s, "query", "beta")) cfg.query.beta = parse_number_list(*v);

  if (const auto* v = find(s, "mc", "paths")) cfg.mc.n_paths = static_cast<long>(parse_number(*v));
  if (const auto* v = find(s, "mc", "slices")) cfg.mc.n_slices = static_cast<int>(parse_number(*v));
  if (const auto* v = find(s, "mc", "seed")) {
    cfg.mc.seed = static_cast<std::uint64_t>(std::stoull(*v));
    cfg.mc_seed_set = true;
  }
  if (const auto* v = find(s, "laplace", "order"))
    cfg.laplace_order = static_cast<int>(parse_number(*v));
  if (const auto* v = find(s, "heat", "steps")) cfg.heat_steps = static_cast<int>(parse_number(*v));

  if (const auto* v = find(s, "output", "path")) cfg.output_path = *v;
  if (const auto* v = find(s, "output", "format")) {
    if (*v == "csv") cfg.output_format = OutputFormat::Csv;
    else if (*v == "json") cfg.output_format = OutputFormat::Json;
    else throw ConfigError("output format must be csv or json");
  }
  cfg.validate();
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

namespace {

/// Spectral decomposition with enough states for every requested beta: the
/// state count doubles until the truncated tail clears 1e-12 of the smallest
/// diagonal value, or the interior is exhausted.
SpectralDecomposition decompose_for(const RunConfig& cfg, const GridSpec& grid) {
  const auto H = discretize(cfg.potential, grid, cfg.physics);
  const double beta_min = *std::min_element(cfg.query.beta.begin(), cfg.query.beta.end());
  int n_states = 32;
  for (;;) {
    n_states = std::min(n_states, H.interior_points());
    auto dec = eigendecompose(H, n_states);
    const double tail = std::exp(-beta_min * dec.energies.back());
    double smallest = 1e300;
    for (double xa : cfg.query.x_a)
      for (double xb : cfg.query.x_b) {
        const double v = std::abs(bloch_spectral(dec, {xa, xb, beta_min}));
        if (v > 0) smallest = std::min(smallest, v);
      }
    if (tail <= 1e-12 * smallest || n_states == H.interior_points()) return dec;
    n_states *= 2;
  }
}

/// Diagonal counterpart of the radial-representation quadrature:
/// rho~(x,x,E) = 2 int_0^inf eta e^{-(mu/2)(F1'/F1 - G3'/G3) eta^2} deta.
double diag_green_via_radial(const Potential& spec, const PhysicalParams& params, double E,
                             double x, const GridSpec& grid) {
  const CauchySolution f1 = solve_cauchy(spec, params, E, grid.x_minus, 0.0, 1.0, grid);
  const CauchySolution g3 = solve_cauchy(spec, params, E, grid.x_plus, 0.0, -1.0, grid);
  const double mu = params.hbar * params.hbar / params.mass;
  const double decay = 0.5 * mu * (f1.log_derivative(x) - g3.log_derivative(x));
  if (!(decay > 0.0)) throw DivergenceError("radial diagonal: non-positive decay constant");
  const double U = std::sqrt(90.0 / decay);
  return 2.0 * gl_integrate([&](double eta) { return eta * std::exp(-decay * eta * eta); }, 0.0,
                            U, 200);
}

}  // namespace

std::vector<RhoRow> compute_rho(const RunConfig& cfg) {
  cfg.validate();
  const GridSpec grid = cfg.resolve_grid();
  std::vector<RhoRow> rows;

  std::optional<SpectralDecomposition> dec;
  std::optional<DiscreteHamiltonian> H;
  if (cfg.method == Method::Spectral) dec = decompose_for(cfg, grid);
  if (cfg.method == Method::Heat) H = discretize(cfg.potential, grid, cfg.physics);

  for (double beta : cfg.query.beta)
    for (double xa : cfg.query.x_a)
      for (double xb : cfg.query.x_b) {
        RhoRow row{xa, xb, beta, 0.0, std::nullopt};
        switch (cfg.method) {
          case Method::Spectral:
            row.value = bloch_spectral(*dec, {xa, xb, beta});
            break;
          case Method::Heat: {
            const auto col = heat_propagate(*H, xa, beta, cfg.heat_steps);
            // linear interpolation of the column at xb
            const double s = (xb - grid.x_minus) / grid.spacing();
            const int i = std::clamp(static_cast<int>(s), 0, grid.n_points - 2);
            row.value = col[i] + (s - i) * (col[i + 1] - col[i]);
            break;
          }
          case Method::SturmLaplace: {
            LaplaceEvaluable f;
            f.e_min = 0.0;
            f.f = [&](double E) {
              return green_function(cfg.potential, cfg.physics, E, xa, xb, grid).value;
            };
            row.value = gaver_stehfest_invert(f, beta, cfg.laplace_order);
            break;
          }
          case Method::Radial: {
            LaplaceEvaluable f;
            f.e_min = 0.0;
            f.f = [&](double E) {
              if (xa == xb) return diag_green_via_radial(cfg.potential, cfg.physics, E, xa, grid);
              return offdiag_green_via_radial(cfg.potential, cfg.physics, E, std::min(xa, xb),
                                              std::max(xa, xb), grid);
            };
            row.value = gaver_stehfest_invert(f, beta, cfg.laplace_order);
            break;
          }
          case Method::Mc: {
            MCConfig mc = cfg.mc;
            mc.beta = beta;
            const MCEstimate est = feynman_kac(cfg.potential, cfg.physics, {xa, xb, beta}, mc);
            row.value = est.mean;
            row.std_error = est.std_error;
            break;
          }
        }
        rows.push_back(row);
      }
  return rows;
}

}  // namespace ltk
