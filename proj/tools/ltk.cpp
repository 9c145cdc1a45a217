// ltk: Bloch density matrices of one-dimensional systems through four
// mutually validating routes (spectral, heat propagation, Sturm-Liouville +
// inverse Laplace, radial/local-time quadrature, Feynman-Kac Monte Carlo),
// plus local-time distributions and temperature asymptotics.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ltk/asymptotics.hpp"
#include "ltk/bridge.hpp"
#include "ltk/config.hpp"
#include "ltk/laplace.hpp"
#include "ltk/potential.hpp"
#include "ltk/radial.hpp"
#include "ltk/spectral.hpp"
#include "ltk/sturm.hpp"
#include "ltk/validate.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;
constexpr const char* kSchemaVersion = "1";

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ltk::ConfigError("cannot open output file '" + path + "'");
  out << text;
}

ltk::RunConfig load_config(const std::string& path, bool required) {
  if (path.empty()) {
    if (required) throw ltk::ConfigError("a config file (-c/--config) is required");
    ltk::RunConfig cfg;  // free particle, default physics
    return cfg;
  }
  return ltk::parse_config_file(path);
}

struct ScalarOverrides {
  std::optional<std::string> method;
  std::optional<double> xa, xb, beta;
  std::optional<long> paths;
  std::optional<int> slices;
  std::optional<std::uint64_t> seed;
  std::optional<int> laplace_order;
  std::optional<std::string> output, format;

  void apply(ltk::RunConfig& cfg) const {
    if (method) cfg.method = ltk::method_from_string(*method);
    if (xa) cfg.query.x_a = {*xa};
    if (xb) cfg.query.x_b = {*xb};
    if (beta) cfg.query.beta = {*beta};
    if (paths) cfg.mc.n_paths = *paths;
    if (slices) cfg.mc.n_slices = *slices;
    if (seed) {
      cfg.mc.seed = *seed;
      cfg.mc_seed_set = true;
    }
    if (laplace_order) cfg.laplace_order = *laplace_order;
    if (output) cfg.output_path = *output;
    if (format) {
      if (*format == "csv") cfg.output_format = ltk::OutputFormat::Csv;
      else if (*format == "json") cfg.output_format = ltk::OutputFormat::Json;
      else throw ltk::ConfigError("format must be csv or json");
    }
  }
};

void add_override_flags(CLI::App* cmd, ScalarOverrides& ov) {
  cmd->add_option("--method", ov.method, "spectral|heat|sturm-laplace|radial|mc");
  cmd->add_option("--xa", ov.xa, "override query x_a (single value)");
  cmd->add_option("--xb", ov.xb, "override query x_b (single value)");
  cmd->add_option("--beta", ov.beta, "override query beta (single value)");
  cmd->add_option("--paths", ov.paths, "MC path count");
  cmd->add_option("--slices", ov.slices, "MC slice count");
  cmd->add_option("--seed", ov.seed, "MC seed");
  cmd->add_option("--laplace-order", ov.laplace_order, "Gaver-Stehfest order (8..16 even)");
  cmd->add_option("--output", ov.output, "output file (default stdout)");
  cmd->add_option("--format", ov.format, "csv|json");
}

/// Closed-form reference where one exists (free / harmonic), for the
/// comparison columns.
std::optional<double> analytic_rho(const ltk::RunConfig& cfg, double xa, double xb, double beta) {
  const auto& params = cfg.physics;
  if (std::holds_alternative<ltk::FreePotential>(cfg.potential))
    return ltk::free_kernel(params, xa, xb, beta);
  if (const auto* h = std::get_if<ltk::HarmonicPotential>(&cfg.potential)) {
    // Mehler kernel; the dimensionless combination is omega beta hbar
    const double w = h->omega, M = params.mass, hb = params.hbar;
    const double arg = w * beta * hb;
    const double pref = std::sqrt(M * w / (2.0 * M_PI * hb * std::sinh(arg)));
    const double expo = -(M * w / (2.0 * hb * std::sinh(arg))) *
                        ((xa * xa + xb * xb) * std::cosh(arg) - 2.0 * xa * xb);
    return pref * std::exp(expo);
  }
  return std::nullopt;
}

int cmd_compute_rho(const std::string& config_path, const ScalarOverrides& ov,
                    const std::string& dump_spectrum, const std::string& dump_eigen,
                    int dump_states, const std::string& emit_green, bool compare_analytic) {
  ltk::RunConfig cfg = load_config(config_path, true);
  ov.apply(cfg);
  cfg.validate();

  const auto rows = ltk::compute_rho(cfg);

  if (!dump_spectrum.empty() || !dump_eigen.empty()) {
    const ltk::GridSpec grid = cfg.resolve_grid();
    const auto H = ltk::discretize(cfg.potential, grid, cfg.physics);
    const int k = std::min(dump_states, H.interior_points());
    const auto dec = ltk::eigendecompose(H, k);
    if (!dump_spectrum.empty()) {
      std::string csv = "n,E_n\n";
      for (int n = 0; n < dec.n_states(); ++n)
        csv += std::to_string(n) + "," + fmt17(dec.energies[n]) + "\n";
      write_text(dump_spectrum, csv);
    }
    if (!dump_eigen.empty()) {
      std::string csv = "x";
      for (int n = 0; n < dec.n_states(); ++n) csv += ",psi_" + std::to_string(n);
      csv += "\n";
      for (int i = 0; i < grid.n_points; ++i) {
        csv += fmt17(grid.node(i));
        for (int n = 0; n < dec.n_states(); ++n) csv += "," + fmt17(dec.eigenfunctions[n][i]);
        csv += "\n";
      }
      write_text(dump_eigen, csv);
    }
  }

  if (!emit_green.empty()) {
    const ltk::GridSpec grid = cfg.resolve_grid();
    std::string csv = "E,x_a,x_b,value\n";
    for (double E : ltk::parse_number_list(emit_green))
      for (double xa : cfg.query.x_a)
        for (double xb : cfg.query.x_b) {
          const auto g = ltk::green_function(cfg.potential, cfg.physics, E, xa, xb, grid);
          csv += fmt17(E) + "," + fmt17(xa) + "," + fmt17(xb) + "," + fmt17(g.value) + "\n";
        }
    write_text(cfg.output_path.empty() ? "" : cfg.output_path + ".green.csv", csv);
  }

  const bool mc = cfg.method == ltk::Method::Mc;
  if (cfg.output_format == ltk::OutputFormat::Json) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["method"] = ltk::method_name(cfg.method);
    j["rows"] = ordered_json::array();
    for (const auto& r : rows) {
      ordered_json row;
      row["x_a"] = r.x_a;
      row["x_b"] = r.x_b;
      row["beta"] = r.beta;
      row["value"] = r.value;
      if (r.std_error) row["std_error"] = *r.std_error;
      if (compare_analytic)
        if (auto ref = analytic_rho(cfg, r.x_a, r.x_b, r.beta)) {
          row["rho_reference"] = *ref;
          row["rel_err"] = std::abs(r.value - *ref) / std::abs(*ref);
        }
      j["rows"].push_back(row);
    }
    write_text(cfg.output_path, j.dump(2) + "\n");
  } else {
    std::string csv = "x_a,x_b,beta,value";
    if (mc) csv += ",std_error";
    if (compare_analytic) csv += ",rho_reference,rel_err";
    csv += "\n";
    for (const auto& r : rows) {
      csv += fmt17(r.x_a) + "," + fmt17(r.x_b) + "," + fmt17(r.beta) + "," + fmt17(r.value);
      if (mc) csv += "," + fmt17(r.std_error.value_or(0.0));
      if (compare_analytic) {
        if (auto ref = analytic_rho(cfg, r.x_a, r.x_b, r.beta))
          csv += "," + fmt17(*ref) + "," + fmt17(std::abs(r.value - *ref) / std::abs(*ref));
        else
          csv += ",,";
      }
      csv += "\n";
    }
    write_text(cfg.output_path, csv);
  }
  return 0;
}

int cmd_localtime_dist(const std::string& config_path, const ScalarOverrides& ov, double X,
                       double l_max, int bins) {
  ltk::RunConfig cfg = load_config(config_path, false);
  ov.apply(cfg);
  if (!cfg.mc_seed_set) throw ltk::ConfigError("localtime-dist needs an MC seed ([mc] or --seed)");
  const double beta = cfg.query.beta.front();
  const ltk::GridSpec grid = cfg.grid ? *cfg.grid
                                      : ltk::auto_box(cfg.potential, cfg.physics, beta,
                                                      std::vector<double>{X});
  ltk::MCConfig mc = cfg.mc;
  mc.beta = beta;
  const double width = l_max / bins;
  const auto hist =
      ltk::onepoint_histogram(cfg.potential, cfg.physics, beta, X, mc, width);

  std::string csv = "L,p_joint,p_conditional,p_mc,mc_err\n";
  for (int j = 0; j < bins && j < static_cast<int>(hist.joint.size()); ++j) {
    const double L = hist.mid(j);
    const double p_joint =
        ltk::localtime_onepoint_density(cfg.potential, cfg.physics, beta, L, X, grid,
                                        cfg.laplace_order);
    const double p_cond = ltk::localtime_conditional_density(cfg.physics, beta, L);
    const double err = hist.joint_std_error(j, cfg.physics, X, X, beta);
    csv += fmt17(L) + "," + fmt17(p_joint) + "," + fmt17(p_cond) + "," + fmt17(hist.joint[j]) +
           "," + fmt17(err) + "\n";
  }
  write_text(cfg.output_path, csv);
  if (hist.binning_warning)
    std::cerr << "warning: " << hist.top_bin_fraction * 100.0
              << "% of local-time mass above the top bin; increase --lmax\n";
  return 0;
}

int cmd_asymptotics(const std::string& config_path, const ScalarOverrides& ov,
                    const std::string& regime, const std::string& sweep, double x) {
  ltk::RunConfig cfg = load_config(config_path, true);
  ov.apply(cfg);
  const auto betas = ltk::parse_number_list(sweep);
  const double beta_max = *std::max_element(betas.begin(), betas.end());

  std::string csv = "beta,rho_exact,rho_leading,ratio\n";
  if (regime == "low") {
    const ltk::GridSpec grid =
        cfg.grid ? *cfg.grid
                 : ltk::auto_box(cfg.potential, cfg.physics, beta_max, std::vector<double>{x});
    const auto H = ltk::discretize(cfg.potential, grid, cfg.physics);
    const auto dec = ltk::eigendecompose(H, std::min(32, H.interior_points()));
    const auto gs = ltk::ground_state(H);
    for (double beta : betas) {
      const double exact = ltk::bloch_spectral(dec, {x, x, beta});
      const double lead = ltk::low_temperature_leading(gs, {x, x, beta});
      csv += fmt17(beta) + "," + fmt17(exact) + "," + fmt17(lead) + "," + fmt17(exact / lead) +
             "\n";
    }
  } else if (regime == "high") {
    const double beta_min = *std::min_element(betas.begin(), betas.end());
    ltk::GridSpec grid;
    if (cfg.grid) grid = *cfg.grid;
    else {
      // small-beta paths stay near x; a compact box with fine spacing wins
      const double lam = ltk::thermal_wavelength(cfg.physics, beta_min);
      grid = ltk::GridSpec{x - 3.0, x + 3.0, static_cast<int>(6.0 / (lam / 25.0)) + 1};
    }
    const auto H = ltk::discretize(cfg.potential, grid, cfg.physics);
    const auto dec = ltk::eigendecompose(H, std::min(420, H.interior_points()));
    for (double beta : betas) {
      const double exact = ltk::bloch_spectral(dec, {x, x, beta});
      const double lead = ltk::high_temperature_leading(cfg.potential, cfg.physics, x, beta);
      csv += fmt17(beta) + "," + fmt17(exact) + "," + fmt17(lead) + "," + fmt17(exact / lead) +
             "\n";
    }
  } else {
    throw ltk::ConfigError("--regime must be low or high");
  }
  write_text(cfg.output_path, csv);
  return 0;
}

int cmd_validate(const std::string& config_path, bool quick, const std::string& output,
                 const std::string& format) {
  ltk::ValidationReport report = ltk::run_acceptance({quick});

  // optional config-driven negative control: grid refinement must not move
  // the spectral diagonal by more than 1e-4 relative
  if (!config_path.empty()) {
    ltk::RunConfig cfg = ltk::parse_config_file(config_path);
    const ltk::GridSpec g1 = cfg.resolve_grid();
    ltk::GridSpec g2 = g1;
    g2.n_points = 2 * g1.n_points - 1;
    const double beta = cfg.query.beta.front();
    const double xa = cfg.query.x_a.front(), xb = cfg.query.x_b.front();
    const auto d1 = ltk::eigendecompose(ltk::discretize(cfg.potential, g1, cfg.physics),
                                        std::min(64, g1.n_points - 2));
    const auto d2 = ltk::eigendecompose(ltk::discretize(cfg.potential, g2, cfg.physics),
                                        std::min(64, g2.n_points - 2));
    const double v1 = ltk::bloch_spectral(d1, {xa, xb, beta});
    const double v2 = ltk::bloch_spectral(d2, {xa, xb, beta});
    const double rel = std::abs(v1 - v2) / std::abs(v2);
    report.checks.push_back({"0a", "config grid convergence under refinement", rel <= 1e-4, rel,
                             1e-4, "spectral diagonal, grid vs doubled grid"});
  }

  if (format == "json") {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["all_pass"] = report.all_pass();
    j["checks"] = ordered_json::array();
    for (const auto& c : report.checks) {
      ordered_json cj;
      cj["id"] = c.id;
      cj["name"] = c.name;
      cj["pass"] = c.pass;
      cj["measured"] = c.measured;
      cj["threshold"] = c.threshold;
      cj["detail"] = c.detail;
      j["checks"].push_back(cj);
    }
    write_text(output, j.dump(2) + "\n");
  } else {
    std::string text;
    for (const auto& c : report.checks)
      text += std::string(c.pass ? "PASS" : "FAIL") + " [" + c.id + "] " + c.name +
              "  (measured " + fmt17(c.measured) + ", threshold " + fmt17(c.threshold) + ") " +
              c.detail + "\n";
    text += report.all_pass() ? "all checks passed\n" : "FAILURES present\n";
    write_text(output, text);
  }
  return report.all_pass() ? 0 : 1;
}

int cmd_mc(const std::string& config_path, const ScalarOverrides& ov,
           const std::string& localtime_csv) {
  ltk::RunConfig cfg = load_config(config_path, false);
  ov.apply(cfg);
  if (!cfg.mc_seed_set) throw ltk::ConfigError("mc needs a seed ([mc] section or --seed)");
  const double beta = cfg.query.beta.front();
  const double xa = cfg.query.x_a.front(), xb = cfg.query.x_b.front();
  ltk::MCConfig mc = cfg.mc;
  mc.beta = beta;
  const auto est = ltk::feynman_kac(cfg.potential, cfg.physics, {xa, xb, beta}, mc);

  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["mean"] = est.mean;
  j["std_error"] = est.std_error;
  j["n_paths"] = est.n_paths;
  j["seed"] = est.seed;
  if (est.variance_warning) j["variance_warning"] = true;
  write_text(cfg.output_path, j.dump(2) + "\n");

  if (!localtime_csv.empty()) {
    // per-path local-time profiles of the first few paths
    const long n_dump = std::min<long>(mc.n_paths, 16);
    std::string csv = "path,bin_center,local_time\n";
    const double lam = ltk::thermal_wavelength(cfg.physics, beta);
    for (long i = 0; i < n_dump; ++i) {
      const auto path = ltk::sample_bridge(cfg.physics, xa, xb, mc, i);
      const auto prof = ltk::local_time_profile(path, lam / 10.0);
      for (std::size_t b = 0; b < prof.counts.size(); ++b)
        csv += std::to_string(i) + "," + fmt17(prof.center(b)) + "," + fmt17(prof.value(b)) + "\n";
    }
    write_text(localtime_csv, csv);
  }
  if (est.variance_warning)
    std::cerr << "warning: relative standard error above 5%; increase --paths\n";
  return 0;
}

int cmd_bench(const std::string& output) {
  using Clock = std::chrono::steady_clock;
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  const ltk::PhysicalParams params;
  const ltk::Potential pot = ltk::HarmonicPotential{1.0};

  {
    ltk::MCConfig mc{20000, 1024, 1u, 1.0};
    const auto t0 = Clock::now();
    const auto est = ltk::feynman_kac(pot, params, {0.0, 0.0, 1.0}, mc);
    const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
    j["feynman_kac_paths_per_s"] = 20000.0 / dt;
    j["feynman_kac_mean"] = est.mean;
  }
  {
    const ltk::GridSpec grid{-12.0, 12.0, 2001};
    const auto t0 = Clock::now();
    const auto dec = ltk::eigendecompose(ltk::discretize(pot, grid, params), 64);
    const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
    j["eigendecompose_64_states_s"] = dt;
    j["ground_energy"] = dec.energies[0];
  }
  {
    const ltk::GridSpec grid{-12.0, 12.0, 2001};
    const auto t0 = Clock::now();
    double acc = 0.0;
    for (int i = 0; i < 50; ++i)
      acc += ltk::green_function(pot, params, 0.5 + 0.01 * i, 0.0, 1.0, grid).value;
    const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
    j["green_function_evals_per_s"] = 50.0 / dt;
    j["green_checksum"] = acc;
  }
  write_text(output, j.dump(2) + "\n");
  return 0;
}

void print_error_json(const std::string& type, const std::string& message) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["error"] = {{"type", type}, {"message", message}};
  std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"local-time toolkit for 1-D Bloch density matrices"};
  app.require_subcommand(1);

  std::string config_path, dump_spectrum, dump_eigen, emit_green, localtime_csv;
  std::string regime = "low", sweep = "5:15:11", val_output, val_format = "text";
  int dump_states = 8, lt_bins = 60;
  double lt_x = 0.0, lt_lmax = 6.0, asym_x = 0.0;
  bool compare_analytic = false, quick = false;
  ScalarOverrides ov;

  auto* rho = app.add_subcommand("compute-rho", "evaluate the Bloch density matrix");
  rho->add_option("-c,--config", config_path, "run configuration file")->required();
  add_override_flags(rho, ov);
  rho->add_option("--dump-spectrum", dump_spectrum, "write (n, E_n) CSV");
  rho->add_option("--dump-eigenfunctions", dump_eigen, "write (x, psi_n(x)...) CSV");
  rho->add_option("--dump-states", dump_states, "how many states to dump");
  rho->add_option("--emit-green", emit_green, "energies for a Green-function CSV sweep");
  rho->add_flag("--compare-analytic", compare_analytic,
                "add closed-form reference columns (free/harmonic)");

  auto* lt = app.add_subcommand("localtime-dist", "one-point local-time distribution");
  lt->add_option("-c,--config", config_path, "run configuration file");
  add_override_flags(lt, ov);
  lt->add_option("--x", lt_x, "measurement point X");
  lt->add_option("--lmax", lt_lmax, "largest tabulated L");
  lt->add_option("--bins", lt_bins, "number of L bins");

  auto* as = app.add_subcommand("asymptotics", "low/high temperature comparison sweep");
  as->add_option("-c,--config", config_path, "run configuration file")->required();
  add_override_flags(as, ov);
  as->add_option("--regime", regime, "low|high")->required();
  as->add_option("--beta-sweep", sweep, "start:stop:count");
  as->add_option("--x", asym_x, "diagonal point");

  auto* val = app.add_subcommand("validate", "run the full cross-method validation suite");
  val->add_option("-c,--config", config_path, "optional config for the grid-convergence check");
  val->add_flag("--quick", quick, "reduced MC sizes (smoke run, not the acceptance gate)");
  val->add_option("--output", val_output, "output file (default stdout)");
  val->add_option("--format", val_format, "text|json");

  auto* mc = app.add_subcommand("mc", "Feynman-Kac Monte Carlo estimate");
  mc->add_option("-c,--config", config_path, "run configuration file");
  add_override_flags(mc, ov);
  mc->add_option("--localtime-csv", localtime_csv, "dump per-path local-time profiles");

  auto* bench = app.add_subcommand("bench", "coarse throughput numbers as JSON");
  std::string bench_output;
  bench->add_option("--output", bench_output, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    print_error_json("config", e.what());
    return 2;
  }

  try {
    if (rho->parsed())
      return cmd_compute_rho(config_path, ov, dump_spectrum, dump_eigen, dump_states, emit_green,
                             compare_analytic);
    if (lt->parsed()) return cmd_localtime_dist(config_path, ov, lt_x, lt_lmax, lt_bins);
    if (as->parsed()) return cmd_asymptotics(config_path, ov, regime, sweep, asym_x);
    if (val->parsed()) return cmd_validate(config_path, quick, val_output, val_format);
    if (mc->parsed()) return cmd_mc(config_path, ov, localtime_csv);
    if (bench->parsed()) return cmd_bench(bench_output);
  } catch (const ltk::ConfigError& e) {
    print_error_json("config", e.what());
    return 2;
  } catch (const ltk::NumericError& e) {
    print_error_json("numeric", e.what());
    return 3;
  } catch (const std::exception& e) {
    print_error_json("internal", e.what());
    return 3;
  }
  return 0;
}
