#pragma once

// Command-line front end. Kept in a header so tests can drive `run_cli`
// in-process; tools/specflow.cpp only forwards argv.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "specflow/specflow.hpp"

namespace specflow::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kComputationError = 2 };

/// Verbosity from SPECFLOW_LOG: off, error, warn, info, debug (default warn).
inline std::shared_ptr<spdlog::logger> logger() {
  auto log = spdlog::get("specflow");
  if (!log) log = spdlog::stderr_logger_st("specflow");
  const char* env = std::getenv("SPECFLOW_LOG");
  log->set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
  log->set_pattern("[specflow] [%l] %v");
  return log;
}

struct Arguments {
  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::optional<int> grid;

  std::string family;
  std::optional<int> m;
  std::optional<std::vector<double>> background;
  std::optional<int> modes;
  std::optional<double> shift;
  std::optional<int> winding;
  std::optional<int> dim;
  std::optional<bool> invertible_ends;
  std::optional<double> epsilon;
  std::optional<std::vector<double>> base;

  std::optional<int> init_samples;
  std::optional<int> max_depth;
  std::optional<double> window_cap;

  std::optional<int> k;

  std::optional<int> invertible_paths;
  std::optional<int> composable_pairs;
  std::optional<int> homotopies;
  std::optional<int> max_dim;
};

/// Fully resolved configuration (config file overridden by flags).
struct ExperimentConfig {
  std::optional<PathSpec> family;
  FlowOptions options;
  std::uint64_t seed = 0;
  std::string out_dir;
  int grid = 0;  // 0: command default
  int k = 8;
  int model_dim = 48;
  double epsilon = 0.4;
  PropertySuiteOptions suite;
};

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

/// Builds a family block from command-line flags, in the same shape as the
/// config file, so both go through one validator.
inline json family_block_from_flags(const Arguments& a) {
  json j{{"family", a.family}};
  if (a.m) j["m"] = *a.m;
  if (a.background) j["background"] = *a.background;
  if (a.modes) j["modes"] = *a.modes;
  if (a.shift) j["shift"] = *a.shift;
  if (a.winding) j["winding"] = *a.winding;
  if (a.dim) j["dim"] = *a.dim;
  if (a.invertible_ends) j["invertible_ends"] = *a.invertible_ends;
  if (a.epsilon && a.family == "glue") j["epsilon"] = *a.epsilon;
  if (a.base) j["base_spectrum"] = *a.base;
  if (a.seed && (a.family == "random" || a.family == "glue")) j["seed"] = *a.seed;
  return j;
}

inline ExperimentConfig resolve(const Arguments& a) {
  ExperimentConfig cfg;
  json file;
  if (!a.config_file.empty()) {
    file = read_json_file(a.config_file);
    detail::allow_only(file, {"family", "options", "seed", "out", "grid", "components", "check"}, "config");
    if (file.contains("family")) cfg.family = path_spec_from_json(file.at("family"));
    if (file.contains("options")) cfg.options = flow_options_from_json(file.at("options"));
    cfg.seed = detail::get_field<std::uint64_t>(file, "seed", "config", 0);
    cfg.out_dir = detail::get_field<std::string>(file, "out", "config", "");
    cfg.grid = detail::get_field<int>(file, "grid", "config", 0);
    if (file.contains("components")) {
      const json& c = file.at("components");
      detail::allow_only(c, {"k", "dim", "epsilon"}, "config.components");
      cfg.k = detail::get_field<int>(c, "k", "config.components", cfg.k);
      cfg.model_dim = detail::get_field<int>(c, "dim", "config.components", cfg.model_dim);
      cfg.epsilon = detail::get_field<double>(c, "epsilon", "config.components", cfg.epsilon);
    }
    if (file.contains("check")) {
      const json& c = file.at("check");
      detail::allow_only(c, {"invertible_paths", "composable_pairs", "homotopies", "max_dim"}, "config.check");
      cfg.suite.invertible_paths = detail::get_field<int>(c, "invertible_paths", "config.check", cfg.suite.invertible_paths);
      cfg.suite.composable_pairs = detail::get_field<int>(c, "composable_pairs", "config.check", cfg.suite.composable_pairs);
      cfg.suite.homotopies = detail::get_field<int>(c, "homotopies", "config.check", cfg.suite.homotopies);
      cfg.suite.max_dim = detail::get_field<int>(c, "max_dim", "config.check", cfg.suite.max_dim);
    }
  }
  if (!a.family.empty()) cfg.family = path_spec_from_json(family_block_from_flags(a));
  if (a.seed) cfg.seed = *a.seed;
  if (!a.out_dir.empty()) cfg.out_dir = a.out_dir;
  if (a.grid) cfg.grid = *a.grid;
  if (a.init_samples) cfg.options.init_samples = *a.init_samples;
  if (a.max_depth) cfg.options.max_depth = *a.max_depth;
  if (a.window_cap) cfg.options.window_cap = *a.window_cap;
  if (a.k) cfg.k = *a.k;
  if (a.dim) cfg.model_dim = *a.dim;
  if (a.epsilon) cfg.epsilon = *a.epsilon;
  if (a.invertible_paths) cfg.suite.invertible_paths = *a.invertible_paths;
  if (a.composable_pairs) cfg.suite.composable_pairs = *a.composable_pairs;
  if (a.homotopies) cfg.suite.homotopies = *a.homotopies;
  if (a.max_dim) cfg.suite.max_dim = *a.max_dim;
  cfg.suite.seed = cfg.seed;
  try {
    detail::validate(cfg.options);
  } catch (const Error& e) {
    throw ConfigError(std::string("options: ") + e.what());
  }
  cfg.suite.flow = cfg.options;
  return cfg;
}

inline const PathSpec& require_family(const ExperimentConfig& cfg) {
  if (!cfg.family) throw ConfigError("no family given (use --family TAG or a config file with a family block)");
  return *cfg.family;
}

/// Writes `text` to out_dir/name when an output directory is configured,
/// otherwise to `out`.
inline void emit(const ExperimentConfig& cfg, const std::string& name, const std::string& text, std::ostream& out) {
  if (cfg.out_dir.empty()) {
    out << text;
    return;
  }
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  const auto path = std::filesystem::path(cfg.out_dir) / name;
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw std::ios_base::failure("cannot write '" + path.string() + "'");
  logger()->info("wrote {}", path.string());
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline int cmd_flow(const ExperimentConfig& cfg, std::ostream& out) {
  const PathSpec& spec = require_family(cfg);
  const FlowCertificate cert = spectral_flow(make_path(spec), cfg.options);
  logger()->info("flow {} over {} segments", cert.flow, cert.segments.size());
  emit(cfg, "flow_certificate.json", dump(flow_certificate_json(spec, cert)), out);
  return kOk;
}

inline int cmd_components(const ExperimentConfig& cfg, std::ostream& out) {
  if (cfg.k < 1) throw ConfigError("components: k must be >= 1");
  if (cfg.model_dim < 2) throw ConfigError("components: dim must be >= 2");
  const auto base = default_basepoint_spectrum(cfg.model_dim);
  const auto basepoint = SelfAdjointOperator::diagonal(base);
  const ComponentReport report =
      build_distinct_paths(basepoint, cfg.k, gluing_generator(base, cfg.epsilon, cfg.seed), cfg.options);
  for (const auto& e : report.ledger) logger()->info("step {}: {} ({})", e.step, to_string(e.branch), e.note);
  const ComponentVerdict verdict = certify_distinct_components(report, cfg.options);
  emit(cfg, "component_report.json", dump(to_json(report, &verdict)), out);
  return verdict.certified ? kOk : kComputationError;
}

inline int cmd_spectrum(const ExperimentConfig& cfg, std::ostream& out) {
  const int grid = cfg.grid > 0 ? cfg.grid : 101;
  emit(cfg, "spectrum.csv", spectrum_csv(make_path(require_family(cfg)), grid), out);
  return kOk;
}

inline int cmd_oracle(const ExperimentConfig& cfg, std::ostream& out) {
  const int grid = cfg.grid > 0 ? cfg.grid : 512;
  const auto result = oracle::oracle_flow_checked(make_path(require_family(cfg)), grid);
  if (result.resolution_warning) logger()->warn("oracle result changed when doubling the grid to {}", 2 * grid);
  emit(cfg, "oracle.json", dump(to_json(result)), out);
  return kOk;
}

inline int cmd_check(const ExperimentConfig& cfg, std::ostream& out) {
  const PropertyReport report = check_flow_properties(cfg.suite);
  for (const auto& r : report.results)
    if (!r.passed()) logger()->error("{}: {} failures", r.name, r.failures.size());
  emit(cfg, "property_report.json", dump(to_json(report)), out);
  return report.passed() ? kOk : kComputationError;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Spectral flow of self-adjoint operator paths"};
  app.require_subcommand(1);
  Arguments a;

  auto add_common = [&a](CLI::App* sub) {
    sub->add_option("--config", a.config_file, "JSON experiment config")->check(CLI::ExistingFile);
    sub->add_option("--seed", a.seed, "seed for random and glued families");
    sub->add_option("--out", a.out_dir, "output directory (default: stdout)");
    sub->add_option("--init-samples", a.init_samples, "initial uniform segments");
    sub->add_option("--max-depth", a.max_depth, "bisection depth limit");
    sub->add_option("--window-cap", a.window_cap, "upper bound on window radii");
  };
  auto add_family = [&a](CLI::App* sub) {
    sub->add_option("--family", a.family, "baer | circle | random | glue");
    sub->add_option("--m", a.m, "crossing multiplicity floor (baer, glue)");
    sub->add_option("--background", a.background, "background eigenvalues, |v| > 2");
    sub->add_option("--modes", a.modes, "Fourier modes K (circle)");
    sub->add_option("--shift", a.shift, "spin shift (circle)");
    sub->add_option("--winding", a.winding, "winding number (circle)");
    sub->add_option("--dim", a.dim, "dimension (random)");
    sub->add_option("--invertible-ends", a.invertible_ends, "shift ends away from zero (random)");
    sub->add_option("--epsilon", a.epsilon, "perturbation size (glue)");
    sub->add_option("--base", a.base, "base spectrum outside [-2, 2] (glue)");
  };

  auto* flow = app.add_subcommand("flow", "spectral flow certificate of one path");
  add_common(flow);
  add_family(flow);
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalue curves as CSV");
  add_common(spectrum);
  add_family(spectrum);
  spectrum->add_option("--grid", a.grid, "number of t samples");
  auto* orc = app.add_subcommand("oracle", "brute-force grid oracle for one path");
  add_common(orc);
  add_family(orc);
  orc->add_option("--grid", a.grid, "oracle grid cells");
  auto* comp = app.add_subcommand("components", "paths with pairwise-distinct flows and their certification");
  add_common(comp);
  comp->add_option("--k", a.k, "number of paths");
  comp->add_option("--dim", a.dim, "model dimension");
  comp->add_option("--epsilon", a.epsilon, "gluing perturbation size");
  auto* check = app.add_subcommand("check", "property suites on seeded random families");
  add_common(check);
  check->add_option("--invertible-paths", a.invertible_paths, "paths inside the invertible locus");
  check->add_option("--pairs", a.composable_pairs, "composable pairs");
  check->add_option("--homotopies", a.homotopies, "homotopies");
  check->add_option("--max-dim", a.max_dim, "largest random dimension");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    const ExperimentConfig cfg = resolve(a);
    if (*flow) return cmd_flow(cfg, out);
    if (*spectrum) return cmd_spectrum(cfg, out);
    if (*orc) return cmd_oracle(cfg, out);
    if (*comp) return cmd_components(cfg, out);
    if (*check) return cmd_check(cfg, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const InvalidSpec& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const WindowTooSmall& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    err << "error [" << e.kind() << "]: " << e.what() << '\n';
    return kComputationError;
  } catch (const std::ios_base::failure& e) {
    err << "I/O error: " << e.what() << '\n';
    return kConfigError;
  }
  return kConfigError;
}

}  // namespace specflow::cli
