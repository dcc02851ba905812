#pragma once

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "specflow/components.hpp"
#include "specflow/families.hpp"
#include "specflow/flow.hpp"
#include "specflow/gluing.hpp"
#include "specflow/oracle.hpp"
#include "specflow/path.hpp"
#include "specflow/properties.hpp"

namespace specflow {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Serializable description of a path: a built-in family or explicit samples.
using PathSpec = std::variant<BaerFamilySpec, CircleFamilySpec, RandomFamilySpec, GluingSpec, SampledPath>;

inline OperatorPath make_path(const PathSpec& spec) {
  struct Visitor {
    OperatorPath operator()(const BaerFamilySpec& s) const { return baer_family(s); }
    OperatorPath operator()(const CircleFamilySpec& s) const { return circle_family(s); }
    OperatorPath operator()(const RandomFamilySpec& s) const { return random_family(s); }
    OperatorPath operator()(const GluingSpec& s) const { return glue(s).path(); }
    OperatorPath operator()(const SampledPath& s) const { return s.path(); }
  };
  return std::visit(Visitor{}, spec);
}

// --- matrices --------------------------------------------------------------

inline json matrix_to_json(const Matrix& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json rr = json::array(), ir = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ir.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  return {{"re", re}, {"im", im}};
}

namespace detail {

[[noreturn]] inline void config_fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

template <typename T>
T get_field(const json& j, const char* key, const std::string& where, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    config_fail(where + "." + key, e.what());
  }
}

template <typename T>
T require_field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) config_fail(where, std::string("missing required field '") + key + "'");
  return get_field<T>(j, key, where, T{});
}

inline void allow_only(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) config_fail(where, "expected an object");
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* allowed : keys) ok = ok || k == allowed;
    if (!ok) config_fail(where, "unknown field '" + k + "'");
  }
}

}  // namespace detail

inline Matrix matrix_from_json(const json& j, const std::string& where) {
  detail::allow_only(j, {"re", "im"}, where);
  const auto re = detail::require_field<std::vector<std::vector<double>>>(j, "re", where);
  const auto im = detail::get_field<std::vector<std::vector<double>>>(j, "im", where, {});
  const auto n = static_cast<Eigen::Index>(re.size());
  if (n == 0) detail::config_fail(where, "empty matrix");
  if (!im.empty() && static_cast<Eigen::Index>(im.size()) != n) detail::config_fail(where, "re/im row count differ");
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& rr = re[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(rr.size()) != n) detail::config_fail(where, "matrix is not square");
    for (Eigen::Index k = 0; k < n; ++k) {
      double imag = 0.0;
      if (!im.empty()) {
        const auto& ir = im[static_cast<std::size_t>(i)];
        if (static_cast<Eigen::Index>(ir.size()) != n) detail::config_fail(where, "imaginary part is not square");
        imag = ir[static_cast<std::size_t>(k)];
      }
      m(i, k) = Complex(rr[static_cast<std::size_t>(k)], imag);
    }
  }
  return m;
}

// --- path specs --------------------------------------------------------------

inline json path_spec_to_json(const PathSpec& spec) {
  struct Visitor {
    json operator()(const BaerFamilySpec& s) const {
      return {{"family", "baer"}, {"m", s.m}, {"background", s.background}};
    }
    json operator()(const CircleFamilySpec& s) const {
      return {{"family", "circle"}, {"modes", s.modes}, {"shift", s.spin_shift}, {"winding", s.winding}};
    }
    json operator()(const RandomFamilySpec& s) const {
      return {{"family", "random"}, {"dim", s.dim}, {"seed", s.seed}, {"invertible_ends", s.invertible_ends}};
    }
    json operator()(const GluingSpec& s) const {
      return {{"family", "glue"},           {"base_spectrum", s.base}, {"m", s.sphere.m},
              {"background", s.sphere.background}, {"epsilon", s.epsilon},   {"seed", s.seed}};
    }
    json operator()(const SampledPath& s) const {
      json samples = json::array();
      for (const auto& sample : s.samples()) {
        json js = matrix_to_json(sample.op.entries());
        js["t"] = sample.t;
        samples.push_back(std::move(js));
      }
      return {{"family", "sampled"}, {"samples", samples}};
    }
  };
  return std::visit(Visitor{}, spec);
}

/// Parses and validates a family block. Any violation of a family invariant is
/// reported as ConfigError naming the offending field.
inline PathSpec path_spec_from_json(const json& j, const std::string& where = "family") {
  using detail::get_field;
  using detail::require_field;
  const auto tag = require_field<std::string>(j, "family", where);
  const std::string w = where + "(" + tag + ")";
  PathSpec spec;
  try {
    if (tag == "baer") {
      detail::allow_only(j, {"family", "m", "background"}, w);
      BaerFamilySpec s;
      s.m = get_field<int>(j, "m", w, s.m);
      s.background = get_field<std::vector<double>>(j, "background", w, default_background());
      s.validate();
      spec = s;
    } else if (tag == "circle") {
      detail::allow_only(j, {"family", "modes", "shift", "winding"}, w);
      CircleFamilySpec s;
      s.modes = get_field<int>(j, "modes", w, 5);
      s.spin_shift = get_field<double>(j, "shift", w, 0.5);
      s.winding = get_field<int>(j, "winding", w, s.winding);
      circle_family(s);
      spec = s;
    } else if (tag == "random") {
      detail::allow_only(j, {"family", "dim", "seed", "invertible_ends"}, w);
      RandomFamilySpec s;
      s.dim = get_field<int>(j, "dim", w, s.dim);
      s.seed = get_field<std::uint64_t>(j, "seed", w, 0);
      s.invertible_ends = get_field<bool>(j, "invertible_ends", w, true);
      detail::check_random_dim(s.dim);
      spec = s;
    } else if (tag == "glue") {
      detail::allow_only(j, {"family", "base_spectrum", "m", "background", "epsilon", "seed"}, w);
      GluingSpec s;
      s.base = get_field<std::vector<double>>(j, "base_spectrum", w, s.base);
      s.sphere.m = get_field<int>(j, "m", w, s.sphere.m);
      s.sphere.background = get_field<std::vector<double>>(j, "background", w, default_background());
      s.epsilon = get_field<double>(j, "epsilon", w, s.epsilon);
      s.seed = get_field<std::uint64_t>(j, "seed", w, 0);
      s.validate();
      spec = s;
    } else if (tag == "sampled") {
      detail::allow_only(j, {"family", "samples"}, w);
      const json& arr = j.at("samples");
      if (!arr.is_array()) detail::config_fail(w, "samples must be an array");
      std::vector<SampledPath::Sample> samples;
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string ws = w + ".samples[" + std::to_string(i) + "]";
        detail::allow_only(arr[i], {"t", "re", "im"}, ws);
        const double t = require_field<double>(arr[i], "t", ws);
        json m = arr[i];
        m.erase("t");
        samples.push_back({t, SelfAdjointOperator(matrix_from_json(m, ws))});
      }
      spec = SampledPath(std::move(samples));
    } else {
      detail::config_fail(where, "unknown family '" + tag + "' (expected baer, circle, random, glue or sampled)");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    detail::config_fail(w, e.what());
  } catch (const json::exception& e) {
    detail::config_fail(w, e.what());
  }
  return spec;
}

// --- options -----------------------------------------------------------------

inline json to_json(const FlowOptions& o) {
  json cap = std::isfinite(o.window_cap) ? json(o.window_cap) : json(nullptr);
  return {{"init_samples", o.init_samples}, {"max_depth", o.max_depth},
          {"witness_points", o.witness_points}, {"cluster_tol", o.cluster_tol},
          {"min_margin_rel", o.min_margin_rel}, {"window_cap", cap}};
}

inline FlowOptions flow_options_from_json(const json& j, const std::string& where = "options") {
  detail::allow_only(j, {"init_samples", "max_depth", "witness_points", "cluster_tol", "min_margin_rel", "window_cap"},
                     where);
  FlowOptions o;
  o.init_samples = detail::get_field<int>(j, "init_samples", where, o.init_samples);
  o.max_depth = detail::get_field<int>(j, "max_depth", where, o.max_depth);
  o.witness_points = detail::get_field<int>(j, "witness_points", where, o.witness_points);
  o.cluster_tol = detail::get_field<double>(j, "cluster_tol", where, o.cluster_tol);
  o.min_margin_rel = detail::get_field<double>(j, "min_margin_rel", where, o.min_margin_rel);
  if (j.contains("window_cap") && !j.at("window_cap").is_null())
    o.window_cap = detail::get_field<double>(j, "window_cap", where, o.window_cap);
  try {
    detail::validate(o);
  } catch (const Error& e) {
    detail::config_fail(where, e.what());
  }
  return o;
}

// --- certificates and reports ----------------------------------------------

inline json to_json(const Segment& s) {
  return {{"t_start", s.t_start},
          {"t_end", s.t_end},
          {"radius", s.radius},
          {"margin", s.margin},
          {"symmetric_count", s.symmetric_count},
          {"count_start", s.count_start},
          {"count_end", s.count_end},
          {"witness", s.witness}};
}

inline json to_json(const FlowCertificate& c) {
  json segments = json::array();
  for (const auto& s : c.segments) segments.push_back(to_json(s));
  return {{"version", kSchemaVersion}, {"kind", "flow-certificate"}, {"dim", c.dim},
          {"options", to_json(c.options)}, {"times", c.times()},       {"radii", c.radii()},
          {"segments", segments},         {"flow", c.flow}};
}

inline json flow_certificate_json(const PathSpec& spec, const FlowCertificate& c) {
  json j = to_json(c);
  j["path"] = path_spec_to_json(spec);
  return j;
}

inline json to_json(const LedgerEntry& e) {
  json collided = e.collided_with > 0 ? json(e.collided_with) : json(nullptr);
  return {{"step", e.step},
          {"bound", e.bound},
          {"generated_flow", e.generated_flow},
          {"connector_flow", e.connector_flow},
          {"candidate_flow", e.candidate_flow},
          {"branch", to_string(e.branch)},
          {"collided_with", collided},
          {"note", e.note}};
}

inline json to_json(const PairCertificate& p) {
  return {{"i", p.i},
          {"j", p.j},
          {"segment_flow", p.segment_flow},
          {"loop_flow", p.loop_flow},
          {"contraction_flows", p.contraction_flows},
          {"singular_t", p.singular_t},
          {"smallest_abs_eigenvalue", p.smallest_abs_eigenvalue},
          {"spectral_radius", p.spectral_radius},
          {"singular_located", p.singular_located}};
}

inline json to_json(const ComponentReport& r, const ComponentVerdict* verdict = nullptr) {
  json paths = json::array();
  for (std::size_t i = 0; i < r.paths.size(); ++i)
    paths.push_back({{"index", i + 1},
                     {"label", r.paths[i].label()},
                     {"flow", r.flows[i]},
                     {"end_spectrum", eigenvalues(r.paths[i].end()).values}});
  json ledger = json::array();
  for (const auto& e : r.ledger) ledger.push_back(to_json(e));
  json j = {{"version", kSchemaVersion},
            {"kind", "component-report"},
            {"dim", r.basepoint.dim()},
            {"basepoint_spectrum", eigenvalues(r.basepoint).values},
            {"k", r.paths.size()},
            {"flows", r.flows},
            {"paths", paths},
            {"ledger", ledger}};
  if (verdict) {
    json pairs = json::array();
    for (const auto& p : verdict->pairs) pairs.push_back(to_json(p));
    j["pairs"] = pairs;
    j["verdict"] = {{"certified", verdict->certified}, {"statement", verdict->statement}};
  }
  return j;
}

inline json to_json(const oracle::OracleResult& r) {
  json records = json::array();
  for (const auto& c : r.records)
    records.push_back({{"t_lo", c.t_lo}, {"t_hi", c.t_hi}, {"direction", c.direction}, {"refined_t", c.refined_t}});
  return {{"version", kSchemaVersion}, {"kind", "oracle-flow"}, {"grid", r.grid}, {"flow", r.flow},
          {"resolution_warning", r.resolution_warning}, {"records", records}};
}

inline json to_json(const PropertyReport& r) {
  json results = json::array();
  for (const auto& p : r.results)
    results.push_back({{"name", p.name}, {"cases", p.cases}, {"passed", p.passed()}, {"failures", p.failures}});
  return {{"version", kSchemaVersion}, {"kind", "property-report"}, {"passed", r.passed()}, {"results", results}};
}

/// CSV rows (t, lambda_1, ..., lambda_d) on a uniform grid of `grid` points.
inline std::string spectrum_csv(const OperatorPath& path, int grid) {
  if (grid < 2) throw InvalidSpec("spectrum grid needs at least 2 points");
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  os << "t";
  for (int i = 1; i <= path.dim(); ++i) os << ",lambda_" << i;
  os << '\n';
  for (int g = 0; g < grid; ++g) {
    const double t = static_cast<double>(g) / (grid - 1);
    os << t;
    for (double v : eigenvalues(path(t)).values) os << ',' << v;
    os << '\n';
  }
  return os.str();
}

}  // namespace specflow
