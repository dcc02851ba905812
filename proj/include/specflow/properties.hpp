#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "specflow/families.hpp"
#include "specflow/flow.hpp"
#include "specflow/path.hpp"

namespace specflow {

struct PropertySuiteOptions {
  int invertible_paths = 100;
  int composable_pairs = 100;
  int homotopies = 50;
  int slices = 11;
  int min_dim = 2;
  int max_dim = 12;
  std::uint64_t seed = 1;
  FlowOptions flow;
};

struct PropertyResult {
  std::string name;
  int cases = 0;
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

struct PropertyReport {
  std::vector<PropertyResult> results;
  bool passed() const {
    for (const auto& r : results)
      if (!r.passed()) return false;
    return true;
  }
};

namespace detail {

inline int suite_dim(const PropertySuiteOptions& o, int n) { return o.min_dim + n % (o.max_dim - o.min_dim + 1); }
inline std::uint64_t suite_seed(const PropertySuiteOptions& o, int n, std::uint64_t salt) {
  return o.seed * 1000003ULL + static_cast<std::uint64_t>(n) * 7919ULL + salt;
}

inline std::string failure(std::uint64_t seed, int dim, const std::string& what) {
  std::ostringstream os;
  os << "seed " << seed << " dim " << dim << ": " << what;
  return os.str();
}

}  // namespace detail

/// flow = 0 on paths that never leave the invertible operators.
inline PropertyResult check_invertible_zero_flow(const PropertySuiteOptions& o) {
  PropertyResult r{"invertible paths have zero flow", 0, {}};
  for (int n = 0; n < o.invertible_paths; ++n, ++r.cases) {
    const int dim = detail::suite_dim(o, n);
    const auto seed = detail::suite_seed(o, n, 11);
    const int f = spectral_flow(invertible_random_family(dim, seed), o.flow).flow;
    if (f != 0) r.failures.push_back(detail::failure(seed, dim, "flow " + std::to_string(f)));
  }
  return r;
}

/// flow(a * b) = flow(a) + flow(b) and flow(a^-1) = -flow(a).
inline std::vector<PropertyResult> check_additivity_and_reversal(const PropertySuiteOptions& o) {
  PropertyResult add{"concatenation is additive", 0, {}};
  PropertyResult rev{"reversal negates the flow", 0, {}};
  for (int n = 0; n < o.composable_pairs; ++n) {
    const int dim = detail::suite_dim(o, n);
    const auto seed = detail::suite_seed(o, n, 23);
    const OperatorPath a = random_family({dim, seed, true});
    const OperatorPath b = random_continuation(a.end(), seed + 1);
    const int fa = spectral_flow(a, o.flow).flow;
    const int fb = spectral_flow(b, o.flow).flow;
    const int fab = spectral_flow(concat(a, b), o.flow).flow;
    ++add.cases;
    if (fab != fa + fb) {
      std::ostringstream os;
      os << "flow(a*b) = " << fab << ", flow(a) + flow(b) = " << fa << " + " << fb;
      add.failures.push_back(detail::failure(seed, dim, os.str()));
    }
    for (const auto& [p, f] : {std::pair{a, fa}, std::pair{b, fb}}) {
      ++rev.cases;
      const int fr = spectral_flow(reverse(p), o.flow).flow;
      if (fr != -f) {
        std::ostringstream os;
        os << "flow(p^-1) = " << fr << ", flow(p) = " << f;
        rev.failures.push_back(detail::failure(seed, dim, os.str()));
      }
    }
  }
  return {add, rev};
}

namespace detail {

inline std::vector<int> slice_flows(const Homotopy& h, int slices, const FlowOptions& opt) {
  std::vector<int> flows;
  for (int s = 0; s < slices; ++s) flows.push_back(spectral_flow(h.slice(static_cast<double>(s) / (slices - 1)), opt).flow);
  return flows;
}

inline std::string join(const std::vector<int>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

inline bool all_equal(const std::vector<int>& v) {
  for (int x : v)
    if (x != v.front()) return false;
  return true;
}

}  // namespace detail

/// Slice flows are constant along affine homotopies with fixed invertible ends.
inline PropertyResult check_homotopy_invariance(const PropertySuiteOptions& o) {
  PropertyResult r{"affine homotopies with fixed invertible ends preserve the flow", 0, {}};
  for (int n = 0; n < o.homotopies; ++n, ++r.cases) {
    const int dim = detail::suite_dim(o, n);
    const auto seed = detail::suite_seed(o, n, 37);
    const OperatorPath a = random_family({dim, seed, true});
    Rng rng(seed + 1);
    const Matrix w = rng.hermitian(dim, 2.0);
    const OperatorPath b(dim, [a, w](double t) {
      return SelfAdjointOperator(a(t).entries() + std::sin(std::numbers::pi * t) * w);
    });
    const auto flows = detail::slice_flows(affine_homotopy(a, b), o.slices, o.flow);
    if (!detail::all_equal(flows)) r.failures.push_back(detail::failure(seed, dim, "slice flows " + detail::join(flows)));
  }
  return r;
}

/// Slice flows are constant when the ends move inside the invertible operators:
/// H(s, t) = a(t) + s P with |P| below half the smallest endpoint |eigenvalue|.
inline PropertyResult check_moving_end_invariance(const PropertySuiteOptions& o) {
  PropertyResult r{"homotopies with ends moving among invertible operators preserve the flow", 0, {}};
  for (int n = 0; n < o.homotopies; ++n, ++r.cases) {
    const int dim = detail::suite_dim(o, n);
    const auto seed = detail::suite_seed(o, n, 41);
    const OperatorPath a = random_family({dim, seed, true});
    const double gap = std::min(eigenvalues(a.start()).smallest_abs(), eigenvalues(a.end()).smallest_abs());
    Rng rng(seed + 1);
    Matrix p = rng.hermitian(dim, 1.0);
    p *= 0.45 * gap / p.norm();  // Frobenius bounds the operator norm
    const Homotopy h(dim, [a, p](double s, double t) { return SelfAdjointOperator(a(t).entries() + s * p); });
    const auto flows = detail::slice_flows(h, o.slices, o.flow);
    if (!detail::all_equal(flows)) r.failures.push_back(detail::failure(seed, dim, "slice flows " + detail::join(flows)));
  }
  return r;
}

/// flow is unchanged by monotone reparametrization.
inline PropertyResult check_reparametrization(const PropertySuiteOptions& o) {
  PropertyResult r{"monotone reparametrization preserves the flow", 0, {}};
  for (int n = 0; n < o.composable_pairs; ++n, ++r.cases) {
    const int dim = detail::suite_dim(o, n);
    const auto seed = detail::suite_seed(o, n, 53);
    const OperatorPath a = random_family({dim, seed, true});
    Rng rng(seed + 1);
    // Piecewise-linear monotone bijection through 4 random interior knots.
    std::vector<double> knots{0.0};
    for (int i = 0; i < 4; ++i) knots.push_back(knots.back() + 0.1 + rng.canonical());
    for (double& k : knots) k /= knots.back() + 0.1 + rng.canonical();
    knots.push_back(1.0);
    const int pieces = static_cast<int>(knots.size()) - 1;
    auto phi = [knots, pieces](double t) {
      const int i = std::min(static_cast<int>(t * pieces), pieces - 1);
      const double f = t * pieces - i;
      return knots[static_cast<std::size_t>(i)] * (1.0 - f) + knots[static_cast<std::size_t>(i) + 1] * f;
    };
    const int f0 = spectral_flow(a, o.flow).flow;
    const int f1 = spectral_flow(reparametrize(a, phi), o.flow).flow;
    if (f0 != f1) r.failures.push_back(detail::failure(seed, dim, "flows " + std::to_string(f0) + " vs " + std::to_string(f1)));
  }
  return r;
}

/// Runs every property of the spectral flow on seeded random families.
inline PropertyReport check_flow_properties(const PropertySuiteOptions& o = {}) {
  if (o.min_dim < 2 || o.max_dim < o.min_dim || o.slices < 2) throw InvalidSpec("bad property suite options");
  PropertyReport report;
  report.results.push_back(check_invertible_zero_flow(o));
  for (auto& r : check_additivity_and_reversal(o)) report.results.push_back(std::move(r));
  report.results.push_back(check_homotopy_invariance(o));
  report.results.push_back(check_moving_end_invariance(o));
  report.results.push_back(check_reparametrization(o));
  return report;
}

}  // namespace specflow
