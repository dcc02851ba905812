#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "specflow/flow.hpp"
#include "specflow/gluing.hpp"
#include "specflow/operator.hpp"
#include "specflow/path.hpp"

namespace specflow {

/// Given a lower bound B, returns a path with invertible ends and flow > B.
using FlowGenerator = std::function<OperatorPath(int bound)>;

enum class Branch { Initial, Concatenated, Connector };

inline const char* to_string(Branch b) {
  switch (b) {
    case Branch::Initial: return "initial";
    case Branch::Concatenated: return "concatenated";
    case Branch::Connector: return "connector";
  }
  return "?";
}

/// One induction step. `candidate_flow` is the flow of connector * generated;
/// when it collides with an earlier flow the connector alone is kept.
struct LedgerEntry {
  int step = 1;
  int bound = 0;
  int generated_flow = 0;
  int connector_flow = 0;
  int candidate_flow = 0;
  Branch branch = Branch::Initial;
  int collided_with = -1;
  std::string note;
};

struct ComponentReport {
  SelfAdjointOperator basepoint;
  std::vector<OperatorPath> paths;
  std::vector<int> flows;
  std::vector<LedgerEntry> ledger;
};

namespace detail {

inline int index_of(const std::vector<int>& flows, int value) {
  auto it = std::find(flows.begin(), flows.end(), value);
  return it == flows.end() ? -1 : static_cast<int>(it - flows.begin());
}

}  // namespace detail

/// Builds k paths from `basepoint` with pairwise-distinct spectral flow.
///
/// The first path is constant. Step k+1 asks the generator for a path g with
/// flow(g) > max |flow_i - flow_j| and joins the basepoint to g(0) by a
/// straight connector c. The candidate c * g is kept unless its flow repeats
/// an earlier one, in which case c is kept: if flow(c) also repeated some
/// flow_i we would get flow_j - flow_i = flow(g), contradicting the bound.
inline ComponentReport build_distinct_paths(const SelfAdjointOperator& basepoint, int k,
                                            const FlowGenerator& generator, const FlowOptions& options = {}) {
  if (k < 1) throw InvalidSpec("number of paths must be >= 1");
  if (!is_invertible(basepoint, options.cluster_tol)) throw InvalidSpec("basepoint is not invertible");

  ComponentReport report{basepoint, {}, {}, {}};
  report.paths.push_back(constant_path(basepoint));
  report.flows.push_back(spectral_flow(report.paths.back(), options).flow);
  report.ledger.push_back({1, 0, 0, 0, report.flows.back(), Branch::Initial, -1, "constant path at the basepoint"});

  for (int step = 2; step <= k; ++step) {
    const auto [lo, hi] = std::minmax_element(report.flows.begin(), report.flows.end());
    const int bound = *hi - *lo;

    const OperatorPath generated = generator(bound);
    if (generated.dim() != basepoint.dim()) throw GeneratorFailure("generator returned a path of wrong dimension");
    if (!is_invertible(generated.start(), options.cluster_tol) || !is_invertible(generated.end(), options.cluster_tol))
      throw GeneratorFailure("generator returned a path with a non-invertible endpoint");
    const int generated_flow = spectral_flow(generated, options).flow;
    if (generated_flow <= bound) {
      std::ostringstream os;
      os << "generator returned flow " << generated_flow << " <= bound " << bound;
      throw GeneratorFailure(os.str());
    }

    const OperatorPath connector = straight_segment(basepoint, generated.start());
    const int connector_flow = spectral_flow(connector, options).flow;
    const OperatorPath candidate = concat(connector, generated);
    const int candidate_flow = spectral_flow(candidate, options).flow;
    if (candidate_flow != connector_flow + generated_flow) {
      std::ostringstream os;
      os << "additivity failed: flow(c * g) = " << candidate_flow << " but flow(c) + flow(g) = "
         << connector_flow + generated_flow;
      throw CertificateBroken(os.str());
    }

    LedgerEntry entry{step, bound, generated_flow, connector_flow, candidate_flow, Branch::Concatenated, -1, {}};
    std::ostringstream note;
    const int j = detail::index_of(report.flows, candidate_flow);
    if (j < 0) {
      note << "flow(c*g) = " << candidate_flow << " is new";
      report.paths.push_back(candidate);
      report.flows.push_back(candidate_flow);
    } else {
      entry.branch = Branch::Connector;
      entry.collided_with = j + 1;
      const int i = detail::index_of(report.flows, connector_flow);
      note << "flow(c*g) = " << candidate_flow << " = flow(gamma_" << j + 1 << "); flow(c) = " << connector_flow
           << "; flow(c) = flow(gamma_i) would force flow(gamma_" << j + 1 << ") - flow(gamma_i) = flow(g) = "
           << generated_flow << " > " << bound << " = max |flow_i - flow_j|, impossible";
      if (i >= 0) {
        std::ostringstream os;
        os << "fallback connector flow " << connector_flow << " repeats flow of path " << i + 1
           << " although flow(g) = " << generated_flow << " > " << bound;
        throw CertificateBroken(os.str());
      }
      report.paths.push_back(connector);
      report.flows.push_back(connector_flow);
    }
    entry.note = note.str();
    report.ledger.push_back(std::move(entry));
  }
  return report;
}

/// Default basepoint spectrum of the given dimension: +-3, +-3.5, ...
inline std::vector<double> default_basepoint_spectrum(int dim) {
  std::vector<double> values;
  for (int i = 0; i < dim; ++i) values.push_back((i % 2 == 0 ? 1.0 : -1.0) * (3.0 + 0.5 * (i / 2)));
  return values;
}

/// Generator backed by the gluing simulator: for bound B the sphere family with
/// m = max(B, 1) replaces the last m + 1 eigenvalues of the basepoint spectrum,
/// so the glued path has flow m + 1 > B and the dimension of the basepoint.
inline FlowGenerator gluing_generator(std::vector<double> base_spectrum, double epsilon, std::uint64_t seed) {
  auto calls = std::make_shared<std::uint64_t>(0);
  return [base = std::move(base_spectrum), epsilon, seed, calls](int bound) {
    const int m = std::max(bound, 1);
    const int keep = static_cast<int>(base.size()) - (m + 1);
    if (keep < 0) {
      std::ostringstream os;
      os << "model dimension " << base.size() << " cannot host a crossing of multiplicity " << m + 1;
      throw GeneratorFailure(os.str());
    }
    GluingSpec spec;
    spec.base.assign(base.begin(), base.begin() + keep);
    spec.sphere.m = m;
    spec.sphere.background.clear();
    spec.epsilon = epsilon;
    spec.seed = seed + (*calls)++;
    return glue(spec).path();
  };
}

/// Outcome of checking one pair of report paths.
struct PairCertificate {
  int i = 0;
  int j = 0;
  int segment_flow = 0;     ///< flow of the straight segment gamma_i(1) -> gamma_j(1)
  int loop_flow = 0;        ///< flow of gamma_i * segment * gamma_j^-1
  std::vector<int> contraction_flows;  ///< slice flows of the affine contraction to the basepoint
  double singular_t = 0.0;  ///< located parameter on the segment
  double smallest_abs_eigenvalue = 0.0;
  double spectral_radius = 0.0;
  bool singular_located = false;
};

struct ComponentVerdict {
  bool certified = false;
  std::string statement;
  std::vector<PairCertificate> pairs;
};

inline constexpr double kSingularTolerance = 1e-8;
inline constexpr int kSingularBisectionDepth = 60;

namespace detail {

inline int nonnegative_count(const SelfAdjointOperator& op) {
  const Spectrum s = eigenvalues(op);
  return static_cast<int>(std::count_if(s.values.begin(), s.values.end(), [](double v) { return v >= 0.0; }));
}

}  // namespace detail

inline void check_report(const ComponentReport& report, const FlowOptions& options = {}) {
  if (report.paths.size() != report.flows.size()) throw InvalidSpec("report has mismatched paths and flows");
  std::set<int> seen;
  for (std::size_t i = 0; i < report.flows.size(); ++i) {
    if (!seen.insert(report.flows[i]).second) {
      std::ostringstream os;
      os << "flow " << report.flows[i] << " occurs twice";
      throw InvalidSpec(os.str());
    }
    const OperatorPath& p = report.paths[i];
    if (!operators_match(p.start(), report.basepoint)) throw InvalidSpec("path does not start at the basepoint");
    if (!is_invertible(p.end(), options.cluster_tol)) throw InvalidSpec("path end is not invertible");
  }
}

/// For every pair i < j: the loop gamma_i * s * gamma_j^-1 through the straight
/// segment s between the endpoints is contracted to the basepoint by an affine
/// homotopy whose slices must all have flow 0, hence flow(s) = flow_j - flow_i.
/// Distinct flows therefore force s to meet a singular operator, which is
/// located by bisection on the nonnegative count. Any straight segment that
/// stays invertible although the flows differ raises CertificateBroken.
inline ComponentVerdict certify_distinct_components(const ComponentReport& report, const FlowOptions& options = {},
                                                    int contraction_slices = 11) {
  check_report(report, options);
  ComponentVerdict verdict;
  verdict.certified = true;
  const OperatorPath base_loop = constant_path(report.basepoint);
  for (std::size_t i = 0; i < report.paths.size(); ++i) {
    for (std::size_t j = i + 1; j < report.paths.size(); ++j) {
      const OperatorPath& gi = report.paths[i];
      const OperatorPath& gj = report.paths[j];
      PairCertificate pc;
      pc.i = static_cast<int>(i) + 1;
      pc.j = static_cast<int>(j) + 1;

      const SelfAdjointOperator a = gi.end();
      const SelfAdjointOperator b = gj.end();
      const OperatorPath segment = straight_segment(a, b);
      pc.segment_flow = spectral_flow(segment, options).flow;
      const OperatorPath loop = concat(concat(gi, segment), reverse(gj));
      pc.loop_flow = spectral_flow(loop, options).flow;
      const Homotopy contraction = affine_homotopy(loop, base_loop);
      for (int s = 0; s < contraction_slices; ++s) {
        const double sv = contraction_slices == 1 ? 0.0 : static_cast<double>(s) / (contraction_slices - 1);
        pc.contraction_flows.push_back(spectral_flow(contraction.slice(sv), options).flow);
      }

      const bool contracted = std::all_of(pc.contraction_flows.begin(), pc.contraction_flows.end(),
                                          [](int f) { return f == 0; });
      if (!contracted || pc.segment_flow != report.flows[j] - report.flows[i]) {
        std::ostringstream os;
        os << "pair (" << pc.i << ", " << pc.j << "): loop flow " << pc.loop_flow << ", segment flow "
           << pc.segment_flow << ", flows " << report.flows[i] << " and " << report.flows[j];
        throw CertificateBroken(os.str());
      }

      const int n0 = detail::nonnegative_count(a);
      const int n1 = detail::nonnegative_count(b);
      if (n0 == n1) {
        std::ostringstream os;
        os << "pair (" << pc.i << ", " << pc.j << "): straight segment between endpoints keeps its inertia";
        throw CertificateBroken(os.str());
      }
      double lo = 0.0, hi = 1.0;
      for (int it = 0; it < kSingularBisectionDepth; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (detail::nonnegative_count(segment(mid)) == n0)
          lo = mid;
        else
          hi = mid;
      }
      pc.singular_t = 0.5 * (lo + hi);
      const Spectrum s = eigenvalues(segment(pc.singular_t));
      pc.smallest_abs_eigenvalue = s.smallest_abs();
      pc.spectral_radius = s.radius();
      pc.singular_located = pc.smallest_abs_eigenvalue < kSingularTolerance * pc.spectral_radius;
      verdict.certified = verdict.certified && pc.singular_located;
      verdict.pairs.push_back(std::move(pc));
    }
  }
  verdict.statement = verdict.certified
                          ? "distinct components certified in the convex model"
                          : "not certified: a singular operator could not be located on some endpoint segment";
  return verdict;
}

}  // namespace specflow
