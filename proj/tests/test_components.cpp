#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

using namespace specflow;
using specflow::fixtures::oracle_of;

namespace {

constexpr int kDim = 24;

SelfAdjointOperator basepoint() { return SelfAdjointOperator::diagonal(default_basepoint_spectrum(kDim)); }

FlowGenerator baer_generator() { return gluing_generator(default_basepoint_spectrum(kDim), 0.4, 5); }

/// Returns diag(-1 x (B+1), 3, 3, ...) -> diag(1 x (B+1), 3, ...) so that the
/// straight connector from an all-positive basepoint drops B+1 eigenvalues
/// below zero and connector * generated always has flow 0.
FlowGenerator colliding_generator(int dim) {
  return [dim](int bound) {
    const int mult = bound + 1;
    return OperatorPath(dim, [dim, mult](double t) {
      std::vector<double> v(static_cast<std::size_t>(dim), 3.0);
      for (int i = 0; i < mult; ++i) v[static_cast<std::size_t>(i)] = 2 * t - 1;
      return SelfAdjointOperator::diagonal(v);
    });
  };
}

}  // namespace

TEST(BuildDistinctPaths, SinglePathIsConstant) {
  const auto r = build_distinct_paths(basepoint(), 1, baer_generator());
  ASSERT_EQ(r.flows, std::vector<int>{0});
  EXPECT_TRUE(r.paths[0](0.7).entries() == basepoint().entries());
  EXPECT_EQ(r.ledger.front().branch, Branch::Initial);
}

TEST(BuildDistinctPaths, FlowsArePairwiseDistinctAndMatchOracle) {
  const auto r = build_distinct_paths(basepoint(), 5, baer_generator());
  ASSERT_EQ(r.flows.size(), 5u);
  EXPECT_EQ(std::set<int>(r.flows.begin(), r.flows.end()).size(), 5u);
  for (std::size_t i = 0; i < r.paths.size(); ++i) {
    EXPECT_TRUE(operators_match(r.paths[i].start(), basepoint()));
    EXPECT_TRUE(is_invertible(r.paths[i].end()));
    if (i > 0) {
      EXPECT_EQ(oracle_of(r.paths[i], 1024), r.flows[i]) << "path " << i + 1;
    }
  }
  for (const auto& e : r.ledger) {
    if (e.branch == Branch::Initial) continue;
    EXPECT_GT(e.generated_flow, e.bound);
    EXPECT_EQ(e.candidate_flow, e.connector_flow + e.generated_flow);
  }
}

TEST(BuildDistinctPaths, GeneratorMustExceedBound) {
  auto weak = [](int bound) {
    // flow exactly `bound` (zero for the first call)
    return OperatorPath(kDim, [bound](double t) {
      auto v = default_basepoint_spectrum(kDim);
      for (int i = 0; i < bound; ++i) v[static_cast<std::size_t>(2 * i + 1)] = 2 * t - 1;
      return SelfAdjointOperator::diagonal(v);
    });
  };
  EXPECT_THROW(build_distinct_paths(basepoint(), 2, weak), GeneratorFailure);
}

TEST(BuildDistinctPaths, GeneratorDimensionAndEndsChecked) {
  auto wrong_dim = [](int) { return constant_path(SelfAdjointOperator::identity(3)); };
  EXPECT_THROW(build_distinct_paths(basepoint(), 2, wrong_dim), GeneratorFailure);
  auto singular_end = [](int) {
    return fixtures::diag_path(kDim, [](double t) { return std::vector<double>(kDim, t); });
  };
  EXPECT_THROW(build_distinct_paths(basepoint(), 2, singular_end), GeneratorFailure);
  EXPECT_THROW(build_distinct_paths(basepoint(), 0, baer_generator()), InvalidSpec);
}

TEST(BuildDistinctPaths, FallbackBranchRecordsContradiction) {
  const int dim = 12;
  const auto base = SelfAdjointOperator::diagonal(std::vector<double>(dim, 3.0));
  const auto r = build_distinct_paths(base, 4, colliding_generator(dim));
  EXPECT_EQ(r.flows, (std::vector<int>{0, -1, -2, -3}));
  for (std::size_t s = 1; s < r.ledger.size(); ++s) {
    const auto& e = r.ledger[s];
    EXPECT_EQ(e.branch, Branch::Connector);
    EXPECT_EQ(e.candidate_flow, 0);
    EXPECT_EQ(e.collided_with, 1);
    // flow(c) = flow(gamma_i) would give flow(gamma_j) - flow(gamma_i) = flow(g) > bound
    EXPECT_GT(e.generated_flow, e.bound);
    EXPECT_NE(e.note.find("impossible"), std::string::npos);
    EXPECT_NE(e.note.find("> " + std::to_string(e.bound)), std::string::npos);
  }
}

TEST(CertifyComponents, LocatesSingularOperatorOnEndpointSegment) {
  // Paths with flows 0 and 2 from the basepoint.
  const auto g0 = SelfAdjointOperator::diagonal({-3, 3, -4, 4});
  const auto up2 = fixtures::diag_path(4, [](double t) {
    return std::vector<double>{-3 + 6 * t, 3, -4 + 8 * t, 4};
  });
  ComponentReport report{g0, {constant_path(g0), up2}, {0, 2}, {}};
  const auto v = certify_distinct_components(report);
  ASSERT_EQ(v.pairs.size(), 1u);
  const auto& p = v.pairs[0];
  EXPECT_EQ(p.segment_flow, 2);
  EXPECT_EQ(p.loop_flow, 0);
  EXPECT_EQ(p.contraction_flows, std::vector<int>(11, 0));
  EXPECT_TRUE(p.singular_located);
  EXPECT_LT(p.smallest_abs_eigenvalue, 1e-8 * p.spectral_radius);
  // Segment diag(-3,3,-4,4) -> diag(3,3,4,4): first zero at t = 1/2.
  EXPECT_NEAR(p.singular_t, 0.5, 1e-9);
  EXPECT_TRUE(v.certified);
}

TEST(CertifyComponents, ReportOfBuiltPaths) {
  const auto r = build_distinct_paths(basepoint(), 4, baer_generator());
  const auto v = certify_distinct_components(r);
  EXPECT_TRUE(v.certified);
  EXPECT_EQ(v.pairs.size(), 6u);
  EXPECT_EQ(v.statement, "distinct components certified in the convex model");
  for (const auto& p : v.pairs) {
    EXPECT_EQ(p.segment_flow, r.flows[static_cast<std::size_t>(p.j - 1)] - r.flows[static_cast<std::size_t>(p.i - 1)]);
    EXPECT_LT(p.smallest_abs_eigenvalue, 1e-8 * p.spectral_radius);
  }
}

TEST(CertifyComponents, RejectsDuplicateFlows) {
  const auto g0 = basepoint();
  ComponentReport report{g0, {constant_path(g0), constant_path(g0)}, {0, 0}, {}};
  EXPECT_THROW(certify_distinct_components(report), InvalidSpec);
}

TEST(CertifyComponents, WrongFlowIsCaught) {
  // Claimed flows disagree with the paths: homotopy invariance would fail.
  const auto g0 = SelfAdjointOperator::diagonal({-3, 3});
  const auto other = straight_segment(g0, SelfAdjointOperator::diagonal({-2, 2}));
  ComponentReport report{g0, {constant_path(g0), other}, {0, 1}, {}};
  EXPECT_THROW(certify_distinct_components(report), CertificateBroken);
}
