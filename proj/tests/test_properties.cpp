#include <gtest/gtest.h>

#include "support.hpp"

using namespace specflow;

TEST(FlowProperties, SmallSuitePasses) {
  PropertySuiteOptions o;
  o.invertible_paths = 20;
  o.composable_pairs = 20;
  o.homotopies = 10;
  o.max_dim = 8;
  o.seed = 77;
  const auto report = check_flow_properties(o);
  ASSERT_EQ(report.results.size(), 6u);
  for (const auto& r : report.results) {
    EXPECT_TRUE(r.passed()) << r.name << ": " << (r.failures.empty() ? "" : r.failures.front());
    EXPECT_GT(r.cases, 0);
  }
  EXPECT_TRUE(report.passed());
}

TEST(FlowProperties, NonTrivialFlowsAreExercised) {
  int nonzero = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed)
    nonzero += spectral_flow(random_family({2 + static_cast<int>(seed % 11), seed, true})).flow != 0;
  EXPECT_GT(nonzero, 10);
}

TEST(FlowProperties, RejectsBadOptions) {
  PropertySuiteOptions o;
  o.min_dim = 1;
  EXPECT_THROW(check_flow_properties(o), InvalidSpec);
}
