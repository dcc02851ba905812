#pragma once

#include <functional>
#include <vector>

#include "specflow/specflow.hpp"

namespace specflow::fixtures {

/// Diagonal path t -> diag(f(t)).
inline OperatorPath diag_path(int dim, std::function<std::vector<double>(double)> f) {
  return OperatorPath(dim, [f = std::move(f)](double t) { return SelfAdjointOperator::diagonal(f(t)); });
}

/// t -> diag(2t - 1, 5, -5), one upward crossing at t = 1/2.
inline OperatorPath up_path() {
  return diag_path(3, [](double t) { return std::vector<double>{2 * t - 1, 5, -5}; });
}

inline OperatorPath down_path() {
  return diag_path(3, [](double t) { return std::vector<double>{1 - 2 * t, 5, -5}; });
}

inline int flow_of(const OperatorPath& p, const FlowOptions& o = {}) { return spectral_flow(p, o).flow; }

inline int oracle_of(const OperatorPath& p, int grid = 512) { return oracle::oracle_flow(p, grid).flow; }

}  // namespace specflow::fixtures
