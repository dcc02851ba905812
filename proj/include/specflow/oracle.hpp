#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "specflow/errors.hpp"
#include "specflow/path.hpp"

// Brute-force spectral flow used to cross-check the partition-based
// computation. It shares nothing with flow.hpp beyond the path type: it has
// its own eigensolver and counts sign changes on a uniform grid.

namespace specflow::oracle {

/// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations.
inline std::vector<double> jacobi_eigenvalues(Matrix a, int max_sweeps = 100) {
  const Eigen::Index n = a.rows();
  const double scale = a.norm();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= 1e-14 * scale) break;

    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double r = std::abs(apq);
        if (r <= 1e-300) continue;
        const Complex e = apq / r;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * r);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // G = [[c, s], [-s conj(e), c conj(e)]] on (p, q); A <- G* A G.
        const Complex ce = std::conj(e);
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = c * akp - s * ce * akq;
          a(k, q) = s * akp + c * ce * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = c * apk - s * e * aqk;
          a(q, k) = s * apk + c * e * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }
  std::vector<double> out(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = a(i, i).real();
  std::sort(out.begin(), out.end());
  return out;
}

struct CrossingRecord {
  double t_lo = 0.0;  ///< bracketing grid cell
  double t_hi = 0.0;
  int direction = 0;  ///< +1 upward through zero, -1 downward
  double refined_t = 0.0;
};

struct OracleResult {
  int flow = 0;
  int grid = 0;
  std::vector<CrossingRecord> records;
  bool resolution_warning = false;  ///< set by oracle_flow_checked
  int upward() const {
    return static_cast<int>(std::count_if(records.begin(), records.end(), [](const auto& r) { return r.direction > 0; }));
  }
  int downward() const { return static_cast<int>(records.size()) - upward(); }
};

inline int count_nonnegative(const OperatorPath& path, double t) {
  const auto values = jacobi_eigenvalues(path(t).entries());
  return static_cast<int>(std::count_if(values.begin(), values.end(), [](double v) { return v >= 0.0; }));
}

/// Signed zero crossings on a uniform grid. A change of the nonnegative count
/// by c across a cell yields |c| records, each located by bisection on the
/// count to width 1e-10.
inline OracleResult oracle_flow(const OperatorPath& path, int grid = 512, double zero_band = 1e-9) {
  if (grid < 64) throw OracleError("oracle grid must be >= 64");
  for (double t : {0.0, 1.0}) {
    const auto values = jacobi_eigenvalues(path(t).entries());
    double radius = 0.0, closest = std::abs(values.front());
    for (double v : values) {
      radius = std::max(radius, std::abs(v));
      closest = std::min(closest, std::abs(v));
    }
    if (closest <= zero_band * radius) {
      std::ostringstream os;
      os << "endpoint t=" << t << " has eigenvalue within " << zero_band * radius << " of zero";
      throw OracleError(os.str());
    }
  }

  OracleResult result;
  result.grid = grid;
  int prev = count_nonnegative(path, 0.0);
  for (int j = 0; j < grid; ++j) {
    const double lo = static_cast<double>(j) / grid;
    const double hi = static_cast<double>(j + 1) / grid;
    const int next = count_nonnegative(path, hi);
    const int change = next - prev;
    const int dir = change > 0 ? 1 : -1;
    for (int unit = 1; unit <= std::abs(change); ++unit) {
      double a = lo, b = hi;
      while (b - a > 1e-10) {
        const double mid = 0.5 * (a + b);
        if (dir * (count_nonnegative(path, mid) - prev) >= unit)
          b = mid;
        else
          a = mid;
      }
      result.records.push_back({lo, hi, dir, 0.5 * (a + b)});
    }
    result.flow += change;
    prev = next;
  }
  return result;
}

/// oracle_flow at `grid` and `2 * grid`; flags a resolution warning when the
/// flow or the number of upward/downward crossings differ.
inline OracleResult oracle_flow_checked(const OperatorPath& path, int grid = 512, double zero_band = 1e-9) {
  OracleResult coarse = oracle_flow(path, grid, zero_band);
  const OracleResult fine = oracle_flow(path, 2 * grid, zero_band);
  coarse.resolution_warning =
      coarse.flow != fine.flow || coarse.upward() != fine.upward() || coarse.downward() != fine.downward();
  return coarse;
}

}  // namespace specflow::oracle
