#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "specflow/errors.hpp"

namespace specflow {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Relative asymmetry below which input is symmetrized instead of rejected.
inline constexpr double kSymmetrizeTolerance = 1e-12;

/// A finite Hermitian matrix. Construction symmetrizes near-Hermitian input
/// as (A + A*)/2 and rejects anything further from self-adjoint.
class SelfAdjointOperator {
 public:
  explicit SelfAdjointOperator(const Matrix& entries) : entries_(entries) {
    if (entries.rows() < 1 || entries.rows() != entries.cols()) {
      std::ostringstream os;
      os << "operator must be square with dim >= 1, got " << entries.rows() << "x" << entries.cols();
      throw InvalidSpec(os.str());
    }
    const double norm = entries.cwiseAbs().maxCoeff();
    const double asym = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
    if (!std::isfinite(norm)) throw NotSelfAdjoint("operator has non-finite entries");
    if (asym > kSymmetrizeTolerance * norm) {
      std::ostringstream os;
      os << "asymmetry " << asym << " exceeds " << kSymmetrizeTolerance << " * |A| (|A| = " << norm << ")";
      throw NotSelfAdjoint(os.str());
    }
    if (asym > 0.0) entries_ = (entries + entries.adjoint()) / 2.0;
  }

  static SelfAdjointOperator diagonal(const std::vector<double>& values) {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(values.size()), static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = values[i];
    return SelfAdjointOperator(m);
  }

  static SelfAdjointOperator identity(int dim) { return SelfAdjointOperator(Matrix::Identity(dim, dim)); }

  int dim() const noexcept { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const noexcept { return entries_; }

  /// Largest absolute entry; used for relative tolerances on matrix equality.
  double max_norm() const { return entries_.cwiseAbs().maxCoeff(); }

 private:
  Matrix entries_;
};

inline SelfAdjointOperator operator+(const SelfAdjointOperator& a, const SelfAdjointOperator& b) {
  return SelfAdjointOperator(a.entries() + b.entries());
}

/// Convex combination (1 - s) a + s b.
inline SelfAdjointOperator lerp(const SelfAdjointOperator& a, const SelfAdjointOperator& b, double s) {
  if (a.dim() != b.dim()) throw DimensionMismatch("cannot interpolate operators of different dimension");
  return SelfAdjointOperator((1.0 - s) * a.entries() + s * b.entries());
}

/// Sorted eigenvalues, repeated with multiplicity.
struct Spectrum {
  std::vector<double> values;

  int dim() const noexcept { return static_cast<int>(values.size()); }
  double radius() const {
    double r = 0.0;
    for (double v : values) r = std::max(r, std::abs(v));
    return r;
  }
  double smallest_abs() const {
    double r = std::numeric_limits<double>::infinity();
    for (double v : values) r = std::min(r, std::abs(v));
    return r;
  }
};

inline Spectrum eigenvalues(const SelfAdjointOperator& op) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(op.entries(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    std::ostringstream os;
    os << "eigensolver did not converge (dim " << op.dim() << ", max |entry| " << op.max_norm() << ")";
    throw EigenSolverFailure(os.str());
  }
  Spectrum s;
  const auto& ev = solver.eigenvalues();
  s.values.assign(ev.data(), ev.data() + ev.size());
  std::sort(s.values.begin(), s.values.end());
  return s;
}

/// Closed real interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct EigenCount {
  Interval interval;
  int count = 0;
};

/// Absolute tolerance derived from a tolerance relative to the spectral radius.
inline double absolute_tolerance(const Spectrum& s, double relative) {
  return relative * std::max(s.radius(), std::numeric_limits<double>::min());
}

/// Number of eigenvalues (with multiplicity) in [lo, hi]. Throws
/// BoundaryAmbiguity when an eigenvalue sits within the tolerance of an
/// endpoint, since the side it belongs to is then numerically undecidable.
inline EigenCount eigen_count(const Spectrum& spectrum, Interval interval, double cluster_tol = 1e-9) {
  if (!(interval.lo <= interval.hi)) throw InvalidSpec("eigen_count interval is empty");
  const double tol = absolute_tolerance(spectrum, cluster_tol);
  EigenCount out{interval, 0};
  for (double v : spectrum.values) {
    if (std::abs(v - interval.lo) <= tol || std::abs(v - interval.hi) <= tol) {
      std::ostringstream os;
      os << "eigenvalue " << v << " within " << tol << " of endpoint of [" << interval.lo << ", " << interval.hi
         << "]";
      throw BoundaryAmbiguity(os.str());
    }
    if (v >= interval.lo && v <= interval.hi) ++out.count;
  }
  return out;
}

inline EigenCount eigen_count(const SelfAdjointOperator& op, Interval interval, double cluster_tol = 1e-9) {
  return eigen_count(eigenvalues(op), interval, cluster_tol);
}

/// Count in [0, a] where eigenvalues within `zero_tol` of zero are taken to be
/// zero and therefore counted. The upper endpoint must already be certified.
inline int count_closed_at_zero(const Spectrum& spectrum, double a, double zero_tol) {
  int n = 0;
  for (double v : spectrum.values)
    if (v >= -zero_tol && v <= a) ++n;
  return n;
}

/// Number of eigenvalues strictly inside (-a, a).
inline int symmetric_count(const Spectrum& spectrum, double a) {
  int n = 0;
  for (double v : spectrum.values)
    if (std::abs(v) < a) ++n;
  return n;
}

/// Distance from {-a, a} to the spectrum.
inline double window_margin(const Spectrum& spectrum, double a) {
  double m = std::numeric_limits<double>::infinity();
  for (double v : spectrum.values) m = std::min(m, std::abs(std::abs(v) - a));
  return m;
}

struct SpectralWindow {
  double lambda = 0.0;
  double margin = 0.0;
};

inline constexpr double kMinMarginRelative = 1e-6;

/// Certifies a window radius near `target`. Keeps `target` when its margin is
/// acceptable, otherwise moves to the midpoint of the closest gap of |spectrum|
/// (the gap above zero included) that lands in [target/2, 2 target].
inline SpectralWindow certify_window(const Spectrum& spectrum, double target,
                                     double min_margin_rel = kMinMarginRelative) {
  if (!(target > 0.0)) throw InvalidSpec("window target must be positive");
  const double min_margin = std::max(min_margin_rel * spectrum.radius(), std::numeric_limits<double>::min());
  const double here = window_margin(spectrum, target);
  if (here >= min_margin) return {target, here};

  std::vector<double> abs_values{0.0};
  for (double v : spectrum.values) abs_values.push_back(std::abs(v));
  std::sort(abs_values.begin(), abs_values.end());

  std::vector<double> candidates;
  for (std::size_t i = 0; i + 1 < abs_values.size(); ++i)
    if (abs_values[i + 1] > abs_values[i]) candidates.push_back(0.5 * (abs_values[i] + abs_values[i + 1]));
  // Above the spectrum there is no midpoint; step one gap-width past the top.
  const double top = abs_values.back();
  candidates.push_back(top + std::max(top, 1.0));

  bool found = false;
  SpectralWindow best;
  for (double c : candidates) {
    const double lambda = std::clamp(c, target / 2.0, 2.0 * target);
    const double margin = window_margin(spectrum, lambda);
    if (!(lambda > 0.0) || margin < min_margin) continue;
    const double dist = std::abs(lambda - target);
    const double best_dist = std::abs(best.lambda - target);
    if (!found || dist < best_dist || (dist == best_dist && margin > best.margin)) {
      best = {lambda, margin};
      found = true;
    }
  }
  if (!found) {
    std::ostringstream os;
    os << "no window radius in [" << target / 2.0 << ", " << 2.0 * target << "] with margin >= " << min_margin;
    throw NoGap(os.str());
  }
  return best;
}

inline SpectralWindow certify_window(const SelfAdjointOperator& op, double target,
                                     double min_margin_rel = kMinMarginRelative) {
  return certify_window(eigenvalues(op), target, min_margin_rel);
}

/// True when no eigenvalue lies within `zero_tol_rel * radius` of zero.
inline bool is_invertible(const Spectrum& s, double zero_tol_rel = 1e-9) {
  if (s.radius() == 0.0) return false;
  return s.smallest_abs() > absolute_tolerance(s, zero_tol_rel);
}

inline bool is_invertible(const SelfAdjointOperator& op, double zero_tol_rel = 1e-9) {
  return is_invertible(eigenvalues(op), zero_tol_rel);
}

}  // namespace specflow
