#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "specflow/operator.hpp"
#include "specflow/path.hpp"

namespace specflow {

struct FlowOptions {
  int init_samples = 8;     ///< uniform segments before bisection
  int max_depth = 20;       ///< bisection levels below an initial segment
  int witness_points = 9;   ///< samples per segment, endpoints included
  double cluster_tol = 1e-9;                   ///< relative to spectral radius
  double min_margin_rel = kMinMarginRelative;  ///< window margin, relative
  double window_cap = std::numeric_limits<double>::infinity();  ///< upper bound on radii
};

/// One piece [t_start, t_end] of a partition together with its window radius
/// and the samples on which the symmetric count was observed constant.
struct Segment {
  double t_start = 0.0;
  double t_end = 0.0;
  double radius = 0.0;
  double margin = 0.0;
  int symmetric_count = 0;
  std::vector<double> witness;
  int count_start = 0;  ///< m(A(t_start), [0, radius])
  int count_end = 0;    ///< m(A(t_end), [0, radius])
};

struct FlowCertificate {
  int dim = 0;
  FlowOptions options;
  std::vector<Segment> segments;
  int flow = 0;

  std::vector<double> times() const {
    std::vector<double> out{0.0};
    for (const auto& s : segments) out.push_back(s.t_end);
    return out;
  }
  std::vector<double> radii() const {
    std::vector<double> out;
    for (const auto& s : segments) out.push_back(s.radius);
    return out;
  }
};

namespace detail {

class SpectrumCache {
 public:
  explicit SpectrumCache(const OperatorPath& path) : path_(path) {}

  std::optional<double> lipschitz() const { return path_.lipschitz(); }

  const Spectrum& at(double t) {
    auto it = cache_.find(t);
    if (it == cache_.end()) it = cache_.emplace(t, eigenvalues(path_(t))).first;
    return it->second;
  }

 private:
  const OperatorPath& path_;
  std::map<double, Spectrum> cache_;
};

struct Window {
  double radius;
  double margin;
  int count;
};

/// Bound on how fast any eigenvalue can move between witnesses: the path's
/// Lipschitz hint when it has one, otherwise twice the steepest observed
/// slope of the sorted eigenvalues (Weyl: sorted eigenvalues move no faster
/// than the operator).
inline double eigenvalue_speed(const std::vector<double>& times, const std::vector<const Spectrum*>& spectra,
                               std::optional<double> lipschitz) {
  if (lipschitz) return *lipschitz;
  double speed = 0.0;
  for (std::size_t k = 0; k + 1 < spectra.size(); ++k) {
    const double dt = times[k + 1] - times[k];
    for (std::size_t j = 0; j < spectra[k]->values.size(); ++j)
      speed = std::max(speed, std::abs(spectra[k + 1]->values[j] - spectra[k]->values[j]) / dt);
  }
  return 2.0 * speed;
}

/// Finds a radius a such that no witness spectrum meets +-a, no eigenvalue
/// can reach +-a between consecutive witnesses at the given speed, and the
/// number of eigenvalues in (-a, a) agrees across all witnesses. Gaps between
/// spectral values are preferred, widest margin first; the region above the
/// whole spectrum is the fallback.
inline std::optional<Window> common_window(const std::vector<double>& times,
                                           const std::vector<const Spectrum*>& spectra, double speed,
                                           const FlowOptions& opt) {
  std::vector<double> abs_values{0.0};
  double radius = 0.0;
  double max_step = 0.0;
  for (const Spectrum* s : spectra) {
    for (double v : s->values) abs_values.push_back(std::abs(v));
    radius = std::max(radius, s->radius());
  }
  for (std::size_t k = 0; k + 1 < times.size(); ++k) max_step = std::max(max_step, times[k + 1] - times[k]);
  std::sort(abs_values.begin(), abs_values.end());
  const double min_margin = std::max(opt.min_margin_rel * radius, std::numeric_limits<double>::min());

  auto margin_of = [&](double a) {
    double m = std::numeric_limits<double>::infinity();
    for (const Spectrum* s : spectra) m = std::min(m, window_margin(*s, a));
    return m;
  };
  auto clears = [&](double a) {
    for (std::size_t k = 0; k + 1 < spectra.size(); ++k)
      if (!(window_margin(*spectra[k], a) + window_margin(*spectra[k + 1], a) > speed * (times[k + 1] - times[k])))
        return false;
    return true;
  };

  std::vector<std::pair<double, double>> bounded;  // (margin, radius)
  for (std::size_t i = 0; i + 1 < abs_values.size(); ++i) {
    const double lo = abs_values[i];
    const double hi = abs_values[i + 1];
    if (!(hi > lo)) continue;
    double a = 0.5 * (lo + hi);
    if (a > opt.window_cap) {
      if (opt.window_cap <= lo) continue;
      a = opt.window_cap;
    }
    const double m = margin_of(a);
    if (m >= min_margin) bounded.emplace_back(m, a);
  }
  std::stable_sort(bounded.begin(), bounded.end(), [](const auto& x, const auto& y) { return x.first > y.first; });

  for (const auto& [m, a] : bounded) {
    const int c = symmetric_count(*spectra.front(), a);
    bool constant = clears(a);
    for (const Spectrum* s : spectra) constant = constant && symmetric_count(*s, a) == c;
    if (constant) return Window{a, m, c};
  }

  const double top = abs_values.back();
  const double a = std::min(top + std::max({top, 1.0, speed * max_step}), opt.window_cap);
  if (a - top >= min_margin && clears(a)) return Window{a, a - top, spectra.front()->dim()};
  return std::nullopt;
}

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = i + 1 == n ? hi : lo + (hi - lo) * i / (n - 1);
  return out;
}

inline std::optional<Segment> try_segment(SpectrumCache& cache, std::vector<double> witness, const FlowOptions& opt) {
  std::sort(witness.begin(), witness.end());
  witness.erase(std::unique(witness.begin(), witness.end()), witness.end());
  std::vector<const Spectrum*> spectra;
  spectra.reserve(witness.size());
  for (double t : witness) spectra.push_back(&cache.at(t));
  auto w = common_window(witness, spectra, eigenvalue_speed(witness, spectra, cache.lipschitz()), opt);
  if (!w) return std::nullopt;
  Segment seg;
  seg.t_start = witness.front();
  seg.t_end = witness.back();
  seg.radius = w->radius;
  seg.margin = w->margin;
  seg.symmetric_count = w->count;
  seg.witness = std::move(witness);
  return seg;
}

inline void refine_segment(SpectrumCache& cache, double lo, double hi, int depth, const FlowOptions& opt,
                           std::vector<Segment>& out) {
  if (auto seg = try_segment(cache, linspace(lo, hi, opt.witness_points), opt)) {
    out.push_back(std::move(*seg));
    return;
  }
  if (depth >= opt.max_depth) {
    std::ostringstream os;
    os << "no constant window on [" << lo << ", " << hi << "] after " << depth << " bisections";
    throw DepthExceeded(os.str());
  }
  const double mid = 0.5 * (lo + hi);
  refine_segment(cache, lo, mid, depth + 1, opt, out);
  refine_segment(cache, mid, hi, depth + 1, opt, out);
}

inline void validate(const FlowOptions& opt) {
  if (opt.init_samples < 1) throw InvalidSpec("init_samples must be >= 1");
  if (opt.max_depth < 1) throw InvalidSpec("max_depth must be >= 1");
  if (opt.witness_points < 2) throw InvalidSpec("witness_points must be >= 2");
  if (!(opt.cluster_tol > 0.0)) throw InvalidSpec("cluster_tol must be positive");
  if (!(opt.min_margin_rel > 0.0)) throw InvalidSpec("min_margin_rel must be positive");
  if (!(opt.window_cap > 0.0)) throw InvalidSpec("window_cap must be positive");
}

inline std::vector<Segment> refine_partition(SpectrumCache& cache, const FlowOptions& opt) {
  validate(opt);
  std::vector<Segment> pieces;
  const auto grid = linspace(0.0, 1.0, opt.init_samples + 1);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) refine_segment(cache, grid[i], grid[i + 1], 0, opt, pieces);

  // Greedy left-to-right merge of neighbours that share a window.
  std::vector<Segment> merged;
  for (auto& piece : pieces) {
    if (!merged.empty()) {
      std::vector<double> witness = merged.back().witness;
      witness.insert(witness.end(), piece.witness.begin(), piece.witness.end());
      if (auto joined = try_segment(cache, std::move(witness), opt)) {
        merged.back() = std::move(*joined);
        continue;
      }
    }
    merged.push_back(std::move(piece));
  }
  return merged;
}

}  // namespace detail

/// Partition 0 = t_0 < ... < t_N = 1 with radii a_i such that the number of
/// eigenvalues in [-a_i, a_i] is constant on every witness sample of segment i.
inline std::vector<Segment> refine_partition(const OperatorPath& path, const FlowOptions& options = {}) {
  detail::SpectrumCache cache(path);
  return detail::refine_partition(cache, options);
}

/// Spectral flow as the telescoping sum over segments of
///   m(A(t_i), [0, a_i]) - m(A(t_{i-1}), [0, a_i]).
/// Counts are closed at zero: eigenvalues within the cluster tolerance of 0
/// are counted as zero eigenvalues.
inline FlowCertificate spectral_flow(const OperatorPath& path, const FlowOptions& options = {}) {
  detail::SpectrumCache cache(path);
  FlowCertificate cert;
  cert.dim = path.dim();
  cert.options = options;
  cert.segments = detail::refine_partition(cache, options);
  for (auto& seg : cert.segments) {
    const Spectrum& s0 = cache.at(seg.t_start);
    const Spectrum& s1 = cache.at(seg.t_end);
    seg.count_start = count_closed_at_zero(s0, seg.radius, absolute_tolerance(s0, options.cluster_tol));
    seg.count_end = count_closed_at_zero(s1, seg.radius, absolute_tolerance(s1, options.cluster_tol));
    cert.flow += seg.count_end - seg.count_start;
  }
  return cert;
}

}  // namespace specflow
