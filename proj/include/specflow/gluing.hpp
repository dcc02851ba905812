#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "specflow/families.hpp"
#include "specflow/operator.hpp"
#include "specflow/path.hpp"
#include "specflow/random.hpp"

namespace specflow {

/// Window radius used when merging a base spectrum with the sphere family.
inline constexpr double kGluingWindow = 2.0;

struct GluingSpec {
  std::vector<double> base{-4.5, -3.0, 3.0, 4.5};
  BaerFamilySpec sphere;
  double epsilon = 0.4;
  std::uint64_t seed = 0;

  int dim() const noexcept { return static_cast<int>(base.size()) + sphere.dim(); }

  void validate() const {
    sphere.validate();
    if (!(epsilon >= 0.0) || !(epsilon < 0.5)) {
      std::ostringstream os;
      os << "epsilon must lie in [0, 1/2), got " << epsilon;
      throw InvalidSpec(os.str());
    }
    double gap = 1.0;  // crossing eigenvalue stays in [-1, 1]
    for (double v : base) {
      if (std::abs(v) <= kGluingWindow) {
        std::ostringstream os;
        os << "base eigenvalue " << v << " lies in [-2, 2]";
        throw InvalidSpec(os.str());
      }
    }
    for (const auto* values : {&base, &sphere.background})
      for (double v : *values) gap = std::min(gap, std::abs(std::abs(v) - kGluingWindow));
    if (!(epsilon < 0.5 * gap)) {
      std::ostringstream os;
      os << "epsilon " << epsilon << " is not below half the distance " << gap << " from the spectrum to +-2";
      throw InvalidSpec(os.str());
    }
  }
};

namespace detail {

inline constexpr int kNoiseKnots = 8;

/// Per-eigenvalue smooth noise in (-1, 1): seeded knot values on a uniform
/// grid over [0, 1] joined by cubic smoothstep.
class SmoothNoise {
 public:
  SmoothNoise(int channels, std::uint64_t seed) : knots_(static_cast<std::size_t>(channels)) {
    Rng rng(seed);
    for (auto& row : knots_)
      for (double& v : row) v = rng.symmetric();
  }

  double operator()(int channel, double t) const {
    const auto& row = knots_[static_cast<std::size_t>(channel)];
    const double x = std::clamp(t, 0.0, 1.0) * (kNoiseKnots - 1);
    const int k = std::min(static_cast<int>(x), kNoiseKnots - 2);
    const double f = x - k;
    const double s = f * f * (3.0 - 2.0 * f);
    return row[static_cast<std::size_t>(k)] * (1.0 - s) + row[static_cast<std::size_t>(k) + 1] * s;
  }

 private:
  std::vector<std::array<double, kNoiseKnots>> knots_;
};

}  // namespace detail

/// A glued family: at each t the merged spectrum (base followed by the sphere
/// family at t) with every eigenvalue moved by less than epsilon.
class GluedPath {
 public:
  explicit GluedPath(GluingSpec spec)
      : spec_((spec.validate(), std::move(spec))), noise_(spec_.dim(), spec_.seed) {}

  const GluingSpec& spec() const noexcept { return spec_; }
  int dim() const noexcept { return spec_.dim(); }

  std::vector<double> unperturbed(double t) const {
    std::vector<double> values = spec_.base;
    const auto sphere = baer_values(spec_.sphere, t);
    values.insert(values.end(), sphere.begin(), sphere.end());
    return values;
  }

  std::vector<double> perturbed(double t) const {
    std::vector<double> values = unperturbed(t);
    for (std::size_t j = 0; j < values.size(); ++j) values[j] += spec_.epsilon * noise_(static_cast<int>(j), t);
    return values;
  }

  SelfAdjointOperator at(double t) const { return SelfAdjointOperator::diagonal(perturbed(t)); }

  OperatorPath path() const {
    auto self = std::make_shared<const GluedPath>(*this);
    std::ostringstream label;
    label << "glue(m=" << spec_.sphere.m << ", eps=" << spec_.epsilon << ", seed=" << spec_.seed << ")";
    return OperatorPath(dim(), [self](double t) { return self->at(t); }, std::nullopt, label.str());
  }

 private:
  GluingSpec spec_;
  detail::SmoothNoise noise_;
};

inline GluedPath glue(const GluingSpec& spec) { return GluedPath(spec); }

struct WindowConstancyReport {
  bool constant = true;
  int count = 0;               ///< count in [-2, 2] at t = 0
  double offending_t = -1.0;   ///< first grid point with a different count
  std::vector<double> offending_spectrum;
  double max_deviation = 0.0;  ///< max |mu_j(t) - lambda_j(t)| over the grid, sorted pairing
};

/// Checks that the number of eigenvalues in [-2, 2] is the same at every point
/// of a uniform grid. An eigenvalue sitting on +-2 counts as a violation.
inline WindowConstancyReport window_count_constancy(const OperatorPath& path, int grid = 101) {
  WindowConstancyReport report;
  for (int i = 0; i < grid; ++i) {
    const double t = static_cast<double>(i) / (grid - 1);
    const Spectrum s = eigenvalues(path(t));
    int c = -1;
    try {
      c = eigen_count(s, {-kGluingWindow, kGluingWindow}).count;
    } catch (const BoundaryAmbiguity&) {
    }
    if (i == 0) report.count = c;
    if ((c != report.count || c < 0) && report.constant) {
      report.constant = false;
      report.offending_t = t;
      report.offending_spectrum = s.values;
    }
  }
  return report;
}

/// As above, and also records the largest deviation of the sorted spectrum
/// from the sorted unperturbed merge.
inline WindowConstancyReport window_count_constancy(const GluedPath& glued, int grid = 101) {
  WindowConstancyReport report = window_count_constancy(glued.path(), grid);
  for (int i = 0; i < grid; ++i) {
    const double t = static_cast<double>(i) / (grid - 1);
    const Spectrum s = eigenvalues(glued.at(t));
    std::vector<double> ref = glued.unperturbed(t);
    std::sort(ref.begin(), ref.end());
    for (std::size_t j = 0; j < ref.size(); ++j)
      report.max_deviation = std::max(report.max_deviation, std::abs(s.values[j] - ref[j]));
  }
  return report;
}

}  // namespace specflow
