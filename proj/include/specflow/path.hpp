#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "specflow/operator.hpp"

namespace specflow {

/// Relative tolerance for matching the end of one path to the start of another.
inline constexpr double kEndpointTolerance = 1e-10;

/// A continuous family t -> A(t) of self-adjoint operators on [0, 1].
/// Paths are immutable values; copies share the evaluator.
class OperatorPath {
 public:
  using Evaluator = std::function<SelfAdjointOperator(double)>;

  OperatorPath(int dim, Evaluator evaluator, std::optional<double> lipschitz = std::nullopt,
               std::string label = {})
      : dim_(dim), eval_(std::make_shared<Evaluator>(std::move(evaluator))), lipschitz_(lipschitz),
        label_(std::move(label)) {
    if (dim < 1) throw InvalidSpec("path dimension must be >= 1");
  }

  int dim() const noexcept { return dim_; }
  std::optional<double> lipschitz() const noexcept { return lipschitz_; }
  const std::string& label() const noexcept { return label_; }

  SelfAdjointOperator operator()(double t) const {
    SelfAdjointOperator op = (*eval_)(std::clamp(t, 0.0, 1.0));
    if (op.dim() != dim_) {
      std::ostringstream os;
      os << "path '" << label_ << "' returned dim " << op.dim() << " at t=" << t << ", expected " << dim_;
      throw DimensionMismatch(os.str());
    }
    return op;
  }

  SelfAdjointOperator start() const { return (*this)(0.0); }
  SelfAdjointOperator end() const { return (*this)(1.0); }

 private:
  int dim_;
  std::shared_ptr<const Evaluator> eval_;
  std::optional<double> lipschitz_;
  std::string label_;
};

inline bool operators_match(const SelfAdjointOperator& a, const SelfAdjointOperator& b,
                            double rel_tol = kEndpointTolerance) {
  if (a.dim() != b.dim()) return false;
  const double diff = (a.entries() - b.entries()).cwiseAbs().maxCoeff();
  return diff <= rel_tol * std::max(a.max_norm(), b.max_norm());
}

inline OperatorPath constant_path(const SelfAdjointOperator& op) {
  return OperatorPath(op.dim(), [op](double) { return op; }, 0.0, "constant");
}

/// Straight segment t -> (1 - t) a + t b.
inline OperatorPath straight_segment(const SelfAdjointOperator& a, const SelfAdjointOperator& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("segment endpoints differ in dimension");
  return OperatorPath(a.dim(), [a, b](double t) { return lerp(a, b, t); }, std::nullopt, "segment");
}

/// a on [0, 1/2], b on [1/2, 1].
inline OperatorPath concat(const OperatorPath& a, const OperatorPath& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("concat of paths with different dimension");
  if (!operators_match(a.end(), b.start())) {
    const double diff = (a.end().entries() - b.start().entries()).cwiseAbs().maxCoeff();
    std::ostringstream os;
    os << "a(1) and b(0) differ by " << diff << " (tolerance " << kEndpointTolerance << " relative)";
    throw EndpointMismatch(os.str());
  }
  std::optional<double> lip;
  if (a.lipschitz() && b.lipschitz()) lip = 2.0 * std::max(*a.lipschitz(), *b.lipschitz());
  return OperatorPath(
      a.dim(), [a, b](double t) { return t <= 0.5 ? a(2.0 * t) : b(2.0 * t - 1.0); }, lip,
      "(" + a.label() + " * " + b.label() + ")");
}

inline OperatorPath reverse(const OperatorPath& a) {
  return OperatorPath(a.dim(), [a](double t) { return a(1.0 - t); }, a.lipschitz(), a.label() + "^-1");
}

/// Precomposes with a monotone bijection of [0, 1].
inline OperatorPath reparametrize(const OperatorPath& a, std::function<double(double)> phi) {
  return OperatorPath(
      a.dim(), [a, phi = std::move(phi)](double t) { return a(phi(t)); }, std::nullopt, a.label());
}

/// Piecewise-linear path through (t_j, A_j); times must start at 0, end at 1
/// and increase strictly.
class SampledPath {
 public:
  struct Sample {
    double t;
    SelfAdjointOperator op;
  };

  explicit SampledPath(std::vector<Sample> samples) : samples_(std::move(samples)) {
    if (samples_.size() < 2) throw InvalidSpec("sampled path needs at least two samples");
    if (samples_.front().t != 0.0 || samples_.back().t != 1.0)
      throw InvalidSpec("sampled path times must start at 0 and end at 1");
    for (std::size_t i = 1; i < samples_.size(); ++i) {
      if (!(samples_[i].t > samples_[i - 1].t)) throw InvalidSpec("sampled path times must increase strictly");
      if (samples_[i].op.dim() != samples_[0].op.dim()) throw DimensionMismatch("sampled path dimensions differ");
    }
  }

  const std::vector<Sample>& samples() const noexcept { return samples_; }

  SelfAdjointOperator at(double t) const {
    auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                               [](double v, const Sample& s) { return v < s.t; });
    if (it == samples_.begin()) return samples_.front().op;
    if (it == samples_.end()) return samples_.back().op;
    const Sample& hi = *it;
    const Sample& lo = *(it - 1);
    return lerp(lo.op, hi.op, (t - lo.t) / (hi.t - lo.t));
  }

  OperatorPath path() const {
    auto self = std::make_shared<const SampledPath>(*this);
    return OperatorPath(samples_.front().op.dim(), [self](double t) { return self->at(t); }, std::nullopt,
                        "sampled");
  }

 private:
  std::vector<Sample> samples_;
};

/// H(s, t) on the unit square; each s-slice is a path.
class Homotopy {
 public:
  using Evaluator = std::function<SelfAdjointOperator(double, double)>;

  Homotopy(int dim, Evaluator evaluator) : dim_(dim), eval_(std::make_shared<Evaluator>(std::move(evaluator))) {}

  int dim() const noexcept { return dim_; }
  SelfAdjointOperator operator()(double s, double t) const { return (*eval_)(s, t); }

  OperatorPath slice(double s) const {
    auto eval = eval_;
    return OperatorPath(dim_, [eval, s](double t) { return (*eval)(s, t); }, std::nullopt, "slice");
  }

  /// s -> H(s, 0) and s -> H(s, 1).
  OperatorPath start_track() const {
    auto eval = eval_;
    return OperatorPath(dim_, [eval](double s) { return (*eval)(s, 0.0); }, std::nullopt, "start-track");
  }
  OperatorPath end_track() const {
    auto eval = eval_;
    return OperatorPath(dim_, [eval](double s) { return (*eval)(s, 1.0); }, std::nullopt, "end-track");
  }

 private:
  int dim_;
  std::shared_ptr<const Evaluator> eval_;
};

/// Straight-line homotopy H(s, t) = (1 - s) a(t) + s b(t) between paths with
/// common endpoints.
inline Homotopy affine_homotopy(const OperatorPath& a, const OperatorPath& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("affine homotopy between paths of different dimension");
  if (!operators_match(a.start(), b.start())) throw EndpointMismatch("affine homotopy: a(0) != b(0)");
  if (!operators_match(a.end(), b.end())) throw EndpointMismatch("affine homotopy: a(1) != b(1)");
  return Homotopy(a.dim(), [a, b](double s, double t) { return lerp(a(t), b(t), s); });
}

}  // namespace specflow
