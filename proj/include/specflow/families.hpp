#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <vector>

#include "specflow/operator.hpp"
#include "specflow/path.hpp"
#include "specflow/random.hpp"

namespace specflow {

// ---------------------------------------------------------------------------
// Crossing family on the sphere.
//
// Only the spectral signature of the sphere metrics is modelled: inside
// [-2, 2] there is a single eigenvalue 2t - 1 of multiplicity m + 1, and the
// background sits outside [-2, 2] for every t.
// ---------------------------------------------------------------------------

inline const std::vector<double>& default_background() {
  static const std::vector<double> values{-7.0, -5.0, 5.0, 7.0};
  return values;
}

struct BaerFamilySpec {
  int m = 1;
  std::vector<double> background = default_background();

  int mult() const noexcept { return m + 1; }
  int dim() const noexcept { return mult() + static_cast<int>(background.size()); }

  void validate() const {
    if (m < 1) throw InvalidSpec("crossing family needs m >= 1");
    for (double v : background) {
      if (!(std::abs(v) > 2.0)) {
        std::ostringstream os;
        os << "background value " << v << " lies in [-2, 2]";
        throw InvalidSpec(os.str());
      }
    }
  }
};

/// The crossing eigenvalue lambda(t) = 2t - 1.
inline double crossing_value(double t) { return 2.0 * t - 1.0; }

/// Unperturbed spectrum of the crossing family at t (crossing modes first).
inline std::vector<double> baer_values(const BaerFamilySpec& spec, double t) {
  std::vector<double> values(static_cast<std::size_t>(spec.mult()), crossing_value(t));
  values.insert(values.end(), spec.background.begin(), spec.background.end());
  return values;
}

inline OperatorPath baer_family(const BaerFamilySpec& spec) {
  spec.validate();
  std::ostringstream label;
  label << "baer(m=" << spec.m << ")";
  return OperatorPath(
      spec.dim(), [spec](double t) { return SelfAdjointOperator::diagonal(baer_values(spec, t)); }, 2.0,
      label.str());
}

// ---------------------------------------------------------------------------
// Dirac operator on the circle in its Fourier eigenbasis.
//
// -i d/dx on spinors with holonomy: spin_shift 1/2 is the bounding spin
// structure, 0 the trivial one, and twist adds a flat connection.
// ---------------------------------------------------------------------------

struct CircleDiracSpec {
  int modes = 1;
  double spin_shift = 0.5;
  double twist = 0.0;
};

inline std::vector<double> circle_values(const CircleDiracSpec& spec) {
  std::vector<double> values;
  for (int k = -spec.modes; k <= spec.modes; ++k) values.push_back(k + spec.spin_shift + spec.twist);
  return values;
}

inline SelfAdjointOperator circle_dirac(const CircleDiracSpec& spec) {
  if (spec.modes < 1) throw InvalidSpec("circle Dirac operator needs modes >= 1");
  return SelfAdjointOperator::diagonal(circle_values(spec));
}

struct CircleFamilySpec {
  int modes = 5;
  double spin_shift = 0.5;
  int winding = 1;
};

/// t -> circle_dirac(twist = winding * t).
inline OperatorPath circle_family(const CircleFamilySpec& spec) {
  if (spec.modes < 1) throw InvalidSpec("circle family needs modes >= 1");
  if (spec.spin_shift != 0.5)
    throw InvalidSpec("circle family needs spin_shift 1/2 so that both endpoints are invertible");
  if (std::abs(spec.winding) > spec.modes) {
    std::ostringstream os;
    os << "winding " << spec.winding << " exceeds the " << spec.modes << " represented modes";
    throw WindowTooSmall(os.str());
  }
  std::ostringstream label;
  label << "circle(K=" << spec.modes << ", n=" << spec.winding << ")";
  return OperatorPath(
      2 * spec.modes + 1,
      [spec](double t) { return circle_dirac({spec.modes, spec.spin_shift, spec.winding * t}); },
      std::abs(static_cast<double>(spec.winding)), label.str());
}

// ---------------------------------------------------------------------------
// Seeded random families (property-test fuel).
// ---------------------------------------------------------------------------

struct RandomFamilySpec {
  int dim = 4;
  std::uint64_t seed = 0;
  bool invertible_ends = true;
};

/// Minimum distance of endpoint spectra from zero guaranteed by
/// `invertible_ends`.
inline constexpr double kRandomEndMargin = 1e-2;

namespace detail {

/// Shift mu such that adding mu * I puts zero in the middle of the gap of
/// `values` closest to zero.
inline double centering_shift(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double best = values.front() - 1.0;
  auto consider = [&](double p) {
    if (std::abs(p) < std::abs(best)) best = p;
  };
  consider(values.back() + 1.0);
  for (std::size_t i = 0; i + 1 < values.size(); ++i)
    if (values[i + 1] - values[i] >= 4.0 * kRandomEndMargin) consider(0.5 * (values[i] + values[i + 1]));
  return -best;
}

inline void check_random_dim(int dim) {
  if (dim < 2 || dim > 32) {
    std::ostringstream os;
    os << "random family dim must be in 2..32, got " << dim;
    throw InvalidSpec(os.str());
  }
}

}  // namespace detail

/// A + t B + sin(pi t) C with seeded Hermitian A, B, C. With invertible_ends
/// the whole path is shifted by mu I so that both endpoint spectra keep a
/// distance of at least kRandomEndMargin from zero.
inline OperatorPath random_family(const RandomFamilySpec& spec) {
  detail::check_random_dim(spec.dim);
  Rng rng(spec.seed);
  const Matrix a = rng.hermitian(spec.dim);
  const Matrix b = rng.hermitian(spec.dim);
  const Matrix c = rng.hermitian(spec.dim, 0.5);
  auto eval = [a, b, c](double t, double mu) {
    Matrix m = a + t * b + std::sin(std::numbers::pi * t) * c;
    m.diagonal().array() += mu;
    return SelfAdjointOperator(m);
  };
  double mu = 0.0;
  if (spec.invertible_ends) {
    const Spectrum s0 = eigenvalues(eval(0.0, 0.0));
    const Spectrum s1 = eigenvalues(eval(1.0, 0.0));
    if (std::min(s0.smallest_abs(), s1.smallest_abs()) < 5.0 * kRandomEndMargin) {
      std::vector<double> all = s0.values;
      all.insert(all.end(), s1.values.begin(), s1.values.end());
      mu = detail::centering_shift(all);
    }
  }
  std::ostringstream label;
  label << "random(dim=" << spec.dim << ", seed=" << spec.seed << ")";
  return OperatorPath(spec.dim, [eval, mu](double t) { return eval(t, mu); }, std::nullopt, label.str());
}

/// A path that stays inside the invertible operators: a Cayley rotation of a
/// fixed invertible diagonal plus a bump whose norm is below half the
/// smallest |diagonal entry|, so no eigenvalue comes within 0.3 of zero.
inline OperatorPath invertible_random_family(int dim, std::uint64_t seed) {
  detail::check_random_dim(dim);
  Rng rng(seed);
  std::vector<double> diag;
  for (int i = 0; i < dim; ++i) diag.push_back((rng.canonical() < 0.5 ? -1.0 : 1.0) * (0.5 + 2.0 * rng.canonical()));
  const Matrix d = SelfAdjointOperator::diagonal(diag).entries();
  const Matrix k = rng.hermitian(dim, 1.0);
  Matrix bump = rng.hermitian(dim, 1.0);
  bump *= 0.2 / bump.norm();
  auto eval = [d, k, bump, dim](double t) {
    const Matrix id = Matrix::Identity(dim, dim);
    const Complex half_i(0.0, 0.5 * t);
    const Matrix u = (id - half_i * k).partialPivLu().solve(id + half_i * k);
    return SelfAdjointOperator(u * d * u.adjoint() + std::sin(std::numbers::pi * t) * bump);
  };
  std::ostringstream label;
  label << "invertible-random(dim=" << dim << ", seed=" << seed << ")";
  return OperatorPath(dim, eval, std::nullopt, label.str());
}

/// A random path starting exactly at `start` whose end is shifted to be
/// invertible: start + t (B + mu I) + sin(pi t) C.
inline OperatorPath random_continuation(const SelfAdjointOperator& start, std::uint64_t seed) {
  const int dim = start.dim();
  Rng rng(seed);
  const Matrix s = start.entries();
  const Matrix b = rng.hermitian(dim);
  const Matrix c = rng.hermitian(dim, 0.5);
  Matrix end = s + b;
  double mu = 0.0;
  const Spectrum s1 = eigenvalues(SelfAdjointOperator(end));
  if (s1.smallest_abs() < 5.0 * kRandomEndMargin) mu = detail::centering_shift(s1.values);
  auto eval = [s, b, c, mu](double t) {
    Matrix m = s + t * b + std::sin(std::numbers::pi * t) * c;
    m.diagonal().array() += t * mu;
    return SelfAdjointOperator(m);
  };
  return OperatorPath(dim, eval, std::nullopt, "continuation");
}

}  // namespace specflow
