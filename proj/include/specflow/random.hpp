#pragma once

#include <cstdint>
#include <random>

#include "specflow/operator.hpp"

namespace specflow {

/// Seeded source of uniform doubles. The mapping from engine output to
/// double is fixed here (53-bit mantissa) so streams are identical across
/// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double canonical() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in (-1, 1).
  double symmetric() {
    double u;
    do u = 2.0 * canonical() - 1.0;
    while (u <= -1.0);
    return u;
  }

  /// Hermitian matrix with entries uniform in (-scale, scale), real and
  /// imaginary parts independent.
  Matrix hermitian(int dim, double scale = 1.0) {
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i) {
      m(i, i) = scale * symmetric();
      for (int j = i + 1; j < dim; ++j) {
        const double re = scale * symmetric();
        const double im = scale * symmetric();
        m(i, j) = Complex(re, im);
        m(j, i) = Complex(re, -im);
      }
    }
    return m;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace specflow
