#include <gtest/gtest.h>

#include "support.hpp"

using namespace specflow;

TEST(Eigenvalues, DiagonalIsSorted) {
  const auto s = eigenvalues(SelfAdjointOperator::diagonal({3, -1, 0.5}));
  ASSERT_EQ(s.dim(), 3);
  EXPECT_NEAR(s.values[0], -1, 1e-14);
  EXPECT_NEAR(s.values[1], 0.5, 1e-14);
  EXPECT_NEAR(s.values[2], 3, 1e-14);
}

TEST(Eigenvalues, Identity) {
  for (double v : eigenvalues(SelfAdjointOperator::identity(4)).values) EXPECT_NEAR(v, 1.0, 1e-14);
}

TEST(Eigenvalues, PauliX) {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  const auto s = eigenvalues(SelfAdjointOperator(m));
  EXPECT_NEAR(s.values[0], -1, 1e-14);
  EXPECT_NEAR(s.values[1], 1, 1e-14);
}

TEST(Eigenvalues, ReconstructionResidual) {
  Rng rng(3);
  const Matrix m = rng.hermitian(10);
  Eigen::SelfAdjointEigenSolver<Matrix> full(m);
  const Matrix back = full.eigenvectors() * full.eigenvalues().asDiagonal() * full.eigenvectors().adjoint();
  EXPECT_LT((back - m).norm(), 1e-12 * m.norm());
  const auto s = eigenvalues(SelfAdjointOperator(m));
  for (int i = 0; i < 10; ++i) EXPECT_NEAR(s.values[static_cast<std::size_t>(i)], full.eigenvalues()(i), 1e-12);
}

TEST(SelfAdjoint, RejectsNonHermitian) {
  Matrix m(2, 2);
  m << 0, 1, 0, 0;
  EXPECT_THROW(SelfAdjointOperator{m}, NotSelfAdjoint);
}

TEST(SelfAdjoint, SymmetrizesRoundingNoise) {
  Matrix m(2, 2);
  m << 1, Complex(2, 1), Complex(2, -1 + 1e-14), 3;
  const SelfAdjointOperator op(m);
  EXPECT_EQ(op.entries(), op.entries().adjoint());
  EXPECT_NEAR(op.entries()(0, 1).imag(), 1 - 0.5e-14, 1e-16);
}

TEST(SelfAdjoint, RejectsNonSquare) { EXPECT_THROW(SelfAdjointOperator{Matrix(2, 3)}, InvalidSpec); }

TEST(SelfAdjoint, SymmetrizationIsIdempotentOnHermitianInput) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const int dim = 1 + static_cast<int>(seed % 12);
    const Matrix m = rng.hermitian(dim, 10.0);
    EXPECT_TRUE(SelfAdjointOperator(m).entries() == m) << "seed " << seed;
  }
}

TEST(EigenCount, SpecExamples) {
  const auto op = SelfAdjointOperator::diagonal({-1, 0.5, 3});
  EXPECT_EQ(eigen_count(op, {0, 2}).count, 1);
  EXPECT_EQ(eigen_count(op, {-2, 2}).count, 2);
  EXPECT_EQ(eigen_count(SelfAdjointOperator::identity(4), {0, 2}).count, 4);
}

TEST(EigenCount, EndpointOnSpectrumIsAmbiguous) {
  const auto op = SelfAdjointOperator::diagonal({-1, 0.5, 3});
  EXPECT_THROW(eigen_count(op, {0.5, 2}), BoundaryAmbiguity);
  EXPECT_THROW(eigen_count(op, {0, 0.5 + 1e-12}), BoundaryAmbiguity);
  EXPECT_THROW(eigen_count(op, {2, 1}), InvalidSpec);
}

TEST(EigenCount, AdditiveOverDisjointIntervalsAndMonotoneInWindow) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const int dim = 2 + static_cast<int>(seed % 11);
    const Spectrum s = eigenvalues(SelfAdjointOperator(rng.hermitian(dim)));
    // Split points drawn away from the spectrum.
    double a = -4 + 8 * rng.canonical(), b = -4 + 8 * rng.canonical(), c = -4 + 8 * rng.canonical();
    std::vector<double> cuts{a, b, c};
    std::sort(cuts.begin(), cuts.end());
    try {
      const int whole = eigen_count(s, {cuts[0], cuts[2]}).count;
      const int left = eigen_count(s, {cuts[0], cuts[1]}).count;
      const int right = eigen_count(s, {std::nextafter(cuts[1], 10.0), cuts[2]}).count;
      EXPECT_EQ(whole, left + right) << "seed " << seed;
    } catch (const BoundaryAmbiguity&) {
    }
    const double r1 = std::abs(a), r2 = r1 + std::abs(b);
    if (window_margin(s, r1) > 1e-6 && window_margin(s, r2) > 1e-6) {
      EXPECT_LE(symmetric_count(s, r1), symmetric_count(s, r2)) << "seed " << seed;
    }
  }
}

TEST(CertifyWindow, KeepsTargetInsideGap) {
  const auto w = certify_window(SelfAdjointOperator::diagonal({-3, 3}), 2.0);
  EXPECT_DOUBLE_EQ(w.lambda, 2.0);
  EXPECT_DOUBLE_EQ(w.margin, 1.0);
}

TEST(CertifyWindow, NudgesToNearestGapMidpoint) {
  // |spectrum| = {2, 2}; gaps (0, 2) and (2, inf). Midpoint 1 lies in [1, 4]
  // and is closer to the target than any point of the upper gap with margin.
  const auto w = certify_window(SelfAdjointOperator::diagonal({-2, 2}), 2.0);
  EXPECT_DOUBLE_EQ(w.lambda, 1.0);
  EXPECT_DOUBLE_EQ(w.margin, 1.0);
}

TEST(CertifyWindow, IdentitySmallTarget) {
  const auto w = certify_window(SelfAdjointOperator::identity(2), 0.5);
  EXPECT_DOUBLE_EQ(w.lambda, 0.5);
  EXPECT_DOUBLE_EQ(w.margin, 0.5);
}

TEST(CertifyWindow, NoGapWhenMarginUnreachable) {
  EXPECT_THROW(certify_window(SelfAdjointOperator::diagonal({1, -1.1, 2}), 1.0, 0.5), NoGap);
  EXPECT_THROW(certify_window(SelfAdjointOperator::identity(2), -1.0), InvalidSpec);
}

TEST(Invertibility, DetectsZeroEigenvalue) {
  EXPECT_FALSE(is_invertible(SelfAdjointOperator::diagonal({0, 1})));
  EXPECT_TRUE(is_invertible(SelfAdjointOperator::diagonal({-1e-3, 1})));
}
