#include <gtest/gtest.h>

#include <cmath>

#include "test_util.hpp"
#include "tsera/linalg.hpp"
#include "tsera/simgen.hpp"

using namespace tsera;

TEST(Helmert, TwoByTwo) {
  const double r = 1.0 / std::sqrt(2.0);
  Matrix expected(2, 2);
  expected << r, -r, r, r;
  EXPECT_LT((centering_rotation(2) - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Helmert, OrthogonalWithConstantLastRow) {
  for (Index n : {3, 7}) {
    const Matrix Q = centering_rotation(n);
    EXPECT_LT((Q * Q.transpose() - Matrix::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-12);
    for (Index j = 0; j < n; ++j) EXPECT_NEAR(Q(n - 1, j), 1.0 / std::sqrt(double(n)), 1e-15);
  }
  EXPECT_THROW(centering_rotation(1), DomainError);
}

TEST(InvSqrt, Examples) {
  EXPECT_LT((sym_inv_sqrt(Matrix::Identity(4, 4)).value - Matrix::Identity(4, 4)).norm(), 1e-14);
  Matrix D = Matrix::Zero(2, 2);
  D(0, 0) = 4;
  D(1, 1) = 9;
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = 0.5;
  expected(1, 1) = 1.0 / 3.0;
  EXPECT_LT((sym_inv_sqrt(D).value - expected).norm(), 1e-14);
}

TEST(InvSqrt, DefiningIdentity) {
  Rng rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const Matrix S = tsera::testing::random_spd(6, rng);
    const auto r = sym_inv_sqrt(S);
    EXPECT_EQ(r.clamped, 0);
    EXPECT_LT((r.value * S * r.value - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LT((r.value - r.value.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(InvSqrt, ClampingAndErrors) {
  Matrix S = Matrix::Identity(3, 3);
  S(2, 2) = 0.0;
  const auto r = sym_inv_sqrt(S);
  EXPECT_EQ(r.clamped, 1);
  EXPECT_TRUE(r.warning);
  EXPECT_THROW(sym_inv_sqrt(Matrix::Zero(2, 2)), DomainError);
  EXPECT_THROW(sym_inv_sqrt(-Matrix::Identity(2, 2)), DomainError);
}

TEST(SymSqrt, SquaresBack) {
  Rng rng(12);
  const Matrix S = tsera::testing::random_spd(5, rng);
  const Matrix R = sym_sqrt(S);
  EXPECT_LT((R * R - S).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(PooledCovariance, AntipodalPair) {
  // +t and -t with a single nonzero mode-1 fiber f
  Tensor t({3, 2, 2});
  const Vector f = (Vector(3) << 1.0, -2.0, 0.5).finished();
  for (Index i = 0; i < 3; ++i) t.data()[i * 4 + 1] = f(i);  // fiber at (., 0, 1)
  const std::vector<Tensor> group{t, t * -1.0};
  const double norm = 2.0 * 12.0 / 3.0;
  const Matrix expected = 2.0 * f * f.transpose() / norm;
  EXPECT_LT((pooled_mode_covariance(group, 0) - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(PooledCovariance, Degenerate) {
  Rng rng(13);
  const Tensor t = tsera::testing::random_tensor({3, 2}, rng);
  EXPECT_THROW(pooled_mode_covariance({t, t, t}, 0), DegenerateError);
  EXPECT_THROW(pooled_mode_covariance({t}, 0), DegenerateError);
}

TEST(PooledCovariance, CorrelationConsistency) {
  Rng rng(14);
  Matrix S2(4, 4);
  S2 = gen_structure(StructureModel::parse("ar5"), 4, rng);
  const std::vector<Matrix> sigmas{gen_structure(StructureModel::parse("ar4"), 6, rng), S2,
                                   gen_structure(StructureModel::parse("ma1"), 5, rng)};
  const auto group = sample_group(Tensor({6, 4, 5}), sigmas, 200, rng);
  const Matrix est = normalize_diagonal(pooled_mode_covariance(group, 1));
  EXPECT_LT((est - S2).cwiseAbs().maxCoeff(), 0.05);
}
