#include <gtest/gtest.h>

#include <cmath>

#include "test_util.hpp"
#include "tsera/hypotheses.hpp"
#include "tsera/simgen.hpp"
#include "tsera/stats.hpp"

using namespace tsera;

TEST(CorrEstimates, HandExample) {
  Matrix fibers(2, 2);
  fibers << 1, 1, 1, -1;
  const auto g = corr_estimates(fibers);
  EXPECT_NEAR(g.rho(0, 1), 0.0, 1e-15);
  EXPECT_EQ(g.rho(0, 0), 1.0);
  EXPECT_NEAR(g.nu(0, 1), 0.5, 1e-15);
  EXPECT_EQ(g.n_eff, 2.0);
}

TEST(CorrEstimates, IdenticalFibersAreDegenerate) {
  Matrix fibers(3, 4);
  for (Index c = 0; c < 4; ++c) fibers.col(c) << 1.0, -2.0, 0.5;
  EXPECT_THROW(corr_estimates(fibers), DegenerateError);
  EXPECT_THROW(corr_estimates(Matrix::Zero(2, 3)), DegenerateError);
}

TEST(CorrEstimates, ConsistentForTrueCorrelation) {
  Rng rng(1);
  const Matrix S = gen_structure(StructureModel::parse("band"), 6, rng);
  const Matrix L = S.llt().matrixL();
  const Matrix X = L * tsera::testing::random_matrix(6, 20000, rng);
  const auto g = corr_estimates(X);
  EXPECT_LT((g.rho - S).cwiseAbs().maxCoeff(), 0.03);
  // Gaussian, unit variances: N nu -> var(x_i x_j) = 1 + rho^2
  EXPECT_NEAR(g.nu(0, 1) * 20000.0, 1.0 + 0.36, 0.05);
  EXPECT_NEAR(g.nu(0, 5) * 20000.0, 1.0, 0.05);
}

TEST(StatPairs, FormulaExample) {
  GroupEstimates g1{Matrix::Identity(2, 2), Matrix::Zero(2, 2), 10};
  GroupEstimates g2 = g1;
  g1.rho(0, 1) = g1.rho(1, 0) = 0.5;
  g2.rho(0, 1) = g2.rho(1, 0) = 0.3;
  g1.nu(0, 1) = g1.nu(1, 0) = 0.01;
  g2.nu(0, 1) = g2.nu(1, 0) = 0.01;
  const auto s = stat_pairs(g1, g2);
  EXPECT_NEAR(s.T(0), 1.41421356, 1e-6);
  EXPECT_NEAR(s.U(0), 5.65685425, 1e-6);
  EXPECT_EQ(s.kappa(0), 1.0);
}

TEST(StatPairs, EqualCorrelationsGiveZeroT) {
  GroupEstimates g1{Matrix::Constant(3, 3, 0.4), Matrix::Constant(3, 3, 0.02), 5};
  GroupEstimates g2{Matrix::Constant(3, 3, 0.4), Matrix::Constant(3, 3, 0.3), 5};
  EXPECT_EQ(stat_pairs(g1, g2).T.cwiseAbs().maxCoeff(), 0.0);
  g2.nu(0, 2) = 0.0;
  EXPECT_THROW(stat_pairs(g1, g2), DomainError);
}

TEST(StatPairs, SwapAntisymmetryOfT) {
  Rng rng(2);
  const auto a = corr_estimates(tsera::testing::random_matrix(5, 40, rng));
  const auto b = corr_estimates(tsera::testing::random_matrix(5, 30, rng));
  const auto ab = stat_pairs(a, b), ba = stat_pairs(b, a);
  EXPECT_LT((ab.T + ba.T).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Hypotheses, IndexingIsABijection) {
  for (Index m = 2; m <= 5; ++m) {
    Index h = 0;
    for (Index i = 0; i < m; ++i) {
      for (Index j = i + 1; j < m; ++j, ++h) {
        EXPECT_EQ(pair_index(i, j, m), h);
        EXPECT_EQ(pair_at(h, m), std::make_pair(i, j));
      }
    }
    EXPECT_EQ(h, pair_count(m));
  }
}
