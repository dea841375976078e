#include <gtest/gtest.h>

#include <cmath>

#include "test_util.hpp"
#include "tsera/baseline.hpp"
#include "tsera/sera.hpp"

using namespace tsera;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Vector uniform_p(Index M, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vector p(M);
  for (Index h = 0; h < M; ++h) p(h) = u(rng);
  return p;
}

}  // namespace

TEST(PValues, Examples) {
  EXPECT_EQ(p_values(vec({0.0}))(0), 1.0);
  EXPECT_NEAR(p_values(vec({1.959964}))(0), 0.05, 1e-6);
  EXPECT_NEAR(p_values(vec({-1.959964}))(0), 0.05, 1e-6);
  EXPECT_THROW(p_values(vec({NAN})), DomainError);
}

TEST(Screen, DirectEnumeration) {
  const auto s = screen_tau(vec({0.05, 0.85, 0.95}), 0.9);
  EXPECT_EQ(s.tau, 0.05);
  EXPECT_FALSE(s.fallback);
  EXPECT_EQ(s.mask, (std::vector<bool>{false, true, true}));
}

TEST(Screen, Fallback) {
  const auto s = screen_tau(vec({1, 1, 1, 1}), 0.9);
  EXPECT_TRUE(s.fallback);
  EXPECT_EQ(s.tau, 0.5);
  EXPECT_EQ(s.mask, std::vector<bool>(4, true));
}

TEST(Screen, AllZero) {
  const auto s = screen_tau(vec({0, 0, 0}), 0.9);
  EXPECT_EQ(s.tau, 0.0);
  EXPECT_EQ(s.mask, std::vector<bool>(3, false));
  SeraConfig cfg;
  const Vector pi = estimate_pi(vec({1, 2, 3}), s, cfg);
  for (Index h = 0; h < 3; ++h) EXPECT_EQ(pi(h), 1.0 - cfg.trunc_xi);
  EXPECT_THROW(screen_tau(Vector(0), 0.9), DomainError);
}

TEST(EstimatePi, ConstantKernelReduction) {
  Screen s{0.5, {true, true, false, false}, false};
  const Vector pi = estimate_pi(Vector::Constant(4, 2.0), s, SeraConfig{});
  for (Index h = 0; h < 4; ++h) EXPECT_EQ(pi(h), 1e-5);
}

TEST(EstimatePi, FlatKernelLimit) {
  Rng rng(1);
  const Vector p = uniform_p(200, rng);
  const Screen s = screen_tau(p, 0.9);
  SeraConfig cfg;
  cfg.bandwidth = 1e12;
  const Vector U = tsera::testing::random_matrix(200, 1, rng).col(0);
  const Vector pi = estimate_pi(U, s, cfg);
  const double screened = double(std::count(s.mask.begin(), s.mask.end(), true));
  const double expected = std::clamp(1.0 - screened / ((1.0 - s.tau) * 200.0), 1e-5, 1.0 - 1e-5);
  for (Index h = 0; h < 200; ++h) EXPECT_NEAR(pi(h), expected, 1e-12);
}

TEST(EstimatePi, Errors) {
  Screen s{0.5, {true, false}, false};
  SeraConfig cfg;
  cfg.bandwidth = -1.0;
  EXPECT_THROW(estimate_pi(vec({0, 1}), s, cfg), DomainError);
  EXPECT_THROW(estimate_pi(vec({0, 1, 2}), s, SeraConfig{}), ShapeError);
}

TEST(Bandwidth, NormalScale) {
  const Vector U = vec({0, 1, 2, 3, 4});
  const double sd = std::sqrt(2.5);
  EXPECT_NEAR(normal_scale_bandwidth(U), std::pow(4.0 / 15.0, 0.2) * sd, 1e-15);
  EXPECT_EQ(normal_scale_bandwidth(Vector::Constant(5, 3.0)), 1.0);
}

TEST(SeraDecide, HandExample) {
  const auto d = sera_decide(vec({0.01, 0.5}), vec({0.5, 0.5}), 0.05);
  EXPECT_EQ(d.q_hat, 1);
  EXPECT_EQ(d.reject, (std::vector<bool>{true, false}));
  EXPECT_EQ(d.w, vec({1, 1}));
}

TEST(SeraDecide, HalfWeightsEqualBhAtDoubleLevel) {
  Rng rng(2);
  for (int rep = 0; rep < 200; ++rep) {
    Vector p = uniform_p(50, rng);
    p.head(10) *= 0.01;
    const auto s = sera_decide(p, Vector::Constant(50, 0.5), 0.05);
    EXPECT_EQ(s.reject, bh_decide(p, 0.10).reject);
  }
}

TEST(SeraDecide, MonotoneInAlpha) {
  Rng rng(3);
  Vector p = uniform_p(100, rng);
  p.head(20) *= 0.001;
  const Vector pi = 0.1 * Vector::Ones(100) + 0.8 * uniform_p(100, rng);
  Index previous = 0;
  for (double alpha : {0.01, 0.02, 0.05, 0.1, 0.2}) {
    const auto d = sera_decide(p, pi, alpha);
    EXPECT_GE(d.rejections(), previous);
    previous = d.rejections();
  }
}

TEST(SeraDecide, TiesFollowIndex) {
  const auto d = sera_decide(vec({0.001, 0.001, 0.9}), vec({0.5, 0.5, 0.5}), 0.001);
  // q=1: 1.5 * 0.001 / 1 > 0.001, q=2: 0.00075 <= 0.001
  EXPECT_EQ(d.q_hat, 2);
  EXPECT_EQ(stable_order(vec({2, 1, 1, 0})), (std::vector<Index>{3, 1, 2, 0}));
}

TEST(RunSera, ShiftInvariantInU) {
  Rng rng(4);
  const Vector T = 2.0 * tsera::testing::random_matrix(300, 1, rng).col(0);
  const Vector U = tsera::testing::random_matrix(300, 1, rng).col(0);
  const auto a = run_sera(T, U, SeraConfig{});
  const auto b = run_sera(T, (U.array() + 100.0).matrix(), SeraConfig{});
  EXPECT_LT((a.pi_hat - b.pi_hat).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_EQ(a.reject, b.reject);
}

TEST(RunSera, NullInputsRejectNothing) {
  const auto d = run_sera_pvalues(Vector::Ones(10), Vector::Constant(10, 1.5), SeraConfig{});
  EXPECT_EQ(d.rejections(), 0);
  EXPECT_TRUE(d.tau_fallback);
}

TEST(Bh, Examples) {
  EXPECT_EQ(bh_decide(vec({0.001, 0.2, 0.9}), 0.05).reject, (std::vector<bool>{true, false, false}));
  EXPECT_EQ(bh_decide(Vector::Ones(5), 0.05).rejections(), 0);
  EXPECT_THROW(bh_decide(vec({0.1}), 1.5), DomainError);
}

TEST(SeraConfig, Validation) {
  SeraConfig c;
  c.alpha = 0.0;
  EXPECT_THROW(c.validate(), DomainError);
  c = SeraConfig{};
  c.screen_level = 1.0;
  EXPECT_THROW(c.validate(), DomainError);
  EXPECT_THROW(parse_kernel("box"), DomainError);
}
