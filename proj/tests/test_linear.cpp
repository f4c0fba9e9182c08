#include "dikin/linear.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace dikin;
using dikin::test::oracle_leverage;

TEST(Leverage, MatchesDefinitionAndSumsToRank) {
  Rng rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix M = test::random_matrix(12 + trial, 4, rng);
    const Vector s = leverage_scores(M).sigma;
    EXPECT_NEAR(s.sum(), 4.0, 1e-10);
    EXPECT_LT((s - oracle_leverage(M)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_TRUE((s.array() <= 1.0 + 1e-12).all());
  }
}

TEST(Leverage, RankDeficientUsesNumericalRank) {
  Rng rng(4);
  Matrix M = test::random_matrix(8, 3, rng);
  M.col(2) = M.col(0) + M.col(1);
  EXPECT_EQ(numerical_rank(M), 2);
  EXPECT_NEAR(leverage_scores(M).sigma.sum(), 2.0, 1e-10);
}

TEST(Leverage, DerivativeMatchesDifferences) {
  Rng rng(5);
  Matrix A;
  Vector b;
  test::random_polytope(10, 3, rng, A, b);
  const Vector x = Vector::Zero(3);
  const Vector h = test::random_matrix(3, 1, rng).col(0);
  const double e = 1e-6;
  auto sig = [&](const Vector& y) { return oracle_leverage(slack_state(A, b, y).Ax); };
  const Vector fd = (sig(x + e * h) - sig(x - e * h)) / (2 * e);
  EXPECT_LT((d_leverage(A, b, x, h) - fd).norm(), 1e-6 * std::max(1.0, fd.norm()));
}

TEST(Lewis, FixedPointAndSum) {
  Rng rng(6);
  for (double p : {2.0, 3.0, 4.0, 8.0}) {
    const Matrix M = test::random_matrix(30, 6, rng);
    const LewisWeights lw = lewis_weights(M, p, 1e-12);
    EXPECT_NEAR(lw.w.sum(), 6.0, 1e-8) << "p=" << p;
    // Independent residual: leverage of W^{1/2-1/p} M.
    const Vector scale = lw.w.array().pow(0.5 - 1.0 / p);
    const Vector sig = oracle_leverage(scale.asDiagonal() * M);
    EXPECT_LT((lw.w - sig).cwiseAbs().maxCoeff(), 1e-8) << "p=" << p;
  }
}

TEST(Lewis, PEqualsTwoIsLeverage) {
  Rng rng(7);
  const Matrix M = test::random_matrix(20, 5, rng);
  const LewisWeights lw = lewis_weights(M, 2.0, 1e-13);
  EXPECT_LT((lw.w - oracle_leverage(M)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Lewis, DefaultP) {
  EXPECT_DOUBLE_EQ(default_lewis_p(2), 2.0);
  EXPECT_DOUBLE_EQ(default_lewis_p(16), 8.0);
  EXPECT_DOUBLE_EQ(default_lewis_p(17), 10.0);
}

TEST(LogBarrier, ClosedForms) {
  Rng rng(8);
  Matrix A;
  Vector b;
  test::random_polytope(9, 3, rng, A, b);
  LogBarrier g(A, b);
  const Vector x = 0.1 * Vector::Ones(3);
  const Vector s = A * x - b;
  Vector grad = Vector::Zero(3);
  Matrix H = Matrix::Zero(3, 3);
  double phi = 0.0;
  for (Index i = 0; i < 9; ++i) {
    phi -= std::log(s(i));
    grad -= A.row(i).transpose() / s(i);
    H += A.row(i).transpose() * A.row(i) / (s(i) * s(i));
  }
  EXPECT_NEAR(g.barrier(x), phi, 1e-12);
  EXPECT_LT((g.gradient(x) - grad).norm(), 1e-10);
  EXPECT_LT(test::rel_err(g.metric(x), H), 1e-12);
  EXPECT_EQ(g.params().nu, 9.0);
  EXPECT_FALSE(g.contains(Vector::Constant(3, 100.0)));
  EXPECT_TRUE(std::isinf(g.barrier(Vector::Constant(3, 100.0))));
  EXPECT_THROW(g.metric(Vector::Constant(3, 100.0)), NotInterior);
}

TEST(LogBarrier, MetricDerivativesMatchDifferences) {
  Rng rng(9);
  Matrix A;
  Vector b;
  test::random_polytope(9, 3, rng, A, b);
  const Vector x = Vector::Zero(3);
  const Vector h = test::random_matrix(3, 1, rng).col(0);
  const double e = 1e-5;
  auto H = [&](const Vector& y) { return log_metric(A, b, y).matrix(); };
  const Matrix fd1 = (H(x + e * h) - H(x - e * h)) / (2 * e);
  EXPECT_LT(test::rel_err(d_log_metric(A, b, x, h), fd1), 1e-7);
  auto D = [&](const Vector& y) { return d_log_metric(A, b, y, h); };
  const Matrix fd2 = (D(x + e * h) - D(x - e * h)) / (2 * e);
  EXPECT_LT(test::rel_err(d2_log_metric(A, b, x, h), fd2), 1e-6);
}

TEST(Vaidya, WeightsAndDerivative) {
  Rng rng(10);
  Matrix A;
  Vector b;
  test::random_polytope(12, 3, rng, A, b);
  const Vector x = Vector::Zero(3);
  const Vector sig = oracle_leverage(slack_state(A, b, x).Ax);
  const double m = 12, d = 3;
  const Vector expect = 22.0 * std::sqrt(m / d) * (sig.array() + d / m).matrix();
  EXPECT_LT((vaidya_weights(A, b, x) - expect).norm(), 1e-9);
  const Vector h = test::random_matrix(3, 1, rng).col(0);
  const double e = 1e-6;
  auto G = [&](const Vector& y) { return vaidya_metric(A, b, y).matrix(); };
  const Matrix fd = (G(x + e * h) - G(x - e * h)) / (2 * e);
  EXPECT_LT(test::rel_err(d_vaidya_metric(A, b, x, h), fd), 1e-6);
}

TEST(Vaidya, RejectsWideMatrix) {
  Rng rng(11);
  const Matrix A = test::random_matrix(2, 3, rng);
  EXPECT_ANY_THROW(VaidyaMetric(A, -Vector::Ones(2)));
}

TEST(Lewis, MetricDerivativeMatchesDifferences) {
  Rng rng(12);
  Matrix A;
  Vector b;
  test::random_polytope(14, 3, rng, A, b);
  const Vector x = Vector::Zero(3);
  const Vector h = test::random_matrix(3, 1, rng).col(0);
  const double e = 1e-6;
  LewisOptions o;
  o.p = 4.0;
  auto G = [&](const Vector& y) { return lewis_metric(A, b, y, o).matrix(); };
  const Matrix fd = (G(x + e * h) - G(x - e * h)) / (2 * e);
  EXPECT_LT(test::rel_err(d_lewis_metric(A, b, x, h, o), fd), 1e-5);
}
