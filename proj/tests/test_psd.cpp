#include "dikin/psd.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace dikin;

namespace {

Matrix oracle_kron(const Matrix& A, const Matrix& B) {
  Matrix K(A.rows() * B.rows(), A.cols() * B.cols());
  for (Index i = 0; i < A.rows(); ++i)
    for (Index j = 0; j < A.cols(); ++j)
      K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return K;
}

Matrix random_sym(Index n, Rng& rng) {
  const Matrix R = test::random_matrix(n, n, rng);
  return 0.5 * (R + R.transpose());
}

}  // namespace

TEST(Svec, RoundTripAndLayout) {
  SvecCodec c(3);
  EXPECT_EQ(c.ds(), 6);
  Matrix X(3, 3);
  X << 1, 2, 3, 2, 4, 5, 3, 5, 6;
  Vector v(6);
  v << 1, 2, 3, 4, 5, 6;
  EXPECT_EQ(c.svec(X), v);
  EXPECT_EQ(c.unsvec(v), X);
  EXPECT_EQ(c.index(2, 1), 4);
  // vec(X) = M svec(X)
  const Vector vecX = Eigen::Map<const Vector>(X.data(), 9);
  EXPECT_LT((c.M() * v - vecX).norm(), 1e-15);
}

TEST(PsdHessian, QuadraticFormIsTrace) {
  Rng rng(1);
  for (Index n = 1; n <= 5; ++n) {
    SvecCodec c(n);
    const Matrix X = test::random_spd(n, rng);
    const Matrix Xi = X.inverse();
    const Matrix H = random_sym(n, rng);
    const Vector h = c.svec(H);
    const double expect = (Xi * H * Xi * H).trace();
    EXPECT_NEAR(h.dot(psd_hessian(X, c) * h), expect, 1e-10 * std::max(1.0, std::abs(expect)));
  }
}

TEST(PsdHessian, InverseFormula) {
  Rng rng(2);
  for (Index n = 1; n <= 5; ++n) {
    SvecCodec c(n);
    const Matrix X = test::random_spd(n, rng);
    const Matrix I = psd_hessian(X, c) * psd_hessian_inverse(X, c);
    EXPECT_LT((I - Matrix::Identity(c.ds(), c.ds())).cwiseAbs().maxCoeff(), 1e-8) << n;
    const Vector z = test::random_matrix(c.ds(), 1, rng).col(0);
    EXPECT_LT((psd_hessian_inverse_apply(X, c, z) - psd_hessian_inverse(X, c) * z).norm(),
              1e-10 * std::max(1.0, z.norm()));
    EXPECT_LT((psd_hessian_apply(X, c, z) - psd_hessian(X, c) * z).norm(),
              1e-10 * std::max(1.0, (psd_hessian(X, c) * z).norm()));
  }
}

TEST(PsdHessian, KroneckerDeterminant) {
  Rng rng(3);
  for (Index n = 1; n <= 5; ++n) {
    SvecCodec c(n);
    const Matrix X = test::random_spd(n, rng);
    const Matrix G = c.M().transpose() * oracle_kron(X, X) * c.M();
    const double expect = std::pow(2.0, n * (n - 1) / 2.0) * std::pow(X.determinant(), n + 1);
    EXPECT_NEAR(G.determinant() / expect, 1.0, 1e-8) << n;
    EXPECT_NEAR(psd_hessian_logdet(X), std::log(psd_hessian(X, c).determinant()), 1e-8);
  }
}

TEST(PsdBarrier, ScalingAndDomain) {
  PsdBarrier g(3);
  EXPECT_DOUBLE_EQ(g.scale(), 3.0);
  EXPECT_DOUBLE_EQ(g.params().nu, 9.0);
  const Vector x = g.codec().svec(Matrix::Identity(3, 3));
  EXPECT_NEAR(g.barrier(x), 0.0, 1e-14);
  Matrix bad = Matrix::Identity(3, 3);
  bad(2, 2) = -1;
  EXPECT_FALSE(g.contains(g.codec().svec(bad)));
  EXPECT_THROW(g.matrix(g.codec().svec(bad)), NotInterior);
}

TEST(PsdBarrier, GradientIsMinusScaledInverse) {
  Rng rng(4);
  PsdBarrier g(3, 1.0);
  const Matrix X = test::random_spd(3, rng);
  const Vector x = g.codec().svec(X);
  // d/dx -log det X = -M^T vec(X^{-1})
  const Matrix Xi = X.inverse();
  const Vector expect = -g.codec().M().transpose() * Eigen::Map<const Vector>(Xi.data(), 9);
  EXPECT_LT((g.gradient(x) - expect).norm(), 1e-10 * expect.norm());
}

TEST(FastPath, SolveAndLogDetMatchDense) {
  Rng rng(5);
  for (Index n = 2; n <= 6; ++n) {
    SvecCodec c(n);
    for (Index m : {Index(1), Index(4), Index(10)}) {
      if (m > c.ds()) continue;
      const Matrix X = test::random_spd(n, rng);
      Matrix A(m, c.ds());
      Vector b(m);
      for (Index i = 0; i < m; ++i) {
        const Matrix Ai = random_sym(n, rng);
        A.row(i) = psd_constraint_row(Ai, c).transpose();
        b(i) = (Ai * X).trace() - 1.0;
      }
      TruncatedPsdMetric g(n, A, b);
      const Vector x = c.svec(X);
      ASSERT_TRUE(g.contains(x));
      const auto f = g.psd_factor(x);
      const Matrix G = g.metric(x);
      const Vector v = test::random_matrix(c.ds(), 1, rng).col(0);
      const Vector dense = G.ldlt().solve(v);
      EXPECT_LT((f->solve(v) - dense).norm() / dense.norm(), 1e-6) << n << " " << m;
      EXPECT_LT((f->apply(v) - G * v).norm() / (G * v).norm(), 1e-10);
      EXPECT_NEAR(f->log_det(), std::log(G.determinant()), 1e-6 * std::max(1.0, std::abs(f->log_det())));
      EXPECT_EQ(f->rank_one_terms(), m);
    }
  }
}

TEST(FastPath, DetRatio) {
  Rng rng(6);
  const Index n = 3;
  SvecCodec c(n);
  Matrix A(2, c.ds());
  A.row(0) = psd_constraint_row(Matrix::Identity(n, n), c).transpose();
  A.row(1) = psd_constraint_row(random_sym(n, rng), c).transpose();
  const Matrix X = Matrix::Identity(n, n);
  const Vector b(Vector::Constant(2, -50.0));
  TruncatedPsdMetric g(n, A, b);
  const Vector x = c.svec(X), y = c.svec(1.2 * X);
  const auto fx = g.psd_factor(x), fy = g.psd_factor(y);
  EXPECT_NEAR(std::log(fx->det_ratio(*fy)),
              std::log(g.metric(y).determinant()) - std::log(g.metric(x).determinant()), 1e-8);
}

TEST(FastPath, SampleCovarianceIsInverse) {
  Rng rng(7);
  const Index n = 2;
  SvecCodec c(n);
  Matrix A(1, c.ds());
  A.row(0) = psd_constraint_row(Matrix::Identity(n, n), c).transpose();
  TruncatedPsdMetric g(n, A, Vector::Constant(1, 1.0));
  const Vector x = c.svec(Matrix::Identity(n, n));
  const auto f = g.psd_factor(x);
  const Matrix S = g.metric(x).inverse();
  const int N = 40000;
  Matrix C = Matrix::Zero(3, 3);
  for (int i = 0; i < N; ++i) {
    const Vector z = f->sample(rng);
    C += z * z.transpose();
  }
  C /= N;
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) {
      const double se = std::sqrt((S(i, i) * S(j, j) + S(i, j) * S(i, j)) / N);
      EXPECT_LT(std::abs(C(i, j) - S(i, j)), 5 * se) << i << "," << j;
    }
}

TEST(TruncatedPsd, DefaultScalingAndFastPathSwitch) {
  const Index n = 2;
  SvecCodec c(n);
  Matrix A(4, 3);
  A.row(0) = psd_constraint_row(Matrix::Identity(2, 2), c).transpose();
  A.bottomRows(3) << 1, 0, 0, 0, 0, 1, 1, 0.5, 1;
  TruncatedPsdMetric small(n, A.topRows(1), Vector::Constant(1, -1.0));
  EXPECT_TRUE(small.uses_fast_path());
  TruncatedPsdMetric wide(n, A, Vector::Constant(4, -1.0));
  EXPECT_FALSE(wide.uses_fast_path());
}
