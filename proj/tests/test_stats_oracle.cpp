#include "dikin/diagnostics.hpp"
#include "dikin/stats.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace dikin;

namespace {

ProblemSpec triangle() {
  ProblemSpec s;
  s.dim = 2;
  Matrix A(3, 2);
  A << 1, 0, 0, 1, -1, -1;
  s.constraints.push_back(LinearConstraint{A, (Vector(3) << 0, 0, -1).finished()});
  return s;
}

Samples normals(int n, double shift, Rng& rng) {
  std::normal_distribution<double> g(shift, 1.0);
  Samples xs;
  for (int i = 0; i < n; ++i) xs.push_back(Vector::Constant(1, g(rng)));
  return xs;
}

}  // namespace

TEST(Stats, MeanCovariance) {
  Samples xs{(Vector(2) << 1, 2).finished(), (Vector(2) << 3, 6).finished()};
  EXPECT_EQ(sample_mean(xs), (Vector(2) << 2, 4).finished());
  const Matrix C = sample_covariance(xs);
  EXPECT_DOUBLE_EQ(C(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(C(0, 1), 4.0);
  EXPECT_THROW(sample_covariance({xs[0]}), StatisticsError);
}

TEST(Stats, BatchMeansOnIidSeries) {
  Rng rng(1);
  std::normal_distribution<double> g;
  std::vector<double> s(40000);
  for (auto& v : s) v = g(rng);
  EXPECT_NEAR(batch_means_se(s) * std::sqrt(40000.0), 1.0, 0.15);
  EXPECT_GT(effective_sample_size(s), 20000.0);
  // A sticky series carries less information than its length.
  std::vector<double> sticky;
  for (double v : s) for (int k = 0; k < 10; ++k) sticky.push_back(v);
  EXPECT_LT(effective_sample_size(sticky), 0.3 * sticky.size());
  EXPECT_THROW(batch_means_se({1.0, 2.0}), StatisticsError);
}

TEST(Stats, KsSameAndShifted) {
  Rng rng(2);
  std::vector<double> a, b, c;
  for (const auto& x : normals(3000, 0.0, rng)) a.push_back(x(0));
  for (const auto& x : normals(3000, 0.0, rng)) b.push_back(x(0));
  for (const auto& x : normals(3000, 0.3, rng)) c.push_back(x(0));
  EXPECT_GT(ks_two_sample(a, b).p_value, 0.01);
  EXPECT_LT(ks_two_sample(a, c).p_value, 1e-6);
  EXPECT_DOUBLE_EQ(ks_two_sample(a, a).statistic, 0.0);
}

TEST(Compare, IdenticalSetsAndNegativeControl) {
  Rng rng(3);
  const Samples a = normals(5000, 0.0, rng);
  const Vector lo = Vector::Constant(1, -5), hi = Vector::Constant(1, 5);
  const auto same = compare_samples(a, a, &lo, &hi);
  EXPECT_EQ(same.tv, 0.0);
  EXPECT_EQ(same.max_abs_z(), 0.0);
  const auto shifted = compare_samples(a, normals(5000, 0.2, rng), &lo, &hi);
  EXPECT_GT(std::abs(shifted.coords[0].mean_z), 3.0);
  EXPECT_THROW(compare_samples(Samples(3, Vector::Zero(1)), a), StatisticsError);
}

TEST(Compare, HistogramTv) {
  Samples a{Vector::Constant(1, 0.1), Vector::Constant(1, 0.9)};
  Samples b{Vector::Constant(1, 0.1), Vector::Constant(1, 0.2)};
  EXPECT_DOUBLE_EQ(histogram_tv(a, b, Vector::Zero(1), Vector::Ones(1), 2), 0.5);
  EXPECT_THROW(histogram_tv(a, b, Vector::Zero(3), Vector::Ones(3), 2), DimensionError);
}

TEST(Oracle, TriangleCentroid) {
  RejectionOracle o(triangle(), derive_box(triangle()));
  Rng rng(4);
  const int N = 40000;
  const Samples xs = o.draw(N, rng);
  const Vector m = sample_mean(xs);
  const double se = std::sqrt(1.0 / 18.0 / N);
  EXPECT_LT(std::abs(m(0) - 1.0 / 3.0), 4 * se);
  EXPECT_LT(std::abs(m(1) - 1.0 / 3.0), 4 * se);
  EXPECT_NEAR(o.acceptance_rate(), 0.5, 0.02);
}

TEST(Oracle, ExponentialMatchesInverseCdf) {
  ProblemSpec s;
  s.dim = 1;
  Matrix A(2, 1);
  A << 1, -1;
  s.constraints.push_back(LinearConstraint{A, (Vector(2) << 0, -2).finished()});
  s.potentials.push_back(LinearPotential{Vector::Ones(1)});
  RejectionOracle o(s, derive_box(s));
  Rng rng(5);
  std::uniform_real_distribution<double> u;
  std::vector<double> a, b;
  const double z = 1.0 - std::exp(-2.0);
  for (int i = 0; i < 5000; ++i) {
    a.push_back(o.draw(rng)(0));
    b.push_back(-std::log(1.0 - u(rng) * z));
  }
  EXPECT_GT(ks_two_sample(a, b).p_value, 0.01);
}

TEST(Oracle, InfeasibleAndGuards) {
  ProblemSpec s;
  s.dim = 1;
  Matrix A(1, 1);
  A << 1;
  s.constraints.push_back(LinearConstraint{A, Vector::Constant(1, 2.0)});
  RejectionOracle o(s, Box{Vector::Zero(1), Vector::Ones(1)});
  Rng rng(6);
  EXPECT_THROW(o.draw(rng), OracleInfeasible);

  ProblemSpec big;
  big.dim = 4;
  EXPECT_THROW(RejectionOracle(big, Box{Vector::Zero(4), Vector::Ones(4)}), DimensionError);

  ProblemSpec open;
  open.dim = 1;
  EXPECT_THROW(derive_box(open), MissingParameter);
}

TEST(Oracle, PotentialLowerBound) {
  ProblemSpec s;
  s.dim = 2;
  s.potentials.push_back(LinearPotential{(Vector(2) << 1, -2).finished()});
  const Box box{Vector::Zero(2), Vector::Ones(2)};
  EXPECT_LE(potential_lower_bound(s, box), -2.0 + 1e-12);
  s.potentials.push_back(LogDetPotential{1, 0});
  EXPECT_THROW(potential_lower_bound(s, box), UnsupportedTerm);
}

TEST(Quadrature, GaussianPartition) {
  const double l = log_partition_1d([](double x) { return 0.5 * x * x; }, -12, 12, 0.0, 1.0);
  EXPECT_NEAR(l, 0.5 * std::log(2 * std::numbers::pi), 1e-10);
  const double e = log_partition_1d([](double x) { return 3 * x; }, 0, 1, 0.0, 1.0 / 3.0);
  EXPECT_NEAR(e, std::log((1 - std::exp(-3.0)) / 3.0), 1e-10);
}

TEST(Quadrature, WarmStartRatiosBounded) {
  const auto steps = warm_start_ratios(0.0, 1.0, 1.0, 1);
  ASSERT_FALSE(steps.empty());
  for (const auto& s : steps) {
    EXPECT_GE(s.ratio, 1.0 - 1e-9);
    EXPECT_LE(s.ratio, s.phase == 2 ? std::exp(1.0) + 1e-3 : 10.0);
  }
}
