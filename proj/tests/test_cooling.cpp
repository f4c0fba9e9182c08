#include "dikin/cooling.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace dikin;

namespace {

ProblemSpec box_spec(Index d, double lo, double hi) {
  ProblemSpec s;
  s.dim = d;
  Matrix A(2 * d, d);
  A << Matrix::Identity(d, d), -Matrix::Identity(d, d);
  Vector b(2 * d);
  b << Vector::Constant(d, lo), Vector::Constant(d, -hi);
  s.constraints.push_back(LinearConstraint{A, b});
  return s;
}

double bisect(const std::function<double(double)>& f, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(lo) * f(mid) <= 0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(Schedule, SigmaZero) {
  for (Index d = 1; d <= 50; ++d) {
    const double dd = static_cast<double>(d);
    EXPECT_EQ(sigma0_squared(d), 1e-5 / (dd * dd * dd));
  }
  EXPECT_DOUBLE_EQ(sigma0_squared(2), 1.25e-6);
  EXPECT_THROW(sigma0_squared(0), DimensionError);
}

TEST(Schedule, UpdateFormulas) {
  EXPECT_EQ(advance_sigma(1.0, 8.0, 4), 1.5);
  EXPECT_EQ(advance_sigma(25.0, 100.0, 10), 37.5);
  EXPECT_EQ(schedule_phase(1.0, 8.0, 4), 2);
  EXPECT_EQ(schedule_phase(3.0, 8.0, 4), 3);
  EXPECT_EQ(schedule_phase(9.0, 8.0, 4), 4);
}

TEST(Schedule, PhaseTwoCountMatchesSimulation) {
  for (Index d = 1; d <= 12; ++d) {
    for (double nu : {2.0, 7.0, 30.0, 400.0}) {
      const double s0 = sigma0_squared(d);
      const double dd = static_cast<double>(d);
      long k = 0;
      for (double s = s0; s < nu / dd; s *= 1.0 + 1.0 / std::sqrt(dd)) ++k;
      EXPECT_EQ(phase2_step_count(nu, d, s0), k) << d << " " << nu;
      long rule2 = 0;
      for (const auto& e : sigma_schedule(nu, d, s0)) rule2 += (e.phase == 2);
      EXPECT_EQ(rule2, k);
    }
  }
  EXPECT_EQ(phase2_step_count(1e-9, 3, 1.0), 0);
}

TEST(Schedule, StrictlyIncreasingAndEndsAboveNu) {
  const auto s = sigma_schedule(12.0, 3, sigma0_squared(3));
  ASSERT_FALSE(s.empty());
  double prev = sigma0_squared(3);
  for (const auto& e : s) {
    EXPECT_GT(e.sigma2, prev);
    prev = e.sigma2;
  }
  EXPECT_GT(s.back().sigma2, 12.0);
  EXPECT_LE(s[s.size() - 2].sigma2, 12.0);
}

TEST(Schedule, RelativeBounds) {
  const auto p3 = relative_bounds(3, 4.0, 10.0, 2);
  EXPECT_DOUBLE_EQ(p3.alpha, 0.25);
  EXPECT_DOUBLE_EQ(p3.beta, 0.25);
  const auto p2 = relative_bounds(2, 0.5, 10.0, 2, 0.0, 1.0);
  EXPECT_DOUBLE_EQ(p2.beta, (1.0 + 5.0) / 0.5);
  const auto p4 = relative_bounds(4, 1.0, 10.0, 2);
  EXPECT_EQ(p4.alpha, 0.0);
  EXPECT_EQ(p4.beta, 0.0);
}

TEST(AnalyticCenter, Box) {
  const auto red = reduce(box_spec(2, -1.0, 3.0));
  const auto g = build_metric(red);
  const auto r = analytic_center(*g, Vector::Zero(2), Vector::Constant(2, 0.1));
  EXPECT_LT((r.x - Vector::Constant(2, 1.0)).norm(), 1e-10);
  EXPECT_LE(r.decrement, 1e-8);
}

TEST(AnalyticCenter, ExponentialOnInterval) {
  Matrix A(2, 1);
  A << 1, -1;
  LogBarrier g(A, Vector(Vector::Map(std::vector<double>{0.0, -1.0}.data(), 2)));
  const double nu = g.params().nu;
  const auto r = analytic_center(g, Vector::Constant(1, nu), Vector::Constant(1, 0.5));
  const double root =
      bisect([&](double x) { return -1.0 / x + 1.0 / (1.0 - x) + nu; }, 1e-9, 1 - 1e-9);
  EXPECT_NEAR(r.x(0), root, 1e-10);
}

TEST(AnalyticCenter, Errors) {
  Matrix A(2, 1);
  A << 1, -1;
  LogBarrier g(A, Vector::Constant(2, -1.0));
  EXPECT_THROW(analytic_center(g, Vector::Zero(1), Vector::Constant(1, 5.0)), NeedFeasiblePoint);
  // Unbounded below along the cost direction.
  Matrix A1(1, 1);
  A1 << 1;
  LogBarrier h(A1, Vector::Zero(1));
  EXPECT_THROW(analytic_center(h, Vector::Constant(1, -1.0), Vector::Constant(1, 1.0)),
               ConvergenceError);
}

TEST(InteriorPoint, FromInfeasibleHint) {
  ProblemSpec s = box_spec(2, 2.0, 3.0);
  const auto red = reduce(s);
  const Vector y = find_interior_point(red, Vector::Constant(2, -10.0));
  EXPECT_TRUE(s.feasible(y.head(2)));
  EXPECT_TRUE(build_metric(red)->contains(y));
}

TEST(InteriorPoint, InfeasibleSpec) {
  ProblemSpec s;
  s.dim = 1;
  Matrix A(2, 1);
  A << 1, -1;
  s.constraints.push_back(LinearConstraint{A, Vector::Constant(2, 1.0)});  // x>=1, x<=-1
  EXPECT_THROW(find_interior_point(reduce(s)), NeedFeasiblePoint);
}

TEST(PhaseOne, RejectionRateAndInterior) {
  const auto red = reduce(box_spec(3, 0.0, 1.0));
  const auto g = build_metric(red);
  const Vector xs = Vector::Constant(3, 0.5);
  Rng rng(1);
  long attempts = 0, total = 0;
  const int N = 2000;
  for (int i = 0; i < N; ++i) {
    const Vector z = GaussianCooling::phase1_start(*g, xs, sigma0_squared(3), g->params().nu,
                                                   0.0, rng, &attempts);
    total += attempts;
    EXPECT_TRUE(g->contains(z));
  }
  EXPECT_LE(static_cast<double>(total - N) / total, 0.01);
}

TEST(GaussianCooling, TraceAndDeterminism) {
  CoolingConfig cfg;
  cfg.seed = 11;
  cfg.c_inner = 5;
  CoolingReport rep;
  const auto a = gcdw_sample(box_spec(2, 0.0, 1.0), 50, cfg, {}, &rep);
  const auto b = gcdw_sample(box_spec(2, 0.0, 1.0), 50, cfg);
  ASSERT_EQ(a.size(), 50u);
  for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
  EXPECT_EQ(rep.trace.front().phase, 1);
  EXPECT_EQ(rep.trace.back().phase, 4);
  EXPECT_EQ(rep.phase2_updates, phase2_step_count(rep.nu, 2, rep.sigma0_sq));
  EXPECT_EQ(rep.inner_budget, 10);
  // Log barrier on four rows, one part.
  EXPECT_DOUBLE_EQ(rep.nu, 4.0);
}

TEST(GaussianCooling, ConfigErrors) {
  CoolingConfig cfg;
  cfg.eps = 2.0;
  EXPECT_THROW(gcdw_sample(box_spec(1, 0.0, 1.0), 1, cfg), InvalidScale);
  cfg = {};
  cfg.c_inner = 0;
  EXPECT_THROW(gcdw_sample(box_spec(1, 0.0, 1.0), 1, cfg), InvalidScale);
}
