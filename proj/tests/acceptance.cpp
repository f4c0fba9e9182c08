// Acceptance suite: one PASS/FAIL line per criterion; exits 1 if any fails.

#include "dikin/cooling.hpp"
#include "dikin/diagnostics.hpp"
#include "dikin/psd.hpp"
#include "test_util.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

using namespace dikin;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Appends "label=value" to the detail and folds the check into pass.
void note(Outcome& o, const std::string& label, double value, bool ok) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s%s=%.3g%s", o.detail.empty() ? "" : " ", label.c_str(),
                value, ok ? "" : "(!)");
  o.detail += buf;
  o.pass = o.pass && ok;
}

// ------------------------------------------------------------ derivatives

Outcome derivative_suite() {
  Outcome o;
  const auto t0 = Clock::now();
  Rng rng(101);
  for (const auto& e : barrier_catalog(rng)) {
    const auto pts =
        random_interior_points(*e.metric, e.x0, 100, rng, 10, 0.5, e.point_target());
    double worst = 0.0;
    bool ok = true;
    for (const auto& c : derivative_certificates(e.name, *e.metric, pts, rng, 1e-5, 1e-4)) {
      worst = std::max(worst, c.worst);
      ok = ok && c.passed;
    }
    note(o, e.name, worst, ok);
  }
  const double t = seconds_since(t0);
  note(o, "seconds", t, t < 60.0);
  return o;
}

// ------------------------------------------------------ leverage / Lewis

Outcome leverage_suite() {
  Outcome o;
  const auto t0 = Clock::now();
  Rng rng(202);
  double e_sig = 0, e_w = 0, e_res = 0, e_p2 = 0;
  for (auto [m, d] : {std::pair<Index, Index>{12, 3}, {25, 6}, {50, 10}, {40, 10}}) {
    for (int rep = 0; rep < 3; ++rep) {
      const Matrix M = test::random_matrix(m, d, rng);
      const Vector sig = leverage_scores(M).sigma;
      e_sig = std::max(e_sig, std::abs(sig.sum() - static_cast<double>(d)));
      for (double p : {3.0, 4.0, default_lewis_p(m)}) {
        const LewisWeights lw = lewis_weights(M, p, 1e-12);
        e_w = std::max(e_w, std::abs(lw.w.sum() - static_cast<double>(d)));
        const Vector s = lw.w.array().pow(0.5 - 1.0 / p);
        const Vector fixed = test::oracle_leverage(s.asDiagonal() * M);
        e_res = std::max(e_res, (lw.w - fixed).cwiseAbs().maxCoeff());
      }
      const LewisWeights l2 = lewis_weights(M, 2.0, 1e-12);
      e_p2 = std::max(e_p2, (l2.w - test::oracle_leverage(M)).cwiseAbs().maxCoeff());
    }
  }
  note(o, "sum_sigma", e_sig, e_sig <= 1e-8);
  note(o, "sum_w", e_w, e_w <= 1e-8);
  note(o, "residual", e_res, e_res <= 1e-8);
  note(o, "p2_vs_leverage", e_p2, e_p2 <= 1e-8);
  const double t = seconds_since(t0);
  note(o, "seconds", t, t < 10.0);
  return o;
}

// ---------------------------------------------------------------- PSD

Matrix kron_oracle(const Matrix& A, const Matrix& B) {
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

Outcome psd_suite() {
  Outcome o;
  Rng rng(303);
  double e_quad = 0, e_inv = 0, e_det = 0;
  for (Index n = 1; n <= 5; ++n) {
    SvecCodec c(n);
    for (int rep = 0; rep < 10; ++rep) {
      const Matrix X = test::random_spd(n, rng);
      const Matrix Xi = X.inverse();
      const Matrix H = random_sym(n, rng);
      const Vector h = c.svec(H);
      const Matrix G = psd_hessian(X, c);
      const double tr = (Xi * H * Xi * H).trace();
      e_quad = std::max(e_quad, std::abs(h.dot(G * h) - tr) / std::max(1.0, std::abs(tr)));
      const Matrix I = G * psd_hessian_inverse(X, c);
      e_inv = std::max(e_inv, (I - Matrix::Identity(c.ds(), c.ds())).cwiseAbs().maxCoeff());
      const Matrix K = c.M().transpose() * kron_oracle(X, X) * c.M();
      const double expect =
          std::pow(2.0, n * (n - 1) / 2.0) * std::pow(X.determinant(), n + 1);
      e_det = std::max(e_det, std::abs(K.determinant() / expect - 1.0));
    }
  }
  note(o, "quad_form", e_quad, e_quad <= 1e-10);
  note(o, "inverse", e_inv, e_inv <= 1e-8);
  note(o, "kron_det", e_det, e_det <= 1e-8);
  return o;
}

// ------------------------------------------------------------ fast path

Outcome fast_path_suite() {
  Outcome o;
  Rng rng(404);
  double e_solve = 0, e_det = 0;
  for (Index n = 2; n <= 6; ++n) {
    SvecCodec c(n);
    for (Index m = 1; m <= 10; ++m) {
      const Matrix X = test::random_spd(n, rng);
      Matrix A(m, c.ds());
      Vector b(m);
      for (Index i = 0; i < m; ++i) {
        const Matrix Ai = random_sym(n, rng);
        A.row(i) = psd_constraint_row(Ai, c).transpose();
        b(i) = (Ai * X).trace() - 0.5;
      }
      TruncatedPsdMetric g(n, A, b);
      const Vector x = c.svec(X);
      const auto f = g.psd_factor(x);
      const Matrix G = g.metric(x);
      for (int k = 0; k < 3; ++k) {
        const Vector v = test::random_matrix(c.ds(), 1, rng).col(0);
        const Vector dense = G.ldlt().solve(v);
        e_solve = std::max(e_solve, (f->solve(v) - dense).norm() / dense.norm());
      }
      const double ld = std::log(G.determinant());
      e_det = std::max(e_det, std::abs(std::expm1(f->log_det() - ld)));
    }
  }
  note(o, "inverse_apply", e_solve, e_solve <= 1e-6);
  note(o, "det_recursion", e_det, e_det <= 1e-6);

  // Proposal covariance on a truncated cone through the walk's own path.
  const Index n = 3;
  SvecCodec c(n);
  Matrix A(4, c.ds());
  Vector b(4);
  const Matrix X = Matrix::Identity(n, n);
  for (Index i = 0; i < 4; ++i) {
    const Matrix Ai = random_sym(n, rng);
    A.row(i) = psd_constraint_row(Ai, c).transpose();
    b(i) = (Ai * X).trace() - 1.0;
  }
  auto g = std::make_shared<TruncatedPsdMetric>(n, A, b);
  const Vector x = c.svec(X);
  const double r = 0.4;
  DikinWalk w(g, uniform_target(), x, WalkConfig{r, 0.0}, 7);
  const int N = 100000;
  const Index ds = c.ds();
  Matrix C = Matrix::Zero(ds, ds);
  for (int i = 0; i < N; ++i) {
    const Vector z = w.propose() - x;
    C += z * z.transpose();
  }
  C /= N;
  const Matrix S = (r * r / static_cast<double>(ds)) * g->metric(x).inverse();
  double worst = 0.0;
  for (Index i = 0; i < ds; ++i)
    for (Index j = 0; j < ds; ++j) {
      const double se = std::sqrt((S(i, i) * S(j, j) + S(i, j) * S(i, j)) / N);
      worst = std::max(worst, std::abs(C(i, j) - S(i, j)) / se);
    }
  note(o, "fast_path_used", g->uses_fast_path() ? 1 : 0, g->uses_fast_path());
  note(o, "cov_max_se", worst, worst <= 5.0);
  return o;
}

// ------------------------------------------------------------ properties

Outcome property_suite() {
  Outcome o;
  Rng rng(505);
  bool all = true;
  std::string failed;
  for (const auto& e : barrier_catalog(rng)) {
    const auto pts =
        random_interior_points(*e.metric, e.x0, 100, rng, 10, 0.5, e.point_target());
    std::vector<Certificate> cs{sc_certificate(e.name, *e.metric, pts, rng),
                                ssc_certificate(e.name, *e.metric, pts, rng)};
    if (e.metric->params().flags.ltsc != Certification::unverified)
      cs.push_back(ltsc_certificate(e.name, *e.metric, pts, rng));
    if (e.metric->params().d2_psd)
      cs.push_back(d2_psd_certificate(e.name, *e.metric, pts, rng));
    if (e.A.rows() > 0) cs.push_back(chord_certificate(e.name, *e.metric, e.A, e.b, pts, rng));
    if (e.psd_n > 0) cs.push_back(psd_chord_certificate(e.name, *e.metric, e.psd_n, pts, rng));
    for (const auto& c : cs) {
      if (!c.passed) {
        all = false;
        failed += " " + c.name + "/" + c.check;
      }
    }
  }
  note(o, "catalog_failures", all ? 0 : 1, all);
  if (!failed.empty()) o.detail += " [" + failed + " ]";

  // PSD cone at unit scale: nu_bar = n, and SSC fails without the n scaling.
  auto raw = std::make_shared<PsdBarrier>(3, 1.0);
  const Vector x0 = raw->codec().svec(Matrix::Identity(3, 3));
  const auto pts = random_interior_points(*raw, x0, 100, rng, 10, 0.5, linear_target(x0));
  const auto chord = psd_chord_certificate("psd-unit", *raw, 3, pts, rng);
  note(o, "psd_nu_bar_le_n", chord.worst, chord.passed && raw->params().nu_bar <= 3.0);
  const auto neg = ssc_certificate("psd-unscaled", *raw, pts, rng);
  note(o, "unscaled_ssc_ratio", neg.worst, !neg.passed);
  return o;
}

// ---------------------------------------------------------- reversibility

double oracle_log_proposal(const Metric& g, const Vector& x, const Vector& z, double r) {
  const double d = static_cast<double>(x.size());
  const Matrix G = g.metric(x);
  const Vector h = z - x;
  return 0.5 * std::log(G.determinant()) - d / (2 * r * r) * h.dot(G * h) -
         0.5 * d * std::log(2 * std::numbers::pi * r * r / d);
}

double balance(const MetricPtr& g, const Target& t, const Vector& x0, double r, int pairs,
               Rng& rng) {
  DikinWalk w(g, t, x0, WalkConfig{r, 0.0}, rng());
  double worst = 0.0;
  for (int used = 0; used < pairs;) {
    const Vector z = w.propose();
    if (g->contains(z)) {
      const Vector x = w.x();
      const double fwd = oracle_log_proposal(*g, x, z, r) - t.value(x) +
                         std::min(0.0, log_acceptance(*g, t, x, z, r));
      const double bwd = oracle_log_proposal(*g, z, x, r) - t.value(z) +
                         std::min(0.0, log_acceptance(*g, t, z, x, r));
      worst = std::max(worst, std::abs(std::expm1(fwd - bwd)));
      ++used;
    }
    w.step();
  }
  return worst;
}

Outcome reversibility_suite() {
  Outcome o;
  Rng rng(606);
  Matrix A;
  Vector b;
  test::random_polytope(12, 3, rng, A, b);
  const double e1 = balance(std::make_shared<VaidyaMetric>(A, b),
                            linear_target(Vector::Constant(3, 0.5)), Vector::Zero(3), 0.5, 400,
                            rng);
  note(o, "polytope_vaidya", e1, e1 <= 1e-10);
  const Matrix Q = test::random_spd(3, rng);
  const double e2 = balance(ellipsoid_barrier(Q, Vector::Zero(3), -1.0), uniform_target(),
                            Vector::Zero(3), 0.5, 300, rng);
  note(o, "ellipsoid", e2, e2 <= 1e-10);
  const SvecCodec c(2);
  Matrix As(1, 3);
  As.row(0) = psd_constraint_row(-Matrix::Identity(2, 2), c).transpose();
  const double e3 = balance(std::make_shared<TruncatedPsdMetric>(2, As, Vector::Constant(1, -1.0)),
                            uniform_target(), c.svec(0.3 * Matrix::Identity(2, 2)), 0.5, 300, rng);
  note(o, "truncated_psd", e3, e3 <= 1e-10);
  return o;
}

// ------------------------------------------------------------ stationarity

Outcome stationarity_suite() {
  Outcome o;
  ProblemSpec s;
  s.dim = 2;
  Matrix A(3, 2);
  A << 1, 0, 0, 1, -1, -1;
  const Vector b = (Vector(3) << 0, 0, -1).finished();
  s.constraints.push_back(LinearConstraint{A, b});
  s.potentials.push_back(LinearPotential{(Vector(2) << 1.0, 2.0).finished()});
  RejectionOracle oracle(s, derive_box(s));
  Rng rng(707);
  const int N = 10000;
  const Samples starts = oracle.draw(N, rng);
  auto g = std::make_shared<LogBarrier>(A, b);
  const Target t = linear_target((Vector(2) << 1.0, 2.0).finished());
  Samples after;
  long moved = 0;
  for (const auto& x : starts) {
    DikinWalk w(g, t, x, WalkConfig{0.5, 0.0}, rng());
    moved += w.step();
    after.push_back(w.x());
  }
  double worst = 0.0;
  for (Index j = 0; j < 2; ++j) {
    Samples a, c;
    for (int i = 0; i < N; ++i) {
      a.push_back(starts[i].segment(j, 1));
      c.push_back(after[i].segment(j, 1));
    }
    worst = std::max(worst, histogram_tv(a, c, Vector::Zero(1), Vector::Ones(1), 20));
  }
  note(o, "moved_fraction", static_cast<double>(moved) / N, moved > N / 4);
  note(o, "marginal_tv", worst, worst <= 0.02);
  return o;
}

// ------------------------------------------------------------ end to end

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

CoolingConfig e2e_config(std::uint64_t seed) {
  CoolingConfig cfg;
  cfg.seed = seed;
  cfg.thin = 10;
  return cfg;
}

void moment_checks(Outcome& o, const std::string& tag, const Samples& xs, const Vector& mean,
                   const Vector& var) {
  for (Index j = 0; j < mean.size(); ++j) {
    const auto est = moment_estimate(column(xs, j));
    const double zm = (est.mean - mean(j)) / est.mean_se;
    note(o, tag + "_mean" + std::to_string(j) + "_se", zm, std::abs(zm) <= 3.0);
    if (var.size() > 0) {
      const double zv = (est.var - var(j)) / est.var_se;
      note(o, tag + "_var" + std::to_string(j) + "_se", zv, std::abs(zv) <= 3.0);
    }
  }
}

Outcome e2e_uniform() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto xs = gcdw_sample(box_spec(2, 0.0, 1.0), 100000, e2e_config(11));
  moment_checks(o, "uniform", xs, Vector::Constant(2, 0.5), Vector::Constant(2, 1.0 / 12.0));
  const double t = seconds_since(t0);
  note(o, "seconds", t, t < 300.0);
  return o;
}

Outcome e2e_exponential() {
  Outcome o;
  const auto t0 = Clock::now();
  ProblemSpec s = box_spec(2, 0.0, 5.0);
  s.potentials.push_back(LinearPotential{Vector::Ones(2)});
  const auto xs = gcdw_sample(s, 100000, e2e_config(12));
  const double e5 = std::exp(-5.0);
  const double mean = (1.0 - 6.0 * e5) / (1.0 - e5);
  moment_checks(o, "exp", xs, Vector::Constant(2, mean), Vector());
  const double t = seconds_since(t0);
  note(o, "seconds", t, t < 300.0);
  return o;
}

Outcome e2e_truncated_gaussian() {
  Outcome o;
  const auto t0 = Clock::now();
  const double lo = 0.0, hi = 2.0, mu = 0.3, sd = 0.5;
  ProblemSpec s = box_spec(1, lo, hi);
  s.potentials.push_back(
      QuadraticPotential{Matrix::Constant(1, 1, 1.0 / (sd * sd)), Vector::Constant(1, mu)});
  const auto xs = gcdw_sample(s, 100000, e2e_config(13));
  // Bin masses of the truncated density by Gauss-Kronrod.
  auto dens = [&](double x) { return std::exp(-0.5 * (x - mu) * (x - mu) / (sd * sd)); };
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const int bins = 20;
  std::vector<double> mass(bins);
  double total = 0.0;
  for (int i = 0; i < bins; ++i) {
    const double a = lo + (hi - lo) * i / bins, b = lo + (hi - lo) * (i + 1) / bins;
    mass[i] = GK::integrate(dens, a, b, 10, 1e-14);
    total += mass[i];
  }
  for (double& m : mass) m /= total;
  const double tv = histogram_tv_density(column(xs, 0), lo, hi, bins, mass);
  note(o, "tv", tv, tv <= 0.05);
  const double t = seconds_since(t0);
  note(o, "seconds", t, t < 300.0);
  return o;
}

Outcome e2e_psd_trace() {
  Outcome o;
  const auto t0 = Clock::now();
  ProblemSpec s;
  s.dim = 3;
  s.constraints.push_back(PsdConstraint{2, 0});
  Matrix A(1, 3);
  A << -1, 0, -1;
  s.constraints.push_back(LinearConstraint{A, Vector::Constant(1, -1.0)});
  const auto xs = gcdw_sample(s, 100000, e2e_config(14));
  RejectionOracle oracle(s, Box{(Vector(3) << 0, -0.5, 0).finished(),
                                (Vector(3) << 1, 0.5, 1).finished()});
  Rng rng(15);
  const Samples ref = oracle.draw(100000, rng);
  const auto rep = compare_samples(xs, ref);
  note(o, "max_moment_se", rep.max_abs_z(), rep.max_abs_z() <= 3.0);
  const double t = seconds_since(t0);
  note(o, "seconds", t, t < 300.0);
  return o;
}

// Runs (a)-(d) as one criterion; each keeps its own time limit.
Outcome e2e_suite() {
  Outcome o;
  for (const auto& [tag, run] :
       std::vector<std::pair<const char*, std::function<Outcome()>>>{
           {"a", e2e_uniform},
           {"b", e2e_exponential},
           {"c", e2e_truncated_gaussian},
           {"d", e2e_psd_trace}}) {
    const Outcome part = run();
    o.pass = o.pass && part.pass;
    o.detail += std::string(o.detail.empty() ? "" : " ") + "(" + tag + ") " + part.detail;
  }
  return o;
}

// ------------------------------------------------------------ warm start

Outcome warm_start_suite() {
  Outcome o;
  double p2 = 0.0, p34 = 0.0;
  for (double cost : {0.0, 1.0, 4.0}) {
    for (const auto& s : warm_start_ratios(0.0, 1.0, cost, 1)) {
      (s.phase == 2 ? p2 : p34) = std::max(s.phase == 2 ? p2 : p34, s.ratio);
    }
  }
  note(o, "phase2_max", p2, p2 <= std::exp(1.0) + 1e-3);
  note(o, "phase34_max", p34, p34 <= 10.0);
  return o;
}

// -------------------------------------------------------------- schedule

Outcome schedule_suite() {
  Outcome o;
  bool s0 = true, upd = true, cnt = true;
  for (Index d = 1; d <= 100; ++d) {
    const double dd = static_cast<double>(d);
    s0 = s0 && sigma0_squared(d) == 1e-5 / (dd * dd * dd);
    for (double nu : {1.5, 4.0, 20.0, 300.0}) {
      for (double s2 : {1e-7, 0.01, nu / dd, 0.5 * nu, nu}) {
        const double expect = s2 <= nu / dd ? s2 * (1.0 + 1.0 / std::sqrt(dd))
                                            : s2 * (1.0 + std::sqrt(s2) / std::sqrt(nu));
        upd = upd && advance_sigma(s2, nu, d) == expect;
      }
      const double start = sigma0_squared(d);
      long k = 0;
      for (double s = start; s < nu / dd; s *= 1.0 + 1.0 / std::sqrt(dd)) ++k;
      cnt = cnt && phase2_step_count(nu, d, start) == k;
    }
  }
  note(o, "sigma0_exact", s0, s0);
  note(o, "updates_exact", upd, upd);
  note(o, "phase2_count", cnt, cnt);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> suites{
      {"derivative-certificates", derivative_suite},
      {"leverage-lewis-identities", leverage_suite},
      {"psd-machinery", psd_suite},
      {"fast-path-equivalence", fast_path_suite},
      {"property-certificates", property_suite},
      {"reversibility", reversibility_suite},
      {"stationarity", stationarity_suite},
      {"end-to-end-gcdw", e2e_suite},
      {"warm-start-quadrature", warm_start_suite},
      {"schedule-arithmetic", schedule_suite},
  };
  int failed = 0;
  for (const auto& [name, run] : suites) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, suites.size());
  return failed ? 1 : 0;
}
