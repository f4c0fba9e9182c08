#include "dikin/diagnostics.hpp"

#include "dikin/cooling.hpp"
#include "dikin/walk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace dikin {

std::vector<Vector> random_interior_points(const Metric& g, const Vector& x0,
                                           int count, Rng& rng,
                                           int steps_between, double r,
                                           Target target) {
  require_dim(x0, g.dim(), "random_interior_points start");
  if (!g.contains(x0)) throw NotInterior("random_interior_points: x0 outside");
  // Unfiltered moves drift into the boundary, so the walk keeps its
  // Metropolis filter.
  WalkConfig cfg;
  cfg.r = r;
  cfg.laziness = 0.0;
  DikinWalk walk(std::shared_ptr<const Metric>(&g, [](const Metric*) {}),
                 std::move(target), x0, cfg, rng());
  std::vector<Vector> out;
  for (int k = 0; k < count; ++k) {
    walk.run(steps_between);
    out.push_back(walk.x());
  }
  return out;
}

Vector random_unit_direction(const Metric& g, const Vector& x, Rng& rng) {
  const auto f = g.factor(x);
  const Vector h = f->sample(rng);
  return h / std::sqrt(f->quad(h));
}

namespace {

// L^{-1} M L^{-T} for g = L L^T.
struct Whitener {
  Eigen::LLT<Matrix> llt;
  explicit Whitener(const Matrix& g) : llt(g) {
    if (llt.info() != Eigen::Success) {
      throw FactorizationError("certificate: metric is not positive definite");
    }
  }
  Matrix operator()(const Matrix& M) const {
    const Matrix T = llt.matrixL().solve(M);
    return llt.matrixL().solve(T.transpose()).transpose();
  }
  // sqrt(v^T g^{-1} v)
  double dual_norm(const Vector& v) const {
    return llt.matrixL().solve(v).norm();
  }
};

std::vector<Vector> directions(const Metric& g, const Vector& x, Rng& rng,
                               int dirs, bool include_x) {
  std::vector<Vector> hs;
  for (int k = 0; k < dirs; ++k) hs.push_back(random_unit_direction(g, x, rng));
  if (include_x && x.norm() > 0.0) {
    const double n = std::sqrt(g.factor(x)->quad(x));
    hs.push_back(x / n);
  }
  return hs;
}

Certificate make_cert(const std::string& name, const std::string& check,
                      int points, double worst, double threshold, bool upper) {
  Certificate c;
  c.name = name;
  c.check = check;
  c.points = points;
  c.worst = worst;
  c.threshold = threshold;
  c.at_most = upper;
  c.passed = upper ? worst <= threshold : worst >= threshold;
  return c;
}

}  // namespace

std::vector<Certificate> derivative_certificates(
    const std::string& name, const Metric& g, const std::vector<Vector>& pts,
    Rng& rng, double eps, double tol) {
  double e_grad = 0.0, e_hess = 0.0, e_dg = 0.0, e_d2g = 0.0;
  bool has_d2 = false;
  const bool exact = g.params().hessian_exact;
  for (const auto& x : pts) {
    const Vector h = random_unit_direction(g, x, rng);
    const Vector xp = x + eps * h;
    const Vector xm = x - eps * h;
    const Matrix G = g.metric(x);
    const Whitener W(G);
    const Vector grad = g.gradient(x);

    const double fd_dir = (g.barrier(xp) - g.barrier(xm)) / (2.0 * eps);
    e_grad = std::max(e_grad, std::abs(fd_dir - grad.dot(h)) /
                                  std::max(W.dual_norm(grad), 1.0));

    if (exact) {
      const Vector fd = (g.gradient(xp) - g.gradient(xm)) / (2.0 * eps);
      e_hess = std::max(e_hess, W.dual_norm(fd - G * h));
    }

    const Matrix Dg = g.dmetric(x, h);
    const Matrix fd_g = (g.metric(xp) - g.metric(xm)) / (2.0 * eps);
    e_dg = std::max(e_dg, W(fd_g - Dg).norm() / std::max(W(Dg).norm(), 1.0));

    if (auto D2 = g.d2metric(x, h)) {
      has_d2 = true;
      const Matrix fd2 = (g.dmetric(xp, h) - g.dmetric(xm, h)) / (2.0 * eps);
      e_d2g = std::max(e_d2g,
                       W(fd2 - *D2).norm() / std::max(W(*D2).norm(), 1.0));
    }
  }
  const int n = static_cast<int>(pts.size());
  std::vector<Certificate> out;
  out.push_back(make_cert(name, "gradient", n, e_grad, tol, true));
  if (exact) out.push_back(make_cert(name, "hessian", n, e_hess, tol, true));
  out.push_back(make_cert(name, "dmetric", n, e_dg, tol, true));
  if (has_d2) out.push_back(make_cert(name, "d2metric", n, e_d2g, tol, true));
  return out;
}

Certificate sc_certificate(const std::string& name, const Metric& g,
                           const std::vector<Vector>& pts, Rng& rng, int dirs,
                           double slack) {
  double worst = 0.0;
  for (const auto& x : pts) {
    const Whitener W(g.metric(x));
    for (const auto& h : directions(g, x, rng, dirs, true)) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(W(g.dmetric(x, h)),
                                               Eigen::EigenvaluesOnly);
      worst = std::max(worst, es.eigenvalues().cwiseAbs().maxCoeff() / 2.0);
    }
  }
  return make_cert(name, "sc", static_cast<int>(pts.size()), worst,
                   1.0 + slack, true);
}

Certificate ssc_certificate(const std::string& name, const Metric& g,
                            const std::vector<Vector>& pts, Rng& rng, int dirs,
                            double slack) {
  double worst = 0.0;
  for (const auto& x : pts) {
    const Whitener W(g.metric(x));
    for (const auto& h : directions(g, x, rng, dirs, true)) {
      worst = std::max(worst, W(g.dmetric(x, h)).norm() / 2.0);
    }
  }
  return make_cert(name, "ssc", static_cast<int>(pts.size()), worst,
                   1.0 + slack, true);
}

namespace {

// Eigenvalues of g^{-1/2} D^2 g[h, h] g^{-1/2} over points and unit
// directions; D^2 g from central differences of Dg when not provided.
template <class Fn>
bool for_each_d2(const Metric& g, const std::vector<Vector>& pts, Rng& rng,
                 int dirs, Fn&& fn) {
  bool fd = false;
  const double eps = 1e-5;
  for (const auto& x : pts) {
    const Whitener W(g.metric(x));
    for (const auto& h : directions(g, x, rng, dirs, true)) {
      auto D2 = g.d2metric(x, h);
      if (!D2) {
        fd = true;
        D2 = (g.dmetric(x + eps * h, h) - g.dmetric(x - eps * h, h)) / (2.0 * eps);
      }
      Eigen::SelfAdjointEigenSolver<Matrix> es(W(*D2), Eigen::EigenvaluesOnly);
      fn(es.eigenvalues());
    }
  }
  return fd;
}

}  // namespace

Certificate ltsc_certificate(const std::string& name, const Metric& g,
                             const std::vector<Vector>& pts, Rng& rng,
                             int dirs) {
  double worst = kInf;
  const bool fd = for_each_d2(g, pts, rng, dirs, [&](const Vector& ev) {
    worst = std::min(worst, ev.cwiseMin(0.0).sum());
  });
  Certificate c = make_cert(name, "ltsc", static_cast<int>(pts.size()), worst,
                            -1.0, false);
  if (fd) c.note = "D^2 g by central differences of Dg";
  return c;
}

Certificate d2_psd_certificate(const std::string& name, const Metric& g,
                               const std::vector<Vector>& pts, Rng& rng,
                               int dirs, double tol) {
  double worst = kInf;
  const bool fd = for_each_d2(g, pts, rng, dirs, [&](const Vector& ev) {
    worst = std::min(worst, ev.minCoeff());
  });
  Certificate c = make_cert(name, "d2-psd", static_cast<int>(pts.size()), worst,
                            -tol, false);
  if (fd) c.note = "D^2 g by central differences of Dg";
  return c;
}

Certificate chord_certificate(const std::string& name, const Metric& g,
                              const Matrix& A, const Vector& b,
                              const std::vector<Vector>& pts, Rng& rng,
                              int dirs) {
  const double nu_bar = g.params().nu_bar;
  const Index d = A.cols();
  const Index m = A.rows();
  double worst = 0.0;
  std::uniform_int_distribution<Index> pick(0, m - 1);
  std::bernoulli_distribution coin(0.5);
  for (const auto& x : pts) {
    const Vector s = A * x - b;
    const Matrix Ax = s.cwiseInverse().asDiagonal() * A;
    const Matrix G = g.metric(x);
    auto probe = [&](const Vector& u) {
      const double inf = (Ax * u).cwiseAbs().maxCoeff();
      if (!(inf > 0.0)) return;
      const Vector h = u / inf;
      worst = std::max(worst, h.dot(G * h) / nu_bar);
    };
    for (int k = 0; k < dirs; ++k) {
      probe(standard_normal(d, rng));
      // Vertex candidates of {|A_x h| <= 1}: d random rows set to +-1.
      std::vector<Index> rows;
      while (static_cast<Index>(rows.size()) < d) {
        const Index i = pick(rng);
        if (std::find(rows.begin(), rows.end(), i) == rows.end()) rows.push_back(i);
      }
      Matrix B(d, d);
      Vector sgn(d);
      for (Index j = 0; j < d; ++j) {
        B.row(j) = Ax.row(rows[static_cast<size_t>(j)]);
        sgn(j) = coin(rng) ? 1.0 : -1.0;
      }
      Eigen::FullPivLU<Matrix> lu(B);
      if (lu.isInvertible()) probe(lu.solve(sgn));
    }
  }
  Certificate c = make_cert(name, "chord", static_cast<int>(pts.size()), worst,
                            1.0 + 1e-9, true);
  c.note = "max ||y-x||_g^2 / nu_bar";
  return c;
}

Certificate psd_chord_certificate(const std::string& name, const Metric& g,
                                  Index n, const std::vector<Vector>& pts,
                                  Rng& rng, int dirs) {
  const SvecCodec codec(n);
  const double nu_bar = g.params().nu_bar;
  double worst = 0.0;
  for (const auto& x : pts) {
    const Matrix X = codec.unsvec(x);
    Eigen::SelfAdjointEigenSolver<Matrix> es(X);
    const Matrix R = es.operatorSqrt();
    const Matrix G = g.metric(x);
    auto probe = [&](const Matrix& S) {
      Eigen::SelfAdjointEigenSolver<Matrix> ev(S, Eigen::EigenvaluesOnly);
      const double sn = ev.eigenvalues().cwiseAbs().maxCoeff();
      if (!(sn > 0.0)) return;
      const Vector h = codec.svec(R * (S / sn) * R);
      worst = std::max(worst, h.dot(G * h) / nu_bar);
    };
    probe(Matrix::Identity(n, n));
    for (int k = 0; k < dirs; ++k) {
      Matrix S = Matrix::NullaryExpr(n, n, [&]() { return standard_normal(1, rng)(0); });
      probe(0.5 * (S + S.transpose()));
    }
  }
  // H = X attains the bound, so only rounding is allowed above it.
  Certificate c = make_cert(name, "psd-chord", static_cast<int>(pts.size()),
                            worst, 1.0 + 1e-9, true);
  c.note = "max ||H||_g^2 / nu_bar over X +- H >= 0";
  return c;
}

std::vector<AscProbe> asc_probe(const Metric& g, const std::vector<Vector>& pts,
                                Rng& rng, const std::vector<double>& radii,
                                int draws) {
  std::vector<AscProbe> out;
  const Target flat = uniform_target();
  const double d = static_cast<double>(g.dim());
  for (double r : radii) {
    AscProbe p;
    p.r = r;
    long n = 0;
    for (const auto& x : pts) {
      const auto gx = g.factor(x);
      for (int k = 0; k < draws; ++k) {
        const Vector z = x + (r / std::sqrt(d)) * gx->sample(rng);
        const double l = log_acceptance(g, flat, x, z, r, gx.get());
        ++n;
        if (!std::isfinite(l)) continue;
        p.mean_abs_log_ratio += std::abs(l);
        p.mean_acceptance += std::min(1.0, std::exp(l));
      }
    }
    if (n > 0) {
      p.mean_abs_log_ratio /= static_cast<double>(n);
      p.mean_acceptance /= static_cast<double>(n);
    }
    out.push_back(p);
  }
  return out;
}

Target CatalogEntry::point_target() const {
  return cost.size() > 0 ? linear_target(cost) : uniform_target();
}

std::vector<CatalogEntry> barrier_catalog(Rng& rng) {
  std::vector<CatalogEntry> out;
  // Random rows plus a box so the polytope is bounded.
  const Index d = 3, m = 8 + 2 * d;
  Matrix A(m, d);
  for (Index i = 0; i < 8; ++i) A.row(i) = standard_normal(d, rng).transpose();
  A.bottomRows(2 * d) << Matrix::Identity(d, d), -Matrix::Identity(d, d);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  Vector b(m);
  for (Index i = 0; i < m; ++i) b(i) = -u(rng);
  const Vector z3 = Vector::Zero(d);

  out.push_back({"log", std::make_shared<LogBarrier>(A, b), z3, A, b, 0, {}});
  out.push_back({"vaidya", std::make_shared<VaidyaMetric>(A, b), z3, A, b, 0, {}});
  out.push_back({"lewis", std::make_shared<LewisMetric>(A, b), z3, A, b, 0, {}});

  Matrix R = Matrix::NullaryExpr(d, d, [&]() { return standard_normal(1, rng)(0); });
  const Matrix Q = R * R.transpose() + Matrix::Identity(d, d);
  out.push_back({"ellipsoid", ellipsoid_barrier(Q, z3, -1.0), z3, {}, {}, 0, {}});

  const Vector mu = 0.3 * standard_normal(d, rng);
  Vector y0(d + 1);
  y0 << mu, 1.0;
  const Vector et = Vector::Unit(d + 1, d);
  out.push_back({"gaussian", gaussian_epigraph_barrier(Q, mu), y0, {}, {}, 0, et});
  out.push_back({"soc", soc_barrier(Q, mu), y0, {}, {}, 0, et});

  const Index n = 3;
  const SvecCodec codec(n);
  out.push_back({"psd", std::make_shared<PsdBarrier>(n),
                 codec.svec(Matrix::Identity(n, n)), {}, {}, n,
                 codec.svec(Matrix::Identity(n, n))});

  {
    const SvecCodec c2(2);
    Matrix As(2, c2.ds());
    As.row(0) = psd_constraint_row(-Matrix::Identity(2, 2), c2).transpose();
    Matrix E = Matrix::Zero(2, 2);
    E(0, 1) = E(1, 0) = 1.0;
    As.row(1) = psd_constraint_row(E, c2).transpose();
    Vector bs(2);
    bs << -1.0, -0.5;
    out.push_back({"psd-truncated",
                   std::make_shared<TruncatedPsdMetric>(2, As, bs),
                   c2.svec(0.3 * Matrix::Identity(2, 2)), {}, {}, 0, {}});
  }

  const Index k = 2;
  auto epi = [&](EpigraphKind kind, Vector x, double p) {
    auto bar = std::make_shared<SeparableEpigraphBarrier>(kind, k, p);
    Vector y(2 * k);
    y.head(k) = x;
    for (Index i = 0; i < k; ++i) y(k + i) = bar->potential1(x(i)) + 1.0;
    if (kind == EpigraphKind::power) y.tail(k).array() = 1.0;
    Vector cost = Vector::Zero(2 * k);
    cost.tail(k).setOnes();
    out.push_back({to_string(kind), bar, y, {}, {}, 0, cost});
  };
  epi(EpigraphKind::entropy, Vector::Constant(k, 0.5), 2.0);
  epi(EpigraphKind::power, (Vector(2) << 0.3, -0.4).finished(), 3.0);
  epi(EpigraphKind::log, (Vector(2) << 1.0, 2.0).finished(), 2.0);
  epi(EpigraphKind::exp, (Vector(2) << 0.0, -0.5).finished(), 2.0);
  for (const auto& e : out) {
    if (!e.metric->contains(e.x0)) {
      throw NotInterior("barrier_catalog: bad start for " + e.name);
    }
  }
  return out;
}

// ------------------------------------------------------ rejection oracle

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

Box derive_box(const ProblemSpec& spec) {
  const Index d = spec.dim;
  Box box{Vector::Constant(d, -kInf), Vector::Constant(d, kInf)};
  // Interval propagation over the rows a.x >= b: each coordinate is bounded
  // by the other coordinates' current intervals. A few sweeps settle it for
  // the small problems the oracle handles.
  for (int sweep = 0; sweep < 50; ++sweep) {
    bool changed = false;
    for (const auto& c : spec.constraints) {
      const auto* lin = std::get_if<LinearConstraint>(&c);
      if (!lin) continue;
      for (Index i = 0; i < lin->A.rows(); ++i) {
        for (Index j = 0; j < d; ++j) {
          const double a = lin->A(i, j);
          if (a == 0.0) continue;
          // rest = max over the box of sum_{k != j} a_k x_k
          double rest = 0.0;
          for (Index k = 0; k < d && std::isfinite(rest); ++k) {
            const double ak = lin->A(i, k);
            if (k == j || ak == 0.0) continue;
            rest += ak > 0.0 ? ak * box.upper(k) : ak * box.lower(k);
          }
          if (!std::isfinite(rest)) continue;
          const double v = (lin->b(i) - rest) / a;
          if (a > 0.0 && v > box.lower(j) + 1e-12 * (1.0 + std::abs(v))) {
            box.lower(j) = v;
            changed = true;
          } else if (a < 0.0 && v < box.upper(j) - 1e-12 * (1.0 + std::abs(v))) {
            box.upper(j) = v;
            changed = true;
          }
        }
      }
    }
    if (!changed) break;
  }
  if (!box.lower.allFinite() || !box.upper.allFinite()) {
    throw MissingParameter("derive_box: linear rows do not bound the feasible set; "
                           "give a bounding box");
  }
  if ((box.upper.array() <= box.lower.array()).any()) {
    throw OracleInfeasible("derive_box: empty box");
  }
  return box;
}

double potential_lower_bound(const ProblemSpec& spec, const Box& box) {
  const Vector& lo = box.lower;
  const Vector& hi = box.upper;
  double total = 0.0;
  for (const auto& p : spec.potentials) {
    total += std::visit(
        overloaded{
            [&](const LinearPotential& l) {
              return l.c.cwiseProduct(lo).cwiseMin(l.c.cwiseProduct(hi)).sum();
            },
            [](const QuadraticPotential&) { return 0.0; },
            [](const NormPotential&) { return 0.0; },
            [](const PowerPotential&) { return 0.0; },
            [&](const EntropyPotential&) {
              double s = 0.0;
              for (Index i = 0; i < lo.size(); ++i) {
                const double a = std::max(lo(i), 0.0), b = hi(i);
                auto f = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
                double m = std::min(f(a), f(b));
                const double e = 1.0 / std::numbers::e;
                if (a < e && e < b) m = std::min(m, -e);
                s += m;
              }
              return s;
            },
            [&](const LogPotential&) {
              double s = 0.0;
              for (Index i = 0; i < hi.size(); ++i) s -= std::log(hi(i));
              return s;
            },
            [&](const ExpPotential&) { return lo.array().exp().sum(); },
            [](const LogDetPotential&) -> double {
              throw UnsupportedTerm("potential_lower_bound: logdet potential");
            },
        },
        p);
  }
  return total;
}

RejectionOracle::RejectionOracle(ProblemSpec spec, Box box, long max_tries)
    : spec_(std::move(spec)), box_(std::move(box)), max_tries_(max_tries) {
  spec_.validate();
  require_dim(box_.lower, spec_.dim, "oracle box");
  require_dim(box_.upper, spec_.dim, "oracle box");
  if (spec_.dim > 3) throw DimensionError("RejectionOracle: dimension above 3");
  f_lb_ = potential_lower_bound(spec_, box_);
}

Vector RejectionOracle::draw(Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const Index d = spec_.dim;
  for (long k = 0; k < max_tries_; ++k) {
    ++tries_;
    if (tries_ >= 1000000 && accepted_ < tries_ / 1000000) {
      throw OracleInfeasible("rejection oracle: acceptance below 1e-6");
    }
    Vector y(d);
    for (Index i = 0; i < d; ++i) {
      y(i) = box_.lower(i) + unif(rng) * (box_.upper(i) - box_.lower(i));
    }
    if (!spec_.feasible(y)) continue;
    const double f = spec_.potential(y);
    if (!std::isfinite(f)) continue;
    if (unif(rng) < std::exp(-(f - f_lb_))) {
      ++accepted_;
      return y;
    }
  }
  throw OracleInfeasible("rejection oracle: no acceptance within the try budget");
}

Samples RejectionOracle::draw(long n, Rng& rng) {
  Samples out;
  out.reserve(static_cast<size_t>(std::max(0L, n)));
  for (long i = 0; i < n; ++i) out.push_back(draw(rng));
  return out;
}

double RejectionOracle::acceptance_rate() const {
  return tries_ ? static_cast<double>(accepted_) / tries_ : 0.0;
}

// ------------------------------------------------- warm-start quadrature

double log_partition_1d(const std::function<double(double)>& V, double lo,
                        double hi, double peak, double width) {
  if (!(hi > lo)) throw DimensionError("log_partition_1d: empty interval");
  peak = std::clamp(peak, lo, hi);
  const double shift = V(peak);
  if (!std::isfinite(shift)) throw ConvergenceError("log_partition_1d: V(peak) not finite", shift);
  std::vector<double> pts{lo, hi, peak};
  for (int k = 0; k <= 10; ++k) {
    const double w = width * std::pow(4.0, k);
    pts.push_back(peak - w);
    pts.push_back(peak + w);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::remove_if(pts.begin(), pts.end(),
                           [&](double p) { return p < lo || p > hi; }),
            pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  auto f = [&](double x) {
    const double v = V(x);
    return std::isfinite(v) ? std::exp(-(v - shift)) : 0.0;
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  double total = 0.0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1] > pts[i]) total += GK::integrate(f, pts[i], pts[i + 1], 15, 1e-13);
  }
  if (!(total > 0.0)) throw ConvergenceError("log_partition_1d: zero integral", total);
  return std::log(total) - shift;
}

namespace {

// 1D factor exp(-a x - b phi(x)), phi the log barrier of [lo, hi].
double log_z_interval(double a, double b, double lo, double hi) {
  auto phi = [=](double x) { return -std::log(x - lo) - std::log(hi - x); };
  auto V = [=](double x) { return a * x + (b != 0.0 ? b * phi(x) : 0.0); };
  double peak, width;
  if (b > 0.0) {
    // V' = a + b (-1/(x-lo) + 1/(hi-x)) is increasing.
    double l = lo, h = hi;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (l + h);
      const double dv = a + b * (-1.0 / (mid - lo) + 1.0 / (hi - mid));
      (dv > 0.0 ? h : l) = mid;
    }
    peak = 0.5 * (l + h);
    const double v2 = b * (1.0 / ((peak - lo) * (peak - lo)) +
                           1.0 / ((hi - peak) * (hi - peak)));
    width = 1.0 / std::sqrt(v2);
  } else if (b == 0.0) {
    peak = a > 0.0 ? lo : hi;
    width = a != 0.0 ? std::min(hi - lo, 1.0 / std::abs(a)) : hi - lo;
  } else {
    throw ConvergenceError("warm start: density not integrable", b);
  }
  return log_partition_1d(V, lo, hi, peak, width);
}

}  // namespace

std::vector<WarmStartStep> warm_start_ratios(double lo, double hi, double cost,
                                             int dims) {
  if (dims < 1) throw DimensionError("warm_start_ratios: dims must be >= 1");
  const Index d = dims;
  const double dd = static_cast<double>(dims);
  const double nu = 2.0 * dd;
  const double s0 = sigma0_squared(d);
  struct Density {
    double sigma2;
    double a;
    double b;
  };
  auto annealed = [&](double s2) {
    if (schedule_phase(s2, nu, d) == 2) return Density{s2, (nu / dd) * cost / s2, 1.0 / s2};
    return Density{s2, cost, 1.0 / s2};
  };
  std::vector<Density> seq{annealed(s0)};
  std::vector<int> phase;
  for (const auto& e : sigma_schedule(nu, d, s0)) {
    seq.push_back(annealed(e.sigma2));
    phase.push_back(e.phase);
  }
  seq.push_back({kInf, cost, 0.0});
  phase.push_back(4);

  std::vector<WarmStartStep> out;
  for (size_t i = 0; i + 1 < seq.size(); ++i) {
    const auto& p = seq[i];
    const auto& q = seq[i + 1];
    const double l1 = log_z_interval(2.0 * p.a - q.a, 2.0 * p.b - q.b, lo, hi) +
                      log_z_interval(q.a, q.b, lo, hi) -
                      2.0 * log_z_interval(p.a, p.b, lo, hi);
    out.push_back({phase[i], p.sigma2, q.sigma2, std::exp(dd * l1)});
  }
  return out;
}

}  // namespace dikin
