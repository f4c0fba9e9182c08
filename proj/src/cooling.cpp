#include "dikin/cooling.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace dikin {

double sigma0_squared(Index d) {
  if (d < 1) throw DimensionError("sigma0_squared: d must be >= 1");
  const double dd = static_cast<double>(d);
  return 1e-5 / (dd * dd * dd);
}

int schedule_phase(double sigma2, double nu, Index d) {
  const double dd = static_cast<double>(d);
  if (sigma2 <= nu / dd) return 2;
  if (sigma2 <= nu) return 3;
  return 4;
}

double advance_sigma(double sigma2, double nu, Index d) {
  const double dd = static_cast<double>(d);
  if (sigma2 <= nu / dd) return sigma2 * (1.0 + 1.0 / std::sqrt(dd));
  return sigma2 * (1.0 + std::sqrt(sigma2) / std::sqrt(nu));
}

long phase2_step_count(double nu, Index d, double sigma0_sq) {
  const double dd = static_cast<double>(d);
  const double ratio = nu / (dd * sigma0_sq);
  if (ratio < 1.0) return 0;
  return static_cast<long>(
      std::ceil(std::log(ratio) / std::log(1.0 + 1.0 / std::sqrt(dd))));
}

std::vector<ScheduleEntry> sigma_schedule(double nu, Index d,
                                          double sigma0_sq) {
  if (!(nu > 0.0)) throw MissingParameter("sigma_schedule: nu must be positive");
  std::vector<ScheduleEntry> out;
  double s = sigma0_sq;
  while (s <= nu) {
    const int rule = schedule_phase(s, nu, d);
    s = advance_sigma(s, nu, d);
    out.push_back({rule, s});
  }
  return out;
}

RelativeBounds relative_bounds(int phase, double sigma2, double nu, Index d,
                               double alpha_f, double beta_f) {
  const double dd = static_cast<double>(d);
  switch (phase) {
    case 1:
    case 2:
      return {(1.0 + nu * alpha_f / dd) / sigma2,
              (1.0 + nu * beta_f / dd) / sigma2};
    case 3:
      return {alpha_f + 1.0 / sigma2, beta_f + 1.0 / sigma2};
    default:
      return {alpha_f, beta_f};
  }
}

// --------------------------------------------------------------- Newton

NewtonResult analytic_center(const Metric& phi, const Vector& c,
                             const Vector& hint, const NewtonOptions& opts) {
  require_dim(hint, phi.dim(), "analytic_center hint");
  require_dim(c, phi.dim(), "analytic_center cost");
  if (!phi.contains(hint)) {
    throw NeedFeasiblePoint("analytic_center: hint is not strictly feasible");
  }
  auto F = [&](const Vector& y) { return c.dot(y) + phi.barrier(y); };
  NewtonResult res;
  res.x = hint;
  double fx = F(res.x);
  for (int it = 0; it < opts.max_iter; ++it) {
    const Vector grad = c + phi.gradient(res.x);
    // A metric that degenerates along the iterates means the objective runs
    // off to infinity.
    if (!res.x.allFinite() || !std::isfinite(fx) || !grad.allFinite()) {
      throw ConvergenceError("analytic_center: objective unbounded below", res.decrement);
    }
    Vector dx;
    try {
      dx = -SymPD(phi.metric(res.x)).solve(grad);
    } catch (const FactorizationError&) {
      throw ConvergenceError("analytic_center: objective unbounded below", res.decrement);
    }
    const double lambda = std::sqrt(std::max(0.0, -grad.dot(dx)));
    res.decrement = lambda;
    res.iterations = it;
    if (lambda <= opts.tol) return res;
    const double slope = grad.dot(dx);
    double t = 1.0;
    bool moved = false;
    while (t > 1e-14) {
      const Vector xn = res.x + t * dx;
      if (phi.contains(xn)) {
        const double fn = F(xn);
        // Inside the quadratic region full steps are taken as is; the
        // Armijo test would only see rounding noise there.
        if (lambda < 0.25 || fn <= fx + opts.armijo * t * slope) {
          res.x = xn;
          fx = fn;
          moved = true;
          break;
        }
      }
      t *= opts.shrink;
    }
    if (!moved) {
      throw ConvergenceError("analytic_center: line search stalled", lambda);
    }
  }
  throw ConvergenceError("analytic_center: no convergence", res.decrement);
}

// --------------------------------------------------------------- phase I

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Relaxed constraints g_j(x) + tau > 0 on z = (x, tau).
struct RelaxedSet {
  Index d = 0;
  Matrix A;  // rows a_i: a_i^T x - b_i + tau > 0
  Vector b;
  std::vector<EllipsoidConstraint> ellipsoids;
  std::vector<PsdConstraint> cones;

  bool empty() const { return A.rows() == 0 && ellipsoids.empty() && cones.empty(); }

  // Largest violation max_j(-g_j(x)).
  double violation(const Vector& x) const {
    double v = -kInf;
    if (A.rows() > 0) v = std::max(v, (b - A * x).maxCoeff());
    for (const auto& e : ellipsoids) {
      v = std::max(v, e.l + e.p.dot(x) + 0.5 * x.dot(e.Q * x));
    }
    for (const auto& p : cones) {
      const SvecCodec codec(p.n);
      const Matrix X = codec.unsvec(x.segment(p.offset, codec.ds()));
      Eigen::SelfAdjointEigenSolver<Matrix> es(X);
      v = std::max(v, -es.eigenvalues().minCoeff());
    }
    return v;
  }

  // value, gradient and Hessian of the relaxed log barrier; false outside.
  bool eval(const Vector& z, double& f, Vector& g, Matrix& H) const {
    const Vector x = z.head(d);
    const double tau = z(d);
    f = 0.0;
    g = Vector::Zero(d + 1);
    H = Matrix::Zero(d + 1, d + 1);
    for (Index i = 0; i < A.rows(); ++i) {
      const double s = A.row(i).dot(x) - b(i) + tau;
      if (!(s > 0.0)) return false;
      Vector a(d + 1);
      a.head(d) = A.row(i).transpose();
      a(d) = 1.0;
      f -= std::log(s);
      g -= a / s;
      H += a * a.transpose() / (s * s);
    }
    for (const auto& e : ellipsoids) {
      const double q = -e.l - e.p.dot(x) - 0.5 * x.dot(e.Q * x) + tau;
      if (!(q > 0.0)) return false;
      Vector G(d + 1);
      G.head(d) = -e.p - e.Q * x;
      G(d) = 1.0;
      Matrix Hq = Matrix::Zero(d + 1, d + 1);
      Hq.topLeftCorner(d, d) = -e.Q;
      f -= std::log(q);
      g -= G / q;
      H += G * G.transpose() / (q * q) - Hq / q;
    }
    for (const auto& p : cones) {
      const SvecCodec codec(p.n);
      const Index ds = codec.ds();
      const Matrix Y = codec.unsvec(x.segment(p.offset, ds)) +
                       tau * Matrix::Identity(p.n, p.n);
      const double v = logdet_barrier_value(Y);
      if (!std::isfinite(v)) return false;
      const Matrix Yi = SymPD(Y).inverse();
      f += v;
      g.segment(p.offset, ds) -= codec.mt_vec(Yi);
      g(d) -= Yi.trace();
      H.block(p.offset, p.offset, ds, ds) += psd_hessian(Y, codec);
      const Vector cross = codec.mt_vec(Yi * Yi);
      H.block(p.offset, d, ds, 1) += cross;
      H.block(d, p.offset, 1, ds) += cross.transpose();
      H(d, d) += (Yi * Yi).trace();
    }
    return true;
  }
};

RelaxedSet relaxed_set(const ReducedProblem& red) {
  RelaxedSet rs;
  rs.d = red.x_dim;
  std::vector<Vector> rows;
  std::vector<double> rhs;
  for (const auto& bar : red.barriers) {
    std::visit(overloaded{
                   [&](const LinearConstraint& l) {
                     for (Index i = 0; i < l.A.rows(); ++i) {
                       rows.push_back(l.A.row(i).transpose());
                       rhs.push_back(l.b(i));
                     }
                   },
                   [&](const EllipsoidConstraint& e) { rs.ellipsoids.push_back(e); },
                   [&](const PsdConstraint& p) { rs.cones.push_back(p); },
                   [&](const EntropyPotential&) {
                     for (Index i = 0; i < rs.d; ++i) {
                       rows.push_back(Vector::Unit(rs.d, i));
                       rhs.push_back(0.0);
                     }
                   },
                   [&](const LogPotential&) {
                     for (Index i = 0; i < rs.d; ++i) {
                       rows.push_back(Vector::Unit(rs.d, i));
                       rhs.push_back(0.0);
                     }
                   },
                   [](const auto&) {},
               },
               bar.term);
  }
  rs.A.resize(static_cast<Index>(rows.size()), rs.d);
  rs.b.resize(static_cast<Index>(rows.size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    rs.A.row(static_cast<Index>(i)) = rows[i].transpose();
    rs.b(static_cast<Index>(i)) = rhs[i];
  }
  return rs;
}

}  // namespace

Vector find_interior_point(const ReducedProblem& red,
                           const std::optional<Vector>& hint) {
  const Index d = red.x_dim;
  Vector x = hint ? *hint : Vector::Zero(d);
  require_dim(x, d, "find_interior_point hint");
  const RelaxedSet rs = relaxed_set(red);
  if (rs.empty() || rs.violation(x) < 0.0) return augment(red, x);

  Vector z(d + 1);
  z.head(d) = x;
  z(d) = std::max(0.0, rs.violation(x)) + 1.0;
  Vector e_tau = Vector::Unit(d + 1, d);
  for (double t = 1.0; t <= 1e12; t *= 10.0) {
    for (int it = 0; it < 100; ++it) {
      double f;
      Vector g;
      Matrix H;
      if (!rs.eval(z, f, g, H)) throw NeedFeasiblePoint("phase I left its domain");
      g += t * e_tau;
      H += 1e-12 * (1.0 + H.diagonal().maxCoeff()) *
           Matrix::Identity(d + 1, d + 1);
      const Vector dz = -SymPD(H).solve(g);
      const double lambda = std::sqrt(std::max(0.0, -g.dot(dz)));
      if (lambda < 1e-6) break;
      const double F = t * z(d) + f;
      double step = 1.0 / (1.0 + lambda);
      bool moved = false;
      while (step > 1e-14) {
        const Vector zn = z + step * dz;
        double fn;
        Vector gn;
        Matrix Hn;
        if (rs.eval(zn, fn, gn, Hn) &&
            t * zn(d) + fn <= F + 0.25 * step * g.dot(dz)) {
          z = zn;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
      if (z(d) < 0.0 && rs.violation(z.head(d)) < 0.0) {
        return augment(red, z.head(d));
      }
    }
  }
  throw NeedFeasiblePoint(
      "no strictly feasible point found; supply a starting hint");
}

// ------------------------------------------------------ GaussianCooling

GaussianCooling::GaussianCooling(ReducedProblem red, CompositePtr metric,
                                 CoolingConfig cfg)
    : red_(std::move(red)), metric_(std::move(metric)), cfg_(std::move(cfg)) {
  if (!metric_) throw MissingParameter("GaussianCooling: no metric");
  if (metric_->dim() != red_.dim) {
    throw DimensionError("GaussianCooling: metric and problem dimensions differ");
  }
  if (cfg_.c_inner < 1) throw InvalidScale("GaussianCooling: c_inner must be >= 1");
  if (!(cfg_.eps > 0.0 && cfg_.eps < 1.0)) {
    throw InvalidScale("GaussianCooling: eps must lie in (0, 1)");
  }
  const double nu = metric_->params().nu;
  if (!(nu > 0.0)) throw MissingParameter("GaussianCooling: metric has no nu");
}

Vector GaussianCooling::phase1_start(const Metric& metric, const Vector& x_star,
                                     double sigma0_sq, double nu, double beta_f,
                                     Rng& rng, long* attempts) {
  const double d = static_cast<double>(x_star.size());
  const auto g = metric.factor(x_star);
  const double s = std::sqrt(sigma0_sq / (1.0 + nu * beta_f / d));
  const double radius = 3.0 * std::sqrt(sigma0_sq) * std::sqrt(d);
  for (long k = 1; k <= 1000000; ++k) {
    const Vector y = x_star + s * g->sample(rng);
    if (std::sqrt(g->quad(y - x_star)) <= radius && metric.contains(y)) {
      if (attempts) *attempts = k;
      return y;
    }
  }
  throw SamplingError("phase 1: rejection sampler stalled after 1e6 draws");
}

Target GaussianCooling::annealed_target(int phase, double sigma2) const {
  const double d = static_cast<double>(red_.dim);
  const double nu = report_.nu;
  const double off = report_.phi_offset;
  const Vector c = red_.c;
  const CompositePtr phi = metric_;
  Target t;
  if (phase <= 2) {
    const Vector cbar = (nu / d) * c;
    t.value = [=](const Vector& y) {
      return (cbar.dot(y) + phi->barrier(y) - off) / sigma2;
    };
  } else if (phase == 3) {
    t.value = [=](const Vector& y) {
      return c.dot(y) + (phi->barrier(y) - off) / sigma2;
    };
  } else {
    return linear_target(c);
  }
  return t;
}

void GaussianCooling::walk_phase(int phase, double sigma2, long steps) {
  const auto rb = relative_bounds(phase, sigma2, report_.nu, red_.dim);
  const double r = default_radius(rb.beta, cfg_.r0);
  walk_->set_radius(r);
  walk_->set_target(annealed_target(phase, sigma2));
  walk_->reset_stats();
  walk_->run(steps);
  PhaseRecord rec{phase, sigma2, r, steps, walk_->stats().acceptance_rate()};
  report_.trace.push_back(rec);
  if (cfg_.progress) cfg_.progress(phase, sigma2, rec.acceptance);
}

void GaussianCooling::prepare() {
  if (prepared_) return;
  const Index d = red_.dim;
  report_.d = d;
  report_.nu = metric_->params().nu;
  report_.nu_bar = metric_->params().nu_bar;
  report_.sigma0_sq = cfg_.sigma0_sq > 0.0 ? cfg_.sigma0_sq : sigma0_squared(d);
  report_.inner_budget =
      cfg_.inner_budget > 0 ? cfg_.inner_budget : static_cast<long>(cfg_.c_inner) * d;

  // Phase 1: analytic center of fbar + phi and a truncated Gaussian draw.
  const Vector y0 = find_interior_point(red_, cfg_.hint);
  const Vector cbar = (report_.nu / static_cast<double>(d)) * red_.c;
  report_.x_star = analytic_center(*metric_, cbar, y0).x;
  try {
    NewtonOptions pure;
    pure.max_iter = 200;
    const Vector center =
        analytic_center(*metric_, Vector::Zero(d), report_.x_star, pure).x;
    report_.phi_offset = metric_->barrier(center);
    report_.phi_offset_from_pure_center = true;
  } catch (const ConvergenceError&) {
    // phi has no minimizer (epigraph directions); any constant will do.
    report_.phi_offset = metric_->barrier(report_.x_star);
  }

  Rng rng(cfg_.seed);
  const Vector start = phase1_start(*metric_, report_.x_star, report_.sigma0_sq,
                                    report_.nu, 0.0, rng, &report_.phase1_attempts);
  WalkConfig wc;
  wc.r = cfg_.r0;
  wc.laziness = cfg_.laziness;
  walk_ = std::make_unique<DikinWalk>(metric_, annealed_target(2, report_.sigma0_sq),
                                      start, wc, rng());
  report_.trace.push_back({1, report_.sigma0_sq, 0.0, 0, 0.0});

  // Phases 2-3.
  const auto schedule = sigma_schedule(report_.nu, d, report_.sigma0_sq);
  report_.skipped_phase2 =
      schedule.empty() || schedule.front().phase != 2;
  for (const auto& e : schedule) {
    if (e.phase == 2) {
      ++report_.phase2_updates;
    } else {
      ++report_.phase3_updates;
    }
    const int form = schedule_phase(e.sigma2, report_.nu, d) == 2 ? 2 : 3;
    walk_phase(form, e.sigma2, report_.inner_budget);
  }

  // Phase 4 burn-in on the target itself.
  report_.phase4_burn = static_cast<long>(
      std::ceil(cfg_.c_inner * static_cast<double>(d) * std::log(1.0 / cfg_.eps)));
  walk_phase(4, kInf, report_.phase4_burn);
  walk_->reset_stats();
  prepared_ = true;
}

std::vector<Vector> GaussianCooling::draw(long n) {
  prepare();
  std::vector<Vector> out;
  out.reserve(static_cast<size_t>(std::max(0L, n)));
  const long thin = std::max(1L, cfg_.thin);
  for (long i = 0; i < n; ++i) {
    walk_->run(thin);
    out.push_back(walk_->x());
  }
  report_.final_stats = walk_->stats();
  return out;
}

std::vector<Vector> GaussianCooling::sample(long n) {
  auto ys = draw(n);
  for (auto& y : ys) y = project_sample(red_, y);
  return ys;
}

std::vector<Vector> gcdw_sample(const ProblemSpec& spec, long n,
                                const CoolingConfig& cfg,
                                const BuildOptions& build,
                                CoolingReport* report) {
  ReducedProblem red = reduce(spec);
  CompositePtr g = build_metric(red, build);
  GaussianCooling gc(std::move(red), std::move(g), cfg);
  auto out = gc.sample(n);
  if (report) *report = gc.report();
  return out;
}

}  // namespace dikin
