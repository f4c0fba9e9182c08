#include "dikin/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace dikin {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Index svec_dim(Index n) { return n * (n + 1) / 2; }

std::vector<Index> range(Index begin, Index count) {
  std::vector<Index> v(static_cast<size_t>(count));
  std::iota(v.begin(), v.end(), begin);
  return v;
}

void check_square(const Matrix& M, Index d, const char* what) {
  if (M.rows() != d || M.cols() != d) {
    throw DimensionError(std::string(what) + ": expected " + std::to_string(d) +
                         "x" + std::to_string(d) + " matrix");
  }
}

double quad_form(const Matrix& S, const Vector& v) { return v.dot(S * v); }

}  // namespace

const char* kind_name(const ConstraintTerm& c) {
  return std::visit(overloaded{
                        [](const LinearConstraint&) { return "linear"; },
                        [](const EllipsoidConstraint&) { return "ellipsoid"; },
                        [](const PsdConstraint&) { return "psd"; },
                    },
                    c);
}

const char* kind_name(const PotentialTerm& p) {
  return std::visit(overloaded{
                        [](const LinearPotential&) { return "linear"; },
                        [](const QuadraticPotential&) { return "quadratic"; },
                        [](const NormPotential&) { return "norm"; },
                        [](const EntropyPotential&) { return "entropy"; },
                        [](const PowerPotential&) { return "power"; },
                        [](const LogPotential&) { return "log"; },
                        [](const ExpPotential&) { return "exp"; },
                        [](const LogDetPotential&) { return "logdet"; },
                    },
                    p);
}

void ProblemSpec::validate() const {
  if (dim < 1) throw DimensionError("problem: dimension must be >= 1");
  for (const auto& c : constraints) {
    std::visit(
        overloaded{
            [&](const LinearConstraint& l) {
              if (l.A.cols() != dim || l.A.rows() != l.b.size()) {
                throw DimensionError("linear constraint: A must be m x d, b length m");
              }
              if (l.A.rows() == 0) throw ShapeError("linear constraint: no rows");
              for (Index i = 0; i < l.A.rows(); ++i) {
                if (l.A.row(i).cwiseAbs().maxCoeff() == 0.0) {
                  throw ShapeError("linear constraint: row " + std::to_string(i) +
                                   " of A is zero");
                }
              }
            },
            [&](const EllipsoidConstraint& e) {
              check_square(e.Q, dim, "ellipsoid constraint Q");
              require_dim(e.p, dim, "ellipsoid constraint p");
            },
            [&](const PsdConstraint& p) {
              if (p.n < 1 || p.offset < 0 || p.offset + svec_dim(p.n) > dim) {
                throw DimensionError("psd constraint: block outside the ambient vector");
              }
            },
        },
        c);
  }
  for (const auto& p : potentials) {
    std::visit(overloaded{
                   [&](const LinearPotential& l) {
                     require_dim(l.c, dim, "linear potential c");
                   },
                   [&](const QuadraticPotential& q) {
                     check_square(q.sigma, dim, "quadratic potential sigma");
                     require_dim(q.mu, dim, "quadratic potential mu");
                   },
                   [&](const NormPotential& q) {
                     check_square(q.sigma, dim, "norm potential sigma");
                     require_dim(q.mu, dim, "norm potential mu");
                   },
                   [&](const PowerPotential& q) {
                     if (!(q.p >= 1.0)) throw ShapeError("power potential: p must be >= 1");
                   },
                   [&](const LogDetPotential& q) {
                     if (q.n < 1 || q.offset < 0 || q.offset + svec_dim(q.n) > dim) {
                       throw DimensionError("logdet potential: block outside the ambient vector");
                     }
                   },
                   [](const auto&) {},
               },
               p);
  }
}

double potential_value(const PotentialTerm& term, const Vector& x) {
  return std::visit(
      overloaded{
          [&](const LinearPotential& l) { return l.c.dot(x); },
          [&](const QuadraticPotential& q) {
            return 0.5 * quad_form(q.sigma, x - q.mu);
          },
          [&](const NormPotential& q) {
            return std::sqrt(std::max(0.0, quad_form(q.sigma, x - q.mu)));
          },
          [&](const EntropyPotential&) {
            double s = 0.0;
            for (Index i = 0; i < x.size(); ++i) {
              if (x(i) < 0.0) return kInf;
              if (x(i) > 0.0) s += x(i) * std::log(x(i));
            }
            return s;
          },
          [&](const PowerPotential& p) {
            return x.array().abs().pow(p.p).sum();
          },
          [&](const LogPotential&) {
            double s = 0.0;
            for (Index i = 0; i < x.size(); ++i) {
              if (!(x(i) > 0.0)) return kInf;
              s -= std::log(x(i));
            }
            return s;
          },
          [&](const ExpPotential&) { return x.array().exp().sum(); },
          [&](const LogDetPotential& l) {
            const SvecCodec codec(l.n);
            return logdet_barrier_value(
                codec.unsvec(x.segment(l.offset, svec_dim(l.n))));
          },
      },
      term);
}

double ProblemSpec::potential(const Vector& x) const {
  require_dim(x, dim, "problem potential");
  double s = 0.0;
  for (const auto& p : potentials) s += potential_value(p, x);
  return s;
}

bool ProblemSpec::feasible(const Vector& x) const {
  if (x.size() != dim || !x.allFinite()) return false;
  for (const auto& c : constraints) {
    const bool ok = std::visit(
        overloaded{
            [&](const LinearConstraint& l) {
              return ((l.A * x - l.b).array() > 0.0).all();
            },
            [&](const EllipsoidConstraint& e) {
              return e.l + e.p.dot(x) + 0.5 * quad_form(e.Q, x) < 0.0;
            },
            [&](const PsdConstraint& p) {
              const SvecCodec codec(p.n);
              return std::isfinite(logdet_barrier_value(
                  codec.unsvec(x.segment(p.offset, svec_dim(p.n)))));
            },
        },
        c);
    if (!ok) return false;
  }
  return true;
}

// ---------------------------------------------------------------- reduce

ReducedProblem reduce(const ProblemSpec& spec) {
  spec.validate();
  const Index d = spec.dim;
  ReducedProblem red;
  red.x_dim = d;

  // Epigraph variables first, so the final dimension is known.
  Index next = d;
  std::vector<ReducedBarrier> epis;
  Vector c_x = Vector::Zero(d);
  const auto xs = range(0, d);
  for (const auto& p : spec.potentials) {
    std::visit(
        overloaded{
            [&](const LinearPotential& l) { c_x += l.c; },
            [&](const QuadraticPotential& q) {
              auto coords = xs;
              coords.push_back(next++);
              epis.push_back({q, coords});
            },
            [&](const NormPotential& q) {
              auto coords = xs;
              coords.push_back(next++);
              epis.push_back({q, coords});
            },
            [&](const LogDetPotential&) {
              throw UnsupportedTerm(
                  "reduce: logdet potentials have no epigraph barrier here");
            },
            [&](const auto& sep) {
              // Separable kinds: one epigraph variable per coordinate.
              auto coords = xs;
              for (Index i = 0; i < d; ++i) coords.push_back(next++);
              epis.push_back({sep, coords});
            },
        },
        p);
  }
  red.dim = next;
  red.c = Vector::Zero(red.dim);
  red.c.head(d) = c_x;
  red.c.tail(red.dim - d).setOnes();

  for (const auto& c : spec.constraints) {
    std::visit(
        overloaded{
            [&](const PsdConstraint& p) {
              red.barriers.push_back({p, range(p.offset, svec_dim(p.n))});
            },
            [&](const auto& other) { red.barriers.push_back({other, xs}); },
        },
        c);
  }
  for (auto& e : epis) red.barriers.push_back(std::move(e));
  return red;
}

Vector project_sample(const ReducedProblem& red, const Vector& y) {
  require_dim(y, red.dim, "project_sample");
  return y.head(red.x_dim);
}

Vector augment(const ReducedProblem& red, const Vector& x, double margin) {
  require_dim(x, red.x_dim, "augment");
  Vector y = Vector::Zero(red.dim);
  y.head(red.x_dim) = x;
  for (const auto& b : red.barriers) {
    std::visit(
        overloaded{
            [&](const QuadraticPotential& q) {
              y(b.coords.back()) = potential_value(q, x) + margin;
            },
            [&](const NormPotential& q) {
              y(b.coords.back()) = potential_value(q, x) + margin;
            },
            [&](const LinearConstraint&) {},
            [&](const EllipsoidConstraint&) {},
            [&](const PsdConstraint&) {},
            [&](const auto& sep) {
              const Index d = red.x_dim;
              for (Index i = 0; i < d; ++i) {
                Vector xi(1);
                xi(0) = x(i);
                double f = potential_value(sep, xi);
                // exp/power epigraphs need t > 0 as well.
                f = std::max(f, 0.0);
                y(b.coords[static_cast<size_t>(d + i)]) = f + margin;
              }
            },
        },
        b.term);
  }
  return y;
}

// ------------------------------------------------------------- assembly

const char* to_string(LinearMetricKind k) {
  switch (k) {
    case LinearMetricKind::log:
      return "log";
    case LinearMetricKind::vaidya:
      return "vaidya";
    case LinearMetricKind::lewis:
      return "lewis";
  }
  return "?";
}

LinearMetricKind parse_linear_kind(const std::string& s) {
  if (s == "log") return LinearMetricKind::log;
  if (s == "vaidya") return LinearMetricKind::vaidya;
  if (s == "lewis") return LinearMetricKind::lewis;
  throw ParseError("unknown linear metric '" + s + "' (log, vaidya, lewis)");
}

namespace {

MetricPtr linear_part(const LinearConstraint& l, const BuildOptions& opts) {
  switch (opts.linear) {
    case LinearMetricKind::log:
      return std::make_shared<LogBarrier>(l.A, l.b);
    case LinearMetricKind::vaidya:
      return std::make_shared<VaidyaMetric>(l.A, l.b, opts.vaidya);
    case LinearMetricKind::lewis:
      return std::make_shared<LewisMetric>(l.A, l.b, opts.lewis);
  }
  throw UnsupportedTerm("unknown linear metric");
}

// PSD cone over every coordinate plus linear constraints only.
bool is_truncated_psd(const ReducedProblem& red) {
  if (red.dim != red.x_dim) return false;
  int psd = 0;
  for (const auto& b : red.barriers) {
    if (const auto* p = std::get_if<PsdConstraint>(&b.term)) {
      if (p->offset != 0 || svec_dim(p->n) != red.dim) return false;
      ++psd;
    } else if (!std::holds_alternative<LinearConstraint>(b.term)) {
      return false;
    }
  }
  return psd == 1;
}

CompositePtr build_truncated_psd(const ReducedProblem& red,
                                 const BuildOptions& opts) {
  Index n = 0;
  Index m = 0;
  for (const auto& b : red.barriers) {
    if (const auto* p = std::get_if<PsdConstraint>(&b.term)) n = p->n;
    if (const auto* l = std::get_if<LinearConstraint>(&b.term)) m += l->A.rows();
  }
  Matrix A(m, red.dim);
  Vector bb(m);
  Index row = 0;
  for (const auto& b : red.barriers) {
    if (const auto* l = std::get_if<LinearConstraint>(&b.term)) {
      A.middleRows(row, l->A.rows()) = l->A;
      bb.segment(row, l->A.rows()) = l->b;
      row += l->A.rows();
    }
  }
  TruncatedPsdOptions to;
  to.fast_path = opts.psd_fast_path;
  switch (opts.linear) {
    case LinearMetricKind::log:
      to.kind = PsdLinearKind::log;
      break;
    case LinearMetricKind::vaidya:
      to.kind = PsdLinearKind::vaidya;
      break;
    case LinearMetricKind::lewis:
      to.kind = PsdLinearKind::lewis;
      to.c1 = opts.lewis.c1;
      to.c2 = opts.lewis.c2;
      to.lewis_p = opts.lewis.p;
      break;
  }
  MetricPtr g = std::make_shared<TruncatedPsdMetric>(n, A, bb, to);
  return std::make_shared<CompositeMetric>(std::vector<MetricPtr>{g}, 1.0);
}

}  // namespace

CompositePtr build_metric(const ReducedProblem& red, const BuildOptions& opts) {
  if (red.barriers.empty()) {
    throw SingularMetric("problem has no constraints or epigraphs; the body is all of R^d");
  }
  if (is_truncated_psd(red)) return build_truncated_psd(red, opts);

  const Index d = red.x_dim;
  std::vector<MetricPtr> parts;
  for (const auto& b : red.barriers) {
    MetricPtr g = std::visit(
        overloaded{
            [&](const LinearConstraint& l) { return linear_part(l, opts); },
            [&](const EllipsoidConstraint& e) -> MetricPtr {
              return ellipsoid_barrier(e.Q, e.p, e.l);
            },
            [&](const PsdConstraint& p) -> MetricPtr {
              return std::make_shared<PsdBarrier>(
                  p.n, static_cast<double>(svec_dim(p.n)));
            },
            [&](const QuadraticPotential& q) -> MetricPtr {
              return gaussian_epigraph_barrier(q.sigma, q.mu);
            },
            [&](const NormPotential& q) -> MetricPtr {
              return soc_barrier(q.sigma, q.mu);
            },
            [&](const EntropyPotential&) -> MetricPtr {
              return std::make_shared<SeparableEpigraphBarrier>(
                  EpigraphKind::entropy, d);
            },
            [&](const PowerPotential& p) -> MetricPtr {
              return std::make_shared<SeparableEpigraphBarrier>(
                  EpigraphKind::power, d, p.p);
            },
            [&](const LogPotential&) -> MetricPtr {
              return std::make_shared<SeparableEpigraphBarrier>(
                  EpigraphKind::log, d);
            },
            [&](const ExpPotential&) -> MetricPtr {
              return std::make_shared<SeparableEpigraphBarrier>(
                  EpigraphKind::exp, d);
            },
        },
        b.term);
    parts.push_back(embed(g, b.coords, red.dim));
  }
  return sum(std::move(parts));
}

}  // namespace dikin
