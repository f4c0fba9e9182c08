#pragma once

// Problem descriptions, the epigraph reduction to a linear-cost problem,
// and assembly of the composite metric for a reduced problem.

#include "dikin/calculus.hpp"
#include "dikin/linear.hpp"
#include "dikin/psd.hpp"
#include "dikin/structured.hpp"

#include <string>
#include <variant>
#include <vector>

namespace dikin {

/// A x >= b
struct LinearConstraint {
  Matrix A;
  Vector b;
};

/// l + p^T x + 1/2 x^T Q x <= 0
struct EllipsoidConstraint {
  Matrix Q;
  Vector p;
  double l = 0.0;
};

/// svec(X) occupies x[offset, offset + n(n+1)/2) and X is PSD.
struct PsdConstraint {
  Index n = 0;
  Index offset = 0;
};

using ConstraintTerm =
    std::variant<LinearConstraint, EllipsoidConstraint, PsdConstraint>;

/// c^T x
struct LinearPotential {
  Vector c;
};
/// 1/2 (x-mu)^T S (x-mu)
struct QuadraticPotential {
  Matrix sigma;
  Vector mu;
};
/// sqrt((x-mu)^T S (x-mu))
struct NormPotential {
  Matrix sigma;
  Vector mu;
};
/// sum x_i log x_i
struct EntropyPotential {};
/// sum |x_i|^p
struct PowerPotential {
  double p = 2.0;
};
/// -sum log x_i
struct LogPotential {};
/// sum exp(x_i)
struct ExpPotential {};
/// -log det X on a PSD block
struct LogDetPotential {
  Index n = 0;
  Index offset = 0;
};

using PotentialTerm =
    std::variant<LinearPotential, QuadraticPotential, NormPotential,
                 EntropyPotential, PowerPotential, LogPotential, ExpPotential,
                 LogDetPotential>;

const char* kind_name(const ConstraintTerm& c);
const char* kind_name(const PotentialTerm& p);

struct ProblemSpec {
  Index dim = 0;
  std::vector<ConstraintTerm> constraints;
  std::vector<PotentialTerm> potentials;

  /// Shape checks; throws DimensionError / ShapeError.
  void validate() const;
  /// sum_i f_i(x); +inf outside the potentials' domains.
  double potential(const Vector& x) const;
  /// x strictly inside every constraint.
  bool feasible(const Vector& x) const;
};

double potential_value(const PotentialTerm& p, const Vector& x);

/// One barrier of the reduced problem with the ambient coordinates it reads.
/// Constraints read x coordinates; epigraphs read x followed by their t's.
struct ReducedBarrier {
  std::variant<LinearConstraint, EllipsoidConstraint, PsdConstraint,
               QuadraticPotential, NormPotential, EntropyPotential,
               PowerPotential, LogPotential, ExpPotential>
      term;
  std::vector<Index> coords;
};

struct ReducedProblem {
  Index x_dim = 0;
  Index dim = 0;
  /// Linear cost: LinearPotential terms on x, ones on epigraph coordinates.
  Vector c;
  std::vector<ReducedBarrier> barriers;

  Index epigraph_count() const { return dim - x_dim; }
  double cost(const Vector& y) const { return c.dot(y); }
};

ReducedProblem reduce(const ProblemSpec& spec);

/// First x_dim coordinates.
Vector project_sample(const ReducedProblem& red, const Vector& y);

/// (x, t) with every epigraph variable set to its potential value + margin.
Vector augment(const ReducedProblem& red, const Vector& x,
               double margin = 1.0);

enum class LinearMetricKind { log, vaidya, lewis };

const char* to_string(LinearMetricKind k);
LinearMetricKind parse_linear_kind(const std::string& s);

struct BuildOptions {
  LinearMetricKind linear = LinearMetricKind::log;
  VaidyaOptions vaidya;
  LewisOptions lewis;
  bool psd_fast_path = true;
};

/// The composite metric k * sum_i P_i^T g_i P_i of a reduced problem with
/// per-part scalings. A PSD cone cut by linear constraints on the same
/// coordinates becomes a single truncated-PSD part.
CompositePtr build_metric(const ReducedProblem& red,
                          const BuildOptions& opts = {});

}  // namespace dikin
