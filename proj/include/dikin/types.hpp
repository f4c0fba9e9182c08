#pragma once

#include <Eigen/Dense>

#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace dikin {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Error hierarchy. Every failure the library reports derives from Error so
// callers (and the CLI) can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define DIKIN_DEFINE_ERROR(Name) \
  class Name : public Error {    \
   public:                       \
    using Error::Error;          \
  }

DIKIN_DEFINE_ERROR(NotInterior);
DIKIN_DEFINE_ERROR(FactorizationError);
DIKIN_DEFINE_ERROR(DimensionError);
DIKIN_DEFINE_ERROR(ShapeError);
DIKIN_DEFINE_ERROR(UnsupportedTerm);
DIKIN_DEFINE_ERROR(MissingParameter);
DIKIN_DEFINE_ERROR(InvalidScale);
DIKIN_DEFINE_ERROR(InfeasibleBarrier);
DIKIN_DEFINE_ERROR(SingularMetric);
DIKIN_DEFINE_ERROR(NeedFeasiblePoint);
DIKIN_DEFINE_ERROR(SamplingError);
DIKIN_DEFINE_ERROR(ParseError);
DIKIN_DEFINE_ERROR(OracleInfeasible);
DIKIN_DEFINE_ERROR(StatisticsError);

#undef DIKIN_DEFINE_ERROR

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Dense symmetric positive-definite matrix with a lazily computed Cholesky
/// factor and log-determinant.
class SymPD {
 public:
  SymPD() = default;
  explicit SymPD(Matrix m);

  const Matrix& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }

  /// Cholesky factor; throws FactorizationError when the matrix is not PD.
  const Eigen::LLT<Matrix>& llt() const;
  bool is_pd() const;
  double log_det() const;

  Vector solve(const Vector& v) const;
  Matrix inverse() const;
  double quad(const Vector& v) const { return v.dot(m_ * v); }

 private:
  Matrix m_;
  mutable std::optional<Eigen::LLT<Matrix>> llt_;
  mutable std::optional<double> log_det_;
};

inline void require_dim(const Vector& v, Index n, const char* what) {
  if (v.size() != n) {
    throw DimensionError(std::string(what) + ": expected dimension " +
                         std::to_string(n) + ", got " +
                         std::to_string(v.size()));
  }
}

}  // namespace dikin
