#pragma once

// Local metrics for polytopes {x : Ax >= b}: the logarithmic barrier, the
// Vaidya metric and the Lewis-weight metric, together with leverage scores,
// Lewis weights and their directional derivatives.

#include "dikin/metric.hpp"

namespace dikin {

struct SlackState {
  Vector s;   // Ax - b, strictly positive
  Matrix Ax;  // S^{-1} A
};

SlackState slack_state(const Matrix& A, const Vector& b, const Vector& x);

SymPD log_metric(const Matrix& A, const Vector& b, const Vector& x);
Matrix d_log_metric(const Matrix& A, const Vector& b, const Vector& x,
                    const Vector& h);
Matrix d2_log_metric(const Matrix& A, const Vector& b, const Vector& x,
                     const Vector& h);

struct LeverageScores {
  Vector sigma;
};

/// Orthogonal projection onto the column space of M, via a thin SVD with
/// relative rank threshold 1e-12.
Matrix projection(const Matrix& M);
Index numerical_rank(const Matrix& M);
LeverageScores leverage_scores(const Matrix& M);

/// Directional derivative of sigma(A_x) along h.
Vector d_leverage(const Matrix& A, const Vector& b, const Vector& x,
                  const Vector& h);

struct VaidyaOptions {
  double scale = 22.0;
  // The d in sqrt(m/d)(Sigma + (d/m) I). Zero means the column count.
  double dim_param = 0.0;
  // Reject m < d and rank-deficient A. Off for constraint blocks that only
  // cover part of the space (truncated PSD cones).
  bool require_tall = true;
};

/// Row weights D_x of the Vaidya metric A_x^T D_x A_x.
Vector vaidya_weights(const Matrix& A, const Vector& b, const Vector& x,
                      const VaidyaOptions& opts = {});
SymPD vaidya_metric(const Matrix& A, const Vector& b, const Vector& x,
                    const VaidyaOptions& opts = {});
Matrix d_vaidya_metric(const Matrix& A, const Vector& b, const Vector& x,
                       const Vector& h, const VaidyaOptions& opts = {});

struct LewisWeights {
  Vector w;
  double p = 2.0;
  double residual = 0.0;
  int iterations = 0;
};

/// 2 * ceil(log2 m), at least 2.
double default_lewis_p(Index m);

/// Solves w = sigma(W^{1/2-1/p} M) by damped fixed-point iteration.
/// `damping` <= 0 selects min(1, 2/p).
LewisWeights lewis_weights(const Matrix& M, double p, double tol = 1e-10,
                           int max_iter = 20000, double damping = 0.0);

/// || w - sigma(W^{1/2-1/p} M) ||_inf
double lewis_residual(const Matrix& M, const Vector& w, double p);

struct LewisOptions {
  double p = 0.0;  // zero selects default_lewis_p(m)
  double c1 = 1.0;
  double c2 = 0.0;
  bool sqrt_d = true;
  // Overrides c1 (log m)^c2 sqrt(d) when positive.
  double scale = 0.0;
  double tol = 1e-12;
  int max_iter = 20000;
  bool require_tall = true;
};

double lewis_scale(const LewisOptions& opts, Index m, Index d);
double lewis_p(const LewisOptions& opts, Index m);

SymPD lewis_metric(const Matrix& A, const Vector& b, const Vector& x,
                   const LewisOptions& opts = {});

/// Directional derivative of the l_p Lewis weights of A_x along h, using
/// W' = -Diag(W^{1/2} N W^{1/2} s_h), N = 2 L (I - c_p L)^{-1}.
Vector d_lewis_weights(const Matrix& A, const Vector& b, const Vector& x,
                       double p, const Vector& h);
Matrix d_lewis_metric(const Matrix& A, const Vector& b, const Vector& x,
                      const Vector& h, const LewisOptions& opts = {});

/// Sum of log singular values over the numerical rank, i.e.
/// 1/2 log pdet(M^T M).
double half_log_pdet(const Matrix& M);

/// Common base for metrics of the form A_x^T D_x A_x.
class LinearMetric : public Metric {
 public:
  LinearMetric(Matrix A, Vector b);
  Index dim() const override { return A_.cols(); }
  bool contains(const Vector& x) const override;
  const Matrix& A() const { return A_; }
  const Vector& b() const { return b_; }
  /// Diagonal D_x with g(x) = A_x^T D_x A_x.
  virtual Vector row_weights(const Vector& x) const = 0;
  Matrix metric(const Vector& x) const override;

 protected:
  Matrix A_;
  Vector b_;
};

class LogBarrier final : public LinearMetric {
 public:
  LogBarrier(Matrix A, Vector b, double scale = 1.0);
  double barrier(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  Vector row_weights(const Vector& x) const override;
  Matrix dmetric(const Vector& x, const Vector& h) const override;
  std::optional<Matrix> d2metric(const Vector& x,
                                 const Vector& h) const override;

 private:
  double scale_;
};

class VaidyaMetric final : public LinearMetric {
 public:
  VaidyaMetric(Matrix A, Vector b, VaidyaOptions opts = {});
  double barrier(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  Vector row_weights(const Vector& x) const override;
  Matrix dmetric(const Vector& x, const Vector& h) const override;

 private:
  VaidyaOptions opts_;
};

class LewisMetric final : public LinearMetric {
 public:
  LewisMetric(Matrix A, Vector b, LewisOptions opts = {});
  double barrier(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  Vector row_weights(const Vector& x) const override;
  Matrix dmetric(const Vector& x, const Vector& h) const override;
  double p() const { return p_; }

 private:
  LewisOptions opts_;
  double p_;
  double scale_;
};

}  // namespace dikin
