#pragma once

// Closed-form barriers for quadratic regions, Gaussian epigraphs, second
// order cones and the per-coordinate entropy/power/log/exp epigraphs.

#include "dikin/metric.hpp"

namespace dikin {

/// Derivatives of u = log q along a fixed direction h, given the derivatives
/// of q. Callers fill what they have; zero-sized T/th/F mean "vanishes".
struct LogTermInput {
  double q = 1.0;
  Vector G;   // grad q
  Matrix Hq;  // hess q
  Matrix T;   // D^3 q[h, ., .]
  Vector th;  // D^3 q[h, h, .]
  Matrix F;   // D^4 q[h, h, ., .]
};

/// hess(log q)
Matrix log_hessian(const LogTermInput& in);
/// D hess(log q)[h]
Matrix d_log_hessian(const LogTermInput& in, const Vector& h);
/// D^2 hess(log q)[h, h]
Matrix d2_log_hessian(const LogTermInput& in, const Vector& h);

/// phi(y) = -scale * log q(y) with q(y) = c0 + c1^T y + 1/2 y^T Q y, and
/// optionally a coordinate that must stay positive (the cone's t > 0).
/// g = hess phi exactly.
class QuadraticLogBarrier final : public Metric {
 public:
  QuadraticLogBarrier(double c0, Vector c1, Matrix Q, double scale,
                      Index positive_coord = -1);

  Index dim() const override { return c1_.size(); }
  bool contains(const Vector& y) const override;
  double q(const Vector& y) const;
  double barrier(const Vector& y) const override;
  Vector gradient(const Vector& y) const override;
  Matrix metric(const Vector& y) const override;
  Matrix dmetric(const Vector& y, const Vector& h) const override;
  std::optional<Matrix> d2metric(const Vector& y,
                                 const Vector& h) const override;

  double scale() const { return scale_; }
  MetricParams& mutable_params() { return params_; }

 private:
  LogTermInput term(const Vector& y) const;

  double c0_;
  Vector c1_;
  Matrix Q_;
  double scale_;
  Index positive_;
};

using QuadraticPtr = std::shared_ptr<QuadraticLogBarrier>;

/// {x : l + p^T x + 1/2 x^T Q x < 0}, phi = -log(-l - p^T x - 1/2 x^T Q x).
/// `scale` <= 0 selects the dimension d.
QuadraticPtr ellipsoid_barrier(const Matrix& Q, const Vector& p, double l,
                               double scale = 0.0);

/// {(x, t) : 1/2 (x-mu)^T S (x-mu) < t}, phi = -log(t - 1/2 |x-mu|_S^2).
/// `scale` <= 0 selects d + 1, the dimension of the (x, t) domain.
QuadraticPtr gaussian_epigraph_barrier(const Matrix& S, const Vector& mu,
                                       double scale = 0.0);

/// {(x, t) : |x-mu|_S < t}, phi = -log(t^2 - |x-mu|_S^2).
/// `scale` <= 0 selects d + 1.
QuadraticPtr soc_barrier(const Matrix& S, const Vector& mu,
                         double scale = 0.0);

enum class EpigraphKind { entropy, power, log, exp };

const char* to_string(EpigraphKind k);

/// Direct product over i = 1..d of two-dimensional epigraph barriers in
/// the layout (x_1..x_d, t_1..t_d):
///   entropy  -log(t - x log x) - 36 log x
///   power    -log(t^{2/p} - x^2) - 72 log t
///   log      -log(t + log x) - 36 log x
///   exp      -log(log t - x) - 36 log t
/// `scale` <= 0 selects max(2, d).
class SeparableEpigraphBarrier final : public Metric {
 public:
  SeparableEpigraphBarrier(EpigraphKind kind, Index d, double power_p = 2.0,
                           double scale = 0.0);

  Index dim() const override { return 2 * d_; }
  bool contains(const Vector& y) const override;
  double barrier(const Vector& y) const override;
  Vector gradient(const Vector& y) const override;
  Matrix metric(const Vector& y) const override;
  Matrix dmetric(const Vector& y, const Vector& h) const override;
  std::optional<Matrix> d2metric(const Vector& y,
                                 const Vector& h) const override;

  /// Unscaled 2x2 Hessian block of coordinate i.
  Matrix block(const Vector& y, Index i) const;

  EpigraphKind kind() const { return kind_; }
  Index coords() const { return d_; }
  double scale() const { return scale_; }
  /// The potential f(x) = sum f_1(x_i) this epigraph encodes.
  double potential(const Vector& x) const;
  /// f_1 on one coordinate; +inf outside its domain.
  double potential1(double x) const;

 private:
  struct Coord;
  Coord coord(double x, double t) const;
  // Applies fn(i, coordinate data) and accumulates into a 2d x 2d matrix.
  template <class Fn>
  Matrix assemble(const Vector& y, Fn&& fn) const;

  EpigraphKind kind_;
  Index d_;
  double p_;
  double scale_;
};

/// Self-concordance parameter of one two-dimensional epigraph block.
double epigraph_block_nu(EpigraphKind kind);

}  // namespace dikin
