#include "dikin/structured.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace dikin {

Matrix log_hessian(const LogTermInput& in) {
  const double q = in.q;
  return in.Hq / q - in.G * in.G.transpose() / (q * q);
}

Matrix d_log_hessian(const LogTermInput& in, const Vector& h) {
  const double q = in.q, q2 = q * q, q3 = q2 * q;
  const double a = in.G.dot(h);
  const Vector Hh = in.Hq * h;
  const Matrix GG = in.G * in.G.transpose();
  const Matrix cross = Hh * in.G.transpose() + in.G * Hh.transpose();
  Matrix out = -a * in.Hq / q2 - cross / q2 + 2.0 * a * GG / q3;
  if (in.T.size() > 0) out += in.T / q;
  return out;
}

Matrix d2_log_hessian(const LogTermInput& in, const Vector& h) {
  const double q = in.q, q2 = q * q, q3 = q2 * q, q4 = q3 * q;
  const double a = in.G.dot(h);
  const double b = h.dot(in.Hq * h);
  const Vector Hh = in.Hq * h;
  const Matrix GG = in.G * in.G.transpose();
  const Matrix cross = Hh * in.G.transpose() + in.G * Hh.transpose();
  Matrix out = -b * in.Hq / q2 + 2.0 * a * a * in.Hq / q3 -
               2.0 * Hh * Hh.transpose() / q2 + 4.0 * a * cross / q3 +
               2.0 * b * GG / q3 - 6.0 * a * a * GG / q4;
  if (in.F.size() > 0) out += in.F / q;
  if (in.T.size() > 0) out -= 2.0 * a * in.T / q2;
  if (in.th.size() > 0) {
    out -= (in.th * in.G.transpose() + in.G * in.th.transpose()) / q2;
  }
  return out;
}

// ------------------------------------------------------- quadratic family

QuadraticLogBarrier::QuadraticLogBarrier(double c0, Vector c1, Matrix Q,
                                         double scale, Index positive_coord)
    : c0_(c0),
      c1_(std::move(c1)),
      Q_(std::move(Q)),
      scale_(scale),
      positive_(positive_coord) {
  if (Q_.rows() != c1_.size() || Q_.cols() != c1_.size()) {
    throw DimensionError("quadratic barrier: Q/c1 mismatch");
  }
  if (!(scale_ > 0.0)) throw InvalidScale("quadratic barrier: scale <= 0");
  Q_ = 0.5 * (Q_ + Q_.transpose());
  params_.applied_scaling = scale_;
  params_.hessian_exact = true;
}

double QuadraticLogBarrier::q(const Vector& y) const {
  return c0_ + c1_.dot(y) + 0.5 * y.dot(Q_ * y);
}

bool QuadraticLogBarrier::contains(const Vector& y) const {
  if (y.size() != dim() || !y.allFinite()) return false;
  if (positive_ >= 0 && !(y(positive_) > 0.0)) return false;
  return q(y) > 0.0;
}

double QuadraticLogBarrier::barrier(const Vector& y) const {
  if (!contains(y)) return kInf;
  return -scale_ * std::log(q(y));
}

LogTermInput QuadraticLogBarrier::term(const Vector& y) const {
  if (!contains(y)) throw NotInterior("quadratic barrier: point outside domain");
  LogTermInput in;
  in.q = q(y);
  in.G = c1_ + Q_ * y;
  in.Hq = Q_;
  return in;
}

Vector QuadraticLogBarrier::gradient(const Vector& y) const {
  const auto in = term(y);
  return -scale_ * in.G / in.q;
}

Matrix QuadraticLogBarrier::metric(const Vector& y) const {
  return -scale_ * log_hessian(term(y));
}

Matrix QuadraticLogBarrier::dmetric(const Vector& y, const Vector& h) const {
  require_dim(h, dim(), "quadratic barrier dmetric");
  return -scale_ * d_log_hessian(term(y), h);
}

std::optional<Matrix> QuadraticLogBarrier::d2metric(const Vector& y,
                                                    const Vector& h) const {
  require_dim(h, dim(), "quadratic barrier d2metric");
  return Matrix(-scale_ * d2_log_hessian(term(y), h));
}

namespace {

void set_structured_params(MetricParams& p, const std::string& name,
                           double nu0, double scale) {
  p.name = name;
  p.applied_scaling = scale;
  p.nu = scale * nu0;
  p.nu_bar = scale * nu_bar_from_nu(nu0);
  p.flags = {Certification::holds_after_scaling, Certification::holds,
             Certification::holds_after_scaling};
}

SymPD checked_pd(const Matrix& S, const char* who) {
  SymPD s(S);
  if (!s.is_pd()) {
    throw FactorizationError(std::string(who) + ": matrix is not PD");
  }
  return s;
}

}  // namespace

QuadraticPtr ellipsoid_barrier(const Matrix& Q, const Vector& p, double l,
                               double scale) {
  const Index d = p.size();
  if (Q.rows() != d || Q.cols() != d) {
    throw DimensionError("ellipsoid_barrier: Q/p mismatch");
  }
  const Matrix Qs = 0.5 * (Q + Q.transpose());
  const double qmax = Qs.cwiseAbs().maxCoeff();
  if (qmax == 0.0) throw ShapeError("ellipsoid_barrier: Q is zero");
  Eigen::SelfAdjointEigenSolver<Matrix> es(Qs);
  if (es.eigenvalues().minCoeff() < -1e-12 * qmax) {
    throw ShapeError("ellipsoid_barrier: Q is not PSD");
  }
  // sup of -l - p^T x - 1/2 x^T Q x: finite only if p lies in range(Q).
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(Qs);
  const Vector xs = -cod.solve(p);
  const bool p_in_range = (Qs * xs + p).norm() <= 1e-9 * (1.0 + p.norm());
  if (p_in_range) {
    const double best = -l - p.dot(xs) - 0.5 * xs.dot(Qs * xs);
    if (!(best > 0.0)) {
      throw InfeasibleBarrier("ellipsoid_barrier: constraint set has no interior");
    }
  }
  const double s = scale > 0.0 ? scale : static_cast<double>(d);
  auto b = std::make_shared<QuadraticLogBarrier>(-l, -p, -Qs, s);
  set_structured_params(b->mutable_params(), "ellipsoid", 1.0, s);
  b->mutable_params().d2_psd = true;
  return b;
}

QuadraticPtr gaussian_epigraph_barrier(const Matrix& S, const Vector& mu,
                                       double scale) {
  const Index d = mu.size();
  if (S.rows() != d || S.cols() != d) {
    throw DimensionError("gaussian_epigraph_barrier: S/mu mismatch");
  }
  const SymPD s = checked_pd(S, "gaussian_epigraph_barrier");
  const Matrix& Sm = s.matrix();
  // t - 1/2 (x-mu)^T S (x-mu)
  Vector c1(d + 1);
  c1.head(d) = Sm * mu;
  c1(d) = 1.0;
  Matrix Q = Matrix::Zero(d + 1, d + 1);
  Q.topLeftCorner(d, d) = -Sm;
  const double sc = scale > 0.0 ? scale : static_cast<double>(d + 1);
  auto b = std::make_shared<QuadraticLogBarrier>(-0.5 * mu.dot(Sm * mu), c1,
                                                 Q, sc);
  set_structured_params(b->mutable_params(), "gaussian", 1.0, sc);
  b->mutable_params().d2_psd = true;
  return b;
}

QuadraticPtr soc_barrier(const Matrix& S, const Vector& mu, double scale) {
  const Index d = mu.size();
  if (S.rows() != d || S.cols() != d) {
    throw DimensionError("soc_barrier: S/mu mismatch");
  }
  const SymPD s = checked_pd(S, "soc_barrier");
  const Matrix& Sm = s.matrix();
  // t^2 - (x-mu)^T S (x-mu)
  Vector c1 = Vector::Zero(d + 1);
  c1.head(d) = 2.0 * Sm * mu;
  Matrix Q = Matrix::Zero(d + 1, d + 1);
  Q.topLeftCorner(d, d) = -2.0 * Sm;
  Q(d, d) = 2.0;
  const double sc = scale > 0.0 ? scale : static_cast<double>(d + 1);
  auto b = std::make_shared<QuadraticLogBarrier>(-mu.dot(Sm * mu), c1, Q, sc,
                                                 d);
  set_structured_params(b->mutable_params(), "soc", 2.0, sc);
  return b;
}

// ------------------------------------------------- per-coordinate family

const char* to_string(EpigraphKind k) {
  switch (k) {
    case EpigraphKind::entropy:
      return "entropy";
    case EpigraphKind::power:
      return "power";
    case EpigraphKind::log:
      return "log-epigraph";
    case EpigraphKind::exp:
      return "exp-epigraph";
  }
  return "?";
}

double epigraph_block_nu(EpigraphKind kind) {
  // -log q contributes 1, the extra -c log term contributes c.
  switch (kind) {
    case EpigraphKind::power:
      return 73.0;
    default:
      return 37.0;
  }
}

struct SeparableEpigraphBarrier::Coord {
  double q = 0.0;
  double fx[5] = {0, 0, 0, 0, 0};  // fx[k] = k-th derivative of the x part
  double ft[5] = {0, 0, 0, 0, 0};
  double c = 0.0;  // weight of the -c log w term
  int w = 0;       // 0: w = x, 1: w = t
  double wv = 1.0;
};

SeparableEpigraphBarrier::SeparableEpigraphBarrier(EpigraphKind kind, Index d,
                                                   double power_p,
                                                   double scale)
    : kind_(kind), d_(d), p_(power_p) {
  if (d_ < 1) throw DimensionError("epigraph barrier: d must be >= 1");
  if (kind_ == EpigraphKind::power && !(p_ >= 1.0)) {
    throw InvalidScale("power barrier: exponent must be >= 1");
  }
  scale_ = scale > 0.0 ? scale : std::max(2.0, static_cast<double>(d_));
  const double nu0 = epigraph_block_nu(kind_);
  params_.name = to_string(kind_);
  params_.applied_scaling = scale_;
  params_.nu = scale_ * static_cast<double>(d_) * nu0;
  params_.nu_bar = scale_ * static_cast<double>(d_) * nu_bar_from_nu(nu0);
  params_.flags = {Certification::holds_after_scaling,
                   Certification::holds_after_scaling,
                   Certification::holds_after_scaling};
  params_.hessian_exact = true;
}

SeparableEpigraphBarrier::Coord SeparableEpigraphBarrier::coord(double x,
                                                                double t) const {
  Coord c;
  switch (kind_) {
    case EpigraphKind::entropy: {
      // q = t - x log x
      const double lx = std::log(x);
      c.fx[0] = -x * lx;
      c.fx[1] = -(lx + 1.0);
      c.fx[2] = -1.0 / x;
      c.fx[3] = 1.0 / (x * x);
      c.fx[4] = -2.0 / (x * x * x);
      c.ft[0] = t;
      c.ft[1] = 1.0;
      c.c = 36.0;
      c.w = 0;
      c.wv = x;
      break;
    }
    case EpigraphKind::power: {
      // q = t^a - x^2, a = 2/p
      const double a = 2.0 / p_;
      c.fx[0] = -x * x;
      c.fx[1] = -2.0 * x;
      c.fx[2] = -2.0;
      double coef = 1.0;
      for (int k = 0; k <= 4; ++k) {
        c.ft[k] = coef * std::pow(t, a - k);
        coef *= (a - k);
      }
      c.c = 72.0;
      c.w = 1;
      c.wv = t;
      break;
    }
    case EpigraphKind::log: {
      // q = t + log x
      c.fx[0] = std::log(x);
      c.fx[1] = 1.0 / x;
      c.fx[2] = -1.0 / (x * x);
      c.fx[3] = 2.0 / (x * x * x);
      c.fx[4] = -6.0 / (x * x * x * x);
      c.ft[0] = t;
      c.ft[1] = 1.0;
      c.c = 36.0;
      c.w = 0;
      c.wv = x;
      break;
    }
    case EpigraphKind::exp: {
      // q = log t - x
      c.fx[0] = -x;
      c.fx[1] = -1.0;
      c.ft[0] = std::log(t);
      c.ft[1] = 1.0 / t;
      c.ft[2] = -1.0 / (t * t);
      c.ft[3] = 2.0 / (t * t * t);
      c.ft[4] = -6.0 / (t * t * t * t);
      c.c = 36.0;
      c.w = 1;
      c.wv = t;
      break;
    }
  }
  c.q = c.fx[0] + c.ft[0];
  return c;
}

bool SeparableEpigraphBarrier::contains(const Vector& y) const {
  if (y.size() != dim() || !y.allFinite()) return false;
  for (Index i = 0; i < d_; ++i) {
    const double x = y(i), t = y(d_ + i);
    switch (kind_) {
      case EpigraphKind::entropy:
      case EpigraphKind::log:
        if (!(x > 0.0)) return false;
        break;
      case EpigraphKind::power:
      case EpigraphKind::exp:
        if (!(t > 0.0)) return false;
        break;
    }
    if (!(coord(x, t).q > 0.0)) return false;
  }
  return true;
}

double SeparableEpigraphBarrier::barrier(const Vector& y) const {
  if (!contains(y)) return kInf;
  double s = 0.0;
  for (Index i = 0; i < d_; ++i) {
    const auto c = coord(y(i), y(d_ + i));
    s += -std::log(c.q) - c.c * std::log(c.wv);
  }
  return scale_ * s;
}

Vector SeparableEpigraphBarrier::gradient(const Vector& y) const {
  if (!contains(y)) throw NotInterior("epigraph barrier: point outside domain");
  Vector g(dim());
  for (Index i = 0; i < d_; ++i) {
    const auto c = coord(y(i), y(d_ + i));
    g(i) = -c.fx[1] / c.q;
    g(d_ + i) = -c.ft[1] / c.q;
    g(c.w == 0 ? i : d_ + i) -= c.c / c.wv;
  }
  return scale_ * g;
}

template <class Fn>
Matrix SeparableEpigraphBarrier::assemble(const Vector& y, Fn&& fn) const {
  if (!contains(y)) throw NotInterior("epigraph barrier: point outside domain");
  Matrix out = Matrix::Zero(dim(), dim());
  for (Index i = 0; i < d_; ++i) {
    const Eigen::Matrix2d b = fn(i, coord(y(i), y(d_ + i)));
    const Index idx[2] = {i, d_ + i};
    for (int r = 0; r < 2; ++r) {
      for (int s = 0; s < 2; ++s) out(idx[r], idx[s]) = scale_ * b(r, s);
    }
  }
  return out;
}

namespace {

LogTermInput block_input(double q, const double* fx, const double* ft) {
  LogTermInput in;
  in.q = q;
  in.G = Eigen::Vector2d(fx[1], ft[1]);
  in.Hq = Eigen::Vector2d(fx[2], ft[2]).asDiagonal();
  return in;
}

void add_directional(LogTermInput& in, const double* fx, const double* ft,
                     const Vector& h) {
  in.T = Eigen::Vector2d(fx[3] * h(0), ft[3] * h(1)).asDiagonal();
  in.th = Eigen::Vector2d(fx[3] * h(0) * h(0), ft[3] * h(1) * h(1));
  in.F = Eigen::Vector2d(fx[4] * h(0) * h(0), ft[4] * h(1) * h(1)).asDiagonal();
}

}  // namespace

Matrix SeparableEpigraphBarrier::block(const Vector& y, Index i) const {
  if (!contains(y)) throw NotInterior("epigraph barrier: point outside domain");
  const auto c = coord(y(i), y(d_ + i));
  Matrix b = -log_hessian(block_input(c.q, c.fx, c.ft));
  b(c.w, c.w) += c.c / (c.wv * c.wv);
  return b;
}

Matrix SeparableEpigraphBarrier::metric(const Vector& y) const {
  return assemble(y, [&](Index, const Coord& c) {
    Eigen::Matrix2d b = -log_hessian(block_input(c.q, c.fx, c.ft));
    b(c.w, c.w) += c.c / (c.wv * c.wv);
    return b;
  });
}

Matrix SeparableEpigraphBarrier::dmetric(const Vector& y,
                                         const Vector& h) const {
  require_dim(h, dim(), "epigraph barrier dmetric");
  return assemble(y, [&](Index i, const Coord& c) {
    const Vector hb = Eigen::Vector2d(h(i), h(d_ + i));
    auto in = block_input(c.q, c.fx, c.ft);
    add_directional(in, c.fx, c.ft, hb);
    Eigen::Matrix2d b = -d_log_hessian(in, hb);
    const double hw = hb(c.w);
    b(c.w, c.w) += -2.0 * c.c * hw / std::pow(c.wv, 3);
    return b;
  });
}

std::optional<Matrix> SeparableEpigraphBarrier::d2metric(
    const Vector& y, const Vector& h) const {
  require_dim(h, dim(), "epigraph barrier d2metric");
  return assemble(y, [&](Index i, const Coord& c) {
    const Vector hb = Eigen::Vector2d(h(i), h(d_ + i));
    auto in = block_input(c.q, c.fx, c.ft);
    add_directional(in, c.fx, c.ft, hb);
    Eigen::Matrix2d b = -d2_log_hessian(in, hb);
    const double hw = hb(c.w);
    b(c.w, c.w) += 6.0 * c.c * hw * hw / std::pow(c.wv, 4);
    return b;
  });
}

double SeparableEpigraphBarrier::potential1(double x) const {
  switch (kind_) {
    case EpigraphKind::entropy:
      if (x < 0.0) return kInf;
      return x == 0.0 ? 0.0 : x * std::log(x);
    case EpigraphKind::power:
      return std::pow(std::abs(x), p_);
    case EpigraphKind::log:
      return x > 0.0 ? -std::log(x) : kInf;
    case EpigraphKind::exp:
      return std::exp(x);
  }
  return kInf;
}

double SeparableEpigraphBarrier::potential(const Vector& x) const {
  require_dim(x, d_, "epigraph potential");
  double s = 0.0;
  for (Index i = 0; i < d_; ++i) s += potential1(x(i));
  return s;
}

}  // namespace dikin
