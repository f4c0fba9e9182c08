#include "dikin/linear.hpp"

#include <algorithm>
#include <cmath>

namespace dikin {

namespace {

constexpr double kRankTol = 1e-12;

Eigen::JacobiSVD<Matrix> thin_svd(const Matrix& M) {
  return Eigen::JacobiSVD<Matrix>(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
}

Index rank_of(const Vector& singular) {
  if (singular.size() == 0 || singular(0) <= 0.0) return 0;
  const double cut = kRankTol * singular(0);
  Index r = 0;
  while (r < singular.size() && singular(r) > cut) ++r;
  return r;
}

// A_x^T Diag(d) A_x
Matrix weighted_gram(const Matrix& Ax, const Vector& d) {
  Matrix g = Ax.transpose() * d.asDiagonal() * Ax;
  return 0.5 * (g + g.transpose());
}

void check_full_column_rank(const Matrix& A, const char* who) {
  if (numerical_rank(A) < A.cols()) {
    throw FactorizationError(std::string(who) +
                             ": constraint matrix is rank deficient");
  }
}

}  // namespace

SlackState slack_state(const Matrix& A, const Vector& b, const Vector& x) {
  if (A.rows() != b.size()) throw DimensionError("slack_state: A/b mismatch");
  require_dim(x, A.cols(), "slack_state");
  SlackState st;
  st.s = A * x - b;
  for (Index i = 0; i < st.s.size(); ++i) {
    if (!(st.s(i) > 0.0)) {
      throw NotInterior("slack_state: slack " + std::to_string(i) +
                        " is not positive");
    }
  }
  st.Ax = st.s.cwiseInverse().asDiagonal() * A;
  return st;
}

SymPD log_metric(const Matrix& A, const Vector& b, const Vector& x) {
  const auto st = slack_state(A, b, x);
  SymPD g(weighted_gram(st.Ax, Vector::Ones(A.rows())));
  g.llt();
  return g;
}

Matrix d_log_metric(const Matrix& A, const Vector& b, const Vector& x,
                    const Vector& h) {
  const auto st = slack_state(A, b, x);
  const Vector sh = st.Ax * h;
  return weighted_gram(st.Ax, -2.0 * sh);
}

Matrix d2_log_metric(const Matrix& A, const Vector& b, const Vector& x,
                     const Vector& h) {
  const auto st = slack_state(A, b, x);
  const Vector sh = st.Ax * h;
  return weighted_gram(st.Ax, 6.0 * sh.cwiseAbs2());
}

Index numerical_rank(const Matrix& M) {
  if (M.size() == 0) return 0;
  return rank_of(Eigen::JacobiSVD<Matrix>(M).singularValues());
}

double half_log_pdet(const Matrix& M) {
  const Vector sv = Eigen::JacobiSVD<Matrix>(M).singularValues();
  const Index r = rank_of(sv);
  return sv.head(r).array().log().sum();
}

Matrix projection(const Matrix& M) {
  if (M.size() == 0) return Matrix::Zero(M.rows(), M.rows());
  const auto svd = thin_svd(M);
  const Index r = rank_of(svd.singularValues());
  const Matrix U = svd.matrixU().leftCols(r);
  return U * U.transpose();
}

LeverageScores leverage_scores(const Matrix& M) {
  if (M.rows() < 1) throw ShapeError("leverage_scores: empty matrix");
  LeverageScores out;
  if (M.cols() == 0) {
    out.sigma = Vector::Zero(M.rows());
    return out;
  }
  const auto svd = thin_svd(M);
  const Index r = rank_of(svd.singularValues());
  out.sigma = svd.matrixU().leftCols(r).rowwise().squaredNorm();
  return out;
}

Vector d_leverage(const Matrix& A, const Vector& b, const Vector& x,
                  const Vector& h) {
  const auto st = slack_state(A, b, x);
  const Matrix P = projection(st.Ax);
  const Vector sigma = P.diagonal();
  const Matrix lambda = Matrix(sigma.asDiagonal()) - P.cwiseAbs2();
  return -2.0 * lambda * (st.Ax * h);
}

// ---------------------------------------------------------------- Vaidya

namespace {

double vaidya_dim(const Matrix& A, const VaidyaOptions& opts) {
  const double d = opts.dim_param > 0.0 ? opts.dim_param
                                         : static_cast<double>(A.cols());
  if (opts.require_tall && A.rows() < A.cols()) {
    throw ShapeError("vaidya: requires m >= d");
  }
  return d;
}

}  // namespace

Vector vaidya_weights(const Matrix& A, const Vector& b, const Vector& x,
                      const VaidyaOptions& opts) {
  const double d = vaidya_dim(A, opts);
  const double m = static_cast<double>(A.rows());
  const auto st = slack_state(A, b, x);
  const Vector sigma = leverage_scores(st.Ax).sigma;
  return opts.scale * std::sqrt(m / d) *
         (sigma.array() + d / m).matrix();
}

SymPD vaidya_metric(const Matrix& A, const Vector& b, const Vector& x,
                    const VaidyaOptions& opts) {
  const Vector D = vaidya_weights(A, b, x, opts);
  const auto st = slack_state(A, b, x);
  SymPD g(weighted_gram(st.Ax, D));
  g.llt();
  return g;
}

Matrix d_vaidya_metric(const Matrix& A, const Vector& b, const Vector& x,
                       const Vector& h, const VaidyaOptions& opts) {
  const double d = vaidya_dim(A, opts);
  const double m = static_cast<double>(A.rows());
  const double c = opts.scale * std::sqrt(m / d);
  const auto st = slack_state(A, b, x);
  const Vector D = vaidya_weights(A, b, x, opts);
  const Vector sh = st.Ax * h;
  const Vector dsigma = d_leverage(A, b, x, h);
  // D(A_x^T D A_x)[h] = A_x^T (D' - 2 D S_h) A_x
  return weighted_gram(st.Ax, c * dsigma - 2.0 * D.cwiseProduct(sh));
}

// ----------------------------------------------------------------- Lewis

double default_lewis_p(Index m) {
  if (m <= 2) return 2.0;
  return 2.0 * std::ceil(std::log2(static_cast<double>(m)));
}

double lewis_residual(const Matrix& M, const Vector& w, double p) {
  const Vector scale = w.array().pow(0.5 - 1.0 / p);
  const Vector sigma = leverage_scores(scale.asDiagonal() * M).sigma;
  return (w - sigma).cwiseAbs().maxCoeff();
}

LewisWeights lewis_weights(const Matrix& M, double p, double tol,
                           int max_iter, double damping) {
  if (p < 2.0) throw InvalidScale("lewis_weights: p must be >= 2");
  if (M.rows() < 1) throw ShapeError("lewis_weights: empty matrix");
  const Index m = M.rows();
  const double rank = static_cast<double>(numerical_rank(M));
  const double eta = damping > 0.0 ? damping : std::min(1.0, 2.0 / p);

  LewisWeights out;
  out.p = p;
  Vector w = Vector::Constant(m, rank / static_cast<double>(m));
  for (int it = 0; it <= max_iter; ++it) {
    const Vector power = w.array().pow(0.5 - 1.0 / p);
    const Vector sigma = leverage_scores(power.asDiagonal() * M).sigma;
    out.residual = (w - sigma).cwiseAbs().maxCoeff();
    out.iterations = it;
    if (out.residual <= tol) {
      out.w = w;
      return out;
    }
    // tau_i = a_i^T (M^T W^{1-2/p} M)^+ a_i = sigma_i / w_i^{1-2/p}
    const Vector tau = sigma.array() / power.array().square();
    const Vector target = tau.array().pow(p / 2.0);
    w = (1.0 - eta) * w + eta * target;
    for (Index i = 0; i < m; ++i) {
      // Rows outside the column space of M have zero weight in the limit;
      // keep the iterate strictly positive so W^{-1/2} stays defined.
      w(i) = std::max(w(i), 1e-300);
    }
  }
  throw ConvergenceError("lewis_weights: no convergence after " +
                             std::to_string(max_iter) + " iterations",
                         out.residual);
}

double lewis_p(const LewisOptions& opts, Index m) {
  return opts.p > 0.0 ? opts.p : default_lewis_p(m);
}

double lewis_scale(const LewisOptions& opts, Index m, Index d) {
  if (opts.scale > 0.0) return opts.scale;
  double s = opts.c1;
  if (opts.c2 != 0.0) s *= std::pow(std::log(static_cast<double>(m)), opts.c2);
  if (opts.sqrt_d) s *= std::sqrt(static_cast<double>(d));
  return s;
}

SymPD lewis_metric(const Matrix& A, const Vector& b, const Vector& x,
                   const LewisOptions& opts) {
  if (opts.require_tall && A.rows() < A.cols()) {
    throw ShapeError("lewis_metric: requires m >= d");
  }
  const auto st = slack_state(A, b, x);
  const double p = lewis_p(opts, A.rows());
  const auto lw = lewis_weights(st.Ax, p, opts.tol, opts.max_iter);
  const double c = lewis_scale(opts, A.rows(), A.cols());
  SymPD g(weighted_gram(st.Ax, c * lw.w));
  g.llt();
  return g;
}

namespace {

Vector d_lewis_weights_at(const Matrix& Ax, const Vector& w, double p,
                          const Vector& h) {
  const Index m = Ax.rows();
  const Vector power = w.array().pow(0.5 - 1.0 / p);
  const Matrix P = projection(power.asDiagonal() * Ax);
  const Matrix lambda = Matrix(w.asDiagonal()) - P.cwiseAbs2();
  const Vector w_isqrt = w.cwiseSqrt().cwiseInverse();
  const Matrix lambda_bar = w_isqrt.asDiagonal() * lambda * w_isqrt.asDiagonal();
  const double cp = 1.0 - 2.0 / p;
  const Matrix I = Matrix::Identity(m, m);
  // N = 2 Lbar (I - c_p Lbar)^{-1}; Lbar and (I - c_p Lbar) commute.
  const Matrix N =
      2.0 * (I - cp * lambda_bar).partialPivLu().solve(lambda_bar);
  const Vector w_sqrt = w.cwiseSqrt();
  const Vector sh = Ax * h;
  return -(w_sqrt.asDiagonal() * (N * (w_sqrt.asDiagonal() * sh)));
}

}  // namespace

Vector d_lewis_weights(const Matrix& A, const Vector& b, const Vector& x,
                       double p, const Vector& h) {
  const auto st = slack_state(A, b, x);
  const auto lw = lewis_weights(st.Ax, p, 1e-13);
  return d_lewis_weights_at(st.Ax, lw.w, p, h);
}

Matrix d_lewis_metric(const Matrix& A, const Vector& b, const Vector& x,
                      const Vector& h, const LewisOptions& opts) {
  const auto st = slack_state(A, b, x);
  const double p = lewis_p(opts, A.rows());
  const auto lw = lewis_weights(st.Ax, p, opts.tol, opts.max_iter);
  const double c = lewis_scale(opts, A.rows(), A.cols());
  const Vector dw = d_lewis_weights_at(st.Ax, lw.w, p, h);
  const Vector sh = st.Ax * h;
  return weighted_gram(st.Ax, c * (dw - 2.0 * lw.w.cwiseProduct(sh)));
}

// --------------------------------------------------------------- classes

LinearMetric::LinearMetric(Matrix A, Vector b)
    : A_(std::move(A)), b_(std::move(b)) {
  if (A_.rows() != b_.size()) throw DimensionError("linear metric: A/b mismatch");
  for (Index i = 0; i < A_.rows(); ++i) {
    if (A_.row(i).cwiseAbs().maxCoeff() == 0.0) {
      throw ShapeError("linear metric: A has an all-zero row");
    }
  }
}

bool LinearMetric::contains(const Vector& x) const {
  if (x.size() != A_.cols()) return false;
  const Vector s = A_ * x - b_;
  return (s.array() > 0.0).all();
}

Matrix LinearMetric::metric(const Vector& x) const {
  const auto st = slack_state(A_, b_, x);
  return weighted_gram(st.Ax, row_weights(x));
}

LogBarrier::LogBarrier(Matrix A, Vector b, double scale)
    : LinearMetric(std::move(A), std::move(b)), scale_(scale) {
  const double m = static_cast<double>(A_.rows());
  params_.name = "log";
  params_.applied_scaling = scale_;
  params_.nu = scale_ * m;
  params_.nu_bar = scale_ * m;
  params_.flags = {Certification::holds, Certification::holds,
                   Certification::holds};
  params_.hessian_exact = true;
  params_.d2_psd = true;
}

double LogBarrier::barrier(const Vector& x) const {
  if (!contains(x)) return kInf;
  return -scale_ * (A_ * x - b_).array().log().sum();
}

Vector LogBarrier::gradient(const Vector& x) const {
  const auto st = slack_state(A_, b_, x);
  return -scale_ * st.Ax.transpose() * Vector::Ones(A_.rows());
}

Vector LogBarrier::row_weights(const Vector&) const {
  return Vector::Constant(A_.rows(), scale_);
}

Matrix LogBarrier::dmetric(const Vector& x, const Vector& h) const {
  return scale_ * d_log_metric(A_, b_, x, h);
}

std::optional<Matrix> LogBarrier::d2metric(const Vector& x,
                                           const Vector& h) const {
  return Matrix(scale_ * d2_log_metric(A_, b_, x, h));
}

VaidyaMetric::VaidyaMetric(Matrix A, Vector b, VaidyaOptions opts)
    : LinearMetric(std::move(A), std::move(b)), opts_(opts) {
  const double d = vaidya_dim(A_, opts_);
  if (opts_.require_tall) check_full_column_rank(A_, "vaidya");
  const double m = static_cast<double>(A_.rows());
  params_.name = "vaidya";
  params_.applied_scaling = opts_.scale;
  // nu_bar <= tr(D_x) = scale sqrt(m/d) (rank + d)
  const double tr = opts_.scale * std::sqrt(m / d) *
                    (static_cast<double>(numerical_rank(A_)) + d);
  params_.nu = tr;
  params_.nu_bar = tr;
  params_.flags = {Certification::holds_after_scaling, Certification::holds,
                   Certification::holds};
}

double VaidyaMetric::barrier(const Vector& x) const {
  if (!contains(x)) return kInf;
  const auto st = slack_state(A_, b_, x);
  const double d = vaidya_dim(A_, opts_);
  const double m = static_cast<double>(A_.rows());
  const double vol = half_log_pdet(st.Ax);
  const double logb = -st.s.array().log().sum();
  return opts_.scale * std::sqrt(m / d) * (vol + d / m * logb);
}

Vector VaidyaMetric::gradient(const Vector& x) const {
  const auto st = slack_state(A_, b_, x);
  const double d = vaidya_dim(A_, opts_);
  const double m = static_cast<double>(A_.rows());
  const Vector sigma = leverage_scores(st.Ax).sigma;
  const Vector weights = (sigma.array() + d / m).matrix();
  return -opts_.scale * std::sqrt(m / d) * (st.Ax.transpose() * weights);
}

Vector VaidyaMetric::row_weights(const Vector& x) const {
  return vaidya_weights(A_, b_, x, opts_);
}

Matrix VaidyaMetric::dmetric(const Vector& x, const Vector& h) const {
  return d_vaidya_metric(A_, b_, x, h, opts_);
}

LewisMetric::LewisMetric(Matrix A, Vector b, LewisOptions opts)
    : LinearMetric(std::move(A), std::move(b)), opts_(opts) {
  if (opts_.require_tall) {
    if (A_.rows() < A_.cols()) throw ShapeError("lewis: requires m >= d");
    check_full_column_rank(A_, "lewis");
  }
  p_ = lewis_p(opts_, A_.rows());
  scale_ = lewis_scale(opts_, A_.rows(), A_.cols());
  params_.name = "lewis";
  params_.applied_scaling = scale_;
  // nu_bar <= tr(D_x) = scale * sum(w) = scale * rank
  params_.nu = scale_ * static_cast<double>(numerical_rank(A_));
  params_.nu_bar = params_.nu;
  params_.flags = {Certification::holds_after_scaling,
                   Certification::holds_after_scaling,
                   Certification::holds_after_scaling};
}

double LewisMetric::barrier(const Vector& x) const {
  if (!contains(x)) return kInf;
  const auto st = slack_state(A_, b_, x);
  const auto lw = lewis_weights(st.Ax, p_, opts_.tol, opts_.max_iter);
  const Vector half = lw.w.array().pow(0.5 - 1.0 / p_);
  return 2.0 * scale_ * half_log_pdet(half.asDiagonal() * st.Ax);
}

Vector LewisMetric::gradient(const Vector& x) const {
  const auto st = slack_state(A_, b_, x);
  const auto lw = lewis_weights(st.Ax, p_, opts_.tol, opts_.max_iter);
  return -2.0 * scale_ * (st.Ax.transpose() * lw.w);
}

Vector LewisMetric::row_weights(const Vector& x) const {
  const auto st = slack_state(A_, b_, x);
  return scale_ * lewis_weights(st.Ax, p_, opts_.tol, opts_.max_iter).w;
}

Matrix LewisMetric::dmetric(const Vector& x, const Vector& h) const {
  LewisOptions o = opts_;
  o.p = p_;
  o.scale = scale_;
  return d_lewis_metric(A_, b_, x, h, o);
}

}  // namespace dikin
