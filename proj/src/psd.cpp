#include "dikin/psd.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace dikin {

SvecCodec::SvecCodec(Index n) : n_(n) {
  if (n_ < 1) throw DimensionError("SvecCodec: n must be >= 1");
  const Index nn = n_ * n_;
  M_ = Matrix::Zero(nn, ds());
  L_ = Matrix::Zero(ds(), nn);
  for (Index j = 0; j < n_; ++j) {
    for (Index i = j; i < n_; ++i) {
      const Index k = index(i, j);
      M_(i + j * n_, k) = 1.0;
      M_(j + i * n_, k) = 1.0;
      L_(k, i + j * n_) = 1.0;
    }
  }
  // N = (I + K)/2 with K the commutation matrix.
  N_ = Matrix::Zero(nn, nn);
  for (Index j = 0; j < n_; ++j) {
    for (Index i = 0; i < n_; ++i) {
      N_(i + j * n_, i + j * n_) += 0.5;
      N_(i + j * n_, j + i * n_) += 0.5;
    }
  }
}

Index SvecCodec::index(Index i, Index j) const {
  if (i < j) std::swap(i, j);
  // Columns 0..j-1 hold n + (n-1) + ... + (n-j+1) entries.
  return j * n_ - j * (j - 1) / 2 + (i - j);
}

Vector SvecCodec::svec(const Matrix& H) const {
  if (H.rows() != n_ || H.cols() != n_) throw DimensionError("svec: wrong side");
  Vector v(ds());
  for (Index j = 0; j < n_; ++j) {
    for (Index i = j; i < n_; ++i) v(index(i, j)) = H(i, j);
  }
  return v;
}

Matrix SvecCodec::unsvec(const Vector& v) const {
  require_dim(v, ds(), "unsvec");
  Matrix H(n_, n_);
  for (Index j = 0; j < n_; ++j) {
    for (Index i = j; i < n_; ++i) {
      H(i, j) = v(index(i, j));
      H(j, i) = H(i, j);
    }
  }
  return H;
}

Vector SvecCodec::mt_vec(const Matrix& Y) const {
  Vector v(ds());
  for (Index j = 0; j < n_; ++j) {
    v(index(j, j)) = Y(j, j);
    for (Index i = j + 1; i < n_; ++i) v(index(i, j)) = Y(i, j) + Y(j, i);
  }
  return v;
}

Matrix kron(const Matrix& A, const Matrix& B) {
  Matrix K(A.rows() * B.rows(), A.cols() * B.cols());
  for (Index i = 0; i < A.rows(); ++i) {
    for (Index j = 0; j < A.cols(); ++j) {
      K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    }
  }
  return K;
}

double logdet_barrier_value(const Matrix& X) {
  if (X.rows() != X.cols() || !X.allFinite()) return kInf;
  const double scale = std::max(1.0, X.cwiseAbs().maxCoeff());
  if ((X - X.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) return kInf;
  Eigen::LLT<Matrix> llt(0.5 * (X + X.transpose()));
  if (llt.info() != Eigen::Success) return kInf;
  const auto& L = llt.matrixLLT();
  double s = 0.0;
  for (Index i = 0; i < L.rows(); ++i) {
    if (!(L(i, i) > 0.0)) return kInf;
    s += std::log(L(i, i));
  }
  return -2.0 * s;
}

namespace {

SymPD pd_matrix(const Matrix& X) {
  SymPD s(X);
  s.llt();
  return s;
}

}  // namespace

Matrix psd_hessian(const Matrix& X, const SvecCodec& codec) {
  const Matrix Xi = pd_matrix(X).inverse();
  Matrix H = codec.M().transpose() * kron(Xi, Xi) * codec.M();
  return 0.5 * (H + H.transpose());
}

Matrix psd_hessian_inverse(const Matrix& X, const SvecCodec& codec) {
  pd_matrix(X);
  const Matrix& N = codec.N();
  Matrix H = codec.L() * N * kron(X, X) * N * codec.L().transpose();
  return 0.5 * (H + H.transpose());
}

Vector psd_hessian_inverse_apply(const Matrix& X, const SvecCodec& codec,
                                 const Vector& z) {
  require_dim(z, codec.ds(), "psd_hessian_inverse_apply");
  const Index n = codec.n();
  // W = sym(vec^{-1}(L^T z)): lower entries of z, halved off the diagonal.
  Matrix W = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    W(j, j) = z(codec.index(j, j));
    for (Index i = j + 1; i < n; ++i) {
      W(i, j) = 0.5 * z(codec.index(i, j));
      W(j, i) = W(i, j);
    }
  }
  return codec.svec(X * W * X);
}

Vector psd_hessian_apply(const Matrix& X, const SvecCodec& codec,
                         const Vector& z) {
  const Matrix Xi = pd_matrix(X).inverse();
  return codec.mt_vec(Xi * codec.unsvec(z) * Xi);
}

double psd_hessian_logdet(const Matrix& X) {
  const double n = static_cast<double>(X.rows());
  return 0.5 * n * (n - 1.0) * std::log(2.0) -
         (n + 1.0) * pd_matrix(X).log_det();
}

Vector psd_constraint_row(const Matrix& Ai, const SvecCodec& codec) {
  if (Ai.rows() != codec.n() || Ai.cols() != codec.n()) {
    throw DimensionError("psd_constraint_row: wrong side");
  }
  return codec.mt_vec(Ai);
}

// ------------------------------------------------------------ PsdBarrier

PsdBarrier::PsdBarrier(Index n, double scale)
    : codec_(std::make_shared<SvecCodec>(n)),
      scale_(scale > 0.0 ? scale : static_cast<double>(n)) {
  params_.name = "psd";
  params_.applied_scaling = scale_;
  params_.nu = scale_ * static_cast<double>(n);
  params_.nu_bar = scale_ * static_cast<double>(n);
  params_.flags = {Certification::holds_after_scaling, Certification::holds,
                   Certification::holds_after_scaling};
  params_.hessian_exact = true;
  params_.d2_psd = true;
}

Matrix PsdBarrier::matrix(const Vector& x) const {
  require_dim(x, dim(), "psd barrier");
  Matrix X = codec_->unsvec(x);
  if (!std::isfinite(logdet_barrier_value(X))) {
    throw NotInterior("psd barrier: X is not positive definite");
  }
  return X;
}

bool PsdBarrier::contains(const Vector& x) const {
  if (x.size() != dim()) return false;
  return std::isfinite(logdet_barrier_value(codec_->unsvec(x)));
}

double PsdBarrier::barrier(const Vector& x) const {
  if (x.size() != dim()) return kInf;
  return scale_ * logdet_barrier_value(codec_->unsvec(x));
}

Vector PsdBarrier::gradient(const Vector& x) const {
  const Matrix Xi = pd_matrix(matrix(x)).inverse();
  return -scale_ * codec_->mt_vec(Xi);
}

Matrix PsdBarrier::metric(const Vector& x) const {
  return scale_ * psd_hessian(matrix(x), *codec_);
}

Matrix PsdBarrier::dmetric(const Vector& x, const Vector& h) const {
  require_dim(h, dim(), "psd dmetric");
  const Matrix Xi = pd_matrix(matrix(x)).inverse();
  const Matrix P = Xi * codec_->unsvec(h) * Xi;  // -D(X^{-1})[H]
  const Matrix K = -(kron(P, Xi) + kron(Xi, P));
  Matrix D = scale_ * codec_->M().transpose() * K * codec_->M();
  return 0.5 * (D + D.transpose());
}

std::optional<Matrix> PsdBarrier::d2metric(const Vector& x,
                                           const Vector& h) const {
  require_dim(h, dim(), "psd d2metric");
  const Matrix Xi = pd_matrix(matrix(x)).inverse();
  const Matrix H = codec_->unsvec(h);
  const Matrix P = Xi * H * Xi;
  const Matrix Q2 = 2.0 * P * H * Xi;  // D^2(X^{-1})[H, H]
  const Matrix K = kron(Q2, Xi) + 2.0 * kron(P, P) + kron(Xi, Q2);
  Matrix D = scale_ * codec_->M().transpose() * K * codec_->M();
  return Matrix(0.5 * (D + D.transpose()));
}

std::unique_ptr<LocalFactor> PsdBarrier::factor(const Vector& x) const {
  return std::make_unique<PsdFactor>(codec_, matrix(x), scale_,
                                     Matrix(dim(), 0));
}

// ------------------------------------------------------------- PsdFactor

PsdFactor::PsdFactor(std::shared_ptr<const SvecCodec> codec, Matrix X,
                     double c0, Matrix U)
    : codec_(std::move(codec)),
      n_(codec_->n()),
      ds_(codec_->ds()),
      X_(std::move(X)),
      c0_(c0),
      U_(std::move(U)) {
  if (U_.rows() != ds_) throw DimensionError("PsdFactor: U has wrong rows");
  if (!(c0_ > 0.0)) throw InvalidScale("PsdFactor: c0 must be positive");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (X_ + X_.transpose()));
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw NotInterior("PsdFactor: X is not positive definite");
  }
  X_isqrt_ = es.eigenvectors() *
             es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
             es.eigenvectors().transpose();

  // Sherman-Morrison chain: Y.col(i) = gbar_{i-1}^{-1} u_i.
  const Index m = U_.cols();
  Y_.resize(ds_, m);
  for (Index i = 0; i < m; ++i) Y_.col(i) = base_solve(U_.col(i));
  denom_.resize(m);
  double log_det = ds_ * std::log(c0_) + psd_hessian_logdet(X_);
  for (Index i = 0; i < m; ++i) {
    const double den = 1.0 + U_.col(i).dot(Y_.col(i));
    if (!(den > 0.0)) {
      throw FactorizationError("PsdFactor: rank-one update broke down");
    }
    denom_(i) = den;
    log_det += std::log(den);
    for (Index j = i + 1; j < m; ++j) {
      Y_.col(j) -= Y_.col(i) * (U_.col(i).dot(Y_.col(j)) / den);
      ++setup_updates_;
    }
  }
  log_det_ = log_det;
}

Vector PsdFactor::base_solve(const Vector& v) const {
  return psd_hessian_inverse_apply(X_, *codec_, v) / c0_;
}

Vector PsdFactor::solve(const Vector& v) const {
  require_dim(v, ds_, "PsdFactor::solve");
  Vector w = base_solve(v);
  for (Index i = 0; i < U_.cols(); ++i) {
    w -= Y_.col(i) * (U_.col(i).dot(w) / denom_(i));
    ++solve_updates_;
  }
  return w;
}

Vector PsdFactor::apply(const Vector& v) const {
  require_dim(v, ds_, "PsdFactor::apply");
  Vector out = c0_ * psd_hessian_apply(X_, *codec_, v);
  if (U_.cols() > 0) out += U_ * (U_.transpose() * v);
  return out;
}

Vector PsdFactor::sample(Rng& rng) const {
  // v = g^{-1} [B U] w with B B^T = c0 M^T (X^{-1} (x) X^{-1}) M and
  // w ~ N(0, I_{n^2 + m}); then Cov(v) = g^{-1}.
  const Vector w = standard_normal(n_ * n_ + U_.cols(), rng);
  const Matrix W = Eigen::Map<const Matrix>(w.data(), n_, n_);
  Vector rhs = std::sqrt(c0_) * codec_->mt_vec(X_isqrt_ * W * X_isqrt_);
  if (U_.cols() > 0) rhs += U_ * w.tail(U_.cols());
  return solve(rhs);
}

double PsdFactor::det_ratio(const PsdFactor& other) const {
  return std::exp(other.log_det_ - log_det_);
}

// ---------------------------------------------------- TruncatedPsdMetric

const char* to_string(PsdLinearKind k) {
  switch (k) {
    case PsdLinearKind::log:
      return "log";
    case PsdLinearKind::vaidya:
      return "vaidya";
    case PsdLinearKind::lewis:
      return "lewis";
  }
  return "?";
}

namespace {

double default_psd_scale(const TruncatedPsdOptions& o, Index n) {
  return o.psd_scale > 0.0 ? o.psd_scale : 2.0 * static_cast<double>(n * n);
}

}  // namespace

TruncatedPsdMetric::TruncatedPsdMetric(Index n, Matrix A_svec, Vector b,
                                       TruncatedPsdOptions opts)
    : opts_(opts), psd_(n, default_psd_scale(opts, n)) {
  const Index ds = psd_.dim();
  if (A_svec.cols() != ds) {
    throw DimensionError("TruncatedPsdMetric: A must have n(n+1)/2 columns");
  }
  const Index m = A_svec.rows();
  if (m > 0) {
    switch (opts_.kind) {
      case PsdLinearKind::log:
        lin_ = std::make_shared<LogBarrier>(std::move(A_svec), std::move(b),
                                            2.0);
        break;
      case PsdLinearKind::vaidya: {
        VaidyaOptions vo;
        vo.scale = 44.0;
        vo.dim_param = static_cast<double>(n);
        vo.require_tall = false;
        lin_ = std::make_shared<VaidyaMetric>(std::move(A_svec), std::move(b),
                                              vo);
        break;
      }
      case PsdLinearKind::lewis: {
        LewisOptions lo;
        lo.p = opts_.lewis_p;
        lo.scale = static_cast<double>(n) * opts_.c1;
        if (opts_.c2 != 0.0) {
          lo.scale *= std::pow(std::log(static_cast<double>(m)), opts_.c2);
        }
        lo.require_tall = false;
        lin_ = std::make_shared<LewisMetric>(std::move(A_svec), std::move(b),
                                             lo);
        break;
      }
    }
  } else if (b.size() != 0) {
    throw DimensionError("TruncatedPsdMetric: A/b mismatch");
  }
  params_.name = std::string("truncated-psd-") + to_string(opts_.kind);
  params_.applied_scaling = psd_.scale();
  params_.nu = psd_.params().nu + (lin_ ? lin_->params().nu : 0.0);
  params_.nu_bar = psd_.params().nu_bar + (lin_ ? lin_->params().nu_bar : 0.0);
  params_.flags = {Certification::holds_after_scaling, Certification::holds,
                   Certification::holds_after_scaling};
  params_.hessian_exact = opts_.kind == PsdLinearKind::log;
  params_.d2_psd = opts_.kind == PsdLinearKind::log;
}

bool TruncatedPsdMetric::contains(const Vector& x) const {
  return psd_.contains(x) && (!lin_ || lin_->contains(x));
}

double TruncatedPsdMetric::barrier(const Vector& x) const {
  if (!contains(x)) return kInf;
  return psd_.barrier(x) + (lin_ ? lin_->barrier(x) : 0.0);
}

Vector TruncatedPsdMetric::gradient(const Vector& x) const {
  Vector g = psd_.gradient(x);
  if (lin_) g += lin_->gradient(x);
  return g;
}

Matrix TruncatedPsdMetric::metric(const Vector& x) const {
  Matrix g = psd_.metric(x);
  if (lin_) g += lin_->metric(x);
  return g;
}

Matrix TruncatedPsdMetric::dmetric(const Vector& x, const Vector& h) const {
  Matrix g = psd_.dmetric(x, h);
  if (lin_) g += lin_->dmetric(x, h);
  return g;
}

std::optional<Matrix> TruncatedPsdMetric::d2metric(const Vector& x,
                                                   const Vector& h) const {
  auto g = psd_.d2metric(x, h);
  if (!lin_) return g;
  auto l = lin_->d2metric(x, h);
  if (!g || !l) return std::nullopt;
  return Matrix(*g + *l);
}

bool TruncatedPsdMetric::uses_fast_path() const {
  return opts_.fast_path && constraints() <= dim();
}

std::unique_ptr<PsdFactor> TruncatedPsdMetric::psd_factor(
    const Vector& x) const {
  const Matrix X = psd_.matrix(x);
  Matrix U(dim(), 0);
  if (lin_) {
    const auto st = slack_state(lin_->A(), lin_->b(), x);
    const Vector D = lin_->row_weights(x);
    U = st.Ax.transpose() * D.cwiseSqrt().asDiagonal();
  }
  return std::make_unique<PsdFactor>(psd_.codec_ptr(), X, psd_.scale(),
                                     std::move(U));
}

std::unique_ptr<LocalFactor> TruncatedPsdMetric::factor(const Vector& x) const {
  if (uses_fast_path()) return psd_factor(x);
  return Metric::factor(x);
}

Index TruncatedPsdMetric::constraints() const {
  return lin_ ? lin_->A().rows() : 0;
}

}  // namespace dikin
