#pragma once

// The log-determinant barrier on symmetric matrices in svec coordinates,
// the truncated PSD cone {X > 0, <A_i, X> > b_i}, and the Sherman-Morrison
// factor that applies g^{-1}, samples N(0, g^{-1}) and tracks log det g
// without forming g^{-1}.

#include "dikin/linear.hpp"

#include <cstdint>

namespace dikin {

/// svec stacks the lower triangle column by column (no sqrt(2) weights).
/// M maps svec to vec, N = (I + K)/2 symmetrizes vec'd matrices and L picks
/// the lower triangle back out of a vec.
class SvecCodec {
 public:
  explicit SvecCodec(Index n);

  Index n() const { return n_; }
  Index ds() const { return n_ * (n_ + 1) / 2; }
  /// Position of entry (i, j), i >= j, in svec.
  Index index(Index i, Index j) const;

  Vector svec(const Matrix& H) const;
  Matrix unsvec(const Vector& v) const;

  const Matrix& M() const { return M_; }
  const Matrix& N() const { return N_; }
  const Matrix& L() const { return L_; }

  /// M^T vec(Y) for any n x n Y.
  Vector mt_vec(const Matrix& Y) const;

 private:
  Index n_;
  Matrix M_, N_, L_;
};

Matrix kron(const Matrix& A, const Matrix& B);

/// -log det X, +inf unless X is symmetric PD.
double logdet_barrier_value(const Matrix& X);

/// M^T (X^{-1} (x) X^{-1}) M (unscaled).
Matrix psd_hessian(const Matrix& X, const SvecCodec& codec);
/// L N (X (x) X) N L^T
Matrix psd_hessian_inverse(const Matrix& X, const SvecCodec& codec);
/// z -> L N vec(X W X), W = sym(vec^{-1}(L^T z)); equals the line above.
Vector psd_hessian_inverse_apply(const Matrix& X, const SvecCodec& codec,
                                 const Vector& z);
/// z -> M^T vec(X^{-1} Z X^{-1})
Vector psd_hessian_apply(const Matrix& X, const SvecCodec& codec,
                         const Vector& z);
/// log det M^T (X^{-1} (x) X^{-1}) M = n(n-1)/2 log 2 - (n+1) log det X.
double psd_hessian_logdet(const Matrix& X);

/// Row of the constraint <A_i, X> in svec coordinates: vec(A_i)^T M.
Vector psd_constraint_row(const Matrix& Ai, const SvecCodec& codec);

/// -scale * log det X on svec(X). `scale` <= 0 selects n.
class PsdBarrier final : public Metric {
 public:
  explicit PsdBarrier(Index n, double scale = 0.0);

  Index dim() const override { return codec_->ds(); }
  bool contains(const Vector& x) const override;
  double barrier(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  Matrix metric(const Vector& x) const override;
  Matrix dmetric(const Vector& x, const Vector& h) const override;
  std::optional<Matrix> d2metric(const Vector& x,
                                 const Vector& h) const override;
  std::unique_ptr<LocalFactor> factor(const Vector& x) const override;

  const SvecCodec& codec() const { return *codec_; }
  std::shared_ptr<const SvecCodec> codec_ptr() const { return codec_; }
  double scale() const { return scale_; }
  /// X = svec^{-1}(x); NotInterior unless PD.
  Matrix matrix(const Vector& x) const;

 private:
  std::shared_ptr<const SvecCodec> codec_;
  double scale_;
};

/// g = c0 * hess(-log det X) + U U^T, handled through the rank-one chain
/// gbar_0 = c0 hess, gbar_i = gbar_{i-1} + u_i u_i^T.
class PsdFactor final : public LocalFactor {
 public:
  PsdFactor(std::shared_ptr<const SvecCodec> codec, Matrix X, double c0,
            Matrix U);

  Index dim() const override { return ds_; }
  double log_det() const override { return log_det_; }
  Vector solve(const Vector& v) const override;
  Vector apply(const Vector& v) const override;
  Vector sample(Rng& rng) const override;

  /// det g(other) / det g(this)
  double det_ratio(const PsdFactor& other) const;

  /// Rank-one corrections applied by solve() since construction, and the
  /// ones spent building the chain.
  std::uint64_t solve_updates() const { return solve_updates_; }
  std::uint64_t setup_updates() const { return setup_updates_; }
  Index rank_one_terms() const { return U_.cols(); }

 private:
  Vector base_solve(const Vector& v) const;

  std::shared_ptr<const SvecCodec> codec_;
  Index n_, ds_;
  Matrix X_, X_isqrt_;
  double c0_;
  Matrix U_;
  Matrix Y_;        // columns gbar_{i-1}^{-1} u_i
  Vector denom_;    // 1 + u_i^T gbar_{i-1}^{-1} u_i
  double log_det_;
  mutable std::uint64_t solve_updates_ = 0;
  std::uint64_t setup_updates_ = 0;
};

enum class PsdLinearKind { log, vaidya, lewis };

const char* to_string(PsdLinearKind k);

struct TruncatedPsdOptions {
  PsdLinearKind kind = PsdLinearKind::log;
  // Weight on hess(-log det); <= 0 selects 2 n^2.
  double psd_scale = 0.0;
  // Lewis variant: n c1 (log m)^c2.
  double c1 = 1.0;
  double c2 = 0.0;
  double lewis_p = 0.0;
  // Use the rank-one factor when m <= d_s.
  bool fast_path = true;
};

/// {X > 0 : <A_i, X> > b_i} in svec coordinates with
///   g = c_psd hess(-log det X) + A_X^T D_X A_X,
/// D_X = 2 I (log), 44 sqrt(m/n)(Sigma + (n/m) I) (vaidya) or
/// n c1 (log m)^c2 W_X (lewis).
class TruncatedPsdMetric final : public Metric {
 public:
  TruncatedPsdMetric(Index n, Matrix A_svec, Vector b,
                     TruncatedPsdOptions opts = {});

  Index dim() const override { return psd_.dim(); }
  bool contains(const Vector& x) const override;
  double barrier(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  Matrix metric(const Vector& x) const override;
  Matrix dmetric(const Vector& x, const Vector& h) const override;
  std::optional<Matrix> d2metric(const Vector& x,
                                 const Vector& h) const override;
  std::unique_ptr<LocalFactor> factor(const Vector& x) const override;

  /// The rank-one factor regardless of m.
  std::unique_ptr<PsdFactor> psd_factor(const Vector& x) const;

  const SvecCodec& codec() const { return psd_.codec(); }
  Index constraints() const;
  const TruncatedPsdOptions& options() const { return opts_; }
  bool uses_fast_path() const;

 private:
  TruncatedPsdOptions opts_;
  PsdBarrier psd_;
  std::shared_ptr<LinearMetric> lin_;
};

}  // namespace dikin
