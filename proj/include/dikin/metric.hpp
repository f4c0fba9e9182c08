#pragma once

#include "dikin/types.hpp"

#include <cmath>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace dikin {

using Rng = std::mt19937_64;

Vector standard_normal(Index n, Rng& rng);

enum class Certification { holds, holds_after_scaling, unverified };

const char* to_string(Certification c);

struct MetricFlags {
  Certification ssc = Certification::unverified;
  Certification ltsc = Certification::unverified;
  Certification asc = Certification::unverified;
};

/// Parameters a local metric carries alongside its evaluators. `nu` and
/// `nu_bar` already include `applied_scaling`.
struct MetricParams {
  std::string name;
  double nu = std::nan("");
  double nu_bar = std::nan("");
  double applied_scaling = 1.0;
  MetricFlags flags;
  // g(x) equals the Hessian of the reported barrier exactly.
  bool hessian_exact = false;
  // D^2 g(x)[h, h] is PSD for every h (a stronger form of the ltsc flag).
  bool d2_psd = false;
};

/// Symmetry parameter bound derived from the self-concordance parameter
/// alone: nu_bar <= (nu + 2 sqrt(nu))^2.
inline double nu_bar_from_nu(double nu) {
  const double v = nu + 2.0 * std::sqrt(nu);
  return v * v;
}

/// Factorization of g(x) at one point. The walk only talks to this.
class LocalFactor {
 public:
  virtual ~LocalFactor() = default;
  virtual Index dim() const = 0;
  virtual double log_det() const = 0;
  /// g^{-1} v
  virtual Vector solve(const Vector& v) const = 0;
  /// g v
  virtual Vector apply(const Vector& v) const = 0;
  /// A draw from N(0, g^{-1}).
  virtual Vector sample(Rng& rng) const = 0;

  double quad(const Vector& v) const { return v.dot(apply(v)); }
};

class DenseFactor final : public LocalFactor {
 public:
  explicit DenseFactor(SymPD g);
  Index dim() const override { return g_.dim(); }
  double log_det() const override { return g_.log_det(); }
  Vector solve(const Vector& v) const override { return g_.solve(v); }
  Vector apply(const Vector& v) const override { return g_.matrix() * v; }
  Vector sample(Rng& rng) const override;
  const SymPD& metric() const { return g_; }

 private:
  SymPD g_;
};

/// A local metric g together with its barrier counterpart phi.
///
/// Evaluators are pure. Outside the open domain `barrier` returns +inf and
/// the matrix evaluators throw NotInterior.
class Metric {
 public:
  virtual ~Metric() = default;

  virtual Index dim() const = 0;
  virtual bool contains(const Vector& x) const {
    return std::isfinite(barrier(x));
  }
  virtual double barrier(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;
  virtual Matrix metric(const Vector& x) const = 0;
  /// Dg(x)[h]
  virtual Matrix dmetric(const Vector& x, const Vector& h) const = 0;
  /// D^2 g(x)[h, h]; absent when the barrier does not provide it.
  virtual std::optional<Matrix> d2metric(const Vector& x,
                                         const Vector& h) const {
    (void)x;
    (void)h;
    return std::nullopt;
  }
  /// Factorization used by the walk. Dense Cholesky unless overridden.
  virtual std::unique_ptr<LocalFactor> factor(const Vector& x) const;

  SymPD metric_pd(const Vector& x) const { return SymPD(metric(x)); }
  double log_det(const Vector& x) const { return factor(x)->log_det(); }

  const MetricParams& params() const { return params_; }

 protected:
  MetricParams params_;
};

using MetricPtr = std::shared_ptr<const Metric>;

/// sqrt(v^T g v); throws FactorizationError for non-PD g.
double local_norm(const SymPD& g, const Vector& v);

struct DikinEllipsoid {
  Vector center;
  SymPD metric;
  double radius = 1.0;
};

bool in_dikin(const DikinEllipsoid& e, const Vector& y);

struct Amenability {
  double nu = 0.0;
  double nu_bar = 0.0;
};

/// (k * sum nu_i, k * sum nu_bar_i) with k the number of parts.
Amenability combined_amenability(const std::vector<MetricPtr>& parts);
Amenability combined_amenability(const std::vector<MetricParams>& parts);

}  // namespace dikin
