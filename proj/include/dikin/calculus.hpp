#pragma once

// Scaling, embedding, summation and direct products of local metrics.

#include "dikin/metric.hpp"

#include <utility>
#include <vector>

namespace dikin {

/// c * g for c >= 1. nu and nu_bar scale by c; flags carry over.
class ScaledMetric final : public Metric {
 public:
  ScaledMetric(MetricPtr inner, double c);

  Index dim() const override { return inner_->dim(); }
  bool contains(const Vector& x) const override { return inner_->contains(x); }
  double barrier(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  Matrix metric(const Vector& x) const override;
  Matrix dmetric(const Vector& x, const Vector& h) const override;
  std::optional<Matrix> d2metric(const Vector& x,
                                 const Vector& h) const override;
  std::unique_ptr<LocalFactor> factor(const Vector& x) const override;

  const MetricPtr& inner() const { return inner_; }
  double factor_c() const { return c_; }

 private:
  MetricPtr inner_;
  double c_;
};

MetricPtr scale(MetricPtr g, double c);

/// gbar(y) = P^T g(P y) P where P selects `proj` out of an ambient vector.
class EmbeddedMetric final : public Metric {
 public:
  EmbeddedMetric(MetricPtr inner, std::vector<Index> proj, Index ambient);

  Index dim() const override { return ambient_; }
  bool contains(const Vector& y) const override;
  double barrier(const Vector& y) const override;
  Vector gradient(const Vector& y) const override;
  Matrix metric(const Vector& y) const override;
  Matrix dmetric(const Vector& y, const Vector& h) const override;
  std::optional<Matrix> d2metric(const Vector& y,
                                 const Vector& h) const override;
  std::unique_ptr<LocalFactor> factor(const Vector& y) const override;

  const MetricPtr& inner() const { return inner_; }
  const std::vector<Index>& projection() const { return proj_; }
  Vector restrict(const Vector& y) const;
  /// True when proj is 0..ambient-1 in order.
  bool is_identity() const { return identity_; }

 private:
  Matrix lift(const Matrix& g) const;

  MetricPtr inner_;
  std::vector<Index> proj_;
  Index ambient_;
  bool identity_;
};

MetricPtr embed(MetricPtr g, std::vector<Index> proj, Index ambient);

/// g(y) = k * sum_i g_i(y) over parts of a common ambient dimension.
/// The barrier is k * sum_i phi_i, nu and nu_bar are k * sum.
class CompositeMetric final : public Metric {
 public:
  /// `prefactor` <= 0 selects the number of parts.
  explicit CompositeMetric(std::vector<MetricPtr> parts,
                           double prefactor = 0.0);

  Index dim() const override { return dim_; }
  bool contains(const Vector& y) const override;
  double barrier(const Vector& y) const override;
  Vector gradient(const Vector& y) const override;
  Matrix metric(const Vector& y) const override;
  Matrix dmetric(const Vector& y, const Vector& h) const override;
  std::optional<Matrix> d2metric(const Vector& y,
                                 const Vector& h) const override;
  /// Throws SingularMetric when the sum is not PD at y.
  std::unique_ptr<LocalFactor> factor(const Vector& y) const override;

  const std::vector<MetricPtr>& parts() const { return parts_; }
  double prefactor() const { return k_; }

 private:
  std::vector<MetricPtr> parts_;
  double k_;
  Index dim_;
};

using CompositePtr = std::shared_ptr<const CompositeMetric>;

CompositePtr sum(std::vector<MetricPtr> parts);

/// Block-diagonal sum_i d_i gbar_i over disjoint coordinate blocks that
/// partition 0..ambient-1. With `scale_blocks` false the d_i are omitted.
CompositePtr direct_product(
    const std::vector<std::pair<MetricPtr, std::vector<Index>>>& blocks,
    Index ambient, bool scale_blocks = true);

}  // namespace dikin
