#include "dikin/calculus.hpp"

#include <algorithm>
#include <cmath>

namespace dikin {

namespace {

/// c * g from a factor of g, keeping any fast path of the inner factor.
class ScaledFactor final : public LocalFactor {
 public:
  ScaledFactor(std::unique_ptr<LocalFactor> inner, double c)
      : inner_(std::move(inner)), c_(c) {}
  Index dim() const override { return inner_->dim(); }
  double log_det() const override {
    return inner_->log_det() + static_cast<double>(dim()) * std::log(c_);
  }
  Vector solve(const Vector& v) const override { return inner_->solve(v) / c_; }
  Vector apply(const Vector& v) const override { return c_ * inner_->apply(v); }
  Vector sample(Rng& rng) const override {
    return inner_->sample(rng) / std::sqrt(c_);
  }

 private:
  std::unique_ptr<LocalFactor> inner_;
  double c_;
};

MetricFlags weakest(const MetricFlags& a, const MetricFlags& b) {
  auto w = [](Certification x, Certification y) {
    return static_cast<int>(x) >= static_cast<int>(y) ? x : y;
  };
  return {w(a.ssc, b.ssc), w(a.ltsc, b.ltsc), w(a.asc, b.asc)};
}

}  // namespace

// --------------------------------------------------------------- scaling

ScaledMetric::ScaledMetric(MetricPtr inner, double c)
    : inner_(std::move(inner)), c_(c) {
  if (!inner_) throw DimensionError("scale: null metric");
  if (!(c_ >= 1.0)) throw InvalidScale("scale: factor must be >= 1");
  params_ = inner_->params();
  params_.applied_scaling *= c_;
  params_.nu *= c_;
  params_.nu_bar *= c_;
}

double ScaledMetric::barrier(const Vector& x) const {
  return c_ * inner_->barrier(x);
}
Vector ScaledMetric::gradient(const Vector& x) const {
  return c_ * inner_->gradient(x);
}
Matrix ScaledMetric::metric(const Vector& x) const {
  return c_ * inner_->metric(x);
}
Matrix ScaledMetric::dmetric(const Vector& x, const Vector& h) const {
  return c_ * inner_->dmetric(x, h);
}
std::optional<Matrix> ScaledMetric::d2metric(const Vector& x,
                                             const Vector& h) const {
  auto d = inner_->d2metric(x, h);
  if (!d) return std::nullopt;
  return Matrix(c_ * *d);
}
std::unique_ptr<LocalFactor> ScaledMetric::factor(const Vector& x) const {
  return std::make_unique<ScaledFactor>(inner_->factor(x), c_);
}

MetricPtr scale(MetricPtr g, double c) {
  return std::make_shared<ScaledMetric>(std::move(g), c);
}

// ------------------------------------------------------------- embedding

EmbeddedMetric::EmbeddedMetric(MetricPtr inner, std::vector<Index> proj,
                               Index ambient)
    : inner_(std::move(inner)), proj_(std::move(proj)), ambient_(ambient) {
  if (!inner_) throw DimensionError("embed: null metric");
  if (static_cast<Index>(proj_.size()) != inner_->dim()) {
    throw DimensionError("embed: projection length differs from metric dim");
  }
  std::vector<Index> sorted = proj_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw DimensionError("embed: repeated index");
  }
  for (Index i : proj_) {
    if (i < 0 || i >= ambient_) throw DimensionError("embed: index out of range");
  }
  identity_ = static_cast<Index>(proj_.size()) == ambient_;
  for (Index i = 0; identity_ && i < ambient_; ++i) {
    identity_ = proj_[static_cast<size_t>(i)] == i;
  }
  params_ = inner_->params();
}

Vector EmbeddedMetric::restrict(const Vector& y) const {
  require_dim(y, ambient_, "embedded metric");
  Vector x(static_cast<Index>(proj_.size()));
  for (size_t i = 0; i < proj_.size(); ++i) x(static_cast<Index>(i)) = y(proj_[i]);
  return x;
}

Matrix EmbeddedMetric::lift(const Matrix& g) const {
  Matrix out = Matrix::Zero(ambient_, ambient_);
  for (size_t i = 0; i < proj_.size(); ++i) {
    for (size_t j = 0; j < proj_.size(); ++j) {
      out(proj_[i], proj_[j]) = g(static_cast<Index>(i), static_cast<Index>(j));
    }
  }
  return out;
}

bool EmbeddedMetric::contains(const Vector& y) const {
  if (y.size() != ambient_) return false;
  return inner_->contains(restrict(y));
}

double EmbeddedMetric::barrier(const Vector& y) const {
  if (y.size() != ambient_) return kInf;
  return inner_->barrier(restrict(y));
}

Vector EmbeddedMetric::gradient(const Vector& y) const {
  const Vector g = inner_->gradient(restrict(y));
  Vector out = Vector::Zero(ambient_);
  for (size_t i = 0; i < proj_.size(); ++i) out(proj_[i]) = g(static_cast<Index>(i));
  return out;
}

Matrix EmbeddedMetric::metric(const Vector& y) const {
  return lift(inner_->metric(restrict(y)));
}

Matrix EmbeddedMetric::dmetric(const Vector& y, const Vector& h) const {
  return lift(inner_->dmetric(restrict(y), restrict(h)));
}

std::optional<Matrix> EmbeddedMetric::d2metric(const Vector& y,
                                               const Vector& h) const {
  auto d = inner_->d2metric(restrict(y), restrict(h));
  if (!d) return std::nullopt;
  return lift(*d);
}

std::unique_ptr<LocalFactor> EmbeddedMetric::factor(const Vector& y) const {
  if (identity_) return inner_->factor(y);
  return Metric::factor(y);
}

MetricPtr embed(MetricPtr g, std::vector<Index> proj, Index ambient) {
  return std::make_shared<EmbeddedMetric>(std::move(g), std::move(proj),
                                          ambient);
}

// ------------------------------------------------------------------- sum

CompositeMetric::CompositeMetric(std::vector<MetricPtr> parts,
                                 double prefactor)
    : parts_(std::move(parts)) {
  if (parts_.empty()) throw MissingParameter("sum: no parts");
  dim_ = parts_.front()->dim();
  for (const auto& p : parts_) {
    if (!p) throw DimensionError("sum: null part");
    if (p->dim() != dim_) throw DimensionError("sum: ambient dimensions differ");
  }
  k_ = prefactor > 0.0 ? prefactor : static_cast<double>(parts_.size());
  params_.name = parts_.size() == 1 ? parts_.front()->params().name : "composite";
  params_.applied_scaling = k_;
  double nu = 0.0, nu_bar = 0.0;
  bool exact = true;
  bool d2_psd = true;
  MetricFlags flags = parts_.front()->params().flags;
  for (const auto& p : parts_) {
    nu += p->params().nu;
    nu_bar += p->params().nu_bar;
    exact = exact && p->params().hessian_exact;
    d2_psd = d2_psd && p->params().d2_psd;
    flags = weakest(flags, p->params().flags);
  }
  params_.nu = k_ * nu;
  params_.nu_bar = k_ * nu_bar;
  params_.flags = flags;
  params_.hessian_exact = exact;
  params_.d2_psd = d2_psd;
}

bool CompositeMetric::contains(const Vector& y) const {
  if (y.size() != dim_) return false;
  for (const auto& p : parts_) {
    if (!p->contains(y)) return false;
  }
  return true;
}

double CompositeMetric::barrier(const Vector& y) const {
  double s = 0.0;
  for (const auto& p : parts_) {
    const double v = p->barrier(y);
    if (!std::isfinite(v)) return kInf;
    s += v;
  }
  return k_ * s;
}

Vector CompositeMetric::gradient(const Vector& y) const {
  Vector g = Vector::Zero(dim_);
  for (const auto& p : parts_) g += p->gradient(y);
  return k_ * g;
}

Matrix CompositeMetric::metric(const Vector& y) const {
  Matrix g = Matrix::Zero(dim_, dim_);
  for (const auto& p : parts_) g += p->metric(y);
  return k_ * g;
}

Matrix CompositeMetric::dmetric(const Vector& y, const Vector& h) const {
  Matrix g = Matrix::Zero(dim_, dim_);
  for (const auto& p : parts_) g += p->dmetric(y, h);
  return k_ * g;
}

std::optional<Matrix> CompositeMetric::d2metric(const Vector& y,
                                                const Vector& h) const {
  Matrix g = Matrix::Zero(dim_, dim_);
  for (const auto& p : parts_) {
    auto d = p->d2metric(y, h);
    if (!d) return std::nullopt;
    g += *d;
  }
  return Matrix(k_ * g);
}

std::unique_ptr<LocalFactor> CompositeMetric::factor(const Vector& y) const {
  try {
    if (parts_.size() == 1) {
      return std::make_unique<ScaledFactor>(parts_.front()->factor(y), k_);
    }
    return std::make_unique<DenseFactor>(SymPD(metric(y)));
  } catch (const FactorizationError& e) {
    throw SingularMetric(
        std::string("composite metric is singular at this point; the body "
                    "likely contains a straight line or a coordinate is not "
                    "covered by any barrier (") +
        e.what() + ")");
  }
}

CompositePtr sum(std::vector<MetricPtr> parts) {
  return std::make_shared<CompositeMetric>(std::move(parts));
}

CompositePtr direct_product(
    const std::vector<std::pair<MetricPtr, std::vector<Index>>>& blocks,
    Index ambient, bool scale_blocks) {
  if (blocks.empty()) throw MissingParameter("direct_product: no blocks");
  std::vector<int> seen(static_cast<size_t>(std::max<Index>(ambient, 0)), 0);
  std::vector<MetricPtr> parts;
  for (const auto& [g, proj] : blocks) {
    for (Index i : proj) {
      if (i < 0 || i >= ambient) {
        throw DimensionError("direct_product: index out of range");
      }
      if (seen[static_cast<size_t>(i)]++) {
        throw DimensionError("direct_product: blocks overlap");
      }
    }
    MetricPtr part = g;
    if (scale_blocks && proj.size() > 1) {
      part = scale(part, static_cast<double>(proj.size()));
    }
    parts.push_back(embed(part, proj, ambient));
  }
  for (int s : seen) {
    if (!s) throw DimensionError("direct_product: blocks do not cover all coordinates");
  }
  return std::make_shared<CompositeMetric>(std::move(parts), 1.0);
}

}  // namespace dikin
