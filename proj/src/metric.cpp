#include "dikin/metric.hpp"

namespace dikin {

Vector standard_normal(Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

const char* to_string(Certification c) {
  switch (c) {
    case Certification::holds:
      return "holds";
    case Certification::holds_after_scaling:
      return "holds-after-declared-scaling";
    case Certification::unverified:
      return "unverified";
  }
  return "unverified";
}

DenseFactor::DenseFactor(SymPD g) : g_(std::move(g)) { g_.llt(); }

Vector DenseFactor::sample(Rng& rng) const {
  // g = L L^T, so L^{-T} xi has covariance g^{-1}.
  const Vector xi = standard_normal(g_.dim(), rng);
  return g_.llt().matrixU().solve(xi);
}

std::unique_ptr<LocalFactor> Metric::factor(const Vector& x) const {
  return std::make_unique<DenseFactor>(SymPD(metric(x)));
}

double local_norm(const SymPD& g, const Vector& v) {
  require_dim(v, g.dim(), "local_norm");
  g.llt();
  return std::sqrt(std::max(0.0, g.quad(v)));
}

bool in_dikin(const DikinEllipsoid& e, const Vector& y) {
  require_dim(y, e.center.size(), "in_dikin");
  return local_norm(e.metric, y - e.center) <= e.radius;
}

Amenability combined_amenability(const std::vector<MetricParams>& parts) {
  if (parts.empty()) throw MissingParameter("combined_amenability: no parts");
  const double k = static_cast<double>(parts.size());
  Amenability out;
  for (const auto& p : parts) {
    if (std::isnan(p.nu) || std::isnan(p.nu_bar)) {
      throw MissingParameter("combined_amenability: part '" + p.name +
                             "' has no nu/nu_bar");
    }
    out.nu += p.nu;
    out.nu_bar += p.nu_bar;
  }
  out.nu *= k;
  out.nu_bar *= k;
  return out;
}

Amenability combined_amenability(const std::vector<MetricPtr>& parts) {
  std::vector<MetricParams> params;
  params.reserve(parts.size());
  for (const auto& p : parts) params.push_back(p->params());
  return combined_amenability(params);
}

}  // namespace dikin
