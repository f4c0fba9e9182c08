#include "dikin/walk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dikin {

Target uniform_target() {
  Target t;
  t.value = [](const Vector&) { return 0.0; };
  t.diff = [](const Vector&, const Vector&) { return 0.0; };
  return t;
}

Target linear_target(Vector c) {
  Target t;
  t.value = [c](const Vector& y) { return c.dot(y); };
  t.diff = [c](const Vector& x, const Vector& z) { return c.dot(z - x); };
  return t;
}

double default_radius(double beta, double r0) {
  if (beta < 0.0) throw InvalidScale("default_radius: beta must be >= 0");
  if (beta <= 1.0) return r0;
  return r0 / std::sqrt(beta);
}

double log_proposal_density(const LocalFactor& gx, const Vector& x,
                            const Vector& z, double r) {
  const double d = static_cast<double>(x.size());
  const double s2 = r * r / d;
  return 0.5 * gx.log_det() - 0.5 * gx.quad(z - x) / s2 -
         0.5 * d * std::log(2.0 * std::numbers::pi * s2);
}

namespace {

// log p_z(x) - log p_x(z); the normalizing constants cancel.
double log_proposal_ratio(const LocalFactor& gx, const LocalFactor& gz,
                          const Vector& h, double r) {
  const double d = static_cast<double>(h.size());
  return 0.5 * (gz.log_det() - gx.log_det()) -
         d / (2.0 * r * r) * (gz.quad(h) - gx.quad(h));
}

}  // namespace

double log_acceptance(const Metric& metric, const Target& target,
                      const Vector& x, const Vector& z, double r,
                      const LocalFactor* gx, const LocalFactor* gz) {
  if (!metric.contains(z)) return -kInf;
  const double dv = target.delta(x, z);
  if (!std::isfinite(dv)) return -kInf;
  std::unique_ptr<LocalFactor> own_x, own_z;
  if (!gx) {
    own_x = metric.factor(x);
    gx = own_x.get();
  }
  if (!gz) {
    own_z = metric.factor(z);
    gz = own_z.get();
  }
  return log_proposal_ratio(*gx, *gz, z - x, r) - dv;
}

double acceptance_ratio(const Metric& metric, const Target& target,
                        const Vector& x, const Vector& z, double r) {
  const double l = log_acceptance(metric, target, x, z, r);
  return l >= 0.0 ? 1.0 : std::exp(l);
}

DikinWalk::DikinWalk(MetricPtr metric, Target target, Vector x0,
                     WalkConfig cfg, std::uint64_t seed)
    : metric_(std::move(metric)),
      target_(std::move(target)),
      x_(std::move(x0)),
      cfg_(cfg),
      rng_(seed) {
  require_dim(x_, metric_->dim(), "DikinWalk start");
  if (!metric_->contains(x_)) {
    throw NotInterior("DikinWalk: starting point is not strictly interior");
  }
  set_radius(cfg_.r);
  if (!(cfg_.laziness >= 0.0 && cfg_.laziness <= 1.0)) {
    throw InvalidScale("DikinWalk: laziness must lie in [0, 1]");
  }
  v_ = target_.value(x_);
  if (!std::isfinite(v_)) {
    throw NotInterior("DikinWalk: target is not finite at the start");
  }
  gx_ = metric_->factor(x_);
}

void DikinWalk::set_radius(double r) {
  if (!(r > 0.0)) throw InvalidScale("DikinWalk: radius must be positive");
  if (r > 1.0 && !cfg_.allow_large_r) {
    throw InvalidScale("DikinWalk: radius above 1 needs allow_large_r");
  }
  cfg_.r = r;
}

void DikinWalk::set_target(Target target) {
  target_ = std::move(target);
  v_ = target_.value(x_);
}

Vector DikinWalk::propose() {
  const double d = static_cast<double>(x_.size());
  return x_ + (cfg_.r / std::sqrt(d)) * gx_->sample(rng_);
}

double DikinWalk::acceptance_ratio(const Vector& z) const {
  const double l = log_acceptance(*metric_, target_, x_, z, cfg_.r, gx_.get());
  return l >= 0.0 ? 1.0 : std::exp(l);
}

bool DikinWalk::step() {
  ++stats_.steps;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  if (cfg_.laziness >= 1.0 || unif(rng_) < cfg_.laziness) {
    ++stats_.lazy;
    return false;
  }
  ++stats_.proposals;
  const Vector z = propose();
  if (!metric_->contains(z)) {
    ++stats_.infeasible;
    return false;
  }
  const double vz = target_.value(z);
  if (!std::isfinite(vz)) {
    ++stats_.infeasible;
    return false;
  }
  auto gz = metric_->factor(z);
  // The cached V(x) saves one barrier evaluation per step.
  const double l = log_proposal_ratio(*gx_, *gz, z - x_, cfg_.r) - (vz - v_);
  if (l < 0.0 && unif(rng_) >= std::exp(l)) return false;
  x_ = z;
  v_ = vz;
  gx_ = std::move(gz);
  ++stats_.accepted;
  return true;
}

void DikinWalk::run(long steps, const std::function<void(const Vector&)>& sink,
                    long thin) {
  thin = std::max(1L, thin);
  for (long t = 1; t <= steps; ++t) {
    step();
    if (sink && t % thin == 0) sink(x_);
  }
}

}  // namespace dikin
