#pragma once

// Metropolis-filtered Dikin walk over any local metric.

#include "dikin/metric.hpp"

#include <cstdint>
#include <functional>

namespace dikin {

/// A target density proportional to exp(-V) on the metric's domain.
struct Target {
  std::function<double(const Vector&)> value;
  /// V(z) - V(x); falls back to value(z) - value(x) when empty.
  std::function<double(const Vector&, const Vector&)> diff;

  double delta(const Vector& x, const Vector& z) const {
    return diff ? diff(x, z) : value(z) - value(x);
  }
};

Target uniform_target();
/// V(y) = c^T y
Target linear_target(Vector c);

struct WalkConfig {
  double r = 0.3;
  // Probability of staying put; 1 freezes the chain.
  double laziness = 0.5;
  // Radii above 1 are rejected unless set.
  bool allow_large_r = false;
};

struct WalkStats {
  std::uint64_t steps = 0;
  std::uint64_t lazy = 0;
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
  std::uint64_t infeasible = 0;

  double acceptance_rate() const {
    return proposals ? static_cast<double>(accepted) / proposals : 0.0;
  }
};

/// r0 * min(1, beta^{-1/2})
double default_radius(double beta, double r0 = 0.3);

/// log N(z; x, (r^2/d) g(x)^{-1}) given the factor of g(x).
double log_proposal_density(const LocalFactor& gx, const Vector& x,
                            const Vector& z, double r);

/// log of p_z(x) pi(z) / (p_x(z) pi(x)), or -inf when z is infeasible.
/// Factors may be passed to avoid refactoring.
double log_acceptance(const Metric& metric, const Target& target,
                      const Vector& x, const Vector& z, double r,
                      const LocalFactor* gx = nullptr,
                      const LocalFactor* gz = nullptr);

/// min(1, exp(log_acceptance)).
double acceptance_ratio(const Metric& metric, const Target& target,
                        const Vector& x, const Vector& z, double r);

class DikinWalk {
 public:
  DikinWalk(MetricPtr metric, Target target, Vector x0, WalkConfig cfg,
            std::uint64_t seed);

  const Vector& x() const { return x_; }
  double value() const { return v_; }
  const WalkStats& stats() const { return stats_; }
  const WalkConfig& config() const { return cfg_; }
  const Metric& metric() const { return *metric_; }
  const LocalFactor& factor() const { return *gx_; }
  Rng& rng() { return rng_; }

  void set_radius(double r);
  /// Swaps the target and re-evaluates V at the current point.
  void set_target(Target target);
  void reset_stats() { stats_ = {}; }

  /// z = x + (r/sqrt(d)) g(x)^{-1/2} xi
  Vector propose();
  double acceptance_ratio(const Vector& z) const;

  /// One lazy Metropolis step; returns true if the point moved.
  bool step();
  /// `steps` steps; `sink` sees the state after every `thin`-th step.
  void run(long steps, const std::function<void(const Vector&)>& sink = {},
           long thin = 1);

 private:
  MetricPtr metric_;
  Target target_;
  Vector x_;
  double v_;
  std::unique_ptr<LocalFactor> gx_;
  WalkConfig cfg_;
  Rng rng_;
  WalkStats stats_;
};

}  // namespace dikin
