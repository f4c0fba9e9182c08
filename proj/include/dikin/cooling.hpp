#pragma once

// Gaussian-cooling schedule around the Dikin walk: analytic center,
// truncated-Gaussian start, two annealing regimes for sigma^2 and the
// final walk on the target.

#include "dikin/problem.hpp"
#include "dikin/walk.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dikin {

/// 1e-5 / d^3
double sigma0_squared(Index d);

/// Phase of a sigma^2 value: 2 if sigma^2 <= nu/d, 3 if <= nu, else 4.
int schedule_phase(double sigma2, double nu, Index d);

/// sigma^2 (1 + 1/sqrt d) in phase 2, sigma^2 (1 + sigma/sqrt nu) in phase 3.
double advance_sigma(double sigma2, double nu, Index d);

/// ceil(log(nu / (d sigma0^2)) / log(1 + 1/sqrt d)), 0 if nu/d < sigma0^2.
long phase2_step_count(double nu, Index d, double sigma0_sq);

struct ScheduleEntry {
  int phase = 2;
  double sigma2 = 0.0;
};

/// The sigma^2 values visited after sigma0^2, ending with the first value
/// above nu.
std::vector<ScheduleEntry> sigma_schedule(double nu, Index d,
                                          double sigma0_sq);

struct RelativeBounds {
  double alpha = 0.0;
  double beta = 0.0;
};

/// (alpha, beta) of the annealed potential relative to the barrier, given
/// those of the cost f (zero for a linear cost).
/// Phases 1-2: ((1 + nu a/d)/s2, (1 + nu b/d)/s2); phase 3: (a + 1/s2,
/// b + 1/s2); phase 4: (a, b).
RelativeBounds relative_bounds(int phase, double sigma2, double nu, Index d,
                               double alpha_f = 0.0, double beta_f = 0.0);

struct NewtonOptions {
  double tol = 1e-8;  // Newton decrement
  int max_iter = 500;
  double armijo = 0.25;
  double shrink = 0.5;
};

struct NewtonResult {
  Vector x;
  double decrement = 0.0;
  int iterations = 0;
};

/// argmin c^T y + phi(y) by damped Newton with backtracking, using the
/// metric as the Hessian. Throws NeedFeasiblePoint for an infeasible hint
/// and ConvergenceError when stalled.
NewtonResult analytic_center(const Metric& phi, const Vector& c,
                             const Vector& hint, const NewtonOptions& opts = {});

/// A strictly feasible point of the reduced problem, from `hint` (x-space,
/// may be empty) via a relaxed-barrier phase I over the constraints.
Vector find_interior_point(const ReducedProblem& red,
                           const std::optional<Vector>& hint = std::nullopt);

struct CoolingConfig {
  double r0 = 0.3;
  double laziness = 0.5;
  int c_inner = 50;
  // Steps per sigma^2 update; <= 0 means c_inner * d.
  long inner_budget = 0;
  double eps = 0.1;
  // Steps between consecutive returned samples in phase 4.
  long thin = 1;
  // <= 0 selects 1e-5 / d^3.
  double sigma0_sq = 0.0;
  std::uint64_t seed = 0;
  // x-space starting hint for the phase-I search.
  std::optional<Vector> hint;
  // Called once per schedule entry and once when phase 4 starts.
  std::function<void(int phase, double sigma2, double acceptance)> progress;
};

struct PhaseRecord {
  int phase = 0;
  double sigma2 = 0.0;
  double r = 0.0;
  long steps = 0;
  double acceptance = 0.0;
};

struct CoolingReport {
  Index d = 0;
  double nu = 0.0;
  double nu_bar = 0.0;
  double sigma0_sq = 0.0;
  Vector x_star;
  double phi_offset = 0.0;
  bool phi_offset_from_pure_center = false;
  bool skipped_phase2 = false;
  long phase2_updates = 0;
  long phase3_updates = 0;
  long phase1_attempts = 0;
  long inner_budget = 0;
  long phase4_burn = 0;
  std::vector<PhaseRecord> trace;
  WalkStats final_stats;
};

/// Sampler driver. Holds one chain that is carried across phases.
class GaussianCooling {
 public:
  GaussianCooling(ReducedProblem red, CompositePtr metric, CoolingConfig cfg);

  /// Runs phases 1-4 up to the end of the phase-4 burn-in.
  void prepare();
  /// Continues the phase-4 chain and returns `n` augmented points spaced by
  /// `thin` steps. Calls prepare() if needed.
  std::vector<Vector> draw(long n);
  /// draw() projected to x-space.
  std::vector<Vector> sample(long n);

  const CoolingReport& report() const { return report_; }
  const ReducedProblem& problem() const { return red_; }
  const CompositePtr& metric() const { return metric_; }
  const DikinWalk* walk() const { return walk_.get(); }

  /// Phase-1 draw from N(x*, s^2 g(x*)^{-1}) restricted to the Dikin
  /// ellipsoid of radius 3 sigma0 sqrt(d); s^2 = sigma0^2/(1 + nu beta/d).
  static Vector phase1_start(const Metric& metric, const Vector& x_star,
                             double sigma0_sq, double nu, double beta_f,
                             Rng& rng, long* attempts = nullptr);

 private:
  Target annealed_target(int phase, double sigma2) const;
  void walk_phase(int phase, double sigma2, long steps);

  ReducedProblem red_;
  CompositePtr metric_;
  CoolingConfig cfg_;
  CoolingReport report_;
  std::unique_ptr<DikinWalk> walk_;
  bool prepared_ = false;
};

/// Reduce, assemble, and draw n x-space samples.
std::vector<Vector> gcdw_sample(const ProblemSpec& spec, long n,
                                const CoolingConfig& cfg,
                                const BuildOptions& build = {},
                                CoolingReport* report = nullptr);

}  // namespace dikin
