#pragma once

// Numerical certificates for local metrics, an exact rejection sampler for
// small problems, and quadrature of the annealing warm-start ratios.

#include "dikin/problem.hpp"
#include "dikin/stats.hpp"
#include "dikin/walk.hpp"

#include <functional>
#include <string>
#include <vector>

namespace dikin {

/// Interior points spaced `steps_between` steps apart along a non-lazy
/// Dikin walk from x0. Unbounded domains need a proper target.
std::vector<Vector> random_interior_points(const Metric& g, const Vector& x0,
                                           int count, Rng& rng,
                                           int steps_between = 10,
                                           double r = 0.5,
                                           Target target = uniform_target());

/// Random unit direction in the local norm at x.
Vector random_unit_direction(const Metric& g, const Vector& x, Rng& rng);

struct Certificate {
  std::string name;
  std::string check;
  int points = 0;
  // Worst observed value of the checked quantity and its threshold.
  double worst = 0.0;
  double threshold = 0.0;
  // worst <= threshold passes when set, worst >= threshold otherwise.
  bool at_most = true;
  bool passed = false;
  std::string note;
};

/// Central differences with step eps along unit local directions:
/// gradient vs barrier, metric vs gradient (when the metric is the exact
/// Hessian), dmetric vs metric, d2metric vs dmetric (when provided).
/// Relative error ||FD - A|| / max(||A||, ||g||).
std::vector<Certificate> derivative_certificates(
    const std::string& name, const Metric& g, const std::vector<Vector>& pts,
    Rng& rng, double eps = 1e-5, double tol = 1e-4);

/// max ||g^{-1/2} Dg[h] g^{-1/2}||_2 / (2 ||h||_g) <= 1.
Certificate sc_certificate(const std::string& name, const Metric& g,
                           const std::vector<Vector>& pts, Rng& rng,
                           int dirs = 4, double slack = 1e-6);

/// max ||g^{-1/2} Dg[h] g^{-1/2}||_F / (2 ||h||_g) <= 1. Directions include
/// x itself so the worst case of log-det type barriers is covered.
Certificate ssc_certificate(const std::string& name, const Metric& g,
                            const std::vector<Vector>& pts, Rng& rng,
                            int dirs = 4, double slack = 1e-6);

/// Strong lower trace bound: the sum of the negative eigenvalues of
/// g^{-1/2} D^2 g[h, h] g^{-1/2} is >= -||h||_g^2, which is the infimum of
/// tr((gbar + g)^{-1} D^2 g[h, h]) over PSD gbar. D^2 g comes from
/// differences of Dg when the metric does not provide it.
Certificate ltsc_certificate(const std::string& name, const Metric& g,
                             const std::vector<Vector>& pts, Rng& rng,
                             int dirs = 4);

/// min eig(g^{-1/2} D^2 g[h, h] g^{-1/2}) / ||h||_g^2 >= -tol, for metrics
/// with params().d2_psd.
Certificate d2_psd_certificate(const std::string& name, const Metric& g,
                               const std::vector<Vector>& pts, Rng& rng,
                               int dirs = 4, double tol = 1e-8);

/// For {A x >= b}: ||y - x||_g^2 <= nu_bar whenever ||A_x (y - x)||_inf <= 1,
/// probed on random directions and on the slack-normalized rows.
Certificate chord_certificate(const std::string& name, const Metric& g,
                              const Matrix& A, const Vector& b,
                              const std::vector<Vector>& pts, Rng& rng,
                              int dirs = 32);

/// For the PSD cone: ||H||_g^2 <= nu_bar for every H with X +- H PSD,
/// probed with random H of unit X-spectral norm and H = X.
Certificate psd_chord_certificate(const std::string& name, const Metric& g,
                                  Index n, const std::vector<Vector>& pts,
                                  Rng& rng, int dirs = 32);

/// Report-only: mean |log acceptance| of the uniform-target walk for
/// several radii.
struct AscProbe {
  double r = 0.0;
  double mean_abs_log_ratio = 0.0;
  double mean_acceptance = 0.0;
};
std::vector<AscProbe> asc_probe(const Metric& g, const std::vector<Vector>& pts,
                                Rng& rng,
                                const std::vector<double>& radii = {0.1, 0.05,
                                                                    0.01},
                                int draws = 20);

/// A shipped barrier with a known interior point; `A`, `b` are set for
/// polytope barriers and `psd_n` for cone barriers. `cost` (possibly empty)
/// makes exp(-cost^T y) proper on unbounded domains.
struct CatalogEntry {
  std::string name;
  MetricPtr metric;
  Vector x0;
  Matrix A;
  Vector b;
  Index psd_n = 0;
  Vector cost;

  Target point_target() const;
};

/// One instance of every barrier family at its default scaling.
std::vector<CatalogEntry> barrier_catalog(Rng& rng);

// ------------------------------------------------------ rejection oracle

struct Box {
  Vector lower;
  Vector upper;
};

/// Finite box from interval propagation over the linear constraints; throws
/// MissingParameter when some coordinate stays unbounded.
Box derive_box(const ProblemSpec& spec);

/// Lower bound of the total potential over a box.
double potential_lower_bound(const ProblemSpec& spec, const Box& box);

/// Exact sampler for exp(-f) on the feasible set inside a box: uniform
/// proposals accepted with probability exp(-(f - f_lb)).
class RejectionOracle {
 public:
  RejectionOracle(ProblemSpec spec, Box box, long max_tries = 100000000);

  Vector draw(Rng& rng);
  Samples draw(long n, Rng& rng);
  double acceptance_rate() const;
  const Box& box() const { return box_; }

 private:
  ProblemSpec spec_;
  Box box_;
  double f_lb_;
  long max_tries_;
  long tries_ = 0;
  long accepted_ = 0;
};

// ------------------------------------------------- warm-start quadrature

/// log int_lo^hi exp(-V(x)) dx by adaptive Gauss-Kronrod, shifted by
/// V(peak) and split at peak +- width * 4^k.
double log_partition_1d(const std::function<double(double)>& V, double lo,
                        double hi, double peak, double width);

struct WarmStartStep {
  int phase = 0;
  double sigma2_from = 0.0;
  double sigma2_to = 0.0;
  // int (mu_from / mu_to)^2 dmu_to
  double ratio = 0.0;
};

/// Ratios between consecutive annealed densities of the sampler's schedule
/// on the cube [lo, hi]^dims with the coordinatewise log barrier and cost
/// `cost` * sum x_i. Every density is a product of identical 1D factors
/// exp(-a x - b phi_1(x)), so each ratio is a power of 1D quadratures.
/// Phase-4 entries compare the last annealed density with the target.
std::vector<WarmStartStep> warm_start_ratios(double lo, double hi,
                                             double cost, int dims);

}  // namespace dikin
