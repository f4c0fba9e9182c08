#pragma once

// Sample summaries and two-sample comparisons for chain output.

#include "dikin/types.hpp"

#include <cmath>
#include <vector>

namespace dikin {

using Samples = std::vector<Vector>;

Vector sample_mean(const Samples& xs);
Matrix sample_covariance(const Samples& xs);

/// Coordinate j of every sample.
std::vector<double> column(const Samples& xs, Index j);

/// Standard error of the mean of a correlated series by batch means.
/// `batches` <= 0 picks floor(sqrt(n)). Needs at least 2 batches of 2.
double batch_means_se(const std::vector<double>& series, int batches = 0);

/// var / se^2 with the batch-means SE: the number of independent draws
/// carrying the same information about the mean.
double effective_sample_size(const std::vector<double>& series, int batches = 0);

/// Mean and variance of an i.i.d. series with their standard errors.
struct MomentEstimate {
  double mean = 0.0;
  double mean_se = 0.0;
  double var = 0.0;
  double var_se = 0.0;
};

/// Uses batch means for both SEs, so correlated chains are fine.
MomentEstimate moment_estimate(const std::vector<double>& series,
                               int batches = 0);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov with the asymptotic p-value.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Total variation between the histograms of two samples on a common grid
/// (1 or 2 dimensions, `bins` per axis over [lower, upper]).
double histogram_tv(const Samples& a, const Samples& b, const Vector& lower,
                    const Vector& upper, int bins);

/// TV between a 1D sample histogram and a reference density integrated
/// per bin.
double histogram_tv_density(const std::vector<double>& a, double lower,
                            double upper, int bins,
                            const std::vector<double>& bin_mass);

struct CoordinateComparison {
  double mean_a = 0.0, mean_b = 0.0;
  double var_a = 0.0, var_b = 0.0;
  // Differences in units of the combined standard error.
  double mean_z = 0.0;
  double var_z = 0.0;
  KsResult ks;
};

struct CompareReport {
  long n_a = 0, n_b = 0;
  std::vector<CoordinateComparison> coords;
  // Histogram TV when the dimension is 1 or 2 and a box is known.
  double tv = std::nan("");
  double max_abs_z() const;
};

/// Throws StatisticsError on too few samples or mismatched dimensions.
CompareReport compare_samples(const Samples& a, const Samples& b,
                              const Vector* lower = nullptr,
                              const Vector* upper = nullptr, int bins = 20);

}  // namespace dikin
