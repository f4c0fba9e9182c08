#include "dikin/stats.hpp"

#include <algorithm>
#include <cmath>

namespace dikin {

namespace {

void require_samples(const Samples& xs, size_t min_n, const char* what) {
  if (xs.size() < min_n) {
    throw StatisticsError(std::string(what) + ": need at least " +
                          std::to_string(min_n) + " samples");
  }
  const Index d = xs.front().size();
  for (const auto& x : xs) {
    if (x.size() != d) throw StatisticsError(std::string(what) + ": ragged samples");
  }
}

}  // namespace

Vector sample_mean(const Samples& xs) {
  require_samples(xs, 1, "sample_mean");
  Vector m = Vector::Zero(xs.front().size());
  for (const auto& x : xs) m += x;
  return m / static_cast<double>(xs.size());
}

Matrix sample_covariance(const Samples& xs) {
  require_samples(xs, 2, "sample_covariance");
  const Vector m = sample_mean(xs);
  Matrix C = Matrix::Zero(m.size(), m.size());
  for (const auto& x : xs) C += (x - m) * (x - m).transpose();
  return C / static_cast<double>(xs.size() - 1);
}

std::vector<double> column(const Samples& xs, Index j) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (const auto& x : xs) {
    if (j < 0 || j >= x.size()) throw DimensionError("column: index out of range");
    out.push_back(x(j));
  }
  return out;
}

double batch_means_se(const std::vector<double>& series, int batches) {
  const size_t n = series.size();
  if (batches <= 0) batches = static_cast<int>(std::floor(std::sqrt(double(n))));
  if (batches < 2 || n / static_cast<size_t>(batches) < 2) {
    throw StatisticsError("batch_means_se: series too short");
  }
  const size_t len = n / static_cast<size_t>(batches);
  std::vector<double> means(static_cast<size_t>(batches), 0.0);
  for (int b = 0; b < batches; ++b) {
    double s = 0.0;
    for (size_t i = b * len; i < (b + 1) * len; ++i) s += series[i];
    means[static_cast<size_t>(b)] = s / static_cast<double>(len);
  }
  double mu = 0.0;
  for (double m : means) mu += m;
  mu /= batches;
  double v = 0.0;
  for (double m : means) v += (m - mu) * (m - mu);
  v /= (batches - 1);
  return std::sqrt(v / batches);
}

double effective_sample_size(const std::vector<double>& series, int batches) {
  const double se = batch_means_se(series, batches);
  double mu = 0.0;
  for (double v : series) mu += v;
  mu /= static_cast<double>(series.size());
  double var = 0.0;
  for (double v : series) var += (v - mu) * (v - mu);
  var /= static_cast<double>(series.size() - 1);
  if (!(se > 0.0)) return static_cast<double>(series.size());
  return std::min(static_cast<double>(series.size()), var / (se * se));
}

MomentEstimate moment_estimate(const std::vector<double>& series, int batches) {
  if (series.size() < 8) throw StatisticsError("moment_estimate: series too short");
  MomentEstimate e;
  const double n = static_cast<double>(series.size());
  for (double v : series) e.mean += v;
  e.mean /= n;
  std::vector<double> sq;
  sq.reserve(series.size());
  for (double v : series) {
    sq.push_back((v - e.mean) * (v - e.mean));
    e.var += sq.back();
  }
  e.var /= (n - 1.0);
  e.mean_se = batch_means_se(series, batches);
  e.var_se = batch_means_se(sq, batches);
  return e;
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw StatisticsError("ks_two_sample: need at least 2 samples per side");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  size_t i = 0, j = 0;
  double D = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    D = std::max(D, std::abs(i / na - j / nb));
  }
  KsResult r;
  r.statistic = D;
  const double ne = na * nb / (na + nb);
  const double lam = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * D;
  // Kolmogorov tail series.
  double p = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lam * lam);
    p += term;
    if (std::abs(term) < 1e-12) break;
  }
  r.p_value = lam < 0.2 ? 1.0 : std::clamp(p, 0.0, 1.0);
  return r;
}

namespace {

std::vector<double> histogram(const Samples& xs, const Vector& lo,
                              const Vector& hi, int bins) {
  const Index d = lo.size();
  size_t cells = 1;
  for (Index k = 0; k < d; ++k) cells *= static_cast<size_t>(bins);
  std::vector<double> h(cells, 0.0);
  for (const auto& x : xs) {
    size_t idx = 0;
    for (Index k = 0; k < d; ++k) {
      const double u = (x(k) - lo(k)) / (hi(k) - lo(k));
      const int b = std::clamp(static_cast<int>(std::floor(u * bins)), 0, bins - 1);
      idx = idx * static_cast<size_t>(bins) + static_cast<size_t>(b);
    }
    h[idx] += 1.0;
  }
  for (double& v : h) v /= static_cast<double>(xs.size());
  return h;
}

}  // namespace

double histogram_tv(const Samples& a, const Samples& b, const Vector& lower,
                    const Vector& upper, int bins) {
  require_samples(a, 1, "histogram_tv");
  require_samples(b, 1, "histogram_tv");
  const Index d = lower.size();
  if (d < 1 || d > 2 || upper.size() != d || a.front().size() != d ||
      b.front().size() != d) {
    throw DimensionError("histogram_tv: needs matching 1D or 2D samples");
  }
  if (bins < 1) throw StatisticsError("histogram_tv: bins must be positive");
  const auto ha = histogram(a, lower, upper, bins);
  const auto hb = histogram(b, lower, upper, bins);
  double tv = 0.0;
  for (size_t i = 0; i < ha.size(); ++i) tv += std::abs(ha[i] - hb[i]);
  return 0.5 * tv;
}

double histogram_tv_density(const std::vector<double>& a, double lower,
                            double upper, int bins,
                            const std::vector<double>& bin_mass) {
  if (a.empty()) throw StatisticsError("histogram_tv_density: no samples");
  if (static_cast<int>(bin_mass.size()) != bins) {
    throw DimensionError("histogram_tv_density: one mass per bin");
  }
  Samples xs;
  xs.reserve(a.size());
  for (double v : a) xs.push_back(Vector::Constant(1, v));
  const auto h = histogram(xs, Vector::Constant(1, lower),
                           Vector::Constant(1, upper), bins);
  double tv = 0.0;
  for (int i = 0; i < bins; ++i) tv += std::abs(h[static_cast<size_t>(i)] - bin_mass[static_cast<size_t>(i)]);
  return 0.5 * tv;
}

double CompareReport::max_abs_z() const {
  double z = 0.0;
  for (const auto& c : coords) {
    z = std::max({z, std::abs(c.mean_z), std::abs(c.var_z)});
  }
  return z;
}

CompareReport compare_samples(const Samples& a, const Samples& b,
                              const Vector* lower, const Vector* upper,
                              int bins) {
  require_samples(a, 16, "compare_samples");
  require_samples(b, 16, "compare_samples");
  const Index d = a.front().size();
  if (b.front().size() != d) throw StatisticsError("compare_samples: dimensions differ");
  CompareReport rep;
  rep.n_a = static_cast<long>(a.size());
  rep.n_b = static_cast<long>(b.size());
  for (Index j = 0; j < d; ++j) {
    const auto ca = column(a, j);
    const auto cb = column(b, j);
    const auto ea = moment_estimate(ca);
    const auto eb = moment_estimate(cb);
    CoordinateComparison c;
    c.mean_a = ea.mean;
    c.mean_b = eb.mean;
    c.var_a = ea.var;
    c.var_b = eb.var;
    const double sm = std::hypot(ea.mean_se, eb.mean_se);
    const double sv = std::hypot(ea.var_se, eb.var_se);
    c.mean_z = sm > 0.0 ? (ea.mean - eb.mean) / sm : 0.0;
    c.var_z = sv > 0.0 ? (ea.var - eb.var) / sv : 0.0;
    c.ks = ks_two_sample(ca, cb);
    rep.coords.push_back(c);
  }
  if (lower && upper && (d == 1 || d == 2)) {
    rep.tv = histogram_tv(a, b, *lower, *upper, bins);
  }
  return rep;
}

}  // namespace dikin
