#include "qsd/stats/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

#include "qsd/core/rng.hpp"

namespace qsd {

MeanEstimate mean_se(std::span<const double> x) {
  MeanEstimate r;
  r.n = static_cast<double>(x.size());
  if (x.empty()) return r;
  // Welford keeps the variance stable for large means.
  double mean = 0.0, m2 = 0.0;
  std::size_t k = 0;
  for (double v : x) {
    ++k;
    const double d = v - mean;
    mean += d / static_cast<double>(k);
    m2 += d * (v - mean);
  }
  r.mean = mean;
  if (x.size() > 1) r.se = std::sqrt(m2 / static_cast<double>(x.size() - 1) / r.n);
  return r;
}

MeanEstimate weighted_mean_se(std::span<const double> x, std::span<const double> w) {
  if (x.size() != w.size()) throw std::invalid_argument("weighted_mean_se: size mismatch");
  MeanEstimate r;
  double sw = 0.0, sw2 = 0.0, swx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    sw2 += w[i] * w[i];
    swx += w[i] * x[i];
  }
  if (sw <= 0.0) return r;
  r.mean = swx / sw;
  r.n = sw * sw / sw2;
  double var = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) var += w[i] * (x[i] - r.mean) * (x[i] - r.mean);
  var /= sw;
  if (r.n > 1.0) r.se = std::sqrt(var / (r.n - 1.0));
  return r;
}

MeanEstimate covariance_se(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("covariance_se: size mismatch");
  const std::size_t n = x.size();
  MeanEstimate r;
  r.n = static_cast<double>(n);
  if (n < 2) return r;
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / r.n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / r.n;
  std::vector<double> prod(n);
  for (std::size_t i = 0; i < n; ++i) prod[i] = (x[i] - mx) * (y[i] - my);
  auto m = mean_se(prod);
  r.mean = m.mean * r.n / (r.n - 1.0);
  r.se = m.se;
  return r;
}

std::pair<double, double> wilson_interval(double k, double n, double z) {
  if (n <= 0.0) return {0.0, 1.0};
  const double p = k / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double log_sum_exp(std::span<const double> x) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : x) hi = std::max(hi, v);
  if (!std::isfinite(hi)) return hi;
  double s = 0.0;
  for (double v : x) s += std::exp(v - hi);
  return hi + std::log(s);
}

double ks_distance_exponential(std::span<const double> x, double rate) {
  if (x.empty()) return 0.0;
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = 1.0 - std::exp(-rate * std::max(0.0, s[i]));
    d = std::max(d, std::max(static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n));
  }
  return d;
}

double kolmogorov_survival(double s) {
  if (s <= 0.0) return 1.0;
  if (s < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * s * s);
    sum += (k % 2 ? 1.0 : -1.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_pvalue(double d, double n) {
  const double rn = std::sqrt(n);
  return kolmogorov_survival((rn + 0.12 + 0.11 / rn) * d);
}

double ks_critical(double n, double alpha) {
  // Invert the corrected asymptotic law by bisection.
  double lo = 0.0, hi = 3.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (kolmogorov_survival(mid) > alpha ? lo : hi) = mid;
  }
  const double rn = std::sqrt(n);
  return hi / (rn + 0.12 + 0.11 / rn);
}

double chi_squared_quantile(double dof, double p) {
  boost::math::chi_squared dist(dof);
  return boost::math::quantile(boost::math::complement(dist, p));
}

double chi_squared_survival(double dof, double x) {
  if (x <= 0.0) return 1.0;
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, x));
}

ChiSquaredResult chi_squared_two_sample(std::span<const double> prob_a, double n_a,
                                        std::span<const double> prob_b, double n_b,
                                        double min_expected) {
  const std::size_t bins = std::max(prob_a.size(), prob_b.size());
  auto at = [](std::span<const double> p, std::size_t i) { return i < p.size() ? p[i] : 0.0; };
  // Pool adjacent bins from the left until the pooled expected count under
  // the common law reaches min_expected in both samples.
  std::vector<std::pair<double, double>> pooled;
  double ca = 0.0, cb = 0.0;
  for (std::size_t i = 0; i < bins; ++i) {
    ca += at(prob_a, i) * n_a;
    cb += at(prob_b, i) * n_b;
    const double p = (ca + cb) / (n_a + n_b);
    if (p * std::min(n_a, n_b) >= min_expected) {
      pooled.emplace_back(ca, cb);
      ca = cb = 0.0;
    }
  }
  if (ca + cb > 0.0) {
    if (pooled.empty()) pooled.emplace_back(ca, cb);
    else {
      pooled.back().first += ca;
      pooled.back().second += cb;
    }
  }
  ChiSquaredResult r;
  if (pooled.size() < 2) return r;
  const double ka = std::sqrt(n_b / n_a), kb = std::sqrt(n_a / n_b);
  for (auto [a, b] : pooled) {
    if (a + b <= 0.0) continue;
    const double diff = ka * a - kb * b;
    r.statistic += diff * diff / (a + b);
  }
  r.dof = static_cast<double>(pooled.size() - 1);
  r.p_value = chi_squared_survival(r.dof, r.statistic);
  return r;
}

std::vector<double> bootstrap(std::size_t n, std::size_t resamples, std::uint64_t seed,
                              const std::function<double(std::span<const std::size_t>)>& stat) {
  std::vector<double> out;
  out.reserve(resamples);
  std::vector<std::size_t> idx(n);
  for (std::size_t r = 0; r < resamples; ++r) {
    auto rng = make_stream(seed, stream_purpose::bootstrap, r);
    for (auto& i : idx) i = static_cast<std::size_t>(rng.below(n));
    out.push_back(stat(idx));
  }
  return out;
}

double sample_sd(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  auto m = mean_se(x);
  return m.se * std::sqrt(m.n);
}

double quantile(std::vector<double> x, double q) {
  if (x.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(x.begin(), x.end());
  const double pos = q * static_cast<double>(x.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, x.size() - 1);
  return x[lo] + (pos - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

}  // namespace qsd
