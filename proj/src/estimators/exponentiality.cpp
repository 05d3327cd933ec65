#include "qsd/estimators/exponentiality.hpp"

#include <algorithm>
#include <cmath>

#include "qsd/stats/stats.hpp"

namespace qsd {

ExponentialityReport exponentiality_report(std::span<const double> tau, double lambda,
                                           const ExponentialityOptions& opt) {
  ExponentialityReport r;
  r.lambda = lambda;
  r.n = tau.size();
  if (tau.empty()) return r;
  const double n = static_cast<double>(tau.size());
  r.atom_at_zero = static_cast<double>(std::count(tau.begin(), tau.end(), 0.0)) / n;
  const double tail = 0.5 * (1.0 - opt.confidence);
  double fact = 1.0;
  for (int k = 1; k <= opt.max_moment; ++k) {
    fact *= k;
    MomentRow row;
    row.k = k;
    // Moments in log space so large tau^k cannot overflow.
    auto log_moment = [&](std::span<const std::size_t> idx) {
      std::vector<double> lv;
      lv.reserve(idx.size());
      for (auto i : idx)
        if (tau[i] > 0.0) lv.push_back(k * std::log(tau[i]));
      return lv.empty() ? -INFINITY : log_sum_exp(lv) - std::log(static_cast<double>(idx.size()));
    };
    std::vector<std::size_t> all(tau.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    const double log_expected = std::log(fact) - k * std::log(lambda);
    row.empirical = std::exp(log_moment(all));
    row.expected = std::exp(log_expected);
    row.ratio = std::exp(log_moment(all) - log_expected);
    if (opt.bootstrap > 1) {
      auto ratios = bootstrap(tau.size(), opt.bootstrap, opt.seed + static_cast<std::uint64_t>(k),
                              [&](std::span<const std::size_t> idx) {
                                return std::exp(log_moment(idx) - log_expected);
                              });
      row.ci_lo = quantile(ratios, tail);
      row.ci_hi = quantile(ratios, 1.0 - tail);
      row.consistent = row.ci_lo <= 1.0 && 1.0 <= row.ci_hi;
    }
    r.moments.push_back(row);
  }
  r.ks = ks_distance_exponential(tau, lambda);
  r.ks_critical = ks_critical(n, opt.alpha);
  r.ks_pvalue = ks_pvalue(r.ks, n);
  r.exponential = r.ks <= r.ks_critical;
  return r;
}

std::vector<TrendRow> exponentiality_trend(const std::vector<std::vector<double>>& tau_by_iteration,
                                           double lambda, const ExponentialityOptions& opt) {
  std::vector<TrendRow> rows;
  for (std::size_t it = 0; it < tau_by_iteration.size(); ++it) {
    const auto& tau = tau_by_iteration[it];
    TrendRow row;
    row.iteration = it;
    if (!tau.empty()) {
      const double n = static_cast<double>(tau.size());
      row.mean_tau = mean_se(tau).mean;
      row.ks = ks_distance_exponential(tau, lambda);
      row.ks_critical = ks_critical(n, opt.alpha);
      row.atom_at_zero = static_cast<double>(std::count(tau.begin(), tau.end(), 0.0)) / n;
      row.exponential = row.ks <= row.ks_critical;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qsd
