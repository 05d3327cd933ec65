#include "qsd/phi/moments.hpp"

#include <cmath>

#include "qsd/core/error.hpp"
#include "qsd/stats/stats.hpp"

namespace qsd {

double log_empirical_moment(std::span<const double> log_tau, int k) {
  if (k == 0) return 0.0;  // tau^0 = 1, including tau = 0
  std::vector<double> v(log_tau.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = k * log_tau[i];
  return log_sum_exp(v) - std::log(static_cast<double>(v.size()));
}

MomentRatio tau_moment_ratio(std::span<const double> tau, std::span<const char> censored, int n,
                             const MomentRatioOptions& opt) {
  if (n < 0) throw ValidationError("moment order must be nonnegative");
  MomentRatio r;
  r.n = n;
  std::vector<double> lt;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    if (!censored.empty() && censored[i]) {
      ++r.excluded_censored;
      continue;
    }
    lt.push_back(tau[i] > 0 ? std::log(tau[i]) : -INFINITY);
  }
  r.used = lt.size();
  if (lt.empty()) throw EstimationError("no uncensored hitting times");
  auto ratio = [n](std::span<const double> l) {
    return std::exp(log_empirical_moment(l, n + 1) - log_empirical_moment(l, n) - std::log(n + 1.0));
  };
  r.estimate = ratio(lt);
  {
    std::vector<double> w(lt.size()), w2(lt.size());
    for (std::size_t i = 0; i < lt.size(); ++i) {
      w[i] = (n + 1) * lt[i];
      w2[i] = 2.0 * w[i];
    }
    r.ess = std::exp(2.0 * log_sum_exp(w) - log_sum_exp(w2));
  }
  r.unstable = r.ess < opt.min_ess;
  if (opt.bootstrap > 0) {
    std::vector<double> buf(lt.size());
    auto reps = bootstrap(lt.size(), opt.bootstrap, opt.seed, [&](std::span<const std::size_t> idx) {
      for (std::size_t i = 0; i < idx.size(); ++i) buf[i] = lt[idx[i]];
      return ratio(buf);
    });
    const double a = (1.0 - opt.confidence) / 2.0;
    r.ci_lo = quantile(reps, a);
    r.ci_hi = quantile(reps, 1.0 - a);
  } else {
    r.ci_lo = r.ci_hi = r.estimate;
  }
  return r;
}

}  // namespace qsd
