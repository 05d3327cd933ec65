#include "qsd/stats/survival_curve.hpp"

#include <algorithm>
#include <stdexcept>

#include "qsd/stats/stats.hpp"

namespace qsd {

SurvivalCurve survival_from_samples(std::span<const double> tau, std::span<const char> censored,
                                    std::span<const double> t_grid, double t_max, double z) {
  if (tau.size() != censored.size()) throw std::invalid_argument("survival curve: size mismatch");
  if (!std::is_sorted(t_grid.begin(), t_grid.end()))
    throw std::invalid_argument("survival curve: time grid must be increasing");
  SurvivalCurve c;
  c.t.assign(t_grid.begin(), t_grid.end());
  c.n_total = tau.size();
  c.t_max = t_max;
  c.tau.assign(tau.begin(), tau.end());
  c.censored.assign(censored.begin(), censored.end());
  c.n_censored = static_cast<std::size_t>(std::count(censored.begin(), censored.end(), char{1}));

  // Uncensored times sorted once; alive(t) = #{tau > t} + #censored for
  // t <= t_max, so nested evaluation on one sample set is monotone.
  std::vector<double> hit;
  for (std::size_t i = 0; i < tau.size(); ++i)
    if (!censored[i]) hit.push_back(tau[i]);
  std::sort(hit.begin(), hit.end());
  const double n = static_cast<double>(c.n_total);
  for (double t : t_grid) {
    const auto above = static_cast<std::size_t>(hit.end() - std::upper_bound(hit.begin(), hit.end(), t));
    const std::size_t alive = above + (t <= t_max ? c.n_censored : 0);
    c.n_alive.push_back(alive);
    c.estimate.push_back(n > 0 ? static_cast<double>(alive) / n : 0.0);
    auto [lo, hi] = wilson_interval(static_cast<double>(alive), n, z);
    c.ci_lo.push_back(lo);
    c.ci_hi.push_back(hi);
  }
  return c;
}

SurvivalCurve exact_survival_curve(std::span<const double> t_grid, std::span<const double> values) {
  if (t_grid.size() != values.size()) throw std::invalid_argument("survival curve: size mismatch");
  SurvivalCurve c;
  c.t.assign(t_grid.begin(), t_grid.end());
  c.estimate.assign(values.begin(), values.end());
  c.ci_lo = c.estimate;
  c.ci_hi = c.estimate;
  c.n_alive.assign(values.size(), 0);
  c.t_max = t_grid.empty() ? 0.0 : t_grid.back();
  return c;
}

}  // namespace qsd
