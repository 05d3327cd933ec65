#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qsd {

/// Empirical (or exact) survival function on a time grid.
///
/// For Monte Carlo curves `tau` holds one hitting time per trajectory and
/// `censored[i]` marks trajectories still alive at `t_max`; exact curves have
/// n_total == 0 and no samples.
struct SurvivalCurve {
  std::vector<double> t;
  std::vector<double> estimate;
  std::vector<double> ci_lo;
  std::vector<double> ci_hi;
  std::vector<std::size_t> n_alive;
  std::size_t n_total = 0;
  std::size_t n_censored = 0;
  double t_max = 0.0;
  std::vector<double> tau;
  std::vector<char> censored;

  bool exact() const noexcept { return n_total == 0; }
  double censoring_fraction() const noexcept {
    return n_total ? static_cast<double>(n_censored) / static_cast<double>(n_total) : 0.0;
  }
};

/// Builds the curve P(tau > t) from hitting times; censored samples count as
/// alive for every t <= t_max. Pointwise Wilson intervals at z.
SurvivalCurve survival_from_samples(std::span<const double> tau, std::span<const char> censored,
                                    std::span<const double> t_grid, double t_max, double z = 3.0);

/// Curve from exact values (no sampling error).
SurvivalCurve exact_survival_curve(std::span<const double> t_grid, std::span<const double> values);

}  // namespace qsd
