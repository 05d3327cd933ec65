#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "qsd/stats/survival_curve.hpp"

namespace qsd {

struct DecayFitOptions {
  std::size_t alive_floor = 100;  // Monte Carlo points need this many survivors
  std::size_t min_points = 5;
  std::size_t bootstrap = 200;    // resamples for the standard error (0: analytic)
  std::uint64_t seed = 0;
  std::optional<double> t_lo;     // manual window overrides
  std::optional<double> t_hi;
};

struct DecayFit {
  double lambda = 0.0;
  double se = 0.0;
  double intercept = 0.0;  // log P at t = 0 of the fitted line
  double t_lo = 0.0;
  double t_hi = 0.0;
  double r2 = 1.0;
  std::size_t n_alive_hi = 0;
  std::size_t n_points = 0;
  double reduced_chi2 = 0.0;
};

/// Weighted least squares of log P against t.
///
/// The window ends at the last grid point whose survivor count meets the
/// floor (exact curves: the last positive point). Its start is the earliest
/// grid point from which the fit is consistent with a pure exponential: for
/// Monte Carlo curves the reduced chi-square is within three of its own
/// standard deviations of 1; for exact curves the residuals are at rounding
/// level. When no start qualifies the latest admissible start is used, which
/// tracks the asymptotic slope for curves with polynomial corrections.
/// Throws EstimationError when fewer than min_points points qualify.
DecayFit fit_decay(const SurvivalCurve& curve, const DecayFitOptions& opt = {});

}  // namespace qsd
