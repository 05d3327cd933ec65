#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace qsd {

struct MomentRatio {
  int n = 0;
  double estimate = 0.0;  // E[tau^{n+1}] / ((n + 1) E[tau^n])
  double ci_lo = 0.0, ci_hi = 0.0;
  std::size_t used = 0;
  std::size_t excluded_censored = 0;
  double ess = 0.0;        // Kish size of the tau^{n+1} weights
  bool unstable = false;   // ess below the threshold
};

struct MomentRatioOptions {
  std::size_t bootstrap = 400;
  std::uint64_t seed = 0;
  double confidence = 0.997;
  double min_ess = 30.0;
};

/// log of the empirical k-th moment, from logs of the samples.
double log_empirical_moment(std::span<const double> log_tau, int k);

/// Estimates E_{nu_n}[tau] from hitting times drawn under nu; censored
/// samples are dropped and counted. Moments are handled in log space.
MomentRatio tau_moment_ratio(std::span<const double> tau, std::span<const char> censored, int n,
                             const MomentRatioOptions& opt = {});

}  // namespace qsd
