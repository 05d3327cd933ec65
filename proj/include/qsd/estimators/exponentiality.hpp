#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qsd {

struct MomentRow {
  int k = 0;
  double empirical = 0.0;  // mean of tau^k
  double expected = 0.0;   // k! / lambda^k
  double ratio = 0.0;      // empirical / expected
  double ci_lo = 0.0;      // bootstrap percentile interval of the ratio
  double ci_hi = 0.0;
  bool consistent = true;  // 1 inside the interval
};

struct ExponentialityReport {
  double lambda = 0.0;
  std::size_t n = 0;
  std::vector<MomentRow> moments;  // k = 1..4
  double ks = 0.0;
  double ks_critical = 0.0;
  double ks_pvalue = 1.0;
  double atom_at_zero = 0.0;       // fraction of tau == 0
  bool exponential = true;         // KS distance below the critical value
};

struct ExponentialityOptions {
  int max_moment = 4;
  std::size_t bootstrap = 200;
  std::uint64_t seed = 0;
  double alpha = 0.05;             // KS level
  double confidence = 0.997;       // two-sided level of the moment intervals
};

/// Compares the empirical law of uncensored hitting times with Exp(lambda):
/// moment ratios E[tau^k] / (k! / lambda^k) with bootstrap intervals, the KS
/// distance and its asymptotic critical value.
ExponentialityReport exponentiality_report(std::span<const double> tau, double lambda,
                                           const ExponentialityOptions& opt = {});

struct TrendRow {
  std::size_t iteration = 0;
  double mean_tau = 0.0;
  double ks = 0.0;
  double ks_critical = 0.0;
  double atom_at_zero = 0.0;
  bool exponential = true;
};

/// One report row per iterate, all against the same lambda.
std::vector<TrendRow> exponentiality_trend(const std::vector<std::vector<double>>& tau_by_iteration,
                                           double lambda, const ExponentialityOptions& opt = {});

}  // namespace qsd
