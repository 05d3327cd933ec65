#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace qsd {

struct MeanEstimate {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean
  double n = 0.0;   // sample size (effective size when weighted)
};

MeanEstimate mean_se(std::span<const double> x);
/// Weighted mean with Kish effective sample size (sum w)^2 / sum w^2.
MeanEstimate weighted_mean_se(std::span<const double> x, std::span<const double> w);
/// Covariance estimate with its standard error, from paired samples.
MeanEstimate covariance_se(std::span<const double> x, std::span<const double> y);

/// Wilson score interval for k successes in n trials at z standard deviations.
std::pair<double, double> wilson_interval(double k, double n, double z);

/// log(sum exp(x)), -inf for an empty range.
double log_sum_exp(std::span<const double> x);

/// Kolmogorov-Smirnov distance between the empirical law of `x` and
/// Exp(rate). Zero samples count as an atom at the origin.
double ks_distance_exponential(std::span<const double> x, double rate);
/// Asymptotic Kolmogorov survival function P(K > s).
double kolmogorov_survival(double s);
/// Two-sided KS p-value for distance d on n samples (Stephens' correction).
double ks_pvalue(double d, double n);
/// Critical distance at level alpha for n samples.
double ks_critical(double n, double alpha = 0.05);

/// Upper quantile of the chi-squared distribution.
double chi_squared_quantile(double dof, double p);
/// P(X > x) for chi-squared with `dof` degrees of freedom.
double chi_squared_survival(double dof, double x);

struct ChiSquaredResult {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
};

/// Two-sample chi-squared homogeneity test between histograms with sample
/// sizes n_a and n_b (counts given as probabilities times size). Adjacent
/// bins are pooled until each pooled bin has at least `min_expected` counts.
ChiSquaredResult chi_squared_two_sample(std::span<const double> prob_a, double n_a,
                                        std::span<const double> prob_b, double n_b,
                                        double min_expected = 5.0);

/// Nonparametric bootstrap: calls stat(indices) for `resamples` resamples of
/// {0..n-1} drawn with replacement from stream (seed, bootstrap, r) and
/// returns the statistics in resample order.
std::vector<double> bootstrap(std::size_t n, std::size_t resamples, std::uint64_t seed,
                              const std::function<double(std::span<const std::size_t>)>& stat);

double sample_sd(std::span<const double> x);
/// Linear-interpolated empirical quantile, q in [0, 1].
double quantile(std::vector<double> x, double q);

}  // namespace qsd
