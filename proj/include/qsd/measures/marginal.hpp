#pragma once

#include <vector>

#include "qsd/model/rates.hpp"

namespace qsd {

inline constexpr double kMarginalTolerance = 1e-12;

struct PartitionValue {
  double z = 1.0;
  int n_max = 0;
  double tail_bound = 0.0;  // bound on the dropped mass relative to z
};

/// Z(gamma) = sum_n gamma^n / (g(1)...g(n)), truncated once the geometric
/// tail bound term * r / (1 - r), r = gamma / g(n + 1), falls below tol * Z.
/// Throws DomainError when gamma >= sup g.
PartitionValue partition_function(double gamma, const OccupancyFunction& g,
                                  double tol = kMarginalTolerance);

/// The one-site law theta_gamma(n) proportional to gamma^n / (g(1)...g(n)).
class Marginal {
 public:
  Marginal(double gamma, const OccupancyFunction& g, double tol = kMarginalTolerance);

  double gamma() const noexcept { return gamma_; }
  double z() const noexcept { return z_; }
  int n_max() const noexcept { return static_cast<int>(prob_.size()) - 1; }
  double tail_bound() const noexcept { return tail_bound_; }
  const std::vector<double>& probabilities() const noexcept { return prob_; }
  double operator()(int n) const noexcept {
    return n >= 0 && n < static_cast<int>(prob_.size()) ? prob_[n] : 0.0;
  }
  /// Inverse CDF on the truncated table.
  int quantile(double u) const noexcept;

  double mean() const noexcept;
  double second_moment() const noexcept;
  /// E[g(eta)], which equals gamma for the untruncated law.
  double mean_g(const OccupancyFunction& g) const noexcept;

 private:
  double gamma_;
  double z_;
  double tail_bound_;
  std::vector<double> prob_;
  std::vector<double> cdf_;
};

/// Upsilon(gamma): the mean occupancy under theta_gamma.
double density_of(double gamma, const OccupancyFunction& g);
/// sup over gamma of Upsilon; +inf when unbounded.
double density_supremum(const OccupancyFunction& g);
/// gamma(rho) by bisection to |Upsilon(gamma) - rho| <= 1e-10. Throws
/// DomainError for rho < 0 or rho within 1e-6 of the supremum.
double invert_density(double rho, const OccupancyFunction& g);

}  // namespace qsd
