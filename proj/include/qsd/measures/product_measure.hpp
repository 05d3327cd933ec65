#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qsd/core/rng.hpp"
#include "qsd/measures/marginal.hpp"
#include "qsd/model/configuration.hpp"
#include "qsd/model/lattice.hpp"

namespace qsd {

/// Inclusive range of total particle numbers a measure is conditioned on.
struct TotalWindow {
  long min_total = 0;
  long max_total = 0;
  bool contains(long n) const noexcept { return n >= min_total && n <= max_total; }
};

/// nu_rho on a finite lattice: i.i.d. sites with law theta_{gamma(rho)},
/// optionally conditioned on the total particle number lying in a window.
/// Conditioning on the total keeps the measure invariant for conservative
/// dynamics on a torus, which is how toy models exclude the sectors that
/// can never reach the target.
class ProductMeasure {
 public:
  ProductMeasure(const OccupancyFunction& g, double rho, std::size_t num_sites);
  static ProductMeasure from_fugacity(const OccupancyFunction& g, double gamma,
                                      std::size_t num_sites);

  /// The same measure conditioned on the window; throws DomainError when the
  /// window has no mass.
  ProductMeasure conditioned(TotalWindow window) const;

  double rho() const noexcept { return rho_; }
  double gamma() const noexcept { return marginal_.gamma(); }
  const Marginal& marginal() const noexcept { return marginal_; }
  std::size_t num_sites() const noexcept { return num_sites_; }
  const std::optional<TotalWindow>& window() const noexcept { return window_; }
  /// Unconditioned probability of the window (1 without a window).
  double window_mass() const noexcept { return window_mass_; }

  /// Probability of one configuration (0 outside the window).
  double probability(const Configuration& c) const noexcept;

  /// i.i.d. inverse-CDF draw; rejection on the window when conditioned.
  Configuration sample(Philox4x32& rng) const;

 private:
  ProductMeasure(Marginal m, double rho, std::size_t num_sites)
      : marginal_(std::move(m)), rho_(rho), num_sites_(num_sites) {}

  Marginal marginal_;
  double rho_;
  std::size_t num_sites_;
  std::optional<TotalWindow> window_;
  double window_mass_ = 1.0;
};

/// Free-function form of ProductMeasure::sample.
inline Configuration sample_product(const ProductMeasure& m, Philox4x32& rng) {
  return m.sample(rng);
}

/// Law of the total particle number over num_sites i.i.d. sites, truncated
/// at `max_total`.
std::vector<double> total_distribution(const Marginal& m, std::size_t num_sites, long max_total);

/// Uniform configuration with exactly n particles on a {0,1}-valued lattice,
/// the canonical initial law of the circle example.
Configuration sample_canonical_exclusion(std::size_t num_sites, long n, Philox4x32& rng);

}  // namespace qsd
