#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qsd/core/rng.hpp"
#include "qsd/measures/product_measure.hpp"
#include "qsd/model/configuration.hpp"
#include "qsd/stats/stats.hpp"

namespace qsd {

using Observable = std::function<double(const Configuration&)>;

/// Weighted empirical measure over configurations.
///
/// Atoms may carry a cluster id (the trajectory that produced them). Atoms
/// sharing a cluster are dependent, so standard errors are computed with the
/// cluster-robust linearization of the ratio estimator. Exact ensembles
/// (enumerated support with true probabilities) report zero error.
class WeightedEnsemble {
 public:
  WeightedEnsemble() = default;
  WeightedEnsemble(std::vector<Configuration> atoms, std::vector<double> weights,
                   std::vector<std::uint32_t> clusters = {});
  static WeightedEnsemble uniform(std::vector<Configuration> atoms);
  static WeightedEnsemble exact(std::vector<Configuration> atoms, std::vector<double> probabilities);

  std::size_t size() const noexcept { return atoms_.size(); }
  bool empty() const noexcept { return atoms_.empty(); }
  std::size_t num_sites() const noexcept { return atoms_.empty() ? 0 : atoms_.front().size(); }
  const std::vector<Configuration>& atoms() const noexcept { return atoms_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<std::uint32_t>& clusters() const noexcept { return clusters_; }
  const Configuration& atom(std::size_t i) const noexcept { return atoms_[i]; }
  double weight(std::size_t i) const noexcept { return weights_[i]; }
  double normalization() const noexcept { return total_; }
  bool is_exact() const noexcept { return exact_; }

  double censoring_fraction() const noexcept { return censoring_; }
  void set_censoring_fraction(double f) noexcept { censoring_ = f; }

  double expectation(const Observable& f) const;
  /// Expectation with standard error; n is the number of independent units.
  MeanEstimate estimate(const Observable& f) const;
  /// Kish effective sample size of the weights.
  double effective_size() const noexcept;
  /// Index of the atom whose cumulative weight interval contains u * total.
  std::size_t locate(double u) const noexcept;
  /// Law of eta(s) under the ensemble, bins 0..max_n (the last bin collects
  /// everything above).
  std::vector<double> site_marginal(Site s, int max_n) const;

 private:
  std::vector<Configuration> atoms_;
  std::vector<double> weights_;
  std::vector<std::uint32_t> clusters_;
  std::vector<double> cumulative_;
  double total_ = 0.0;
  double censoring_ = 0.0;
  bool exact_ = false;
};

/// n i.i.d. draws from the measure; draw i uses stream (seed, sampling, i).
WeightedEnsemble sample_ensemble(const ProductMeasure& m, std::size_t n, std::uint64_t seed,
                                 unsigned workers = 1);

/// Systematic resampling to n equally weighted atoms; clusters are kept.
WeightedEnsemble systematic_resample(const WeightedEnsemble& e, std::size_t n, Philox4x32& rng);

/// Equal-weight mixture of normalized ensembles, merged in input order.
WeightedEnsemble cesaro_mixture(std::span<const WeightedEnsemble> parts);

}  // namespace qsd
