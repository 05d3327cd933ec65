#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsd/measures/ensemble.hpp"
#include "qsd/measures/observables.hpp"
#include "qsd/measures/product_measure.hpp"

namespace qsd {

/// Every configuration of the (truncated) product measure, with its
/// probability. Uses the marginal table at tolerance `tol`; refuses more
/// than `limit` states.
WeightedEnsemble enumerate_product(const OccupancyFunction& g, double gamma, std::size_t num_sites,
                                   double tol = 1e-16, std::size_t limit = 2'000'000);

struct CovarianceReport {
  double covariance = 0.0;
  double se = 0.0;
  bool passed = true;  // covariance >= -z se
};

/// Monte Carlo covariance of f and g under the measure.
CovarianceReport fkg_test(const ProductMeasure& m, const Observable& f, const Observable& g,
                          std::size_t n_samples, std::uint64_t seed, double z = 3.0);
/// Covariance under an exact ensemble.
double exact_covariance(const WeightedEnsemble& e, const Observable& f, const Observable& g);

struct SizeBiasReport {
  double lhs = 0.0, lhs_se = 0.0;  // E[g(eta_i) phi]
  double rhs = 0.0, rhs_se = 0.0;  // gamma E[phi(eta + delta_i)]
  double diff = 0.0, diff_se = 0.0;
  bool identity_passed = true;
  // The inequality form E[eta_i phi] >= (gamma / Delta) E[phi(eta + delta_i)],
  // meaningful for phi >= 0.
  double bis_lhs = 0.0, bis_rhs = 0.0, bis_se = 0.0;
  bool inequality_applicable = true;
  bool inequality_passed = true;
};

/// Both sides estimated on the same samples; the identity is tested through
/// the paired difference at z standard errors.
SizeBiasReport size_bias_check(const ProductMeasure& m, const OccupancyFunction& g, double delta,
                               Site i, const Observable& phi, std::size_t n_samples,
                               std::uint64_t seed, double z = 3.0);
/// The same quantities by exhaustive enumeration (se = 0); the identity
/// passes when |lhs - rhs| <= tol.
SizeBiasReport size_bias_exact(const OccupancyFunction& g, double gamma, std::size_t num_sites,
                               double delta, Site i, const Observable& phi, double tol = 1e-12);

struct DominationRow {
  std::string name;
  double value = 0.0, value_se = 0.0;
  double reference = 0.0, reference_se = 0.0;
  double excess_sigma = 0.0;  // (value - reference) / joint se
  bool violated = false;
};

struct DominationReport {
  std::vector<DominationRow> rows;
  std::size_t violations = 0;
  bool passed() const noexcept { return violations == 0; }
};

/// E_e[phi] <= E_ref[phi] + z sigma for each phi in the suite. When both
/// sides are exact the slack is `exact_tol`.
DominationReport domination_test(const WeightedEnsemble& e, const WeightedEnsemble& reference,
                                 const std::vector<NamedObservable>& suite, double z = 3.0,
                                 double exact_tol = 1e-12);

}  // namespace qsd
