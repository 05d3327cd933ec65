#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qsd/measures/ensemble.hpp"
#include "qsd/model/model.hpp"

namespace qsd {

struct SiteDistance {
  Site site = 0;
  double distance = 0.0;  // sum (pa - pb)^2 / (pa + pb) over occupancy bins
  double chi2 = 0.0;      // test statistic; zero when both sides are exact
  double dof = 0.0;
  double p_value = 1.0;
};

struct WindowGap {
  int radius = 0;
  double mean_a = 0.0, se_a = 0.0;
  double mean_b = 0.0, se_b = 0.0;
  double gap = 0.0;  // |mean_a - mean_b|
  double z = 0.0;    // gap / joint se (0 when both exact)
};

struct EnsembleDistance {
  std::vector<SiteDistance> sites;
  std::vector<WindowGap> windows;
  std::optional<double> ks_tau;  // KS of tau samples against Exp(lambda)

  double max_distance() const noexcept;
  double min_p_value() const noexcept;
  double max_window_z() const noexcept;
};

/// Number of independent units behind an ensemble: distinct clusters when
/// present, otherwise the Kish effective size.
double independent_units(const WeightedEnsemble& e);

/// Per-site occupancy histograms (chi-square with pooled bins) and window
/// sums over the target region dilated up to `dilation`. An exact side
/// turns the two-sample test into a goodness-of-fit test.
EnsembleDistance ensemble_compare(const WeightedEnsemble& a, const WeightedEnsemble& b,
                                  const Model& model, std::span<const Site> sites, int dilation = 1,
                                  std::span<const double> tau = {}, double lambda = 0.0);

}  // namespace qsd
