#include "qsd/estimators/ensemble_compare.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "qsd/measures/observables.hpp"
#include "qsd/stats/stats.hpp"

namespace qsd {
namespace {

int max_occupancy(const WeightedEnsemble& e, Site s) {
  int m = 0;
  for (const auto& a : e.atoms()) m = std::max(m, a[s]);
  return m;
}

// Goodness of fit of an n-sample histogram against exact probabilities,
// pooling bins until n p >= 5.
ChiSquaredResult one_sample(std::span<const double> obs, double n, std::span<const double> exact) {
  ChiSquaredResult r;
  std::vector<std::pair<double, double>> pooled;
  double o = 0, p = 0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    o += obs[i];
    p += exact[i];
    if (n * p >= 5.0) {
      pooled.emplace_back(o, p);
      o = p = 0;
    }
  }
  if (p > 0 || o > 0) {
    if (pooled.empty()) pooled.emplace_back(o, p);
    else {
      pooled.back().first += o;
      pooled.back().second += p;
    }
  }
  if (pooled.size() < 2) return r;
  for (auto [oo, pp] : pooled)
    if (pp > 0) r.statistic += n * (oo - pp) * (oo - pp) / pp;
  r.dof = static_cast<double>(pooled.size() - 1);
  r.p_value = chi_squared_survival(r.dof, r.statistic);
  return r;
}

}  // namespace

double EnsembleDistance::max_distance() const noexcept {
  double m = 0;
  for (const auto& s : sites) m = std::max(m, s.distance);
  return m;
}

double EnsembleDistance::min_p_value() const noexcept {
  double m = 1;
  for (const auto& s : sites) m = std::min(m, s.p_value);
  return m;
}

double EnsembleDistance::max_window_z() const noexcept {
  double m = 0;
  for (const auto& w : windows) m = std::max(m, w.z);
  return m;
}

double independent_units(const WeightedEnsemble& e) {
  if (e.clusters().empty()) return e.effective_size();
  std::unordered_set<std::uint32_t> ids(e.clusters().begin(), e.clusters().end());
  return std::min(static_cast<double>(ids.size()), e.effective_size());
}

EnsembleDistance ensemble_compare(const WeightedEnsemble& a, const WeightedEnsemble& b,
                                  const Model& model, std::span<const Site> sites, int dilation,
                                  std::span<const double> tau, double lambda) {
  EnsembleDistance d;
  const double na = independent_units(a), nb = independent_units(b);
  for (Site s : sites) {
    const int top = std::max(max_occupancy(a, s), max_occupancy(b, s));
    auto pa = a.site_marginal(s, top);
    auto pb = b.site_marginal(s, top);
    SiteDistance sd;
    sd.site = s;
    for (int k = 0; k <= top; ++k) {
      const double sum = pa[k] + pb[k];
      if (sum > 0) sd.distance += (pa[k] - pb[k]) * (pa[k] - pb[k]) / sum;
    }
    ChiSquaredResult r;
    if (a.is_exact() && !b.is_exact()) r = one_sample(pb, nb, pa);
    else if (!a.is_exact() && b.is_exact()) r = one_sample(pa, na, pb);
    else if (!a.is_exact() && !b.is_exact()) r = chi_squared_two_sample(pa, na, pb, nb);
    sd.chi2 = r.statistic;
    sd.dof = r.dof;
    sd.p_value = r.p_value;
    d.sites.push_back(sd);
  }
  const auto& region = model.target().region();
  for (int r = 0; r <= dilation; ++r) {
    auto f = window_sum(dilate(model.lattice(), region, r));
    auto ea = a.estimate(f), eb = b.estimate(f);
    WindowGap w;
    w.radius = r;
    w.mean_a = ea.mean;
    w.se_a = ea.se;
    w.mean_b = eb.mean;
    w.se_b = eb.se;
    w.gap = std::abs(ea.mean - eb.mean);
    const double se = std::hypot(ea.se, eb.se);
    w.z = se > 0 ? w.gap / se : 0.0;
    d.windows.push_back(w);
  }
  if (!tau.empty() && lambda > 0) d.ks_tau = ks_distance_exponential(tau, lambda);
  return d;
}

}  // namespace qsd
