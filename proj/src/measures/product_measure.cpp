#include "qsd/measures/product_measure.hpp"

#include <algorithm>
#include <cmath>

#include "qsd/core/error.hpp"

namespace qsd {
namespace {
constexpr long kMaxRejections = 1'000'000;
}

ProductMeasure::ProductMeasure(const OccupancyFunction& g, double rho, std::size_t num_sites)
    : marginal_(invert_density(rho, g), g), rho_(rho), num_sites_(num_sites) {}

ProductMeasure ProductMeasure::from_fugacity(const OccupancyFunction& g, double gamma,
                                             std::size_t num_sites) {
  Marginal m(gamma, g);
  const double rho = m.mean();
  return ProductMeasure(std::move(m), rho, num_sites);
}

ProductMeasure ProductMeasure::conditioned(TotalWindow window) const {
  if (window.min_total < 0 || window.max_total < window.min_total)
    throw DomainError("empty particle-number window");
  ProductMeasure out = *this;
  const auto law = total_distribution(marginal_, num_sites_, window.max_total);
  double mass = 0.0;
  for (long n = window.min_total; n <= window.max_total; ++n) mass += law[static_cast<std::size_t>(n)];
  if (!(mass > 0.0)) throw DomainError("particle-number window has zero probability");
  out.window_ = window;
  out.window_mass_ = mass;
  return out;
}

double ProductMeasure::probability(const Configuration& c) const noexcept {
  if (window_ && !window_->contains(c.total())) return 0.0;
  double p = 1.0;
  for (std::size_t s = 0; s < c.size(); ++s) p *= marginal_(c[s]);
  return p / window_mass_;
}

Configuration ProductMeasure::sample(Philox4x32& rng) const {
  std::vector<int> occ(num_sites_);
  for (long attempt = 0; attempt < kMaxRejections; ++attempt) {
    long total = 0;
    for (auto& o : occ) {
      o = marginal_.quantile(rng.uniform());
      total += o;
    }
    if (!window_ || window_->contains(total)) return Configuration(occ);
  }
  throw DomainError("rejection sampler exhausted; particle-number window too unlikely");
}

std::vector<double> total_distribution(const Marginal& m, std::size_t num_sites, long max_total) {
  const auto cap = static_cast<std::size_t>(max_total);
  std::vector<double> law(cap + 1, 0.0);
  law[0] = 1.0;
  const auto& p = m.probabilities();
  for (std::size_t s = 0; s < num_sites; ++s) {
    std::vector<double> next(cap + 1, 0.0);
    for (std::size_t a = 0; a <= cap; ++a) {
      if (law[a] == 0.0) continue;
      for (std::size_t k = 0; k < p.size() && a + k <= cap; ++k) next[a + k] += law[a] * p[k];
    }
    law.swap(next);
  }
  return law;
}

Configuration sample_canonical_exclusion(std::size_t num_sites, long n, Philox4x32& rng) {
  if (n < 0 || static_cast<std::size_t>(n) > num_sites)
    throw DomainError("particle number exceeds the number of sites");
  // Partial Fisher-Yates over site indices.
  std::vector<std::size_t> idx(num_sites);
  for (std::size_t i = 0; i < num_sites; ++i) idx[i] = i;
  std::vector<int> occ(num_sites, 0);
  for (long k = 0; k < n; ++k) {
    const auto j = static_cast<std::size_t>(k) + rng.below(num_sites - static_cast<std::size_t>(k));
    std::swap(idx[static_cast<std::size_t>(k)], idx[j]);
    occ[idx[static_cast<std::size_t>(k)]] = 1;
  }
  return Configuration(occ);
}

}  // namespace qsd
