#include "qsd/measures/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "qsd/core/error.hpp"
#include "qsd/core/parallel.hpp"

namespace qsd {

WeightedEnsemble::WeightedEnsemble(std::vector<Configuration> atoms, std::vector<double> weights,
                                   std::vector<std::uint32_t> clusters)
    : atoms_(std::move(atoms)), weights_(std::move(weights)), clusters_(std::move(clusters)) {
  if (atoms_.size() != weights_.size()) throw ValidationError("ensemble: atoms and weights differ in length");
  if (!clusters_.empty() && clusters_.size() != atoms_.size())
    throw ValidationError("ensemble: cluster ids and atoms differ in length");
  cumulative_.resize(weights_.size());
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const double w = weights_[i];
    if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("ensemble: weights must be finite and nonnegative");
    total_ += w;
    cumulative_[i] = total_;
    if (atoms_[i].size() != atoms_.front().size()) throw ValidationError("ensemble: atoms on different lattices");
  }
  if (!atoms_.empty() && !(total_ > 0.0)) throw ValidationError("ensemble: no positive weight");
}

WeightedEnsemble WeightedEnsemble::uniform(std::vector<Configuration> atoms) {
  std::vector<double> w(atoms.size(), 1.0);
  return WeightedEnsemble(std::move(atoms), std::move(w));
}

WeightedEnsemble WeightedEnsemble::exact(std::vector<Configuration> atoms,
                                         std::vector<double> probabilities) {
  WeightedEnsemble e(std::move(atoms), std::move(probabilities));
  e.exact_ = true;
  return e;
}

double WeightedEnsemble::expectation(const Observable& f) const {
  double s = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    if (weights_[i] > 0.0) s += weights_[i] * f(atoms_[i]);
  return s / total_;
}

MeanEstimate WeightedEnsemble::estimate(const Observable& f) const {
  MeanEstimate r;
  if (atoms_.empty()) return r;
  std::vector<double> v(atoms_.size(), 0.0);
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    if (weights_[i] > 0.0) v[i] = f(atoms_[i]);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += weights_[i] * v[i];
  r.mean = s / total_;
  if (exact_) {
    r.n = static_cast<double>(atoms_.size());
    return r;
  }
  if (clusters_.empty()) return weighted_mean_se(v, weights_);
  // Ratio-estimator linearization over clusters.
  std::unordered_map<std::uint32_t, std::pair<double, double>> by;  // (sum w v, sum w)
  for (std::size_t i = 0; i < v.size(); ++i) {
    auto& [y, w] = by[clusters_[i]];
    y += weights_[i] * v[i];
    w += weights_[i];
  }
  const double c = static_cast<double>(by.size());
  r.n = c;
  if (by.size() < 2) return r;
  double ss = 0.0;
  for (const auto& [id, yw] : by) {
    const double d = yw.first - r.mean * yw.second;
    ss += d * d;
  }
  r.se = std::sqrt(ss * c / (c - 1.0)) / total_;
  return r;
}

double WeightedEnsemble::effective_size() const noexcept {
  double s2 = 0.0;
  for (double w : weights_) s2 += w * w;
  return s2 > 0.0 ? total_ * total_ / s2 : 0.0;
}

std::size_t WeightedEnsemble::locate(double u) const noexcept {
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u * total_);
  if (it == cumulative_.end()) --it;
  // Skip zero-weight atoms that share the boundary.
  auto i = static_cast<std::size_t>(it - cumulative_.begin());
  while (weights_[i] == 0.0 && i + 1 < weights_.size()) ++i;
  return i;
}

std::vector<double> WeightedEnsemble::site_marginal(Site s, int max_n) const {
  std::vector<double> h(static_cast<std::size_t>(max_n) + 1, 0.0);
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    h[static_cast<std::size_t>(std::min(atoms_[i][s], max_n))] += weights_[i];
  for (auto& x : h) x /= total_;
  return h;
}

WeightedEnsemble sample_ensemble(const ProductMeasure& m, std::size_t n, std::uint64_t seed,
                                 unsigned workers) {
  std::vector<Configuration> atoms(n);
  parallel_for(n, workers, [&](std::size_t i) {
    auto rng = make_stream(seed, stream_purpose::sampling, i);
    atoms[i] = m.sample(rng);
  });
  return WeightedEnsemble::uniform(std::move(atoms));
}

WeightedEnsemble systematic_resample(const WeightedEnsemble& e, std::size_t n, Philox4x32& rng) {
  if (e.empty() || n == 0) throw ValidationError("resampling an empty ensemble");
  std::vector<Configuration> atoms;
  std::vector<std::uint32_t> clusters;
  atoms.reserve(n);
  const bool keep = !e.clusters().empty();
  const double u0 = rng.uniform();
  for (std::size_t k = 0; k < n; ++k) {
    const double u = (u0 + static_cast<double>(k)) / static_cast<double>(n);
    const auto i = e.locate(u);
    atoms.push_back(e.atom(i));
    if (keep) clusters.push_back(e.clusters()[i]);
  }
  WeightedEnsemble out(std::move(atoms), std::vector<double>(n, 1.0), std::move(clusters));
  out.set_censoring_fraction(e.censoring_fraction());
  return out;
}

WeightedEnsemble cesaro_mixture(std::span<const WeightedEnsemble> parts) {
  if (parts.empty()) throw ValidationError("mixture of no ensembles");
  if (parts.size() == 1) return parts.front();
  std::vector<Configuration> atoms;
  std::vector<double> weights;
  std::vector<std::uint32_t> clusters;
  bool exact = true;
  double censor = 0.0;
  std::uint32_t offset = 0;
  const double m = static_cast<double>(parts.size());
  for (const auto& p : parts) {
    exact = exact && p.is_exact();
    censor = std::max(censor, p.censoring_fraction());
    std::uint32_t top = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      atoms.push_back(p.atom(i));
      weights.push_back(p.weight(i) / (p.normalization() * m));
      const std::uint32_t c = p.clusters().empty() ? static_cast<std::uint32_t>(i) : p.clusters()[i];
      clusters.push_back(offset + c);
      top = std::max(top, c);
    }
    offset += top + 1;
  }
  if (exact) {
    // Merge duplicate support points so the result is again an exact law.
    std::vector<std::size_t> order(atoms.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return atoms[a] < atoms[b]; });
    std::vector<Configuration> ua;
    std::vector<double> uw;
    for (auto i : order) {
      if (!ua.empty() && ua.back() == atoms[i]) uw.back() += weights[i];
      else {
        ua.push_back(atoms[i]);
        uw.push_back(weights[i]);
      }
    }
    return WeightedEnsemble::exact(std::move(ua), std::move(uw));
  }
  WeightedEnsemble out(std::move(atoms), std::move(weights), std::move(clusters));
  out.set_censoring_fraction(censor);
  return out;
}

}  // namespace qsd
