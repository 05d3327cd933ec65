#include "qsd/measures/measure_checks.hpp"

#include <cmath>

#include "qsd/core/error.hpp"
#include "qsd/core/rng.hpp"
#include "qsd/stats/stats.hpp"

namespace qsd {

WeightedEnsemble enumerate_product(const OccupancyFunction& g, double gamma, std::size_t num_sites,
                                   double tol, std::size_t limit) {
  Marginal m(gamma, g, tol);
  const auto radix = static_cast<std::size_t>(m.n_max() + 1);
  double count = std::pow(static_cast<double>(radix), static_cast<double>(num_sites));
  if (count > static_cast<double>(limit))
    throw SizeLimitError(static_cast<std::uint64_t>(count), limit);
  std::vector<Configuration> atoms;
  std::vector<double> probs;
  std::vector<int> occ(num_sites, 0);
  while (true) {
    double p = 1.0;
    for (int x : occ) p *= m(x);
    atoms.emplace_back(occ);
    probs.push_back(p);
    std::size_t s = num_sites;
    while (s > 0) {
      --s;
      if (static_cast<std::size_t>(++occ[s]) < radix) break;
      occ[s] = 0;
      if (s == 0) return WeightedEnsemble::exact(std::move(atoms), std::move(probs));
    }
    if (num_sites == 0) return WeightedEnsemble::exact(std::move(atoms), std::move(probs));
  }
}

CovarianceReport fkg_test(const ProductMeasure& m, const Observable& f, const Observable& g,
                          std::size_t n_samples, std::uint64_t seed, double z) {
  std::vector<double> x(n_samples), y(n_samples);
  auto rng = make_stream(seed, stream_purpose::sampling, 0);
  for (std::size_t k = 0; k < n_samples; ++k) {
    auto c = m.sample(rng);
    x[k] = f(c);
    y[k] = g(c);
  }
  auto cov = covariance_se(x, y);
  return {cov.mean, cov.se, cov.mean >= -z * cov.se};
}

double exact_covariance(const WeightedEnsemble& e, const Observable& f, const Observable& g) {
  const double ef = e.expectation(f), eg = e.expectation(g);
  return e.expectation([&](const Configuration& c) { return (f(c) - ef) * (g(c) - eg); });
}

SizeBiasReport size_bias_check(const ProductMeasure& m, const OccupancyFunction& g, double delta,
                               Site i, const Observable& phi, std::size_t n_samples,
                               std::uint64_t seed, double z) {
  const double gamma = m.gamma();
  std::vector<double> l(n_samples), r(n_samples), d(n_samples), bl(n_samples), bd(n_samples);
  auto rng = make_stream(seed, stream_purpose::sampling, 0);
  bool nonneg = true;
  for (std::size_t k = 0; k < n_samples; ++k) {
    auto c = m.sample(rng);
    const double p = phi(c);
    const double pr = phi(c.with_particle(i));
    nonneg = nonneg && p >= 0.0 && pr >= 0.0;
    l[k] = c[i] > 0 ? g(c[i]) * p : 0.0;
    r[k] = gamma * pr;
    d[k] = l[k] - r[k];
    bl[k] = static_cast<double>(c[i]) * p;
    bd[k] = bl[k] - gamma / delta * pr;
  }
  SizeBiasReport rep;
  auto ml = mean_se(l), mr = mean_se(r), md = mean_se(d), mb = mean_se(bl), mbd = mean_se(bd);
  rep.lhs = ml.mean;
  rep.lhs_se = ml.se;
  rep.rhs = mr.mean;
  rep.rhs_se = mr.se;
  rep.diff = md.mean;
  rep.diff_se = md.se;
  rep.identity_passed = std::abs(md.mean) <= z * md.se + 1e-15;
  rep.bis_lhs = mb.mean;
  rep.bis_rhs = mb.mean - mbd.mean;
  rep.bis_se = mbd.se;
  rep.inequality_applicable = nonneg;
  rep.inequality_passed = !nonneg || mbd.mean >= -z * mbd.se;
  return rep;
}

SizeBiasReport size_bias_exact(const OccupancyFunction& g, double gamma, std::size_t num_sites,
                               double delta, Site i, const Observable& phi, double tol) {
  auto e = enumerate_product(g, gamma, num_sites);
  SizeBiasReport rep;
  bool nonneg = true;
  for (std::size_t k = 0; k < e.size(); ++k) {
    const auto& c = e.atom(k);
    const double w = e.weight(k);
    const double p = phi(c);
    const double pr = phi(c.with_particle(i));
    nonneg = nonneg && p >= 0.0 && pr >= 0.0;
    if (c[i] > 0) rep.lhs += w * g(c[i]) * p;
    rep.rhs += w * gamma * pr;
    rep.bis_lhs += w * static_cast<double>(c[i]) * p;
  }
  rep.lhs /= e.normalization();
  rep.rhs /= e.normalization();
  rep.bis_lhs /= e.normalization();
  rep.bis_rhs = rep.rhs / delta;
  rep.diff = rep.lhs - rep.rhs;
  rep.identity_passed = std::abs(rep.diff) <= tol;
  rep.inequality_applicable = nonneg;
  rep.inequality_passed = !nonneg || rep.bis_lhs >= rep.bis_rhs - tol;
  return rep;
}

DominationReport domination_test(const WeightedEnsemble& e, const WeightedEnsemble& reference,
                                 const std::vector<NamedObservable>& suite, double z,
                                 double exact_tol) {
  DominationReport rep;
  for (const auto& [name, f] : suite) {
    DominationRow row;
    row.name = name;
    auto a = e.estimate(f);
    auto b = reference.estimate(f);
    row.value = a.mean;
    row.value_se = a.se;
    row.reference = b.mean;
    row.reference_se = b.se;
    const double se = std::hypot(a.se, b.se);
    const double gap = a.mean - b.mean;
    if (se > 0.0) {
      row.excess_sigma = gap / se;
      row.violated = gap > z * se;
    } else {
      row.excess_sigma = gap > exact_tol ? INFINITY : 0.0;
      row.violated = gap > exact_tol;
    }
    rep.violations += row.violated ? 1 : 0;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace qsd
