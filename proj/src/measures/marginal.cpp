#include "qsd/measures/marginal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qsd/core/error.hpp"

namespace qsd {
namespace {

constexpr int kMaxTerms = 10'000'000;

// Builds the unnormalized table of gamma^n / prod g, scaled by its first term.
std::vector<double> raw_terms(double gamma, const OccupancyFunction& g, double tol,
                              double& tail_bound) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw DomainError("fugacity must be a finite nonnegative number");
  if (gamma >= g.supremum())
    throw DomainError("fugacity " + std::to_string(gamma) + " is not below sup g = " +
                      std::to_string(g.supremum()));
  std::vector<double> terms{1.0};
  double z = 1.0;
  tail_bound = 0.0;
  if (gamma == 0.0) return terms;
  for (int n = 1;; ++n) {
    if (n > kMaxTerms) throw DomainError("partition function did not converge; fugacity too close to sup g");
    const double gn = g(n);
    if (!std::isfinite(gn)) break;  // occupancy n is forbidden
    const double t = terms.back() * gamma / gn;
    terms.push_back(t);
    z += t;
    const double gnext = g(n + 1);
    if (!std::isfinite(gnext)) break;
    const double r = gamma / gnext;
    if (r < 1.0) {
      const double rest = t * r / (1.0 - r);
      if (rest <= tol * z) {
        tail_bound = rest / z;
        break;
      }
    }
  }
  return terms;
}

}  // namespace

PartitionValue partition_function(double gamma, const OccupancyFunction& g, double tol) {
  PartitionValue v;
  auto terms = raw_terms(gamma, g, tol, v.tail_bound);
  v.z = 0.0;
  for (double t : terms) v.z += t;
  v.n_max = static_cast<int>(terms.size()) - 1;
  return v;
}

Marginal::Marginal(double gamma, const OccupancyFunction& g, double tol) : gamma_(gamma) {
  prob_ = raw_terms(gamma, g, tol, tail_bound_);
  z_ = 0.0;
  for (double t : prob_) z_ += t;
  cdf_.resize(prob_.size());
  double acc = 0.0;
  for (std::size_t n = 0; n < prob_.size(); ++n) {
    prob_[n] /= z_;
    acc += prob_[n];
    cdf_[n] = acc;
  }
  cdf_.back() = 1.0;
}

int Marginal::quantile(double u) const noexcept {
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  return static_cast<int>(it - cdf_.begin());
}

double Marginal::mean() const noexcept {
  double m = 0.0;
  for (std::size_t n = 0; n < prob_.size(); ++n) m += static_cast<double>(n) * prob_[n];
  return m;
}

double Marginal::second_moment() const noexcept {
  double m = 0.0;
  for (std::size_t n = 0; n < prob_.size(); ++n) m += static_cast<double>(n * n) * prob_[n];
  return m;
}

double Marginal::mean_g(const OccupancyFunction& g) const noexcept {
  double m = 0.0;
  for (std::size_t n = 1; n < prob_.size(); ++n) m += g(static_cast<int>(n)) * prob_[n];
  return m;
}

double density_of(double gamma, const OccupancyFunction& g) {
  return Marginal(gamma, g).mean();
}

double density_supremum(const OccupancyFunction& g) {
  if (auto m = g.max_occupancy()) return static_cast<double>(*m);
  return std::numeric_limits<double>::infinity();
}

double invert_density(double rho, const OccupancyFunction& g) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw DomainError("density must be a finite nonnegative number");
  const double sup = density_supremum(g);
  if (rho >= sup - 1e-6)
    throw DomainError("density " + std::to_string(rho) + " is at or above the supremum " +
                      std::to_string(sup));
  if (rho == 0.0) return 0.0;
  const double gsup = g.supremum();
  double lo = 0.0, hi;
  if (std::isfinite(gsup)) {
    hi = gsup;
  } else {
    hi = 1.0;
    while (density_of(hi, g) < rho) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e12) throw DomainError("density inversion failed to bracket");
    }
  }
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    double ups;
    try {
      ups = density_of(mid, g);
    } catch (const DomainError&) {
      // Too close to sup g for the series; the root lies below.
      hi = mid;
      continue;
    }
    if (std::abs(ups - rho) <= 1e-10 * 0.01) return mid;
    (ups < rho ? lo : hi) = mid;
  }
  const double mid = 0.5 * (lo + hi);
  if (std::abs(density_of(mid, g) - rho) > 1e-10)
    throw DomainError("density inversion did not reach tolerance");
  return mid;
}

}  // namespace qsd
