#include "qsd/model/model.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "qsd/core/error.hpp"

namespace qsd {

TargetSet::TargetSet(std::vector<Site> region, long threshold)
    : region_(std::move(region)), threshold_(threshold) {
  std::sort(region_.begin(), region_.end());
  region_.erase(std::unique(region_.begin(), region_.end()), region_.end());
  if (region_.empty()) throw ValidationError("target region must be nonempty");
  if (threshold_ < 0) throw ValidationError("target threshold must be nonnegative");
}

long TargetSet::load(const Configuration& c) const noexcept {
  long s = 0;
  for (Site i : region_) s += c[i];
  return s;
}

bool TargetSet::in_region(Site s) const noexcept {
  return std::binary_search(region_.begin(), region_.end(), s);
}

Model::Model(Lattice lattice, JumpKernel kernel, RateFunction rates, TargetSet target,
             int occupancy_cap)
    : lattice_(std::move(lattice)),
      kernel_(std::move(kernel)),
      rates_(std::move(rates)),
      target_(std::move(target)),
      occupancy_cap_(occupancy_cap) {
  if (kernel_.dimension() != lattice_.dimension()) {
    throw ValidationError("kernel dimension does not match lattice dimension");
  }
  for (Site s : target_.region()) {
    if (s >= lattice_.num_sites()) throw ValidationError("target site outside the lattice");
  }
  report_ = validate_model(lattice_, kernel_, rates_, occupancy_cap_);

  const std::size_t n = lattice_.num_sites();
  const std::size_t nk = kernel_.size();
  dest_.assign(n * nk, kNoSite);
  std::vector<std::size_t> counts(n + 1, 0);
  for (Site s = 0; s < n; ++s) {
    for (std::size_t k = 0; k < nk; ++k) {
      if (auto t = lattice_.shift(s, kernel_.offsets()[k]); t && kernel_.weights()[k] > 0) {
        dest_[s * nk + k] = *t;
        ++counts[*t + 1];
      }
    }
  }
  for (std::size_t j = 0; j < n; ++j) counts[j + 1] += counts[j];
  source_start_ = counts;
  sources_.resize(counts[n]);
  std::vector<std::size_t> fill(counts.begin(), counts.end() - 1);
  for (Site s = 0; s < n; ++s) {
    for (std::size_t k = 0; k < nk; ++k) {
      const Site t = dest_[s * nk + k];
      if (t != kNoSite) sources_[fill[t]++] = {s, k};
    }
  }
}

double Model::kernel_weight(Site i, Site j) const noexcept {
  double p = 0.0;
  for (std::size_t k = 0; k < kernel_.size(); ++k) {
    if (destination(i, k) == j) p += kernel_.weights()[k];
  }
  return p;
}

double Model::jump_rate(const Configuration& c, Site i, Site j) const noexcept {
  const double p = kernel_weight(i, j);
  return p > 0 ? p * rates_.b(c[i], c[j]) : 0.0;
}

double Model::site_rate(const Configuration& c, Site i) const noexcept {
  const int n = c[i];
  if (n == 0) return 0.0;
  double r = 0.0;
  for (std::size_t k = 0; k < kernel_.size(); ++k) {
    const Site t = destination(i, k);
    if (t != kNoSite) r += kernel_.weights()[k] * rates_.b(n, c[t]);
  }
  return r;
}

bool Model::admissible(const Configuration& c) const noexcept {
  if (c.size() != num_sites()) return false;
  if (auto cap = rates_.max_occupancy()) {
    for (int x : c.occupancy()) {
      if (x > *cap) return false;
    }
  }
  return true;
}

Configuration Model::apply_jump(Configuration c, Site i, Site j) const {
  if (c[i] < 1) throw std::logic_error("apply_jump: site " + std::to_string(i) + " is empty");
  if (auto cap = rates_.max_occupancy(); cap && c[j] >= *cap) {
    throw std::logic_error("apply_jump: destination " + std::to_string(j) + " is full");
  }
  c.move(i, j);
  return c;
}

Model Model::reversed() const {
  return Model(lattice_, kernel_.reversed(), rates_, target_, occupancy_cap_);
}

Model Model::symmetrized() const {
  return Model(lattice_, kernel_.symmetrized(), rates_, target_, occupancy_cap_);
}

Model Model::with_target(TargetSet target) const {
  return Model(lattice_, kernel_, rates_, std::move(target), occupancy_cap_);
}

}  // namespace qsd
