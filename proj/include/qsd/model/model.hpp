#pragma once

#include <limits>
#include <span>
#include <vector>

#include "qsd/model/configuration.hpp"
#include "qsd/model/kernel.hpp"
#include "qsd/model/lattice.hpp"
#include "qsd/model/rates.hpp"
#include "qsd/model/validation.hpp"

namespace qsd {

inline constexpr Site kNoSite = std::numeric_limits<Site>::max();

/// The increasing local event {sum over region of eta > threshold}.
class TargetSet {
 public:
  TargetSet(std::vector<Site> region, long threshold);

  const std::vector<Site>& region() const noexcept { return region_; }
  long threshold() const noexcept { return threshold_; }
  long load(const Configuration& c) const noexcept;
  bool contains(const Configuration& c) const noexcept { return load(c) > threshold_; }
  bool in_region(Site s) const noexcept;

 private:
  std::vector<Site> region_;  // sorted, unique
  long threshold_;
};

/// Lattice, kernel, rates and target bundled with precomputed neighbour
/// tables. Immutable and safe to share across threads.
class Model {
 public:
  Model(Lattice lattice, JumpKernel kernel, RateFunction rates, TargetSet target,
        int occupancy_cap = kDefaultOccupancyCap);

  const Lattice& lattice() const noexcept { return lattice_; }
  const JumpKernel& kernel() const noexcept { return kernel_; }
  const RateFunction& rates() const noexcept { return rates_; }
  const TargetSet& target() const noexcept { return target_; }
  const ValidationReport& validation() const noexcept { return report_; }
  std::size_t num_sites() const noexcept { return lattice_.num_sites(); }
  double delta() const noexcept { return report_.delta; }
  int occupancy_cap() const noexcept { return occupancy_cap_; }

  /// Destination of kernel offset k from site s, or kNoSite (blocked box).
  Site destination(Site s, std::size_t k) const noexcept { return dest_[s * kernel_.size() + k]; }
  std::span<const Site> destinations(Site s) const noexcept {
    return {dest_.data() + s * kernel_.size(), kernel_.size()};
  }
  /// (source site, offset index) pairs whose destination is j.
  std::span<const std::pair<Site, std::size_t>> sources(Site j) const noexcept {
    return {sources_.data() + source_start_[j], source_start_[j + 1] - source_start_[j]};
  }
  /// p(i, j), summing every offset that maps i to j.
  double kernel_weight(Site i, Site j) const noexcept;

  /// p(i, j) b(eta(i), eta(j)); zero when j is not reachable from i.
  double jump_rate(const Configuration& c, Site i, Site j) const noexcept;
  /// Total exit rate of site i.
  double site_rate(const Configuration& c, Site i) const noexcept;
  /// eta with one particle moved from i to j. Throws std::logic_error when i
  /// is empty or the move breaks the family's occupancy bound.
  Configuration apply_jump(Configuration c, Site i, Site j) const;
  bool in_target(const Configuration& c) const noexcept { return target_.contains(c); }
  /// Whether the configuration respects the family's occupancy bound.
  bool admissible(const Configuration& c) const noexcept;

  /// The adjoint dynamics: same rates, kernel p*(i,j) = p(j,i).
  Model reversed() const;
  /// Same rates with kernel p_s / 2.
  Model symmetrized() const;
  Model with_target(TargetSet target) const;

 private:
  Lattice lattice_;
  JumpKernel kernel_;
  RateFunction rates_;
  TargetSet target_;
  int occupancy_cap_;
  ValidationReport report_;
  std::vector<Site> dest_;
  std::vector<std::pair<Site, std::size_t>> sources_;
  std::vector<std::size_t> source_start_;
};

/// p(i,j) b(eta(i), eta(j)) as a free function of the model.
inline double jump_rate(const Configuration& c, Site i, Site j, const Model& m) noexcept {
  return m.jump_rate(c, i, j);
}

}  // namespace qsd
