#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "qsd/model/lattice.hpp"

namespace qsd {

/// Occupancy vector over a finite lattice. Single-owner, mutable.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::size_t num_sites) : occ_(num_sites, 0) {}
  explicit Configuration(std::vector<int> occupancy);

  int operator[](Site s) const noexcept { return occ_[s]; }
  std::size_t size() const noexcept { return occ_.size(); }
  long total() const noexcept { return total_; }
  std::span<const int> occupancy() const noexcept { return occ_; }

  /// Moves one particle from `from` to `to`. Throws std::logic_error when
  /// `from` is empty.
  void move(Site from, Site to);
  /// Adds (delta > 0) or removes particles at a site; the result must stay
  /// nonnegative.
  void add(Site s, int delta = 1);
  /// The configuration with one extra particle at s.
  Configuration with_particle(Site s) const;

  /// Sitewise order: this <= other.
  bool dominated_by(const Configuration& other) const noexcept;

  bool operator==(const Configuration& o) const noexcept { return occ_ == o.occ_; }
  std::strong_ordering operator<=>(const Configuration& o) const noexcept {
    return occ_ <=> o.occ_;
  }

 private:
  std::vector<int> occ_;
  long total_ = 0;
};

struct ConfigurationHash {
  std::size_t operator()(const Configuration& c) const noexcept;
};

}  // namespace qsd
