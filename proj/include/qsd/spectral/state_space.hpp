#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "qsd/model/configuration.hpp"
#include "qsd/model/lattice.hpp"

namespace qsd {

class Model;

inline constexpr std::uint64_t kDefaultStateLimit = 100000;

/// Occupancy vectors with entries in [0, site_cap] and total particle number
/// in [min_total, max_total]. A canonical space has min_total == max_total.
struct StateConstraint {
  int site_cap = 1;
  long min_total = 0;
  long max_total = 0;

  static StateConstraint canonical(long n, int site_cap = 1) { return {site_cap, n, n}; }
  static StateConstraint capped(int site_cap, std::size_t num_sites) {
    return {site_cap, 0, static_cast<long>(site_cap) * static_cast<long>(num_sites)};
  }
};

/// Site cap k + 2 (k the target threshold, at most the family's bound) with
/// no restriction on the total.
StateConstraint default_constraint(const Model& m);

/// Exact size of the constrained space (saturates at UINT64_MAX).
std::uint64_t count_states(std::size_t num_sites, const StateConstraint& c);

/// Lexicographically ordered enumeration with an index map.
class StateSpace {
 public:
  StateSpace(std::vector<Configuration> states, StateConstraint c);

  std::size_t size() const noexcept { return states_.size(); }
  const std::vector<Configuration>& states() const noexcept { return states_; }
  const Configuration& operator[](std::size_t i) const noexcept { return states_[i]; }
  std::optional<std::size_t> index(const Configuration& c) const;
  const StateConstraint& constraint() const noexcept { return constraint_; }

 private:
  std::vector<Configuration> states_;
  std::unordered_map<Configuration, std::size_t, ConfigurationHash> index_;
  StateConstraint constraint_;
};

/// Throws SizeLimitError carrying the predicted count when it exceeds limit.
StateSpace enumerate_states(const Lattice& lattice, const StateConstraint& c,
                            std::uint64_t limit = kDefaultStateLimit);

}  // namespace qsd
