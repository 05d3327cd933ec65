#include "qsd/spectral/state_space.hpp"

#include <algorithm>
#include <limits>

#include "qsd/core/error.hpp"
#include "qsd/model/model.hpp"

namespace qsd {

StateConstraint default_constraint(const Model& m) {
  int cap = static_cast<int>(m.target().threshold()) + 2;
  if (auto b = m.rates().max_occupancy()) cap = std::min(cap, *b);
  return StateConstraint::capped(cap, m.num_sites());
}

std::uint64_t count_states(std::size_t num_sites, const StateConstraint& c) {
  if (c.site_cap < 0 || c.max_total < c.min_total || c.max_total < 0) return 0;
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  const auto top = static_cast<std::size_t>(c.max_total);
  std::vector<std::uint64_t> ways(top + 1, 0);
  ways[0] = 1;
  for (std::size_t s = 0; s < num_sites; ++s) {
    std::vector<std::uint64_t> next(top + 1, 0);
    for (std::size_t a = 0; a <= top; ++a) {
      if (!ways[a]) continue;
      for (int k = 0; k <= c.site_cap && a + static_cast<std::size_t>(k) <= top; ++k) {
        auto& dst = next[a + static_cast<std::size_t>(k)];
        dst = dst > kMax - ways[a] ? kMax : dst + ways[a];
      }
    }
    ways.swap(next);
  }
  std::uint64_t total = 0;
  for (long n = std::max(0L, c.min_total); n <= c.max_total; ++n) {
    const auto w = ways[static_cast<std::size_t>(n)];
    total = total > kMax - w ? kMax : total + w;
  }
  return total;
}

StateSpace::StateSpace(std::vector<Configuration> states, StateConstraint c)
    : states_(std::move(states)), constraint_(c) {
  index_.reserve(states_.size());
  for (std::size_t i = 0; i < states_.size(); ++i) index_.emplace(states_[i], i);
}

std::optional<std::size_t> StateSpace::index(const Configuration& c) const {
  auto it = index_.find(c);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

StateSpace enumerate_states(const Lattice& lattice, const StateConstraint& c, std::uint64_t limit) {
  const std::size_t n = lattice.num_sites();
  const auto count = count_states(n, c);
  if (count > limit) throw SizeLimitError(count, limit);
  std::vector<Configuration> out;
  out.reserve(count);
  // Depth-first in lexicographic order; `rest` bounds prune infeasible totals.
  std::vector<int> occ(n, 0);
  const long cap = c.site_cap;
  auto rec = [&](auto&& self, std::size_t s, long used) -> void {
    if (s == n) {
      if (used >= c.min_total) out.emplace_back(occ);
      return;
    }
    const long remaining_sites = static_cast<long>(n - s - 1);
    for (long k = 0; k <= cap && used + k <= c.max_total; ++k) {
      if (used + k + remaining_sites * cap < c.min_total) continue;
      occ[s] = static_cast<int>(k);
      self(self, s + 1, used + k);
    }
    occ[s] = 0;
  };
  rec(rec, 0, 0);
  return StateSpace(std::move(out), c);
}

}  // namespace qsd
