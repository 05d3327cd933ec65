#pragma once

#include <cstddef>
#include <vector>

namespace qsd {

/// Complete binary sum tree over per-site rates: O(log n) update and
/// selection. Internal nodes are recomputed from their children on update,
/// so rounding error does not accumulate across events.
class RateTree {
 public:
  explicit RateTree(std::size_t n = 0);

  std::size_t size() const noexcept { return n_; }
  double total() const noexcept { return node_[1]; }
  double rate(std::size_t i) const noexcept { return node_[base_ + i]; }
  void set(std::size_t i, double r) noexcept;
  /// Leaf whose cumulative interval contains x, for x in [0, total()).
  std::size_t find(double x) const noexcept;

 private:
  std::size_t n_;
  std::size_t base_;
  std::vector<double> node_;
};

}  // namespace qsd
