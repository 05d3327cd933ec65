#include "qsd/dynamics/rate_tree.hpp"

namespace qsd {

RateTree::RateTree(std::size_t n) : n_(n), base_(1) {
  while (base_ < n) base_ <<= 1;
  node_.assign(2 * base_, 0.0);
}

void RateTree::set(std::size_t i, double r) noexcept {
  std::size_t k = base_ + i;
  node_[k] = r;
  for (k >>= 1; k >= 1; k >>= 1) node_[k] = node_[2 * k] + node_[2 * k + 1];
}

std::size_t RateTree::find(double x) const noexcept {
  std::size_t k = 1;
  while (k < base_) {
    const double left = node_[2 * k];
    if (x < left || node_[2 * k + 1] <= 0.0) {
      k = 2 * k;
    } else {
      x -= left;
      k = 2 * k + 1;
    }
  }
  std::size_t i = k - base_;
  // Rounding can land on a zero-rate leaf at the far right; step back.
  while (i > 0 && (i >= n_ || node_[base_ + i] <= 0.0)) --i;
  return i;
}

}  // namespace qsd
