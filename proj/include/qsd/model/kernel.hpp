#pragma once

#include <vector>

#include "qsd/model/lattice.hpp"

namespace qsd {

/// Translation-invariant, finite-range jump kernel stored as displacement
/// offsets with their probabilities. Construction only checks shape; the
/// probabilistic hypotheses are reported by validate_model.
class JumpKernel {
 public:
  JumpKernel(std::vector<Coords> offsets, std::vector<double> weights);

  /// Nearest-neighbour kernel in d dimensions: +e_a with weight p_right/d and
  /// -e_a with weight (1 - p_right)/d.
  static JumpKernel nearest_neighbour(std::size_t d, double p_right);
  /// p(0, +1) = 1 in one dimension.
  static JumpKernel totally_asymmetric();

  std::size_t dimension() const noexcept { return dim_; }
  std::size_t size() const noexcept { return offsets_.size(); }
  const std::vector<Coords>& offsets() const noexcept { return offsets_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  /// Largest L1 norm among offsets with positive weight.
  int range() const;
  double total_weight() const;
  /// Mean displacement sum_i i p(0,i).
  std::vector<double> drift() const;
  /// The adjoint kernel p*(i,j) = p(j,i): offsets negated.
  JumpKernel reversed() const;
  /// p_s / 2 = (p + p*) / 2, duplicates merged.
  JumpKernel symmetrized() const;
  /// Whether the group generated by offsets and their negatives reaches every
  /// site of `lattice` from site 0 (breadth-first search).
  bool symmetrized_irreducible_on(const Lattice& lattice) const;

 private:
  std::vector<Coords> offsets_;
  std::vector<double> weights_;
  std::size_t dim_;
};

}  // namespace qsd
