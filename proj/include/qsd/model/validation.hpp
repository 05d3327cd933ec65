#pragma once

#include <string>
#include <vector>

#include "qsd/model/kernel.hpp"
#include "qsd/model/lattice.hpp"
#include "qsd/model/rates.hpp"

namespace qsd {

struct HypothesisCheck {
  std::string name;
  bool passed = true;
  std::string witness;  // the failing pair or value, empty on success
};

struct ValidationReport {
  std::vector<HypothesisCheck> checks;
  std::vector<std::string> warnings;
  double delta = 0.0;
  std::vector<double> drift;
  int range = 0;
  int occupancy_cap = 0;

  bool ok() const noexcept;
  /// nullptr when no check carries that name.
  const HypothesisCheck* find(const std::string& name) const noexcept;
  std::vector<std::string> failures() const;
};

inline constexpr int kDefaultOccupancyCap = 64;
inline constexpr double kHypothesisTolerance = 1e-12;

/// Checks the kernel hypotheses (nonnegativity, normalization, finite range,
/// irreducibility of the symmetrization, drift) and the rate hypotheses
/// (b(0,.) = 0, monotonicity, the antisymmetry identity, finite Lipschitz
/// bound, g(0) = 0, g(1) = 1, g nondecreasing, and b/g compatibility) on
/// occupancies up to `occupancy_cap`. Never throws for a violated hypothesis;
/// the report carries a witness instead.
ValidationReport validate_model(const Lattice& lattice, const JumpKernel& kernel,
                                const RateFunction& rates,
                                int occupancy_cap = kDefaultOccupancyCap);

}  // namespace qsd
