#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qsd/model/kernel.hpp"
#include "qsd/model/lattice.hpp"

namespace qsd {

/// A walk on Z^d with the jump kernel, started at `start`, looking for the
/// first visit to `region`. Z^d is truncated to the bounding box of start
/// and region padded by `padding` kernel ranges on every side; leaving the
/// box counts as escape, so the box estimates are lower bounds that increase
/// with the padding.
struct WalkProblem {
  JumpKernel kernel;
  Coords start;
  std::vector<Coords> region;
  int padding = 16;
};

struct WalkHitting {
  double probability = 0.0;
  std::size_t states = 0;  // box sites
  int padding = 0;
};

/// P(the walk ever enters the region), by a sparse absorbing linear solve.
WalkHitting rw_hitting_ever(const WalkProblem& w);
/// P(the rate-`rate` continuous-time walk enters the region before
/// `horizon`), by uniformization truncated at Poisson tail 1e-14.
WalkHitting rw_hitting_within(const WalkProblem& w, double rate, double horizon);

struct WalkMonteCarlo {
  double probability = 0.0;
  double se = 0.0;
  std::size_t n = 0;
};

/// Monte Carlo on the same padded box; walk k uses stream (seed, walk, k).
WalkMonteCarlo rw_hitting_monte_carlo(const WalkProblem& w, std::size_t n_walks, std::uint64_t seed,
                                      std::optional<std::pair<double, double>> rate_horizon = {},
                                      unsigned workers = 1);

/// Hitting probability on a finite lattice itself (torus wraps, a blocked
/// box suppresses leaving moves), started at `start`.
double rw_hitting_on_lattice(const Lattice& lattice, const JumpKernel& kernel, Site start,
                             const std::vector<Site>& region, double rate,
                             std::optional<double> horizon);

}  // namespace qsd
