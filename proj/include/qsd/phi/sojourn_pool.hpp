#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qsd/dynamics/survival.hpp"
#include "qsd/measures/ensemble.hpp"
#include "qsd/model/model.hpp"

namespace qsd {

/// Picks the initial configuration of trajectory i (the trajectory's own
/// stream is passed for any randomness).
using IndexedSampler = std::function<Configuration(std::size_t, Philox4x32&)>;

/// Sojourns (state, weight) harvested before tau from uncensored killed
/// trajectories. With power n the sojourn [a, b) is weighted by
/// (b^n - a^n) / n; weights are stored as logs. Power 1 gives durations.
struct SojournPool {
  std::vector<Configuration> states;
  std::vector<double> log_weights;
  std::vector<std::uint32_t> trajectory;  // owning trajectory index

  std::vector<double> tau;        // per trajectory, t_max when censored
  std::vector<char> censored;
  std::size_t source_iteration = 0;
  int power = 1;
  double t_max = 0.0;

  std::size_t n_trajectories() const noexcept { return tau.size(); }
  std::size_t n_censored() const noexcept;
  double censoring_fraction() const noexcept;
  /// log of the summed weights; for power 1 this is log sum of tau over
  /// uncensored trajectories.
  double log_total_weight() const;
  /// Kish size over trajectories of the per-trajectory weight totals.
  double trajectory_ess() const;
  /// The pool as a normalized ensemble with trajectory clusters. Throws
  /// PhiUndefinedError when no uncensored trajectory carries weight.
  WeightedEnsemble ensemble() const;
};

struct HarvestOptions {
  double t_max = 100.0;
  std::vector<int> powers{1};   // one pool per power, same trajectories
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

/// n_traj killed trajectories, trajectory i on stream (seed, trajectory, i).
std::vector<SojournPool> harvest_sojourns(const IndexedSampler& initial, const Model& m,
                                          std::size_t n_traj, const HarvestOptions& opt);

/// log((b^n - a^n) / n), stable when b - a is tiny relative to b.
double log_power_weight(double a, double b, int n);

}  // namespace qsd
