#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "qsd/core/rng.hpp"
#include "qsd/model/model.hpp"
#include "qsd/stats/survival_curve.hpp"

namespace qsd {

/// Draws an initial configuration from the trajectory's own stream.
using InitialSampler = std::function<Configuration(Philox4x32&)>;

struct HittingSample {
  std::vector<double> tau;
  std::vector<char> censored;
  std::size_t absorbed = 0;
  double t_max = 0.0;
};

/// n_traj independent killed trajectories; trajectory i draws its initial
/// state and its dynamics from stream (seed, trajectory, i).
HittingSample sample_hitting_times(const InitialSampler& initial, const Model& m,
                                   std::size_t n_traj, double t_max, std::uint64_t seed,
                                   unsigned workers = 1);

/// P(tau > t) on the grid with Wilson intervals at z.
SurvivalCurve survival_curve(const InitialSampler& initial, const Model& m,
                             std::span<const double> t_grid, std::size_t n_traj, double t_max,
                             std::uint64_t seed, unsigned workers = 1, double z = 3.0);

struct SupermultiplicativityRow {
  double s = 0.0, t = 0.0;
  double p_s = 0.0, p_t = 0.0, p_st = 0.0;
  double excess = 0.0;  // P(t+s) - P(t) P(s)
  double se = 0.0;      // delta-method standard error of the excess
  bool passed = true;
};

/// P(tau > t + s) >= P(tau > t) P(tau > s) - z se for every pair, estimated
/// on one sample set.
std::vector<SupermultiplicativityRow> supermultiplicativity_check(
    const HittingSample& sample, std::span<const std::pair<double, double>> pairs, double z = 3.0);

}  // namespace qsd
