#pragma once

#include <cstdint>
#include <vector>

#include "qsd/measures/product_measure.hpp"
#include "qsd/model/model.hpp"

namespace qsd {

struct SigmaExitReport {
  double kappa = 0.0;
  double estimate = 0.0;  // P(sigma > kappa)
  double se = 0.0;
  double bound = 0.0;          // prod (1 - delta_i)^rho with delta_i = min(1, (D k)^d / d!)
  double poisson_bound = 0.0;  // same product with the Poisson tail for delta_i
  std::size_t n_traj = 0;
  bool passed = true;          // estimate >= bound - z se
};

/// d(i) = floor(dist(i, region) / R) for every site.
std::vector<int> jump_distances(const Model& m);

/// prod over sites outside the region of (1 - delta_i)^rho.
double exit_time_bound(const Model& m, double rho, double kappa, bool poisson_tail = false);

/// sigma = first time a particle that started outside the target region
/// enters it, for the unkilled dynamics started from the measure. Particles
/// are kept in per-site label stacks: the particle with label k at a site
/// holding n jumps at rate p (b(k, m) - b(k - 1, m)) and takes the top label
/// at its destination.
SigmaExitReport sigma_exit(const Model& m, const ProductMeasure& nu, double kappa,
                           std::size_t n_traj, std::uint64_t seed, unsigned workers = 1,
                           double z = 3.0);

}  // namespace qsd
