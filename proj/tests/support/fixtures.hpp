#pragma once

#include <vector>

#include "qsd/measures/product_measure.hpp"
#include "qsd/model/model.hpp"
#include "qsd/spectral/killed_generator.hpp"
#include "qsd/spectral/state_space.hpp"

namespace qsd::testing {

// Zero range g(k) = k on a 4-site ring, drift to the right, killed when the
// origin holds two particles. Totals 2..10 give 501 states outside the target.
inline Model toy_model() {
  return Model(Lattice({4}, Boundary::torus), JumpKernel::nearest_neighbour(1, 0.7),
               RateFunction::zero_range(OccupancyFunction::linear()), TargetSet({0}, 1));
}
inline constexpr TotalWindow kToyWindow{2, 10};
inline StateConstraint toy_constraint() { return {10, kToyWindow.min_total, kToyWindow.max_total}; }
inline ProductMeasure toy_measure() {
  return ProductMeasure(OccupancyFunction::linear(), 0.5, 4).conditioned(kToyWindow);
}

struct Toy {
  Model model = toy_model();
  StateSpace space = enumerate_states(model.lattice(), toy_constraint());
  KilledGenerator gen = build_killed_generator(space, model);
  ProductMeasure measure = toy_measure();
  Eigen::VectorXd nu = measure_vector(gen, measure);
};

inline Model tasep_line(int sites_left = 64) {
  return Model(Lattice({sites_left + 1}, Boundary::blocked), JumpKernel::totally_asymmetric(),
               RateFunction::exclusion(), TargetSet({static_cast<Site>(sites_left)}, 0));
}

inline Model tasep_circle(int n) {
  return Model(Lattice({n}, Boundary::torus), JumpKernel::totally_asymmetric(), RateFunction::exclusion(),
               TargetSet({0}, 0));
}

inline Model ring(int n, RateFunction rates, double p_right = 0.7, long threshold = 1) {
  return Model(Lattice({n}, Boundary::torus), JumpKernel::nearest_neighbour(1, p_right), std::move(rates),
               TargetSet({0}, threshold));
}

}  // namespace qsd::testing
