#pragma once

#include <cstdint>
#include <vector>

#include "qsd/model/model.hpp"

namespace qsd {

struct SecondClassOptions {
  std::vector<double> t_grid;
  std::size_t n_traj = 10000;
  double t_max = 0.0;  // defaults to the last grid time
  std::uint64_t seed = 0;
  unsigned workers = 1;
  double z = 3.0;
};

struct SecondClassReport {
  std::vector<double> t;
  std::vector<double> p_eta;    // P(tau_eta > t)
  std::vector<double> p_zeta;   // P(tau_zeta > t), zeta_0 = eta + delta_i
  std::vector<double> gap;      // p_eta - p_zeta
  std::vector<double> gap_se;
  std::vector<double> hit_within;  // P(rate-Delta kernel walk from i enters the region by t)
  std::vector<double> bound;       // hit_within * p_eta
  std::vector<char> passed;        // gap <= bound + z se
  double hit_ever = 1.0;           // same walk without a horizon, on the model lattice
  double epsilon = 0.0;            // 1 - hit_ever
  bool bound_rigorous = true;      // false when the tagged particle can also move backwards
  std::size_t order_violations = 0;     // events where zeta < eta somewhere
  std::size_t coupling_violations = 0;  // events where zeta - eta != delta_X
  std::size_t frozen = 0;               // runs ending with the tagged particle unable to move

  bool all_passed() const noexcept;
};

/// Runs the basic coupling of eta and zeta = eta + delta_X. The tagged
/// particle X jumps forward X -> j at rate p(X,j)(b(eta_X+1, eta_j) -
/// b(eta_X, eta_j)) and, when b depends on the target occupancy, moves back
/// to i when an eta particle jumps i -> X that zeta cannot follow (rate
/// p(i,X)(b(eta_i, eta_X) - b(eta_i, eta_X+1))). Both copies are killed on
/// entry to the target; zeta is maintained explicitly and compared with
/// eta after every event.
SecondClassReport second_class_escape(const Model& m, const Configuration& eta, Site i,
                                      const SecondClassOptions& opt);

}  // namespace qsd
