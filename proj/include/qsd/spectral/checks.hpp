#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qsd/spectral/decay.hpp"
#include "qsd/spectral/killed_generator.hpp"

namespace qsd {

/// mu (-L)^{-1}, normalized to a probability vector.
Eigen::VectorXd phi_exact(const KilledGenerator& gen, const Eigen::VectorXd& mu);

struct FixedPointReport {
  double phi_distance = 0.0;   // || Phi(mu) - mu ||_1
  double generator_residual = 0.0;  // max over state indicators phi of
                                    // | mu(L phi) - mu(L 1) mu(phi) |
  double expected_tau = 0.0;   // E_mu[tau]
};

/// Lemma-1 style check: a QSD is a fixed point of Phi.
FixedPointReport qsd_fixed_point_check(const KilledGenerator& gen, const Eigen::VectorXd& mu);

/// v_k = nu (-L)^{-k} 1 for k = 0..n, kept in log space, together with the
/// normalized measures nu (-L)^{-k} (the exact Phi iterates of nu). nu is
/// given on the target's complement only; total_mass is its mass on the
/// whole space, so that v_0 = total_mass and v_1 = E_nu[tau].
struct ExactIterates {
  std::vector<double> log_v;
  std::vector<Eigen::VectorXd> measures;

  /// E_{nu_n}[tau] = v_{n+1} / v_n.
  double expected_tau(std::size_t n) const;
  /// log E_nu[tau^k] = log k! + log v_k.
  double log_moment(std::size_t k) const;
};

ExactIterates exact_phi_iterates(const KilledGenerator& gen, const Eigen::VectorXd& nu,
                                 std::size_t n, double total_mass = 1.0);

struct SupermultiplicativityExact {
  double worst_gap = 0.0;  // min over pairs of S(s+t) - S(s) S(t)
  double worst_s = 0.0, worst_t = 0.0;
  std::size_t pairs = 0;
};

/// All pairs (s, t) from the grid; nu should be stationary for the free
/// dynamics for the inequality to be expected.
SupermultiplicativityExact exact_supermultiplicativity(const KilledGenerator& gen,
                                                       const Eigen::VectorXd& nu,
                                                       const std::vector<double>& grid);

struct SandwichRow {
  double t = 0.0;
  double lower = 0.0;
  double survival = 0.0;
  double upper = 0.0;
  bool passed = false;
};

struct SandwichReport {
  double lambda = 0.0;
  double entropy = 0.0;       // H(nu~ | nu)
  double fg_integral = 0.0;   // int f g dnu with int g dnu = 1
  double f_min = 0.0;
  std::vector<SandwichRow> rows;
  bool skipped = false;       // defective spectrum: only the upper bound is checked
  bool passed = false;
};

/// f = dmu/dnu, g the right vector scaled so that int g dnu = 1, and
/// dnu~ proportional to f g dnu. Checks exp(-H) exp(-lambda t) <= P_nu(tau > t)
/// <= exp(-lambda t) with absolute slack `tol`, and int f g dnu >= 1.
SandwichReport hitting_sandwich_check(const KilledGenerator& gen, const Eigen::VectorXd& nu,
                                      const SpectralResult& spec, const std::vector<double>& t_grid,
                                      double tol = 1e-10);

/// Dirichlet form ratio  -<f, L f>_nu / <f, f>_nu  for f vanishing on the target.
double rayleigh_quotient(const KilledGenerator& gen, const Eigen::VectorXd& nu,
                         const Eigen::VectorXd& f);

struct RayleighReport {
  double lambda = 0.0;    // decay rate of the original model
  double lambda_s = 0.0;  // of the symmetrized model
  double margin = 0.0;    // lambda - lambda_s
  double residual = 0.0;  // symmetric eigen-residual, inf norm
  double asymmetry = 0.0; // || D^1/2 L_s D^-1/2 - transpose ||_inf, ~0 iff nu reversible
  double quotient_at_minimizer = 0.0;
  bool passed = false;
};

/// gen and sym must be built on the same state space; nu is the product
/// measure restricted to it.
RayleighReport rayleigh_bound(const KilledGenerator& gen, const KilledGenerator& sym,
                              const Eigen::VectorXd& nu);

}  // namespace qsd
