#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "qsd/measures/ensemble.hpp"
#include "qsd/measures/product_measure.hpp"
#include "qsd/model/model.hpp"
#include "qsd/phi/sojourn_pool.hpp"
#include "qsd/stats/stats.hpp"

namespace qsd {

struct PhiOptions {
  std::size_t n_particles = 1000;  // trajectories per application, atoms after resampling
  double t_max = 100.0;
  double max_censoring = 0.01;     // above this t_max doubles
  double t_max_cap = 0.0;          // 0: 64 * t_max
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::vector<double> probes{1.0, 2.0, 4.0};  // s for P(tau > s)
  double z = 3.0;
};

/// What one batch of trajectories says about its initial measure.
struct MeasureStats {
  std::size_t measure_index = 0;  // n for nu_n
  MeanEstimate expected_tau;      // over uncensored trajectories
  double ci_lo = 0.0, ci_hi = 0.0;
  double censoring_fraction = 0.0;
  double ess = 0.0;               // trajectory-level Kish size, <= n_particles
  double t_max = 0.0;             // after escalation
  std::vector<std::pair<double, double>> probes;  // (s, P(tau > s))
  std::vector<double> tau;        // uncensored hitting times
};

struct PhiApplyResult {
  WeightedEnsemble ensemble;    // n_particles equally weighted atoms
  WeightedEnsemble occupation;  // the full sojourn pool, normalized
  MeasureStats stats;
};

/// Phi(mu): n_particles initial states chosen from `input` by systematic
/// selection, each simulated to tau; sojourns weighted by duration and
/// systematically resampled. Censored trajectories are dropped, and t_max is
/// doubled (up to the cap) while the censored fraction exceeds max_censoring.
PhiApplyResult phi_apply(const WeightedEnsemble& input, const Model& m, const PhiOptions& opt,
                         std::size_t iteration = 0);

struct PhiIterationLog {
  std::vector<MeasureStats> rows;  // nu_0 .. nu_n

  /// iteration,E_tau,ci,censor_frac,ess,probe_s,probe_value; one line per probe.
  void write_csv(std::ostream& out) const;
};

struct PhiIterateResult {
  std::vector<WeightedEnsemble> iterates;  // Phi^1 .. Phi^n of nu
  PhiIterationLog log;
};

/// Iterates phi_apply from fresh draws of nu. Row n of the log describes
/// nu_n; the last row comes from a plain survival batch.
PhiIterateResult phi_iterate(const ProductMeasure& nu, const Model& m, std::size_t n_iterations,
                             const PhiOptions& opt);

struct PhiDirectResult {
  std::vector<int> powers;
  std::vector<WeightedEnsemble> ensembles;  // unresampled, one per power
  double censoring_fraction = 0.0;
  double t_max = 0.0;
  std::vector<double> ess;
};

/// Phi^n(nu) for each n in `powers` from one batch of n_particles
/// trajectories started from nu, sojourn [a, b) weighted by (b^n - a^n)/n.
PhiDirectResult phi_direct(const ProductMeasure& nu, const Model& m, const std::vector<int>& powers,
                           const PhiOptions& opt);

/// Counter-example estimator: one state per trajectory at a uniform time in
/// [0, tau). This targets E[(1/tau) int_0^tau phi], which is not Phi(mu).
WeightedEnsemble naive_uniform_time(const WeightedEnsemble& input, const Model& m,
                                    const PhiOptions& opt);

/// Systematic selection of initial state i out of n from an ensemble.
IndexedSampler systematic_selector(const WeightedEnsemble& e, std::size_t n, std::uint64_t seed);

}  // namespace qsd
