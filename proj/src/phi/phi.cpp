#include "qsd/phi/phi.hpp"

#include <cmath>
#include <ostream>

#include "qsd/core/error.hpp"
#include "qsd/core/parallel.hpp"
#include "qsd/dynamics/trajectory.hpp"

namespace qsd {
namespace {

constexpr std::uint64_t kSelect = 0x73656c6563740006ULL;
constexpr std::uint64_t kIteration = 0x6974657261740007ULL;

std::uint64_t iteration_seed(std::uint64_t seed, std::size_t it) {
  return derive_key(seed, kIteration + it);
}

double cap_of(const PhiOptions& opt) { return opt.t_max_cap > 0 ? opt.t_max_cap : 64.0 * opt.t_max; }

// Harvest, doubling t_max until censoring is acceptable or the cap is hit.
std::vector<SojournPool> harvest_escalating(const IndexedSampler& init, const Model& m,
                                            const PhiOptions& opt, std::uint64_t seed,
                                            std::vector<int> powers) {
  HarvestOptions h;
  h.t_max = opt.t_max;
  h.powers = std::move(powers);
  h.seed = seed;
  h.workers = opt.workers;
  const double cap = cap_of(opt);
  for (;;) {
    auto pools = harvest_sojourns(init, m, opt.n_particles, h);
    if (pools.front().censoring_fraction() <= opt.max_censoring || h.t_max * 2 > cap) return pools;
    h.t_max *= 2;
  }
}

MeasureStats stats_of(const SojournPool& p, const PhiOptions& opt, std::size_t index) {
  MeasureStats s;
  s.measure_index = index;
  s.censoring_fraction = p.censoring_fraction();
  s.t_max = p.t_max;
  for (std::size_t i = 0; i < p.tau.size(); ++i)
    if (!p.censored[i]) s.tau.push_back(p.tau[i]);
  if (!s.tau.empty()) {
    s.expected_tau = mean_se(s.tau);
    s.ci_lo = s.expected_tau.mean - opt.z * s.expected_tau.se;
    s.ci_hi = s.expected_tau.mean + opt.z * s.expected_tau.se;
  }
  s.ess = std::min(p.trajectory_ess(), static_cast<double>(p.n_trajectories()));
  for (double probe : opt.probes) {
    // Censored paths are alive up to t_max.
    std::size_t alive = 0;
    for (std::size_t i = 0; i < p.tau.size(); ++i)
      alive += (p.censored[i] ? probe <= p.t_max : p.tau[i] > probe) ? 1 : 0;
    s.probes.emplace_back(probe, p.tau.empty() ? 0.0 : static_cast<double>(alive) / static_cast<double>(p.tau.size()));
  }
  return s;
}

}  // namespace

IndexedSampler systematic_selector(const WeightedEnsemble& e, std::size_t n, std::uint64_t seed) {
  if (e.empty() || !(e.normalization() > 0)) throw ValidationError("input ensemble has no weight");
  auto rng = make_stream(seed, kSelect, 0);
  const double u0 = rng.uniform();
  return [&e, n, u0](std::size_t i, Philox4x32&) {
    return e.atom(e.locate((static_cast<double>(i) + u0) / static_cast<double>(n)));
  };
}

PhiApplyResult phi_apply(const WeightedEnsemble& input, const Model& m, const PhiOptions& opt,
                         std::size_t iteration) {
  if (opt.n_particles == 0) throw ValidationError("n_particles must be positive");
  const auto seed = iteration_seed(opt.seed, iteration);
  const auto init = systematic_selector(input, opt.n_particles, seed);
  auto pools = harvest_escalating(init, m, opt, seed, {1});
  const auto& pool = pools.front();
  PhiApplyResult r;
  r.stats = stats_of(pool, opt, iteration);
  r.occupation = pool.ensemble();
  auto rng = make_stream(seed, stream_purpose::resample, 0);
  r.ensemble = systematic_resample(r.occupation, opt.n_particles, rng);
  r.ensemble.set_censoring_fraction(pool.censoring_fraction());
  return r;
}

PhiIterateResult phi_iterate(const ProductMeasure& nu, const Model& m, std::size_t n_iterations,
                             const PhiOptions& opt) {
  PhiIterateResult out;
  WeightedEnsemble current =
      sample_ensemble(nu, opt.n_particles, derive_key(opt.seed, stream_purpose::sampling), opt.workers);
  for (std::size_t it = 0; it < n_iterations; ++it) {
    auto r = phi_apply(current, m, opt, it);
    out.log.rows.push_back(std::move(r.stats));
    out.iterates.push_back(r.ensemble);
    current = std::move(r.ensemble);
  }
  // Stats of the last measure (or of nu itself) from a survival batch.
  const auto seed = iteration_seed(opt.seed, n_iterations);
  const auto init = systematic_selector(current, opt.n_particles, seed);
  auto pools = harvest_escalating(init, m, opt, seed, {1});
  out.log.rows.push_back(stats_of(pools.front(), opt, n_iterations));
  return out;
}

void PhiIterationLog::write_csv(std::ostream& out) const {
  out << "iteration,E_tau,ci,censor_frac,ess,probe_s,probe_value\n";
  out.precision(10);
  for (const auto& r : rows) {
    const double ci = r.ci_hi - r.expected_tau.mean;
    for (const auto& [s, v] : r.probes) {
      out << r.measure_index << ',' << r.expected_tau.mean << ',' << ci << ',' << r.censoring_fraction
          << ',' << r.ess << ',' << s << ',' << v << '\n';
    }
    if (r.probes.empty()) {
      out << r.measure_index << ',' << r.expected_tau.mean << ',' << ci << ',' << r.censoring_fraction
          << ',' << r.ess << ",,\n";
    }
  }
}

PhiDirectResult phi_direct(const ProductMeasure& nu, const Model& m, const std::vector<int>& powers,
                           const PhiOptions& opt) {
  if (powers.empty()) throw ValidationError("phi_direct needs at least one power");
  const auto seed = iteration_seed(opt.seed, 0);
  IndexedSampler init = [&nu](std::size_t, Philox4x32& rng) { return nu.sample(rng); };
  auto pools = harvest_escalating(init, m, opt, seed, powers);
  PhiDirectResult r;
  r.powers = powers;
  r.censoring_fraction = pools.front().censoring_fraction();
  r.t_max = pools.front().t_max;
  for (const auto& p : pools) {
    r.ensembles.push_back(p.ensemble());
    r.ess.push_back(p.trajectory_ess());
  }
  return r;
}

WeightedEnsemble naive_uniform_time(const WeightedEnsemble& input, const Model& m,
                                    const PhiOptions& opt) {
  const auto seed = iteration_seed(opt.seed, 0);
  const auto init = systematic_selector(input, opt.n_particles, seed);
  std::vector<Configuration> picked(opt.n_particles);
  std::vector<char> ok(opt.n_particles, 0);
  parallel_for(opt.n_particles, opt.workers, [&](std::size_t i) {
    auto rng = make_stream(seed, stream_purpose::trajectory, i);
    std::vector<Configuration> states;
    std::vector<double> ends;
    SojournVisitor visit = [&](const Configuration& c, double, double b) {
      states.push_back(c);
      ends.push_back(b);
    };
    const auto r = simulate_killed(init(i, rng), m, opt.t_max, rng, false, &visit);
    if (r.censored() || states.empty()) return;
    const double u = rng.uniform() * r.tau;
    std::size_t k = 0;
    while (k + 1 < ends.size() && ends[k] <= u) ++k;
    picked[i] = states[k];
    ok[i] = 1;
  });
  std::vector<Configuration> atoms;
  for (std::size_t i = 0; i < picked.size(); ++i)
    if (ok[i]) atoms.push_back(std::move(picked[i]));
  if (atoms.empty()) throw PhiUndefinedError("every trajectory was censored or started in the target");
  return WeightedEnsemble::uniform(std::move(atoms));
}

}  // namespace qsd
