#include "qsd/dynamics/sigma_exit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qsd/core/error.hpp"
#include "qsd/core/parallel.hpp"
#include "qsd/core/rng.hpp"
#include "qsd/dynamics/simulator.hpp"

namespace qsd {
namespace {

// Probability that a Poisson(mu) variable is at least d.
double poisson_at_least(double mu, int d) {
  if (d <= 0) return 1.0;
  double term = std::exp(-mu), below = 0.0;
  for (int n = 0; n < d; ++n) {
    below += term;
    term *= mu / (n + 1);
  }
  return std::clamp(1.0 - below, 0.0, 1.0);
}

// True when the run survives to kappa without a tagged particle entering.
bool survives(const Model& m, Configuration c, double kappa, Philox4x32& rng) {
  const std::size_t n = m.num_sites();
  std::vector<std::vector<char>> stack(n);  // bottom to top, 1 = tagged
  for (Site s = 0; s < n; ++s) stack[s].assign(static_cast<std::size_t>(c[s]), m.target().in_region(s) ? 0 : 1);
  Simulator sim(m, std::move(c));
  const auto& rates = m.rates();
  double t = 0.0;
  while (sim.total_rate() > 0.0) {
    t += rng.exponential(sim.total_rate());
    if (t >= kappa) return true;
    const Jump j = sim.choose(rng);
    const auto& eta = sim.state();
    const int ni = eta[j.from], mj = eta[j.to];
    // Label k in 1..ni with weight b(k, mj) - b(k - 1, mj).
    const double u = rng.uniform() * rates.b(ni, mj);
    double acc = 0.0;
    int label = ni;
    for (int k = 1; k <= ni; ++k) {
      acc += rates.b(k, mj) - rates.b(k - 1, mj);
      if (u < acc) {
        label = k;
        break;
      }
    }
    auto& from = stack[j.from];
    const char tag = from[static_cast<std::size_t>(label - 1)];
    from.erase(from.begin() + (label - 1));
    stack[j.to].push_back(tag);
    sim.apply(j);
    if (tag && m.target().in_region(j.to)) return false;
  }
  return true;
}

}  // namespace

std::vector<int> jump_distances(const Model& m) {
  const int range = std::max(1, m.kernel().range());
  std::vector<int> d(m.num_sites(), 0);
  for (Site s = 0; s < m.num_sites(); ++s) {
    int best = std::numeric_limits<int>::max();
    for (Site r : m.target().region()) best = std::min(best, m.lattice().distance(s, r));
    d[s] = best / range;
  }
  return d;
}

double exit_time_bound(const Model& m, double rho, double kappa, bool poisson_tail) {
  const auto d = jump_distances(m);
  const double mu = m.delta() * kappa;
  double log_b = 0.0;
  for (Site s = 0; s < m.num_sites(); ++s) {
    if (m.target().in_region(s)) continue;
    double delta;
    if (poisson_tail) delta = poisson_at_least(mu, d[s]);
    else delta = std::min(1.0, std::exp(d[s] * std::log(mu) - std::lgamma(d[s] + 1.0)));
    if (d[s] == 0) delta = 1.0;
    if (delta >= 1.0) return rho > 0.0 ? 0.0 : 1.0;
    log_b += rho * std::log1p(-delta);
  }
  return std::exp(log_b);
}

SigmaExitReport sigma_exit(const Model& m, const ProductMeasure& nu, double kappa,
                           std::size_t n_traj, std::uint64_t seed, unsigned workers, double z) {
  if (!(kappa > 0.0)) throw ValidationError("kappa must be positive");
  if (nu.num_sites() != m.num_sites()) throw ValidationError("measure and model have different lattices");
  std::vector<char> ok(n_traj, 0);
  parallel_for(n_traj, workers, [&](std::size_t k) {
    auto rng = make_stream(seed, stream_purpose::trajectory, k);
    ok[k] = survives(m, nu.sample(rng), kappa, rng) ? 1 : 0;
  });
  SigmaExitReport r;
  r.kappa = kappa;
  r.n_traj = n_traj;
  double s = 0;
  for (char x : ok) s += x;
  const double n = static_cast<double>(n_traj);
  r.estimate = s / n;
  r.se = std::sqrt(r.estimate * (1.0 - r.estimate) / n);
  r.bound = exit_time_bound(m, nu.rho(), kappa, false);
  r.poisson_bound = exit_time_bound(m, nu.rho(), kappa, true);
  r.passed = r.estimate >= r.bound - z * r.se;
  return r;
}

}  // namespace qsd
