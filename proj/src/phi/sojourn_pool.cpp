#include "qsd/phi/sojourn_pool.hpp"

#include <algorithm>
#include <cmath>

#include "qsd/core/error.hpp"
#include "qsd/core/parallel.hpp"
#include "qsd/dynamics/trajectory.hpp"
#include "qsd/stats/stats.hpp"

namespace qsd {

double log_power_weight(double a, double b, int n) {
  if (n == 1) return std::log(b - a);
  const double nd = static_cast<double>(n);
  // b^n - a^n = b^n (1 - (a/b)^n), with (a/b)^n = exp(n log1p(-(b - a)/b)).
  const double inner = -std::expm1(nd * std::log1p(-(b - a) / b));
  return nd * std::log(b) + std::log(inner) - std::log(nd);
}

std::size_t SojournPool::n_censored() const noexcept {
  std::size_t k = 0;
  for (char c : censored) k += c ? 1 : 0;
  return k;
}

double SojournPool::censoring_fraction() const noexcept {
  return tau.empty() ? 0.0 : static_cast<double>(n_censored()) / static_cast<double>(tau.size());
}

double SojournPool::log_total_weight() const { return log_sum_exp(log_weights); }

double SojournPool::trajectory_ess() const {
  if (log_weights.empty()) return 0.0;
  const double shift = *std::max_element(log_weights.begin(), log_weights.end());
  std::vector<double> per(tau.size(), 0.0);
  for (std::size_t i = 0; i < log_weights.size(); ++i) per[trajectory[i]] += std::exp(log_weights[i] - shift);
  double s = 0, s2 = 0;
  for (double w : per) {
    s += w;
    s2 += w * w;
  }
  return s2 > 0 ? s * s / s2 : 0.0;
}

WeightedEnsemble SojournPool::ensemble() const {
  if (log_weights.empty()) {
    throw PhiUndefinedError("no uncensored trajectory spent time outside the target (" +
                            std::to_string(n_censored()) + " of " + std::to_string(tau.size()) +
                            " censored at t_max " + std::to_string(t_max) + ")");
  }
  const double shift = *std::max_element(log_weights.begin(), log_weights.end());
  std::vector<double> w(log_weights.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(log_weights[i] - shift);
  WeightedEnsemble e(states, std::move(w), trajectory);
  e.set_censoring_fraction(censoring_fraction());
  return e;
}

std::vector<SojournPool> harvest_sojourns(const IndexedSampler& initial, const Model& m,
                                          std::size_t n_traj, const HarvestOptions& opt) {
  if (opt.powers.empty()) throw ValidationError("no weight power requested");
  for (int p : opt.powers)
    if (p < 1) throw ValidationError("weight power must be at least 1");
  struct Local {
    std::vector<Configuration> states;
    std::vector<double> a, b;
    double tau = 0.0;
    bool censored = false;
  };
  std::vector<Local> local(n_traj);
  parallel_for(n_traj, opt.workers, [&](std::size_t i) {
    auto rng = make_stream(opt.seed, stream_purpose::trajectory, i);
    const auto init = initial(i, rng);
    Local& l = local[i];
    SojournVisitor visit = [&l](const Configuration& c, double a, double b) {
      if (b > a) {
        l.states.push_back(c);
        l.a.push_back(a);
        l.b.push_back(b);
      }
    };
    const auto r = simulate_killed(init, m, opt.t_max, rng, false, &visit);
    l.tau = r.tau;
    l.censored = r.censored();
    if (l.censored) {
      l.states.clear();
      l.a.clear();
      l.b.clear();
    }
  });
  std::vector<SojournPool> pools(opt.powers.size());
  for (std::size_t k = 0; k < pools.size(); ++k) {
    pools[k].power = opt.powers[k];
    pools[k].t_max = opt.t_max;
    pools[k].tau.reserve(n_traj);
    pools[k].censored.reserve(n_traj);
  }
  // Sequential merge in trajectory order.
  for (std::size_t i = 0; i < n_traj; ++i) {
    Local& l = local[i];
    for (std::size_t k = 0; k < pools.size(); ++k) {
      auto& p = pools[k];
      p.tau.push_back(l.tau);
      p.censored.push_back(l.censored ? 1 : 0);
      for (std::size_t j = 0; j < l.states.size(); ++j) {
        p.log_weights.push_back(log_power_weight(l.a[j], l.b[j], p.power));
        p.trajectory.push_back(static_cast<std::uint32_t>(i));
        if (k + 1 == pools.size()) {
          p.states.push_back(std::move(l.states[j]));
        } else {
          p.states.push_back(l.states[j]);
        }
      }
    }
    l = Local{};
  }
  return pools;
}

}  // namespace qsd
