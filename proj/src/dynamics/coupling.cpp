#include "qsd/dynamics/coupling.hpp"

#include <algorithm>
#include <cmath>

#include "qsd/core/error.hpp"
#include "qsd/core/parallel.hpp"
#include "qsd/core/rng.hpp"
#include "qsd/dynamics/random_walk.hpp"
#include "qsd/dynamics/simulator.hpp"

namespace qsd {
namespace {

struct CoupledOutcome {
  double tau_eta = 0.0;
  double tau_zeta = 0.0;
  bool eta_hit = false;
  bool zeta_hit = false;
  std::size_t order_violations = 0;
  std::size_t coupling_violations = 0;
  bool frozen = false;
};

double forward_rate(const Model& m, const Configuration& eta, Site x) {
  double r = 0.0;
  const auto dests = m.destinations(x);
  for (std::size_t k = 0; k < dests.size(); ++k) {
    const Site j = dests[k];
    if (j == kNoSite) continue;
    r += m.kernel().weights()[k] * std::max(0.0, m.rates().increment(eta[x], eta[j]));
  }
  return r;
}

void check(const Configuration& eta, const Configuration& zeta, Site x, CoupledOutcome& out) {
  for (Site s = 0; s < eta.size(); ++s) {
    const int d = zeta[s] - eta[s];
    if (d < 0) ++out.order_violations;
    if (d != (s == x ? 1 : 0)) ++out.coupling_violations;
  }
}

CoupledOutcome run_pair(const Model& m, const Configuration& eta0, Site x0, double t_max,
                        Philox4x32& rng) {
  CoupledOutcome out;
  Simulator sim(m, eta0);
  Configuration zeta = eta0.with_particle(x0);
  Site x = x0;
  double t = 0.0;
  const auto& rates = m.rates();
  out.zeta_hit = m.in_target(zeta);
  out.eta_hit = m.in_target(eta0);
  if (out.eta_hit) return out;
  for (;;) {
    const double fwd = forward_rate(m, sim.state(), x);
    const double total = sim.total_rate() + fwd;
    if (!(total > 0.0)) {
      out.frozen = true;
      break;
    }
    t += rng.exponential(total);
    if (t >= t_max) {
      out.frozen = fwd <= 0.0;
      break;
    }
    const double u = rng.uniform() * total;
    if (u < fwd) {
      // zeta-only move of the tagged particle.
      const auto& eta = sim.state();
      const auto dests = m.destinations(x);
      double acc = 0.0, target = u;
      Site to = kNoSite;
      for (std::size_t k = 0; k < dests.size(); ++k) {
        const Site j = dests[k];
        if (j == kNoSite) continue;
        const double r = m.kernel().weights()[k] * std::max(0.0, rates.increment(eta[x], eta[j]));
        if (r <= 0.0) continue;
        to = j;
        acc += r;
        if (target < acc) break;
      }
      zeta.move(x, to);
      x = to;
    } else {
      const Jump j = sim.choose(rng);
      const auto& eta = sim.state();
      bool zeta_follows = true;
      if (j.to == x) {
        // eta jumps onto X; zeta follows with probability b(n, m+1) / b(n, m).
        const double full = rates.b(eta[j.from], eta[x]);
        const double joint = rates.b(zeta[j.from], zeta[x]);
        zeta_follows = rng.uniform() * full < joint;
      }
      sim.apply(j);
      if (zeta_follows) zeta.move(j.from, j.to);
      else x = j.from;  // zeta - eta is now delta at the jump source
    }
    check(sim.state(), zeta, x, out);
    if (!out.zeta_hit && m.in_target(zeta)) {
      out.zeta_hit = true;
      out.tau_zeta = t;
    }
    if (m.in_target(sim.state())) {
      out.eta_hit = true;
      out.tau_eta = t;
      break;
    }
  }
  if (!out.zeta_hit) out.tau_zeta = t_max;
  out.tau_eta = out.eta_hit ? out.tau_eta : t_max;
  return out;
}

}  // namespace

bool SecondClassReport::all_passed() const noexcept {
  return order_violations == 0 && coupling_violations == 0 &&
         std::all_of(passed.begin(), passed.end(), [](char c) { return c != 0; });
}

SecondClassReport second_class_escape(const Model& m, const Configuration& eta, Site i,
                                      const SecondClassOptions& opt) {
  if (m.target().in_region(i)) throw ValidationError("second-class particle must start outside the target region");
  if (m.in_target(eta)) throw ValidationError("initial configuration is already in the target");
  if (opt.t_grid.empty()) throw ValidationError("second-class run needs a time grid");
  const double t_max = opt.t_max > 0 ? opt.t_max : opt.t_grid.back();
  std::vector<CoupledOutcome> runs(opt.n_traj);
  parallel_for(opt.n_traj, opt.workers, [&](std::size_t k) {
    auto rng = make_stream(opt.seed, stream_purpose::trajectory, k);
    runs[k] = run_pair(m, eta, i, t_max, rng);
  });

  SecondClassReport rep;
  rep.bound_rigorous = !m.rates().depends_on_target();
  const double delta = m.delta();
  rep.hit_ever = rw_hitting_on_lattice(m.lattice(), m.kernel(), i, m.target().region(), delta, std::nullopt);
  rep.epsilon = 1.0 - rep.hit_ever;
  const double n = static_cast<double>(opt.n_traj);
  for (const auto& r : runs) {
    rep.order_violations += r.order_violations;
    rep.coupling_violations += r.coupling_violations;
    rep.frozen += r.frozen ? 1 : 0;
  }
  for (double t : opt.t_grid) {
    double a = 0, b = 0, g2 = 0;
    for (const auto& r : runs) {
      const bool ae = !(r.eta_hit && r.tau_eta <= t);
      const bool az = !(r.zeta_hit && r.tau_zeta <= t);
      a += ae;
      b += az;
      const double d = static_cast<double>(ae) - static_cast<double>(az);
      g2 += d * d;
    }
    const double pe = a / n, pz = b / n, gap = pe - pz;
    const double se = n > 1 ? std::sqrt(std::max(0.0, g2 / n - gap * gap) / (n - 1.0)) : 0.0;
    const double hit = rw_hitting_on_lattice(m.lattice(), m.kernel(), i, m.target().region(), delta, t);
    rep.t.push_back(t);
    rep.p_eta.push_back(pe);
    rep.p_zeta.push_back(pz);
    rep.gap.push_back(gap);
    rep.gap_se.push_back(se);
    rep.hit_within.push_back(hit);
    rep.bound.push_back(hit * pe);
    rep.passed.push_back(gap <= hit * pe + opt.z * se + 1e-15 ? 1 : 0);
  }
  return rep;
}

}  // namespace qsd
