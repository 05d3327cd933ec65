#include "qsd/dynamics/survival.hpp"

#include <cmath>

#include "qsd/core/parallel.hpp"
#include "qsd/dynamics/trajectory.hpp"

namespace qsd {

HittingSample sample_hitting_times(const InitialSampler& initial, const Model& m,
                                   std::size_t n_traj, double t_max, std::uint64_t seed,
                                   unsigned workers) {
  HittingSample out;
  out.tau.resize(n_traj);
  out.censored.resize(n_traj);
  out.t_max = t_max;
  std::vector<char> absorbed(n_traj, 0);
  parallel_for(n_traj, workers, [&](std::size_t i) {
    auto rng = make_stream(seed, stream_purpose::trajectory, i);
    const auto c = initial(rng);
    const auto r = simulate_killed(c, m, t_max, rng);
    out.tau[i] = r.tau;
    out.censored[i] = r.censored() ? 1 : 0;
    absorbed[i] = r.status == TerminalStatus::absorbed ? 1 : 0;
  });
  for (char a : absorbed) out.absorbed += static_cast<std::size_t>(a);
  return out;
}

SurvivalCurve survival_curve(const InitialSampler& initial, const Model& m,
                             std::span<const double> t_grid, std::size_t n_traj, double t_max,
                             std::uint64_t seed, unsigned workers, double z) {
  auto s = sample_hitting_times(initial, m, n_traj, t_max, seed, workers);
  return survival_from_samples(s.tau, s.censored, t_grid, t_max, z);
}

std::vector<SupermultiplicativityRow> supermultiplicativity_check(
    const HittingSample& sample, std::span<const std::pair<double, double>> pairs, double z) {
  std::vector<SupermultiplicativityRow> rows;
  const std::size_t n = sample.tau.size();
  auto alive = [&](std::size_t i, double t) {
    return sample.censored[i] ? t <= sample.t_max : sample.tau[i] > t;
  };
  for (auto [s, t] : pairs) {
    SupermultiplicativityRow row;
    row.s = s;
    row.t = t;
    double a = 0, b = 0, c = 0;
    for (std::size_t i = 0; i < n; ++i) {
      a += alive(i, s + t);
      b += alive(i, t);
      c += alive(i, s);
    }
    const double dn = static_cast<double>(n);
    row.p_st = a / dn;
    row.p_t = b / dn;
    row.p_s = c / dn;
    row.excess = row.p_st - row.p_t * row.p_s;
    // Influence function of P(t+s) - P(t) P(s).
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = (alive(i, s + t) - row.p_st) - row.p_s * (alive(i, t) - row.p_t) -
                       row.p_t * (alive(i, s) - row.p_s);
      ss += v * v;
    }
    row.se = n > 1 ? std::sqrt(ss / (dn - 1.0) / dn) : 0.0;
    row.passed = row.excess >= -z * row.se;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qsd
