#include "qsd/estimators/decay_fit.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qsd/core/error.hpp"
#include "qsd/stats/stats.hpp"

namespace qsd {
namespace {

struct Line {
  double slope = 0.0, intercept = 0.0, chi2 = 0.0, r2 = 1.0, max_abs_resid = 0.0;
};

Line wls(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& w,
         std::size_t lo, std::size_t hi) {
  double sw = 0, sx = 0, sy = 0;
  for (std::size_t i = lo; i <= hi; ++i) {
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
  }
  const double mx = sx / sw, my = sy / sw;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = lo; i <= hi; ++i) {
    sxx += w[i] * (x[i] - mx) * (x[i] - mx);
    sxy += w[i] * (x[i] - mx) * (y[i] - my);
    syy += w[i] * (y[i] - my) * (y[i] - my);
  }
  Line l;
  l.slope = sxx > 0 ? sxy / sxx : 0.0;
  l.intercept = my - l.slope * mx;
  for (std::size_t i = lo; i <= hi; ++i) {
    const double r = y[i] - (l.intercept + l.slope * x[i]);
    l.chi2 += w[i] * r * r;
    l.max_abs_resid = std::max(l.max_abs_resid, std::abs(r));
  }
  l.r2 = syy > 0 ? 1.0 - l.chi2 / syy : 1.0;
  return l;
}

struct Prepared {
  std::vector<double> x, y, w;
  std::vector<std::size_t> index;  // grid index of each usable point
};

Prepared prepare(const SurvivalCurve& c, const DecayFitOptions& opt) {
  Prepared p;
  const double n = static_cast<double>(c.n_total);
  for (std::size_t i = 0; i < c.t.size(); ++i) {
    const double P = c.estimate[i];
    if (!(P > 0.0)) continue;
    if (opt.t_lo && c.t[i] < *opt.t_lo) continue;
    if (opt.t_hi && c.t[i] > *opt.t_hi) continue;
    if (!c.exact() && c.n_alive[i] < opt.alive_floor) continue;
    if (!c.exact() && c.t[i] > c.t_max) continue;
    p.x.push_back(c.t[i]);
    p.y.push_back(std::log(P));
    // Var(log P) ~ (1 - P) / (n P), floored so P = 1 keeps a finite weight.
    p.w.push_back(c.exact() ? 1.0 : 1.0 / std::max((1.0 - P) / (n * P), 1.0 / (n * n)));
    p.index.push_back(i);
  }
  return p;
}

}  // namespace

DecayFit fit_decay(const SurvivalCurve& curve, const DecayFitOptions& opt) {
  auto p = prepare(curve, opt);
  const std::size_t m = p.x.size();
  if (m < opt.min_points || m < 2)
    throw EstimationError("decay fit window too short: " + std::to_string(m) +
                          " grid points with enough survivors (floor " +
                          std::to_string(opt.alive_floor) +
                          "); increase n_traj, lower the floor or end the time grid earlier");
  const std::size_t hi = m - 1;
  const std::size_t last_start = m - opt.min_points;
  std::size_t start = last_start;
  if (!opt.t_lo) {
    for (std::size_t s = 0; s <= last_start; ++s) {
      const Line l = wls(p.x, p.y, p.w, s, hi);
      const double dof = static_cast<double>(hi - s + 1) - 2.0;
      bool ok;
      if (curve.exact()) {
        double scale = 0.0;
        for (std::size_t i = s; i <= hi; ++i) scale = std::max(scale, std::abs(p.y[i]));
        ok = l.max_abs_resid <= 1e-9 * (1.0 + scale);
      } else {
        ok = dof <= 0 || l.chi2 / dof <= 1.0 + 3.0 * std::sqrt(2.0 / dof);
      }
      if (ok) {
        start = s;
        break;
      }
    }
  } else {
    start = 0;
  }
  const Line l = wls(p.x, p.y, p.w, start, hi);
  DecayFit f;
  f.lambda = -l.slope;
  f.intercept = l.intercept;
  f.t_lo = p.x[start];
  f.t_hi = p.x[hi];
  f.r2 = l.r2;
  f.n_points = hi - start + 1;
  f.n_alive_hi = curve.n_alive[p.index[hi]];
  const double dof = static_cast<double>(f.n_points) - 2.0;
  f.reduced_chi2 = dof > 0 ? l.chi2 / dof : 0.0;
  if (curve.exact()) return f;

  if (opt.bootstrap > 0 && !curve.tau.empty()) {
    // Refit the chosen window on trajectory resamples.
    std::vector<double> grid(curve.t.begin(), curve.t.end());
    auto lams = bootstrap(curve.tau.size(), opt.bootstrap, opt.seed, [&](std::span<const std::size_t> idx) {
      std::vector<double> tau;
      std::vector<char> cen;
      tau.reserve(idx.size());
      cen.reserve(idx.size());
      for (auto i : idx) {
        tau.push_back(curve.tau[i]);
        cen.push_back(curve.censored[i]);
      }
      auto c = survival_from_samples(tau, cen, grid, curve.t_max);
      std::vector<double> x, y, w;
      for (std::size_t k = 0; k < grid.size(); ++k) {
        if (grid[k] < f.t_lo || grid[k] > f.t_hi || !(c.estimate[k] > 0.0)) continue;
        const double P = c.estimate[k];
        const double n = static_cast<double>(c.n_total);
        x.push_back(grid[k]);
        y.push_back(std::log(P));
        w.push_back(1.0 / std::max((1.0 - P) / (n * P), 1.0 / (n * n)));
      }
      if (x.size() < 2) return f.lambda;
      return -wls(x, y, w, 0, x.size() - 1).slope;
    });
    f.se = sample_sd(lams);
  } else {
    double sw = 0, sx = 0;
    for (std::size_t i = start; i <= hi; ++i) {
      sw += p.w[i];
      sx += p.w[i] * p.x[i];
    }
    double sxx = 0;
    for (std::size_t i = start; i <= hi; ++i) sxx += p.w[i] * (p.x[i] - sx / sw) * (p.x[i] - sx / sw);
    // Neighbouring points share trajectories, so scale by the observed misfit.
    f.se = std::sqrt(std::max(1.0, f.reduced_chi2) / sxx);
  }
  return f;
}

}  // namespace qsd
