#include "qsd/dynamics/random_walk.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Sparse>

#include "qsd/core/error.hpp"
#include "qsd/core/parallel.hpp"
#include "qsd/core/rng.hpp"

namespace qsd {
namespace {

constexpr double kPoissonTail = 1e-14;

// Padded box: a blocked lattice whose sites carry an offset back to Z^d.
struct Box {
  Lattice lattice;
  Coords origin;

  std::optional<Site> site(const Coords& z) const {
    Coords local(z.size());
    for (std::size_t a = 0; a < z.size(); ++a) local[a] = z[a] - origin[a];
    return lattice.site(local);
  }
};

Box make_box(const WalkProblem& w) {
  const std::size_t d = w.start.size();
  if (w.kernel.dimension() != d) throw ValidationError("walk start and kernel differ in dimension");
  const int pad = std::max(1, w.padding) * std::max(1, w.kernel.range());
  Coords lo = w.start, hi = w.start;
  for (const auto& r : w.region) {
    if (r.size() != d) throw ValidationError("walk region and kernel differ in dimension");
    for (std::size_t a = 0; a < d; ++a) {
      lo[a] = std::min(lo[a], r[a]);
      hi[a] = std::max(hi[a], r[a]);
    }
  }
  std::vector<int> extents(d);
  for (std::size_t a = 0; a < d; ++a) {
    lo[a] -= pad;
    extents[a] = hi[a] + pad - lo[a] + 1;
  }
  return {Lattice(extents, Boundary::blocked), lo};
}

// Transition structure inside the box: for each site the (destination,
// weight) pairs that stay inside; mass leaving the box is dropped.
struct Chain {
  std::vector<std::vector<std::pair<Site, double>>> moves;
  std::vector<char> target;
  std::size_t start;
};

Chain box_chain(const WalkProblem& w, const Box& box) {
  Chain c;
  const std::size_t n = box.lattice.num_sites();
  c.moves.resize(n);
  c.target.assign(n, 0);
  for (const auto& r : w.region) c.target[*box.site(r)] = 1;
  c.start = *box.site(w.start);
  const auto& off = w.kernel.offsets();
  const auto& wt = w.kernel.weights();
  for (Site s = 0; s < n; ++s) {
    for (std::size_t k = 0; k < off.size(); ++k) {
      if (wt[k] <= 0.0) continue;
      if (auto t = box.lattice.shift(s, off[k])) c.moves[s].emplace_back(*t, wt[k]);
    }
  }
  return c;
}

double solve_ever(const Chain& c) {
  if (c.target[c.start]) return 1.0;
  const std::size_t n = c.moves.size();
  // h = P h off the target, h = 1 on it: (I - P_off) h = P 1_target.
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (Site s = 0; s < n; ++s) {
    const auto si = static_cast<Eigen::Index>(s);
    trip.emplace_back(si, si, 1.0);
    if (c.target[s]) {
      b[si] = 1.0;
      continue;
    }
    for (auto [t, p] : c.moves[s]) {
      if (c.target[t]) b[si] += p;
      else trip.emplace_back(si, static_cast<Eigen::Index>(t), -p);
    }
  }
  Eigen::SparseMatrix<double> a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  a.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) throw SingularSystemError("walk hitting system is singular");
  Eigen::VectorXd h = lu.solve(b);
  return std::clamp(h[static_cast<Eigen::Index>(c.start)], 0.0, 1.0);
}

double solve_within(const Chain& c, double rate, double horizon) {
  if (c.target[c.start]) return 1.0;
  if (horizon <= 0.0 || rate <= 0.0) return 0.0;
  const std::size_t n = c.moves.size();
  // h_k = P(hit within k steps); answer = sum_k Pois(rate t; k) h_k.
  std::vector<double> h(n), next(n);
  for (Site s = 0; s < n; ++s) h[s] = c.target[s];
  const double mu = rate * horizon;
  double log_w = -mu, acc_w = 0.0, result = 0.0;
  for (std::size_t k = 0;; ++k) {
    const double w = std::exp(log_w);
    result += w * h[c.start];
    acc_w += w;
    if (1.0 - acc_w < kPoissonTail && static_cast<double>(k) > mu) break;
    if (k > 100000 + static_cast<std::size_t>(10 * mu)) break;
    for (Site s = 0; s < n; ++s) {
      if (c.target[s]) {
        next[s] = 1.0;
        continue;
      }
      double v = 0.0;
      for (auto [t, p] : c.moves[s]) v += p * h[t];
      next[s] = v;
    }
    h.swap(next);
    log_w += std::log(mu) - std::log(static_cast<double>(k + 1));
  }
  return std::clamp(result, 0.0, 1.0);
}

}  // namespace

WalkHitting rw_hitting_ever(const WalkProblem& w) {
  const Box box = make_box(w);
  const Chain c = box_chain(w, box);
  return {solve_ever(c), box.lattice.num_sites(), w.padding};
}

WalkHitting rw_hitting_within(const WalkProblem& w, double rate, double horizon) {
  const Box box = make_box(w);
  const Chain c = box_chain(w, box);
  return {solve_within(c, rate, horizon), box.lattice.num_sites(), w.padding};
}

WalkMonteCarlo rw_hitting_monte_carlo(const WalkProblem& w, std::size_t n_walks, std::uint64_t seed,
                                      std::optional<std::pair<double, double>> rate_horizon,
                                      unsigned workers) {
  const Box box = make_box(w);
  const Chain c = box_chain(w, box);
  std::vector<char> hit(n_walks, 0);
  const auto& wt = w.kernel.weights();
  const auto& off = w.kernel.offsets();
  parallel_for(n_walks, workers, [&](std::size_t k) {
    auto rng = make_stream(seed, stream_purpose::walk, k);
    Site s = c.start;
    double t = 0.0;
    for (;;) {
      if (c.target[s]) {
        hit[k] = 1;
        return;
      }
      if (rate_horizon) {
        t += rng.exponential(rate_horizon->first);
        if (t >= rate_horizon->second) return;
      }
      double u = rng.uniform(), acc = 0.0;
      std::size_t pick = off.size() - 1;
      for (std::size_t j = 0; j < off.size(); ++j) {
        acc += wt[j];
        if (u < acc) {
          pick = j;
          break;
        }
      }
      auto next = box.lattice.shift(s, off[pick]);
      if (!next) return;  // escaped the box
      s = *next;
    }
  });
  WalkMonteCarlo r;
  r.n = n_walks;
  double h = 0;
  for (char x : hit) h += x;
  r.probability = h / static_cast<double>(n_walks);
  r.se = std::sqrt(r.probability * (1.0 - r.probability) / static_cast<double>(n_walks));
  return r;
}

double rw_hitting_on_lattice(const Lattice& lattice, const JumpKernel& kernel, Site start,
                             const std::vector<Site>& region, double rate,
                             std::optional<double> horizon) {
  Chain c;
  const std::size_t n = lattice.num_sites();
  c.moves.resize(n);
  c.target.assign(n, 0);
  for (Site r : region) c.target[r] = 1;
  c.start = start;
  const auto& off = kernel.offsets();
  const auto& wt = kernel.weights();
  for (Site s = 0; s < n; ++s) {
    double stay = 0.0;
    for (std::size_t k = 0; k < off.size(); ++k) {
      if (wt[k] <= 0.0) continue;
      if (auto t = lattice.shift(s, off[k])) c.moves[s].emplace_back(*t, wt[k]);
      else stay += wt[k];
    }
    if (stay > 0.0) c.moves[s].emplace_back(s, stay);
  }
  if (horizon) return solve_within(c, rate, *horizon);
  // On a finite lattice the absorbing system can be singular when the
  // region is unreachable; iterate the step recursion to a fixed point.
  std::vector<double> h(n), next(n);
  for (Site s = 0; s < n; ++s) h[s] = c.target[s];
  for (int it = 0; it < 1'000'000; ++it) {
    double diff = 0.0;
    for (Site s = 0; s < n; ++s) {
      if (c.target[s]) {
        next[s] = 1.0;
        continue;
      }
      double v = 0.0;
      for (auto [t, p] : c.moves[s]) v += p * h[t];
      next[s] = v;
      diff = std::max(diff, std::abs(v - h[s]));
    }
    h.swap(next);
    if (diff < 1e-15) break;
  }
  return h[start];
}

}  // namespace qsd
