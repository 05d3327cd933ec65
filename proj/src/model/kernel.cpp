#include "qsd/model/kernel.hpp"

#include <array>
#include <cmath>
#include <map>
#include <queue>

#include "qsd/core/error.hpp"

namespace qsd {

JumpKernel::JumpKernel(std::vector<Coords> offsets, std::vector<double> weights)
    : offsets_(std::move(offsets)), weights_(std::move(weights)) {
  if (offsets_.empty()) throw ValidationError("jump kernel needs at least one offset");
  if (offsets_.size() != weights_.size()) {
    throw ValidationError("jump kernel offsets and weights differ in length");
  }
  dim_ = offsets_.front().size();
  if (dim_ == 0) throw ValidationError("jump kernel offsets must be non-empty vectors");
  for (std::size_t k = 0; k < offsets_.size(); ++k) {
    if (offsets_[k].size() != dim_) throw ValidationError("jump kernel offsets differ in dimension");
    if (!std::isfinite(weights_[k])) throw ValidationError("jump kernel weight is not finite");
  }
}

JumpKernel JumpKernel::nearest_neighbour(std::size_t d, double p_right) {
  std::vector<Coords> offs;
  std::vector<double> w;
  for (std::size_t a = 0; a < d; ++a) {
    Coords plus(d, 0), minus(d, 0);
    plus[a] = 1;
    minus[a] = -1;
    if (p_right > 0) {
      offs.push_back(plus);
      w.push_back(p_right / static_cast<double>(d));
    }
    if (p_right < 1) {
      offs.push_back(minus);
      w.push_back((1.0 - p_right) / static_cast<double>(d));
    }
  }
  return JumpKernel(std::move(offs), std::move(w));
}

JumpKernel JumpKernel::totally_asymmetric() { return JumpKernel({{1}}, {1.0}); }

int JumpKernel::range() const {
  int r = 0;
  for (std::size_t k = 0; k < offsets_.size(); ++k) {
    if (weights_[k] <= 0) continue;
    int n = 0;
    for (int x : offsets_[k]) n += std::abs(x);
    r = std::max(r, n);
  }
  return r;
}

double JumpKernel::total_weight() const {
  double s = 0;
  for (double w : weights_) s += w;
  return s;
}

std::vector<double> JumpKernel::drift() const {
  std::vector<double> v(dim_, 0.0);
  for (std::size_t k = 0; k < offsets_.size(); ++k) {
    for (std::size_t a = 0; a < dim_; ++a) v[a] += weights_[k] * offsets_[k][a];
  }
  return v;
}

JumpKernel JumpKernel::reversed() const {
  std::vector<Coords> offs = offsets_;
  for (auto& o : offs) {
    for (int& x : o) x = -x;
  }
  return JumpKernel(std::move(offs), weights_);
}

JumpKernel JumpKernel::symmetrized() const {
  std::map<Coords, double> merged;
  for (std::size_t k = 0; k < offsets_.size(); ++k) {
    Coords neg = offsets_[k];
    for (int& x : neg) x = -x;
    merged[offsets_[k]] += 0.5 * weights_[k];
    merged[neg] += 0.5 * weights_[k];
  }
  std::vector<Coords> offs;
  std::vector<double> w;
  for (auto& [o, p] : merged) {
    offs.push_back(o);
    w.push_back(p);
  }
  return JumpKernel(std::move(offs), std::move(w));
}

bool JumpKernel::symmetrized_irreducible_on(const Lattice& lattice) const {
  if (lattice.dimension() != dim_) return false;
  std::vector<char> seen(lattice.num_sites(), 0);
  std::queue<Site> frontier;
  frontier.push(0);
  seen[0] = 1;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const Site s = frontier.front();
    frontier.pop();
    for (std::size_t k = 0; k < offsets_.size(); ++k) {
      if (weights_[k] <= 0) continue;
      Coords neg = offsets_[k];
      for (int& x : neg) x = -x;
      for (const Coords* o : std::array<const Coords*, 2>{&offsets_[k], &neg}) {
        auto t = lattice.shift(s, *o);
        if (t && !seen[*t]) {
          seen[*t] = 1;
          ++reached;
          frontier.push(*t);
        }
      }
    }
  }
  return reached == lattice.num_sites();
}

}  // namespace qsd
