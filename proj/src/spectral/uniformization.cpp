#include "qsd/spectral/uniformization.hpp"

#include <cmath>

#include "qsd/core/error.hpp"

namespace qsd {

namespace {

double max_exit(const SparseMatrix& l) {
  double q = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) q = std::max(q, -l.coeff(i, i));
  return q;
}

// Row action u P = u + (u L) / q, with lt = L^T precomputed. Long horizons
// are split so the Poisson weight at k = 0 never underflows.
Eigen::VectorXd evolve_transposed(const SparseMatrix& lt, double q, const Eigen::VectorXd& u,
                                  double t, double tail) {
  if (t < 0.0) throw ValidationError("negative time");
  if (t == 0.0 || u.size() == 0 || q <= 0.0) return u;
  constexpr double kChunk = 400.0;
  if (q * t > kChunk) {
    const auto pieces = static_cast<long>(std::ceil(q * t / kChunk));
    Eigen::VectorXd v = u;
    for (long i = 0; i < pieces; ++i) v = evolve_transposed(lt, q, v, t / static_cast<double>(pieces), tail);
    return v;
  }
  const double mu = q * t;
  Eigen::VectorXd term = u, out = Eigen::VectorXd::Zero(u.size());
  double w = std::exp(-mu);
  for (long k = 0;; ++k) {
    out += w * term;
    // For k + 2 > mu the remaining weights are bounded by a geometric series.
    const double next = w * mu / static_cast<double>(k + 1);
    const double ratio = mu / static_cast<double>(k + 2);
    if (ratio < 1.0 && next / (1.0 - ratio) < tail) break;
    term = term + (lt * term) / q;
    w = next;
  }
  return out;
}

}  // namespace

Eigen::VectorXd evolve_row(const SparseMatrix& l, const Eigen::VectorXd& u, double t, double tail) {
  return evolve_transposed(SparseMatrix(l.transpose()), max_exit(l), u, t, tail);
}

double exact_survival(const KilledGenerator& gen, const Eigen::VectorXd& initial, double t) {
  return evolve_row(gen.matrix, initial, t).sum();
}

std::vector<double> exact_survival(const KilledGenerator& gen, const Eigen::VectorXd& initial,
                                   const std::vector<double>& t_grid) {
  std::vector<double> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) out.push_back(exact_survival(gen, initial, t));
  return out;
}

std::vector<double> log_survival(const KilledGenerator& gen, const Eigen::VectorXd& initial,
                                 const std::vector<double>& t_grid, double step) {
  std::vector<double> out;
  const SparseMatrix lt(gen.matrix.transpose());
  const double q = max_exit(gen.matrix);
  Eigen::VectorXd u = initial;
  double log_mass = 0.0, now = 0.0;
  for (double t : t_grid) {
    if (t < now) throw ValidationError("log_survival needs an increasing grid");
    while (now < t) {
      const double dt = std::min(step, t - now);
      u = evolve_transposed(lt, q, u, dt, kUniformizationTail);
      now += dt;
      const double s = u.sum();
      if (!(s > 0.0)) {
        log_mass = -INFINITY;
        break;
      }
      log_mass += std::log(s);
      u /= s;
    }
    out.push_back(log_mass + (now == 0.0 ? std::log(u.sum()) : 0.0));
    if (!std::isfinite(log_mass)) {
      out.resize(t_grid.size(), -INFINITY);
      return out;
    }
  }
  return out;
}

}  // namespace qsd
