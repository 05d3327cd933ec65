#include "qsd/spectral/checks.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SparseLU>

#include "qsd/core/error.hpp"
#include "qsd/spectral/uniformization.hpp"

namespace qsd {
namespace {

using ColMatrix = Eigen::SparseMatrix<double>;

// Factorization of (-L)^T, so that solve(b) = b (-L)^{-1} for row vectors.
struct LeftSolver {
  Eigen::SparseLU<ColMatrix> lu;

  explicit LeftSolver(const SparseMatrix& l) {
    const ColMatrix a = ColMatrix(-l.transpose());
    lu.compute(a);
    if (lu.info() != Eigen::Success)
      throw SingularSystemError("killed generator is singular (a class never reaches the target)");
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& b) {
    Eigen::VectorXd x = lu.solve(b);
    if (lu.info() != Eigen::Success || !x.allFinite())
      throw SingularSystemError("linear solve with the killed generator failed");
    return x;
  }
};

}  // namespace

Eigen::VectorXd phi_exact(const KilledGenerator& gen, const Eigen::VectorXd& mu) {
  LeftSolver s(gen.matrix);
  Eigen::VectorXd x = s.solve(mu);
  return x / x.sum();
}

FixedPointReport qsd_fixed_point_check(const KilledGenerator& gen, const Eigen::VectorXd& mu) {
  FixedPointReport r;
  LeftSolver s(gen.matrix);
  const Eigen::VectorXd x = s.solve(mu);
  r.expected_tau = x.sum() / mu.sum();
  const Eigen::VectorXd m = mu / mu.sum();
  r.phi_distance = (x / x.sum() - m).lpNorm<1>();
  // mu L restricted to A^c; mu(L 1) = -mu(killing).
  const Eigen::VectorXd ml = gen.matrix.transpose() * m;
  const double ml1 = ml.sum();
  r.generator_residual = (ml - ml1 * m).lpNorm<Eigen::Infinity>();
  return r;
}

double ExactIterates::expected_tau(std::size_t n) const {
  if (n + 1 >= log_v.size()) throw ValidationError("not enough exact iterates");
  return std::exp(log_v[n + 1] - log_v[n]);
}

double ExactIterates::log_moment(std::size_t k) const {
  if (k >= log_v.size()) throw ValidationError("not enough exact iterates");
  return std::lgamma(static_cast<double>(k) + 1.0) + log_v[k];
}

ExactIterates exact_phi_iterates(const KilledGenerator& gen, const Eigen::VectorXd& nu,
                                 std::size_t n, double total_mass) {
  ExactIterates out;
  const double m0 = nu.sum();
  if (!(m0 > 0)) throw ValidationError("initial measure has no mass outside the target");
  if (total_mass < m0 * (1 - 1e-12)) throw ValidationError("total mass below the mass outside the target");
  out.log_v.push_back(std::log(total_mass));
  out.measures.push_back(nu / m0);
  LeftSolver s(gen.matrix);
  Eigen::VectorXd w = nu / m0;
  double log_scale = std::log(m0);
  for (std::size_t k = 1; k <= n; ++k) {
    Eigen::VectorXd x = s.solve(w);
    const double mass = x.sum();
    log_scale += std::log(mass);
    out.log_v.push_back(log_scale);
    w = x / mass;
    out.measures.push_back(w);
  }
  return out;
}

SupermultiplicativityExact exact_supermultiplicativity(const KilledGenerator& gen,
                                                       const Eigen::VectorXd& nu,
                                                       const std::vector<double>& grid) {
  std::vector<double> all = grid;
  for (double s : grid)
    for (double t : grid) all.push_back(s + t);
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  const auto surv = exact_survival(gen, nu, all);
  auto at = [&](double t) {
    const auto it = std::lower_bound(all.begin(), all.end(), t);
    return surv[static_cast<std::size_t>(it - all.begin())];
  };
  SupermultiplicativityExact r;
  r.worst_gap = INFINITY;
  for (double s : grid) {
    for (double t : grid) {
      const double gap = at(s + t) - at(s) * at(t);
      ++r.pairs;
      if (gap < r.worst_gap) {
        r.worst_gap = gap;
        r.worst_s = s;
        r.worst_t = t;
      }
    }
  }
  return r;
}

SandwichReport hitting_sandwich_check(const KilledGenerator& gen, const Eigen::VectorXd& nu,
                                      const SpectralResult& spec, const std::vector<double>& t_grid,
                                      double tol) {
  SandwichReport r;
  r.lambda = spec.defective && spec.lambda_fit ? *spec.lambda_fit : spec.lambda;
  const auto surv = exact_survival(gen, nu, t_grid);
  r.skipped = !spec.has_vectors();
  if (!r.skipped) {
    const Eigen::VectorXd& mu = spec.left;
    const double gnu = nu.dot(spec.right);
    if (!(gnu > 0)) throw EstimationError("right eigenvector has no mass under the measure");
    const Eigen::VectorXd g = spec.right / gnu;
    // f = mu / nu, so f g nu = mu g.
    const Eigen::VectorXd fgnu = mu.cwiseProduct(g);
    r.fg_integral = fgnu.sum();
    r.f_min = INFINITY;
    double h = 0.0;
    for (Eigen::Index x = 0; x < mu.size(); ++x) {
      if (nu[x] > 0) r.f_min = std::min(r.f_min, mu[x] / nu[x]);
      const double p = fgnu[x] / r.fg_integral;
      if (p > 0) h += p * std::log(p / nu[x]);
    }
    r.entropy = h;
  }
  r.passed = r.skipped || r.fg_integral >= 1.0 - tol;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    SandwichRow row;
    row.t = t_grid[i];
    row.survival = surv[i];
    row.upper = std::exp(-r.lambda * row.t);
    row.lower = r.skipped ? 0.0 : std::exp(-r.entropy - r.lambda * row.t);
    row.passed = row.survival <= row.upper + tol && row.survival >= row.lower - tol;
    r.passed = r.passed && row.passed;
    r.rows.push_back(row);
  }
  return r;
}

double rayleigh_quotient(const KilledGenerator& gen, const Eigen::VectorXd& nu,
                         const Eigen::VectorXd& f) {
  const Eigen::VectorXd lf = gen.matrix * f;
  const double num = -(nu.array() * f.array() * lf.array()).sum();
  const double den = (nu.array() * f.array().square()).sum();
  if (!(den > 0)) throw ValidationError("trial function vanishes under the measure");
  return num / den;
}

RayleighReport rayleigh_bound(const KilledGenerator& gen, const KilledGenerator& sym,
                              const Eigen::VectorXd& nu) {
  if (gen.size() != sym.size()) throw ValidationError("generators live on different state spaces");
  RayleighReport r;
  const auto a = principal_decay(gen);
  const auto s = principal_decay(sym);
  if (a.absorbing || s.absorbing) throw SingularSystemError("a class never reaches the target");
  r.lambda = a.defective && a.lambda_fit ? *a.lambda_fit : a.lambda;
  r.lambda_s = s.lambda;
  r.margin = r.lambda - r.lambda_s;
  const Eigen::ArrayXd root = nu.array().sqrt();
  for (Eigen::Index x = 0; x < sym.matrix.rows(); ++x) {
    for (SparseMatrix::InnerIterator it(sym.matrix, x); it; ++it) {
      const auto y = it.col();
      const double sxy = root[x] / root[y] * it.value();
      const double syx = root[y] / root[x] * sym.matrix.coeff(y, x);
      r.asymmetry = std::max(r.asymmetry, std::abs(sxy - syx));
    }
  }
  if (s.has_vectors()) {
    const Eigen::VectorXd h = (root * s.right.array()).matrix();
    const Eigen::VectorXd lg = sym.matrix * s.right;
    const Eigen::VectorXd sh = (-root * lg.array()).matrix();
    r.residual = (sh - r.lambda_s * h).lpNorm<Eigen::Infinity>() / h.lpNorm<Eigen::Infinity>();
    r.quotient_at_minimizer = rayleigh_quotient(sym, nu, s.right);
  }
  r.passed = r.lambda >= r.lambda_s - 1e-12;
  return r;
}

}  // namespace qsd
