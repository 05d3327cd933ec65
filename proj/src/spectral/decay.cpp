#include "qsd/spectral/decay.hpp"

#include <algorithm>
#include <cmath>
#include <stack>

#include <Eigen/SparseLU>

#include "qsd/core/error.hpp"
#include "qsd/spectral/uniformization.hpp"

namespace qsd {
namespace {

using ColMatrix = Eigen::SparseMatrix<double>;

struct Iterated {
  double lambda = 0.0;
  Eigen::VectorXd vec;
  double residual = INFINITY;
  int iterations = 0;
};

// Inverse iteration for the Perron pair of the M-matrix a = -L.
Iterated inverse_iteration(const ColMatrix& a, const DecayOptions& opt) {
  Eigen::SparseLU<ColMatrix> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) throw SingularSystemError("killed generator is singular");
  Iterated r;
  Eigen::VectorXd x = Eigen::VectorXd::Ones(a.rows());
  x /= x.sum();
  double best = INFINITY;
  int stalled = 0;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    Eigen::VectorXd y = lu.solve(x);
    if (!y.allFinite()) throw SingularSystemError("inverse iteration diverged");
    const double s = y.sum();
    r.lambda = 1.0 / s;
    x = y / s;
    const Eigen::VectorXd res = a * x - r.lambda * x;
    r.residual = res.lpNorm<Eigen::Infinity>() / std::max(x.lpNorm<Eigen::Infinity>() * std::max(r.lambda, 1e-300), 1e-300);
    r.iterations = it;
    if (r.residual <= opt.tolerance) break;
    if (r.residual < best * 0.999) {
      best = r.residual;
      stalled = 0;
    } else if (++stalled > 50) {
      break;
    }
  }
  r.vec = x;
  return r;
}

ColMatrix negate(const SparseMatrix& l) { return ColMatrix(-l); }

}  // namespace

std::vector<std::vector<std::size_t>> strongly_connected_classes(const SparseMatrix& l) {
  const auto n = static_cast<std::size_t>(l.rows());
  std::vector<std::size_t> index(n, SIZE_MAX), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::size_t> st;
  std::vector<std::vector<std::size_t>> out;
  std::size_t counter = 0;
  // Explicit call stack of (node, position in its row).
  std::vector<std::pair<std::size_t, SparseMatrix::InnerIterator>> frames;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != SIZE_MAX) continue;
    auto open = [&](std::size_t v) {
      index[v] = low[v] = counter++;
      st.push_back(v);
      on_stack[v] = 1;
      frames.emplace_back(v, SparseMatrix::InnerIterator(l, static_cast<Eigen::Index>(v)));
    };
    open(root);
    while (!frames.empty()) {
      auto& [v, it] = frames.back();
      bool descended = false;
      for (; it; ++it) {
        const auto w = static_cast<std::size_t>(it.col());
        if (w == v || it.value() <= 0.0) continue;
        if (index[w] == SIZE_MAX) {
          ++it;
          open(w);
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], index[w]);
      }
      if (descended) continue;
      const std::size_t node = v;
      if (low[node] == index[node]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = st.back();
          st.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != node);
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
      }
      frames.pop_back();
      if (!frames.empty()) {
        auto& parent = frames.back().first;
        low[parent] = std::min(low[parent], low[node]);
      }
    }
  }
  return out;
}

AsymptoticFit fit_log_survival(const std::vector<double>& t, const std::vector<double>& log_s,
                               int inverse_terms) {
  const auto n = static_cast<Eigen::Index>(t.size());
  const Eigen::Index p = 3 + inverse_terms;
  if (n < p + 1) throw EstimationError("too few points for the asymptotic survival fit");
  const double scale = t.back();
  Eigen::MatrixXd x(n, p);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ti = t[static_cast<std::size_t>(i)];
    x(i, 0) = 1.0;
    x(i, 1) = ti / scale;
    x(i, 2) = std::log(ti / scale);
    for (int j = 1; j <= inverse_terms; ++j) x(i, 2 + j) = std::pow(scale / ti, j);
    y[i] = log_s[static_cast<std::size_t>(i)];
  }
  // Column scaling keeps the QR well conditioned.
  Eigen::VectorXd norms = x.colwise().norm();
  for (Eigen::Index j = 0; j < p; ++j) x.col(j) /= norms[j];
  Eigen::VectorXd beta = x.colPivHouseholderQr().solve(y);
  AsymptoticFit f;
  f.lambda = -beta[1] / norms[1] / scale;
  f.power = beta[2] / norms[2];
  f.max_residual = (x * beta - y).lpNorm<Eigen::Infinity>();
  return f;
}

AsymptoticFit fit_exact_decay(const KilledGenerator& gen, const Eigen::VectorXd& initial,
                              double t_lo, double t_hi, int points) {
  std::vector<double> t(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) t[static_cast<std::size_t>(i)] = t_lo + (t_hi - t_lo) * i / (points - 1);
  auto ls = log_survival(gen, initial, t, 0.5);
  std::vector<double> tt, yy;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (std::isfinite(ls[i])) {
      tt.push_back(t[i]);
      yy.push_back(ls[i]);
    }
  }
  return fit_log_survival(tt, yy);
}

SpectralResult principal_decay(const KilledGenerator& gen, const DecayOptions& opt) {
  if (gen.size() == 0) throw ValidationError("the target complement is empty");
  SpectralResult res;
  const auto& l = gen.matrix;
  auto classes = strongly_connected_classes(l);
  std::vector<std::size_t> class_of(gen.size());
  for (std::size_t c = 0; c < classes.size(); ++c)
    for (auto s : classes[c]) class_of[s] = c;

  double lambda_min = INFINITY;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    ClassDecay cd;
    cd.states = classes[c];
    // A class leaks if any row has killing or an edge leaving the class.
    bool leaks = false;
    for (auto s : cd.states) {
      if (gen.killing[static_cast<Eigen::Index>(s)] > 0.0) leaks = true;
      for (SparseMatrix::InnerIterator it(l, static_cast<Eigen::Index>(s)); it && !leaks; ++it)
        if (it.col() != it.row() && it.value() > 0.0 && class_of[static_cast<std::size_t>(it.col())] != c) leaks = true;
    }
    cd.leaks = leaks;
    if (!leaks) {
      cd.lambda = 0.0;
    } else if (cd.states.size() == 1) {
      cd.lambda = -l.coeff(static_cast<Eigen::Index>(cd.states[0]), static_cast<Eigen::Index>(cd.states[0]));
    } else {
      std::vector<Eigen::Triplet<double>> trip;
      std::vector<Eigen::Index> local(gen.size(), -1);
      for (std::size_t k = 0; k < cd.states.size(); ++k) local[cd.states[k]] = static_cast<Eigen::Index>(k);
      for (std::size_t k = 0; k < cd.states.size(); ++k)
        for (SparseMatrix::InnerIterator it(l, static_cast<Eigen::Index>(cd.states[k])); it; ++it)
          if (local[static_cast<std::size_t>(it.col())] >= 0)
            trip.emplace_back(static_cast<Eigen::Index>(k), local[static_cast<std::size_t>(it.col())], -it.value());
      ColMatrix a(static_cast<Eigen::Index>(cd.states.size()), static_cast<Eigen::Index>(cd.states.size()));
      a.setFromTriplets(trip.begin(), trip.end());
      cd.lambda = inverse_iteration(a, opt).lambda;
    }
    lambda_min = std::min(lambda_min, cd.lambda);
    res.classes.push_back(std::move(cd));
  }
  if (lambda_min <= 0.0) {
    res.absorbing = true;
    res.lambda = 0.0;
    return res;
  }

  // Defective when a minimal class reaches another minimal class.
  const double tie = opt.class_tie * std::max(1.0, lambda_min);
  std::vector<char> minimal(classes.size(), 0);
  for (std::size_t c = 0; c < classes.size(); ++c) minimal[c] = res.classes[c].lambda <= lambda_min + tie;
  for (std::size_t c = 0; c < classes.size() && !res.defective; ++c) {
    if (!minimal[c]) continue;
    std::vector<char> seen(classes.size(), 0);
    std::vector<std::size_t> todo{c};
    seen[c] = 1;
    while (!todo.empty() && !res.defective) {
      const auto k = todo.back();
      todo.pop_back();
      for (auto s : classes[k])
        for (SparseMatrix::InnerIterator it(l, static_cast<Eigen::Index>(s)); it; ++it) {
          const auto d = class_of[static_cast<std::size_t>(it.col())];
          if (it.value() <= 0.0 || seen[d]) continue;
          seen[d] = 1;
          if (minimal[d]) res.defective = true;
          todo.push_back(d);
        }
    }
  }

  const ColMatrix a = negate(l);
  if (res.defective) {
    res.lambda = lambda_min;
    const Eigen::VectorXd u = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(gen.size()));
    res.lambda_fit = fit_exact_decay(gen, u / u.sum(), 40.0 / lambda_min, 320.0 / lambda_min).lambda;
    return res;
  }
  auto right = inverse_iteration(a, opt);
  auto left = inverse_iteration(ColMatrix(a.transpose()), opt);
  res.iterations = std::max(right.iterations, left.iterations);
  res.lambda = left.lambda;
  res.left = left.vec.cwiseMax(0.0);
  res.left /= res.left.sum();
  res.right = right.vec.cwiseMax(0.0);
  res.right /= res.right.maxCoeff();
  const Eigen::VectorXd lres = (l.transpose() * res.left + res.lambda * res.left);
  res.left_residual = lres.lpNorm<1>();
  const Eigen::VectorXd rres = l * res.right + res.lambda * res.right;
  res.right_residual = rres.lpNorm<Eigen::Infinity>();
  if (std::max(right.residual, left.residual) > 1e-10) {
    // Residual stagnation: report as defective and fall back to the fit.
    res.defective = true;
    const Eigen::VectorXd u = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(gen.size()));
    res.lambda_fit = fit_exact_decay(gen, u / u.sum(), 40.0 / lambda_min, 320.0 / lambda_min).lambda;
  }
  return res;
}

}  // namespace qsd
