#include "qsd/spectral/killed_generator.hpp"

#include <iomanip>
#include <ostream>

namespace qsd {

std::optional<std::size_t> KilledGenerator::find(const Configuration& c) const {
  auto it = index.find(c);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

KilledGenerator build_killed_generator(const StateSpace& space, const Model& m) {
  KilledGenerator g;
  for (const auto& c : space.states()) {
    if (!m.in_target(c)) {
      g.index.emplace(c, g.states.size());
      g.states.push_back(c);
    }
  }
  const auto n = static_cast<Eigen::Index>(g.states.size());
  g.killing = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::Triplet<double>> trip;
  const auto& cons = space.constraint();
  const auto& w = m.kernel().weights();
  for (Eigen::Index x = 0; x < n; ++x) {
    const auto& c = g.states[static_cast<std::size_t>(x)];
    double exit = 0.0;
    for (Site i = 0; i < c.size(); ++i) {
      if (c[i] == 0) continue;
      const auto dests = m.destinations(i);
      for (std::size_t k = 0; k < dests.size(); ++k) {
        const Site j = dests[k];
        if (j == kNoSite || j == i || w[k] <= 0.0) continue;
        const double r = w[k] * m.rates().b(c[i], c[j]);
        if (r <= 0.0) continue;
        if (c[j] + 1 > cons.site_cap) {
          ++g.dropped_jumps;
          continue;
        }
        Configuration d = c;
        d.move(i, j);
        exit += r;
        if (m.in_target(d)) {
          g.killing[x] += r;
        } else if (auto y = g.find(d)) {
          trip.emplace_back(x, static_cast<Eigen::Index>(*y), r);
        } else {
          ++g.dropped_jumps;
          exit -= r;
        }
      }
    }
    trip.emplace_back(x, x, -exit);
  }
  g.matrix.resize(n, n);
  g.matrix.setFromTriplets(trip.begin(), trip.end());
  g.matrix.makeCompressed();
  return g;
}

Eigen::VectorXd measure_vector(const KilledGenerator& gen, const ProductMeasure& m) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(gen.size()));
  for (std::size_t x = 0; x < gen.size(); ++x) v[static_cast<Eigen::Index>(x)] = m.probability(gen.states[x]);
  return v;
}

WeightedEnsemble exact_measure_ensemble(const StateSpace& space, const ProductMeasure& m) {
  std::vector<Configuration> atoms;
  std::vector<double> p;
  for (const auto& c : space.states()) {
    const double q = m.probability(c);
    if (q > 0.0) {
      atoms.push_back(c);
      p.push_back(q);
    }
  }
  return WeightedEnsemble::exact(std::move(atoms), std::move(p));
}

WeightedEnsemble vector_ensemble(const KilledGenerator& gen, const Eigen::VectorXd& v) {
  std::vector<Configuration> atoms;
  std::vector<double> p;
  for (std::size_t x = 0; x < gen.size(); ++x) {
    const double q = v[static_cast<Eigen::Index>(x)];
    if (q > 0.0) {
      atoms.push_back(gen.states[x]);
      p.push_back(q);
    }
  }
  return WeightedEnsemble::exact(std::move(atoms), std::move(p));
}

void write_triplets(const KilledGenerator& gen, std::ostream& out) {
  out << "%% " << gen.matrix.rows() << ' ' << gen.matrix.nonZeros() << '\n';
  out << std::setprecision(17);
  for (Eigen::Index r = 0; r < gen.matrix.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(gen.matrix, r); it; ++it)
      out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

}  // namespace qsd
