#pragma once

#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <vector>

#include <Eigen/Sparse>

#include "qsd/measures/ensemble.hpp"
#include "qsd/measures/product_measure.hpp"
#include "qsd/model/model.hpp"
#include "qsd/spectral/state_space.hpp"

namespace qsd {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Generator restricted to the target's complement, killing on entry.
///
/// Off-diagonal (x, y) is the total rate of jumps x -> y that stay outside
/// the target; the diagonal is minus the total exit rate including jumps
/// into the target. Jumps that leave the enumerated space (site cap) are
/// suppressed and counted in dropped_jumps.
struct KilledGenerator {
  std::vector<Configuration> states;
  SparseMatrix matrix;
  Eigen::VectorXd killing;  // rate into the target from each state
  std::size_t dropped_jumps = 0;

  std::size_t size() const noexcept { return states.size(); }
  std::optional<std::size_t> find(const Configuration& c) const;

  std::unordered_map<Configuration, std::size_t, ConfigurationHash> index;
};

KilledGenerator build_killed_generator(const StateSpace& space, const Model& m);

/// Probability of each outside-target state under the measure.
Eigen::VectorXd measure_vector(const KilledGenerator& gen, const ProductMeasure& m);
/// The measure on the whole state space as an exact ensemble.
WeightedEnsemble exact_measure_ensemble(const StateSpace& space, const ProductMeasure& m);
/// An outside-target vector as an exact ensemble (zero entries dropped).
WeightedEnsemble vector_ensemble(const KilledGenerator& gen, const Eigen::VectorXd& v);

/// "row col value" lines, 0-based, with a "%% n nnz" header.
void write_triplets(const KilledGenerator& gen, std::ostream& out);

}  // namespace qsd
