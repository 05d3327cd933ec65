#pragma once

#include <optional>

#include "qsd/core/rng.hpp"
#include "qsd/dynamics/rate_tree.hpp"
#include "qsd/model/model.hpp"

namespace qsd {

struct Jump {
  Site from;
  Site to;
};

/// Event-driven (Gillespie) simulator of the misanthrope process.
///
/// Per-site exit rates live in a RateTree. After a jump i -> j only i and j
/// change their own rate, plus, when b depends on the target occupancy, the
/// sites that can jump into i or j.
class Simulator {
 public:
  Simulator(const Model& m, Configuration initial);

  const Model& model() const noexcept { return *model_; }
  const Configuration& state() const noexcept { return state_; }
  double total_rate() const noexcept { return tree_.total(); }
  double site_rate(Site s) const noexcept { return tree_.rate(s); }

  /// Picks the next jump proportionally to its rate (does not apply it).
  /// Requires total_rate() > 0.
  Jump choose(Philox4x32& rng) const noexcept;
  /// Applies a jump and refreshes the affected rates.
  void apply(Jump j);

 private:
  void refresh(Site s) noexcept;

  const Model* model_;
  Configuration state_;
  RateTree tree_;
};

}  // namespace qsd
