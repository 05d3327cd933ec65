#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qsd/core/rng.hpp"
#include "qsd/model/model.hpp"

namespace qsd {

enum class TerminalStatus { hit_target, censored, absorbed };

std::string to_string(TerminalStatus s);

struct TrajectoryEvent {
  double time;
  Site from;
  Site to;
};

/// Initial configuration plus the ordered jump list up to tau or censoring.
struct Trajectory {
  Configuration initial;
  std::vector<TrajectoryEvent> events;
  double terminal_time = 0.0;
  TerminalStatus status = TerminalStatus::censored;

  /// State after the first n events.
  Configuration replay(std::size_t n, const Model& m) const;
  Configuration final_state(const Model& m) const { return replay(events.size(), m); }
  /// Checks increasing times, valid jumps, and the hitting invariant.
  bool consistent(const Model& m) const;
};

struct HittingResult {
  double tau = 0.0;  // hitting time, or t_max when censored
  TerminalStatus status = TerminalStatus::censored;
  std::uint64_t stream = 0;
  std::size_t n_events = 0;
  std::optional<Trajectory> trajectory;

  bool censored() const noexcept { return status != TerminalStatus::hit_target; }
};

/// Called for every sojourn before tau: (state, start time, end time). The
/// final sojourn of a censored path ends at t_max.
using SojournVisitor = std::function<void(const Configuration&, double, double)>;

/// Exact continuous-time simulation until the first entry into the target or
/// t_max. Pass model.reversed() for the adjoint dynamics. A frozen
/// configuration outside the target is reported as absorbed (censored).
HittingResult simulate_killed(const Configuration& initial, const Model& m, double t_max,
                              Philox4x32& rng, bool record = false,
                              const SojournVisitor* visitor = nullptr);

/// Unkilled evolution for time t.
Configuration simulate_free(const Configuration& initial, const Model& m, double t, Philox4x32& rng);

inline constexpr int kTrajectoryFormatVersion = 1;

/// JSON dump for debugging (docs/formats.md).
void write_trajectory(const Trajectory& tr, const std::filesystem::path& path);
Trajectory read_trajectory(const std::filesystem::path& path);

}  // namespace qsd
