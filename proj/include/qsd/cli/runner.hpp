#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qsd/cli/experiment_config.hpp"

namespace qsd {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitRuntime = 3;
inline constexpr int kExitIo = 4;

inline constexpr const char* kToolVersion = "0.3.0";

struct RunOutcome {
  nlohmann::json metrics;
  std::vector<std::string> files;  // result files written, relative to out_dir
  double wall_seconds = 0.0;
};

/// Runs the experiment and writes into c.out_dir: the result tables,
/// metrics.json, config.json and manifest.json. Everything except the
/// manifest's wall time is a pure function of the config (worker count
/// included in the config but not in the results).
RunOutcome run_experiment(const ExperimentConfig& c);

/// Maps an exception from run_experiment to an exit code.
int exit_code_for(const std::exception& e) noexcept;

std::uint64_t fnv1a(std::string_view bytes) noexcept;
std::uint64_t file_hash(const std::filesystem::path& p);
std::string hex64(std::uint64_t v);

struct MetricDiff {
  std::string path;
  nlohmann::json a, b;
  double diff = 0.0;  // b - a for numbers, NaN otherwise
};

/// Numeric leaves of the two runs' metrics.json that differ by more than
/// `tol` (and every structural mismatch). Throws ValidationError when the
/// experiment kinds differ.
std::vector<MetricDiff> compare_runs(const std::filesystem::path& a, const std::filesystem::path& b,
                                     double tol = 0.0);

}  // namespace qsd
