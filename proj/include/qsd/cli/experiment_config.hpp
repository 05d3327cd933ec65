#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qsd/measures/product_measure.hpp"
#include "qsd/model/model.hpp"

namespace qsd {

enum class ExperimentKind {
  survival,
  phi_iterate,
  phi_direct,
  spectral,
  oracle_check,
  domination,
  sigma_exit,
  couplings
};

std::string to_string(ExperimentKind k);
ExperimentKind experiment_kind_from_string(const std::string& s);

struct Budgets {
  std::size_t n_traj = 10000;
  std::size_t n_particles = 1000;
  double t_max = 100.0;
  std::size_t iterations = 4;
  std::vector<double> t_grid{0.5, 1, 2, 4, 8};
};

/// One experiment. The model JSON carries the lattice, kernel, rates and
/// target (see docs/formats.md); `options` holds kind-specific settings.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::survival;
  nlohmann::json model;
  double rho = 0.5;
  std::optional<TotalWindow> window;
  Budgets budgets;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::filesystem::path out_dir = "out";
  nlohmann::json options = nlohmann::json::object();

  Model build_model() const;
  /// nu_rho for the model's invariant occupancy function, conditioned on
  /// the window when one is set.
  ProductMeasure build_measure(const Model& m) const;
};

/// Throws ValidationError with a message naming the offending field. The
/// seed is mandatory.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Structural checks beyond parsing: positive budgets, increasing grid,
/// density in range, model builds.
void validate(const ExperimentConfig& c);

}  // namespace qsd
