#include "qsd/cli/experiment_config.hpp"

#include <algorithm>
#include <fstream>

#include "qsd/core/error.hpp"
#include "qsd/measures/marginal.hpp"
#include "qsd/model/model_io.hpp"

namespace qsd {

using nlohmann::json;

namespace {

const std::pair<ExperimentKind, const char*> kKinds[] = {
    {ExperimentKind::survival, "survival"},       {ExperimentKind::phi_iterate, "phi-iterate"},
    {ExperimentKind::phi_direct, "phi-direct"},   {ExperimentKind::spectral, "spectral"},
    {ExperimentKind::oracle_check, "oracle-check"}, {ExperimentKind::domination, "domination"},
    {ExperimentKind::sigma_exit, "sigma-exit"},   {ExperimentKind::couplings, "couplings"}};

template <class T>
T field(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config field '") + key + "': " + e.what());
  }
}

template <class T>
T field_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? field<T>(j, key) : fallback;
}

}  // namespace

std::string to_string(ExperimentKind k) {
  for (auto& [kind, name] : kKinds)
    if (kind == k) return name;
  return "unknown";
}

ExperimentKind experiment_kind_from_string(const std::string& s) {
  for (auto& [kind, name] : kKinds)
    if (s == name) return kind;
  throw ValidationError("unknown experiment kind '" + s + "'");
}

Model ExperimentConfig::build_model() const {
  try {
    return model_from_json(model);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("model: ") + e.what());
  }
}

ProductMeasure ExperimentConfig::build_measure(const Model& m) const {
  ProductMeasure p(m.rates().occupancy(), rho, m.num_sites());
  return window ? p.conditioned(*window) : p;
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  ExperimentConfig c;
  c.kind = experiment_kind_from_string(field<std::string>(j, "kind"));
  if (!j.contains("model")) throw ValidationError("config field 'model' is missing");
  c.model = j.at("model");
  c.rho = field<double>(j, "rho");
  if (j.contains("window")) {
    const auto& w = j.at("window");
    c.window = TotalWindow{field<long>(w, "min_total"), field<long>(w, "max_total")};
  }
  if (!j.contains("seed")) throw ValidationError("config field 'seed' is missing (no implicit seeding)");
  c.seed = field<std::uint64_t>(j, "seed");
  c.workers = field_or<unsigned>(j, "workers", 1);
  c.out_dir = field_or<std::string>(j, "out_dir", "out");
  if (j.contains("budgets")) {
    const auto& b = j.at("budgets");
    c.budgets.n_traj = field_or<std::size_t>(b, "n_traj", c.budgets.n_traj);
    c.budgets.n_particles = field_or<std::size_t>(b, "n_particles", c.budgets.n_particles);
    c.budgets.t_max = field_or<double>(b, "t_max", c.budgets.t_max);
    c.budgets.iterations = field_or<std::size_t>(b, "iterations", c.budgets.iterations);
    c.budgets.t_grid = field_or<std::vector<double>>(b, "t_grid", c.budgets.t_grid);
  }
  if (j.contains("options")) {
    if (!j.at("options").is_object()) throw ValidationError("config field 'options' must be an object");
    c.options = j.at("options");
  }
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["kind"] = to_string(c.kind);
  j["model"] = c.model;
  j["rho"] = c.rho;
  if (c.window) j["window"] = {{"min_total", c.window->min_total}, {"max_total", c.window->max_total}};
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  j["out_dir"] = c.out_dir.string();
  j["budgets"] = {{"n_traj", c.budgets.n_traj},
                  {"n_particles", c.budgets.n_particles},
                  {"t_max", c.budgets.t_max},
                  {"iterations", c.budgets.iterations},
                  {"t_grid", c.budgets.t_grid}};
  j["options"] = c.options;
  return j;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

void validate(const ExperimentConfig& c) {
  const auto& b = c.budgets;
  if (b.n_traj == 0) throw ValidationError("budgets.n_traj must be positive");
  if (b.n_particles == 0) throw ValidationError("budgets.n_particles must be positive");
  if (!(b.t_max > 0)) throw ValidationError("budgets.t_max must be positive");
  if (b.t_grid.empty()) throw ValidationError("budgets.t_grid is empty");
  for (std::size_t i = 0; i < b.t_grid.size(); ++i) {
    if (!(b.t_grid[i] >= 0)) throw ValidationError("budgets.t_grid has a negative time");
    if (i > 0 && !(b.t_grid[i] > b.t_grid[i - 1])) throw ValidationError("budgets.t_grid must increase");
  }
  if (c.workers == 0) throw ValidationError("workers must be positive");
  if (!(c.rho > 0)) throw ValidationError("rho must be positive");
  const Model m = c.build_model();
  // Antisymmetry is reported only; the shipped misanthrope examples fail it.
  std::string failed;
  for (const auto& h : m.validation().checks) {
    if (h.passed || h.name == "rates.antisymmetry") continue;
    failed += (failed.empty() ? "" : "; ") + h.name + (h.witness.empty() ? "" : " (" + h.witness + ")");
  }
  if (!failed.empty()) throw ValidationError("model fails: " + failed);
  const double sup = density_supremum(m.rates().occupancy());
  if (!(c.rho < sup)) throw ValidationError("rho must lie below the maximal density " + std::to_string(sup));
  if (c.window && (c.window->min_total < 0 || c.window->max_total < c.window->min_total))
    throw ValidationError("window must satisfy 0 <= min_total <= max_total");
}

}  // namespace qsd
