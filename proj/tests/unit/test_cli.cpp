#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "qsd/cli/experiment_config.hpp"
#include "qsd/cli/runner.hpp"
#include "qsd/core/error.hpp"

using namespace qsd;
namespace fs = std::filesystem;

namespace {

nlohmann::json toy_model_json() {
  return nlohmann::json::parse(R"({
    "lattice": {"extents": [4], "boundary": "torus"},
    "kernel": {"preset": "nearest_neighbour", "p_right": 0.7},
    "rates": {"family": "zero_range", "g": {"kind": "linear"}},
    "target": {"sites": [[0]], "threshold": 1}})");
}

ExperimentConfig survival_config(const fs::path& out, unsigned workers) {
  nlohmann::json j{{"kind", "survival"},
                   {"model", toy_model_json()},
                   {"rho", 0.5},
                   {"window", {{"min_total", 2}, {"max_total", 10}}},
                   {"seed", 99},
                   {"budgets", {{"n_traj", 2000}, {"t_max", 200}, {"t_grid", {0.5, 1, 2, 4, 8}}}},
                   {"options", {{"fit_t_max", 8}}}};
  auto c = config_from_json(j);
  c.workers = workers;
  c.out_dir = out;
  return c;
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("qsd_cli_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("config json round trip") {
  const auto c = survival_config("x", 1);
  const auto back = config_from_json(config_to_json(c));
  CHECK(config_to_json(back) == config_to_json(c));
  CHECK(back.kind == ExperimentKind::survival);
  CHECK(back.window->max_total == 10);
}

TEST_CASE("experiment kinds round trip through their names") {
  for (auto k : {ExperimentKind::survival, ExperimentKind::phi_iterate, ExperimentKind::phi_direct,
                 ExperimentKind::spectral, ExperimentKind::oracle_check, ExperimentKind::domination,
                 ExperimentKind::sigma_exit, ExperimentKind::couplings})
    CHECK(experiment_kind_from_string(to_string(k)) == k);
  CHECK_THROWS(experiment_kind_from_string("nope"));
}

TEST_CASE("a missing seed or bad kernel is a validation error") {
  auto j = config_to_json(survival_config("x", 1));
  j.erase("seed");
  try {
    config_from_json(j);
    FAIL("expected a throw");
  } catch (const std::exception& e) {
    CHECK(exit_code_for(e) == kExitValidation);
  }
  auto bad = config_to_json(survival_config("x", 1));
  bad["model"]["kernel"] = {{"offsets", {{1}, {-1}}}, {"weights", {0.5, 0.4}}};
  try {
    validate(config_from_json(bad));
    FAIL("expected a throw");
  } catch (const std::exception& e) {
    CHECK(exit_code_for(e) == kExitValidation);
  }
}

TEST_CASE("exit codes by error type") {
  CHECK(exit_code_for(IoError("x")) == kExitIo);
  CHECK(exit_code_for(std::runtime_error("x")) == kExitRuntime);
}

TEST_CASE("fnv1a reference values") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("runs are identical for one and four workers") {
  const auto a = scratch("w1"), b = scratch("w4");
  run_experiment(survival_config(a, 1));
  run_experiment(survival_config(b, 4));
  CHECK(compare_runs(a, b).empty());
  for (const char* f : {"survival.csv", "metrics.json"}) {
    REQUIRE(fs::exists(a / f));
    CHECK(file_hash(a / f) == file_hash(b / f));
  }
  CHECK(fs::exists(a / "manifest.json"));
  CHECK(fs::exists(a / "config.json"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("a different seed changes the metrics") {
  const auto a = scratch("s1"), b = scratch("s2");
  run_experiment(survival_config(a, 1));
  auto c = survival_config(b, 1);
  c.seed = 100;
  run_experiment(c);
  CHECK_FALSE(compare_runs(a, b).empty());
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("spectral run reports the toy decay rate") {
  const auto out = scratch("spec");
  nlohmann::json j{{"kind", "spectral"},
                   {"model", toy_model_json()},
                   {"rho", 0.5},
                   {"window", {{"min_total", 2}, {"max_total", 10}}},
                   {"seed", 1},
                   {"options", {{"site_cap", 10}}}};
  auto c = config_from_json(j);
  c.out_dir = out;
  const auto r = run_experiment(c);
  CHECK(r.metrics["decay"]["lambda"].get<double>() == doctest::Approx(0.1188981413).epsilon(1e-9));
  CHECK(fs::exists(out / "qsd.csv"));
  fs::remove_all(out);
}

TEST_CASE("loading a missing file is an IO error") {
  try {
    load_config("/nonexistent/qsd.json");
    FAIL("expected a throw");
  } catch (const std::exception& e) {
    CHECK(exit_code_for(e) == kExitIo);
  }
}
