#include <cstdio>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "qsd/cli/runner.hpp"
#include "qsd/core/error.hpp"

namespace {

int cmd_run(const std::string& config, const std::optional<std::uint64_t>& seed,
            const std::optional<unsigned>& workers, const std::optional<std::string>& out,
            const std::optional<double>& t_max, const std::optional<std::size_t>& n_traj, bool quiet) {
  auto c = qsd::load_config(config);
  if (seed) c.seed = *seed;
  if (workers) c.workers = *workers;
  if (out) c.out_dir = *out;
  if (t_max) c.budgets.t_max = *t_max;
  if (n_traj) c.budgets.n_traj = *n_traj;
  const auto r = qsd::run_experiment(c);
  if (!quiet) {
    std::cout << r.metrics.dump(2) << "\n";
    std::fprintf(stderr, "wrote %zu files to %s in %.2fs\n", r.files.size() + 1, c.out_dir.string().c_str(),
                 r.wall_seconds);
  }
  return qsd::kExitOk;
}

int cmd_compare(const std::string& a, const std::string& b, double tol) {
  const auto diffs = qsd::compare_runs(a, b, tol);
  if (diffs.empty()) {
    std::cout << "no differences\n";
    return qsd::kExitOk;
  }
  std::cout << "metric,a,b,diff\n";
  for (const auto& d : diffs)
    std::cout << d.path << ',' << d.a.dump() << ',' << d.b.dump() << ',' << (std::isnan(d.diff) ? "" : std::to_string(d.diff))
              << '\n';
  return qsd::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qsdlab: quasi-stationary experiments for killed particle systems"};
  app.require_subcommand(1);

  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<std::string> out;
  std::optional<double> t_max;
  std::optional<std::size_t> n_traj;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "run the experiment described by a config file");
  run->add_option("--config", config, "experiment config (JSON)")->required();
  run->add_option("--seed", seed, "override the master seed");
  run->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  run->add_option("--out", out, "output directory");
  run->add_option("--t-max", t_max, "override budgets.t_max");
  run->add_option("--n-traj", n_traj, "override budgets.n_traj");
  run->add_flag("--quiet", quiet, "do not print metrics");

  auto* check = app.add_subcommand("validate", "parse and validate a config without running it");
  check->add_option("--config", config, "experiment config (JSON)")->required();

  std::string dir_a, dir_b;
  double tol = 0.0;
  auto* cmp = app.add_subcommand("compare", "diff the metrics of two run directories");
  cmp->add_option("run_a", dir_a)->required();
  cmp->add_option("run_b", dir_b)->required();
  cmp->add_option("--tol", tol, "ignore numeric differences up to this size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? qsd::kExitOk : qsd::kExitUsage;
  }

  try {
    if (*run) return cmd_run(config, seed, workers, out, t_max, n_traj, quiet);
    if (*check) {
      qsd::validate(qsd::load_config(config));
      std::cout << "ok\n";
      return qsd::kExitOk;
    }
    return cmd_compare(dir_a, dir_b, tol);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return qsd::exit_code_for(e);
  }
}
