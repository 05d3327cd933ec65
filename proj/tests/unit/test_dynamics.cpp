#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "qsd/dynamics/coupling.hpp"
#include "qsd/dynamics/random_walk.hpp"
#include "qsd/dynamics/rate_tree.hpp"
#include "qsd/dynamics/sigma_exit.hpp"
#include "qsd/dynamics/simulator.hpp"
#include "qsd/dynamics/survival.hpp"
#include "qsd/dynamics/trajectory.hpp"
#include "qsd/spectral/tasep_oracles.hpp"
#include "qsd/stats/stats.hpp"
#include "support/fixtures.hpp"

using namespace qsd;

TEST_CASE("rate tree totals and search") {
  RateTree t(5);
  t.set(0, 1.0);
  t.set(3, 2.0);
  t.set(4, 0.5);
  CHECK(t.total() == doctest::Approx(3.5));
  CHECK(t.find(0.5) == 0);
  CHECK(t.find(1.5) == 3);
  CHECK(t.find(3.2) == 4);
  t.set(3, 0.0);
  CHECK(t.total() == doctest::Approx(1.5));
  CHECK(t.find(1.2) == 4);
}

TEST_CASE("simulator total rate matches the model") {
  const auto m = testing::toy_model();
  Simulator s(m, Configuration({0, 3, 1, 2}));
  double expect = 0;
  for (Site i = 0; i < 4; ++i)
    for (Site j = 0; j < 4; ++j)
      if (i != j) expect += m.jump_rate(s.state(), i, j);
  CHECK(s.total_rate() == doctest::Approx(expect));
  s.apply({1, 2});
  CHECK(s.state() == Configuration({0, 2, 2, 2}));
  CHECK(s.total_rate() == doctest::Approx(6.0));
}

TEST_CASE("single particle next to the target hits after an Exp(1) time") {
  const auto m = testing::tasep_line(4);
  double s = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    auto r = make_stream(17, stream_purpose::trajectory, i);
    const auto h = simulate_killed(Configuration({0, 0, 0, 1, 0}), m, 1e6, r);
    REQUIRE(h.status == TerminalStatus::hit_target);
    s += h.tau;
  }
  CHECK(std::abs(s / n - 1.0) < 4.0 / std::sqrt(n));
}

TEST_CASE("starting inside the target gives tau 0") {
  const auto m = testing::tasep_line(4);
  auto r = make_stream(1, stream_purpose::trajectory, 0);
  const auto h = simulate_killed(Configuration({0, 0, 0, 0, 1}), m, 10, r);
  CHECK(h.tau == 0.0);
  CHECK(h.status == TerminalStatus::hit_target);
}

TEST_CASE("empty system never reaches the target") {
  const auto m = testing::tasep_line(4);
  auto r = make_stream(1, stream_purpose::trajectory, 0);
  const auto h = simulate_killed(Configuration(5), m, 10, r);
  CHECK(h.censored());
  CHECK(h.status == TerminalStatus::absorbed);
}

TEST_CASE("recorded trajectories replay and survive a file round trip") {
  const auto m = testing::toy_model();
  auto r = make_stream(3, stream_purpose::trajectory, 0);
  const auto h = simulate_killed(Configuration({0, 2, 3, 1}), m, 50, r, true);
  REQUIRE(h.trajectory);
  const auto& tr = *h.trajectory;
  CHECK(tr.consistent(m));
  CHECK(tr.events.size() == h.n_events);
  if (h.status == TerminalStatus::hit_target) CHECK(m.in_target(tr.final_state(m)));
  const auto path = std::filesystem::temp_directory_path() / "qsd_traj_roundtrip.json";
  write_trajectory(tr, path);
  const auto back = read_trajectory(path);
  CHECK(back.events.size() == tr.events.size());
  CHECK(back.final_state(m) == tr.final_state(m));
  std::filesystem::remove(path);
}

TEST_CASE("hitting samples do not depend on the worker count") {
  const auto m = testing::toy_model();
  const auto nu = testing::toy_measure();
  InitialSampler init = [&nu](Philox4x32& r) { return nu.sample(r); };
  const auto a = sample_hitting_times(init, m, 500, 100, 77, 1);
  const auto b = sample_hitting_times(init, m, 500, 100, 77, 4);
  CHECK(a.tau == b.tau);
  CHECK(a.censored == b.censored);
}

TEST_CASE("TASEP line survival matches the closed form") {
  const auto m = testing::tasep_line(64);
  ProductMeasure nu(OccupancyFunction::exclusion(), 0.5, 65);
  InitialSampler init = [&nu](Philox4x32& r) { return nu.sample(r); };
  const std::vector<double> grid{0.5, 1, 2, 4};
  const std::size_t n = 20000;
  const auto c = survival_curve(init, m, grid, n, 50, 5);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double o = tasep_line_survival(0.5, grid[i]);
    CHECK(std::abs(c.estimate[i] - o) <= 4 * std::sqrt(o * (1 - o) / n));
  }
}

TEST_CASE("survival is supermultiplicative on the TASEP line") {
  const auto m = testing::tasep_line(32);
  ProductMeasure nu(OccupancyFunction::exclusion(), 0.5, 33);
  InitialSampler init = [&nu](Philox4x32& r) { return nu.sample(r); };
  const auto s = sample_hitting_times(init, m, 20000, 40, 8);
  const std::vector<std::pair<double, double>> pairs{{0.5, 0.5}, {1, 2}, {2, 2}};
  for (const auto& row : supermultiplicativity_check(s, pairs)) CHECK(row.passed);
}

TEST_CASE("biased walk hitting probability") {
  // From +1, a walk stepping right w.p. 0.7 ever reaches 0 w.p. 3/7.
  WalkProblem w{JumpKernel::nearest_neighbour(1, 0.7), {1}, {{0}}, 32};
  CHECK(rw_hitting_ever(w).probability == doctest::Approx(3.0 / 7).epsilon(1e-6));
  const auto mc = rw_hitting_monte_carlo(w, 20000, 3);
  CHECK(std::abs(mc.probability - 3.0 / 7) < 4 * mc.se + 1e-3);
  // Rate 1 walk within a short horizon is less likely to hit.
  CHECK(rw_hitting_within(w, 1.0, 1.0).probability < rw_hitting_ever(w).probability);
}

TEST_CASE("sigma exit estimate sits above the bound") {
  const auto m = testing::ring(32, RateFunction::zero_range(OccupancyFunction::constant()), 0.5, 5);
  ProductMeasure nu(OccupancyFunction::constant(), 0.5, 32);
  const auto r = sigma_exit(m, nu, 0.5, 4000, 12);
  CHECK(r.passed);
  CHECK(r.bound > 0.0);
  CHECK(r.bound <= 1.0);
}

TEST_CASE("second class particle coupling stays ordered") {
  const auto m = testing::ring(12, RateFunction::zero_range(OccupancyFunction::constant()), 0.7, 2);
  SecondClassOptions opt;
  opt.t_grid = {0.5, 1, 2};
  opt.n_traj = 3000;
  opt.seed = 4;
  const auto r = second_class_escape(m, Configuration(std::vector<int>(12, 0)), 6, opt);
  CHECK(r.order_violations == 0);
  CHECK(r.coupling_violations == 0);
  CHECK(r.all_passed());
}
