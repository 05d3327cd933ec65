#include <cmath>

#include "doctest.h"
#include "qsd/core/rng.hpp"
#include "qsd/measures/ensemble.hpp"
#include "qsd/phi/moments.hpp"
#include "qsd/phi/phi.hpp"
#include "qsd/phi/sojourn_pool.hpp"
#include "support/fixtures.hpp"

using namespace qsd;

TEST_CASE("power weights") {
  CHECK(std::exp(log_power_weight(1.0, 3.0, 1)) == doctest::Approx(2.0));
  CHECK(std::exp(log_power_weight(1.0, 3.0, 2)) == doctest::Approx(4.0));
  CHECK(std::exp(log_power_weight(2.0, 5.0, 3)) == doctest::Approx((125.0 - 8.0) / 3));
  // Stays finite where b^n overflows.
  const double w = log_power_weight(1000.0, 1000.5, 200);
  CHECK(std::isfinite(w));
  CHECK(w == doctest::Approx(199 * std::log(1000.5) + std::log(0.5)).epsilon(1e-3));
}

TEST_CASE("moment ratio on exponential samples is near one over the rate") {
  auto r = make_stream(4, stream_purpose::sampling, 0);
  std::vector<double> tau(20000);
  for (auto& t : tau) t = r.exponential(1.0);
  const std::vector<char> cens(tau.size(), 0);
  for (int n : {0, 1, 2}) {
    const auto m = tau_moment_ratio(tau, cens, n);
    CHECK(m.ci_lo <= 1.0);
    CHECK(m.ci_hi >= 1.0);
    CHECK_FALSE(m.unstable);
  }
  CHECK(log_empirical_moment(std::vector<double>{0.0, 1.0}, 0) == 0.0);
}

TEST_CASE("censored samples are excluded from moment ratios") {
  const std::vector<double> tau{1, 2, 3, 100};
  const std::vector<char> cens{0, 0, 0, 1};
  const auto m = tau_moment_ratio(tau, cens, 0);
  CHECK(m.used == 3);
  CHECK(m.excluded_censored == 1);
  CHECK(m.estimate == doctest::Approx(2.0));
}

TEST_CASE("harvest pools every sojourn with total weight tau") {
  const auto m = testing::toy_model();
  const auto nu = testing::toy_measure();
  IndexedSampler init = [&nu](std::size_t, Philox4x32& r) { return nu.sample(r); };
  HarvestOptions opt;
  opt.t_max = 400;
  opt.seed = 3;
  const auto pools = harvest_sojourns(init, m, 200, opt);
  REQUIRE(pools.size() == 1);
  const auto& p = pools[0];
  double tau_sum = 0;
  for (std::size_t i = 0; i < p.n_trajectories(); ++i)
    if (!p.censored[i]) tau_sum += p.tau[i];
  CHECK(std::exp(p.log_total_weight()) == doctest::Approx(tau_sum).epsilon(1e-9));
  CHECK(p.trajectory_ess() <= 200.0);
}

TEST_CASE("phi_apply estimates E_nu[tau] for the toy model") {
  const auto m = testing::toy_model();
  const auto nu = testing::toy_measure();
  PhiOptions opt;
  opt.n_particles = 4000;
  opt.t_max = 200;
  opt.seed = 21;
  const auto start = sample_ensemble(nu, 4000, 22);
  const auto r = phi_apply(start, m, opt);
  CHECK(r.ensemble.size() == 4000);
  const auto& e = r.stats.expected_tau;
  CHECK(std::abs(e.mean - 4.787) < 3.5 * e.se + 0.05);
  CHECK(r.stats.censoring_fraction <= opt.max_censoring);
}

TEST_CASE("phi_iterate is deterministic across worker counts") {
  const auto m = testing::toy_model();
  const auto nu = testing::toy_measure();
  PhiOptions opt;
  opt.n_particles = 300;
  opt.t_max = 200;
  opt.seed = 5;
  opt.workers = 1;
  const auto a = phi_iterate(nu, m, 2, opt);
  opt.workers = 4;
  const auto b = phi_iterate(nu, m, 2, opt);
  REQUIRE(a.iterates.size() == 2);
  CHECK(a.iterates[1].atoms() == b.iterates[1].atoms());
  REQUIRE(a.log.rows.size() == 3);
  CHECK(a.log.rows[2].expected_tau.mean == b.log.rows[2].expected_tau.mean);
}

TEST_CASE("phi_direct returns one ensemble per power") {
  const auto m = testing::toy_model();
  const auto nu = testing::toy_measure();
  PhiOptions opt;
  opt.n_particles = 500;
  opt.t_max = 200;
  opt.seed = 8;
  const auto r = phi_direct(nu, m, {1, 2, 3}, opt);
  CHECK(r.ensembles.size() == 3);
  CHECK(r.powers == std::vector<int>{1, 2, 3});
}

TEST_CASE("systematic selector spreads the draws over the atoms") {
  std::vector<Configuration> atoms{Configuration({1, 0}), Configuration({0, 1})};
  WeightedEnsemble e(atoms, {0.25, 0.75});
  const auto sel = systematic_selector(e, 100, 7);
  auto r = make_stream(1, stream_purpose::sampling, 0);
  int first = 0;
  for (std::size_t i = 0; i < 100; ++i) first += sel(i, r) == atoms[0];
  CHECK(std::abs(first - 25) <= 1);
}
