#include <cmath>

#include "doctest.h"
#include "qsd/core/rng.hpp"
#include "qsd/estimators/decay_fit.hpp"
#include "qsd/estimators/ensemble_compare.hpp"
#include "qsd/estimators/exponentiality.hpp"
#include "qsd/measures/ensemble.hpp"
#include "qsd/stats/stats.hpp"
#include "qsd/stats/survival_curve.hpp"
#include "support/fixtures.hpp"

using namespace qsd;

namespace {

std::vector<double> exp_samples(std::size_t n, double rate, std::uint64_t seed) {
  auto r = make_stream(seed, stream_purpose::sampling, 0);
  std::vector<double> x(n);
  for (auto& v : x) v = r.exponential(rate);
  return x;
}

}  // namespace

TEST_CASE("decay fit on an exact exponential curve") {
  std::vector<double> t, v;
  for (int i = 0; i <= 20; ++i) {
    t.push_back(0.5 * i);
    v.push_back(0.9 * std::exp(-0.4 * t.back()));
  }
  const auto fit = fit_decay(exact_survival_curve(t, v));
  CHECK(fit.lambda == doctest::Approx(0.4).epsilon(1e-10));
  CHECK(fit.intercept == doctest::Approx(std::log(0.9)).epsilon(1e-10));
}

TEST_CASE("decay fit on Monte Carlo exponential samples") {
  const auto tau = exp_samples(40000, 0.5, 3);
  const std::vector<char> cens(tau.size(), 0);
  std::vector<double> grid;
  for (int i = 1; i <= 16; ++i) grid.push_back(0.5 * i);
  const auto curve = survival_from_samples(tau, cens, grid, 1e9);
  DecayFitOptions opt;
  opt.seed = 2;
  const auto fit = fit_decay(curve, opt);
  CHECK(std::abs(fit.lambda - 0.5) < 4 * fit.se);
  CHECK(fit.se > 0.0);
  CHECK(fit.se < 0.02);
}

TEST_CASE("exponential samples pass the exponentiality report") {
  const auto tau = exp_samples(5000, 2.0, 5);
  const auto r = exponentiality_report(tau, 2.0);
  CHECK(r.exponential);
  CHECK(r.ks < r.ks_critical);
  REQUIRE(r.moments.size() == 4);
  CHECK(r.moments[0].expected == doctest::Approx(0.5));
  CHECK(r.moments[1].expected == doctest::Approx(0.5));
  for (const auto& m : r.moments) CHECK(m.consistent);
}

TEST_CASE("an atom at zero breaks exponentiality") {
  auto tau = exp_samples(5000, 1.0, 6);
  for (std::size_t i = 0; i < 1500; ++i) tau[i] = 0.0;
  const auto r = exponentiality_report(tau, 1.0);
  CHECK_FALSE(r.exponential);
  CHECK(r.atom_at_zero == doctest::Approx(0.3));
}

TEST_CASE("exponentiality trend has one row per iteration") {
  const std::vector<std::vector<double>> by{exp_samples(500, 1, 1), exp_samples(500, 1, 2)};
  const auto rows = exponentiality_trend(by, 1.0);
  CHECK(rows.size() == 2);
  CHECK(rows[1].iteration == 1);
}

TEST_CASE("identical exact ensembles are at distance zero") {
  const auto nu = testing::toy_measure();
  const auto e = sample_ensemble(nu, 2000, 4);
  const auto model = testing::toy_model();
  const std::vector<Site> sites{0, 1, 2, 3};
  const auto d = ensemble_compare(e, e, model, sites);
  CHECK(d.max_distance() == 0.0);
  CHECK(d.max_window_z() == 0.0);
  CHECK(d.sites.size() == 4);
}

TEST_CASE("different densities are told apart") {
  const auto model = testing::ring(6, RateFunction::zero_range(OccupancyFunction::linear()));
  const auto a = sample_ensemble(ProductMeasure(OccupancyFunction::linear(), 0.5, 6), 4000, 1);
  const auto b = sample_ensemble(ProductMeasure(OccupancyFunction::linear(), 1.0, 6), 4000, 2);
  const std::vector<Site> sites{0};
  const auto d = ensemble_compare(a, b, model, sites);
  CHECK(d.min_p_value() < 1e-6);
  CHECK(d.max_window_z() > 5.0);
  CHECK(independent_units(a) == doctest::Approx(4000.0));
}

TEST_CASE("stats helpers") {
  const std::vector<double> x{1, 2, 3, 4};
  const auto m = mean_se(x);
  CHECK(m.mean == doctest::Approx(2.5));
  CHECK(m.se == doctest::Approx(std::sqrt(5.0 / 3 / 4)));
  const std::vector<double> l{std::log(1.0), std::log(3.0)};
  CHECK(log_sum_exp(l) == doctest::Approx(std::log(4.0)));
  const auto [lo, hi] = wilson_interval(50, 100, 1.96);
  CHECK(lo < 0.5);
  CHECK(hi > 0.5);
  CHECK(chi_squared_survival(2, 2 * std::log(20.0)) == doctest::Approx(0.05).epsilon(1e-8));
  CHECK(ks_critical(100) == doctest::Approx(1.358 / 10).epsilon(0.02));
  CHECK(quantile({1, 2, 3, 4, 5}, 0.5) == doctest::Approx(3.0));
}
