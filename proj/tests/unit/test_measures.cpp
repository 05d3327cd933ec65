#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "qsd/core/rng.hpp"
#include "qsd/measures/ensemble.hpp"
#include "qsd/measures/ensemble_io.hpp"
#include "qsd/measures/marginal.hpp"
#include "qsd/measures/measure_checks.hpp"
#include "qsd/measures/observables.hpp"
#include "qsd/measures/product_measure.hpp"
#include "support/fixtures.hpp"

using namespace qsd;

TEST_CASE("marginal closed forms") {
  // g(k) = k gives Poisson(gamma).
  Marginal p(0.7, OccupancyFunction::linear());
  CHECK(p.z() == doctest::Approx(std::exp(0.7)).epsilon(1e-12));
  CHECK(p(2) == doctest::Approx(std::exp(-0.7) * 0.49 / 2).epsilon(1e-12));
  CHECK(p.mean() == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(p.tail_bound() <= 1e-12);
  // g = 1 gives a geometric law with mean gamma / (1 - gamma).
  Marginal geo(0.5, OccupancyFunction::constant());
  CHECK(geo.z() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(geo.mean() == doctest::Approx(1.0).epsilon(1e-10));
  // Exclusion is Bernoulli(gamma / (1 + gamma)).
  Marginal b(1.0, OccupancyFunction::exclusion());
  CHECK(b.n_max() == 1);
  CHECK(b(1) == doctest::Approx(0.5));
}

TEST_CASE("density inversion") {
  CHECK(invert_density(0.5, OccupancyFunction::linear()) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(invert_density(0.5, OccupancyFunction::constant()) == doctest::Approx(1.0 / 3).epsilon(1e-10));
  CHECK(invert_density(0.25, OccupancyFunction::exclusion()) == doctest::Approx(1.0 / 3).epsilon(1e-10));
  CHECK(density_supremum(OccupancyFunction::exclusion()) == doctest::Approx(1.0));
  for (double rho : {0.1, 0.8, 2.5}) {
    const auto g = OccupancyFunction::capped_linear(2);
    CHECK(density_of(invert_density(rho, g), g) == doctest::Approx(rho).epsilon(1e-9));
  }
}

TEST_CASE("marginal quantiles invert the cdf") {
  Marginal p(1.3, OccupancyFunction::linear());
  CHECK(p.quantile(1e-9) == 0);
  CHECK(p.quantile(p(0) + 1e-9) == 1);
}

TEST_CASE("enumerated product measure is normalized") {
  const auto e = enumerate_product(OccupancyFunction::exclusion(), 0.5, 3);
  CHECK(e.size() == 8);
  double s = 0;
  for (double w : e.weights()) s += w;
  CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("conditioned measure lives on the window") {
  const auto m = testing::toy_measure();
  REQUIRE(m.window());
  CHECK(m.window_mass() > 0.0);
  CHECK(m.window_mass() < 1.0);
  auto r = make_stream(9, stream_purpose::sampling, 0);
  for (int i = 0; i < 2000; ++i) {
    const auto c = m.sample(r);
    CHECK(m.window()->contains(c.total()));
  }
  // Total law: P(N = n) for Poisson(0.5 * 4) renormalized over [2, 10].
  const auto tot = total_distribution(m.marginal(), 4, 12);
  double inside = 0;
  for (long n = 2; n <= 10; ++n) inside += tot[n];
  CHECK(inside == doctest::Approx(m.window_mass()).epsilon(1e-10));
}

TEST_CASE("sampled ensemble reproduces the density") {
  ProductMeasure m(OccupancyFunction::linear(), 0.8, 10);
  const auto e = sample_ensemble(m, 20000, 4);
  const auto est = e.estimate(site_occupancy(3));
  CHECK(std::abs(est.mean - 0.8) < 4 * est.se);
  const auto again = sample_ensemble(m, 20000, 4, 3);
  CHECK(again.atoms() == e.atoms());
}

TEST_CASE("systematic resampling keeps size and normalization") {
  std::vector<Configuration> atoms{Configuration({0, 1}), Configuration({1, 0}), Configuration({1, 1})};
  WeightedEnsemble e(atoms, {0.2, 0.3, 0.5});
  auto r = make_stream(2, stream_purpose::resample, 0);
  const auto out = systematic_resample(e, 1000, r);
  CHECK(out.size() == 1000);
  for (double w : out.weights()) CHECK(w == out.weights().front());
  std::size_t n11 = 0;
  for (const auto& a : out.atoms()) n11 += a == atoms[2];
  CHECK(std::abs(static_cast<double>(n11) - 500.0) <= 1.0);
}

TEST_CASE("cesaro mixture averages the parts") {
  const auto a = WeightedEnsemble::exact({Configuration({1, 0})}, {1.0});
  const auto b = WeightedEnsemble::exact({Configuration({3, 0})}, {1.0});
  const std::vector<WeightedEnsemble> parts{a, b};
  const auto mix = cesaro_mixture(parts);
  CHECK(mix.expectation(site_occupancy(0)) == doctest::Approx(2.0));
}

TEST_CASE("ensemble file round trip") {
  ProductMeasure m(OccupancyFunction::constant(), 0.6, 5);
  const auto e = sample_ensemble(m, 50, 8);
  const auto path = std::filesystem::temp_directory_path() / "qsd_ensemble_roundtrip.json";
  write_ensemble(e, path);
  const auto back = read_ensemble(path);
  CHECK(back.atoms() == e.atoms());
  CHECK(back.weights() == e.weights());
  std::filesystem::remove(path);
}

TEST_CASE("increasing functions are positively correlated under a product measure") {
  const auto e = enumerate_product(OccupancyFunction::linear(), 0.6, 3, 1e-14);
  const Observable f = window_sum({0, 1});
  const Observable g = threshold_indicator({1, 2}, 1);
  CHECK(exact_covariance(e, f, g) >= 0.0);
  ProductMeasure m(OccupancyFunction::linear(), 0.6, 3);
  CHECK(fkg_test(m, f, g, 20000, 5).passed);
}

TEST_CASE("size bias identity holds exactly") {
  const auto g = OccupancyFunction::capped_linear(2);
  const auto r = size_bias_exact(g, 0.7, 3, 1.0, 1, window_sum({0, 1}));
  CHECK(std::abs(r.diff) < 1e-10);
  CHECK(r.identity_passed);
  CHECK(r.inequality_passed);
}

TEST_CASE("a measure dominates itself") {
  ProductMeasure m(OccupancyFunction::linear(), 0.5, 4);
  const auto e = sample_ensemble(m, 5000, 1);
  const auto suite = increasing_suite(testing::toy_model());
  CHECK(domination_test(e, e, suite).passed());
}

TEST_CASE("dilation on a ring") {
  Lattice ring({6}, Boundary::torus);
  auto d = dilate(ring, {0}, 1);
  std::sort(d.begin(), d.end());
  CHECK(d == std::vector<Site>{0, 1, 5});
}
