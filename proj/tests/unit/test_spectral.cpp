#include <cmath>

#include "doctest.h"
#include "qsd/spectral/checks.hpp"
#include "qsd/spectral/decay.hpp"
#include "qsd/spectral/tasep_oracles.hpp"
#include "qsd/spectral/uniformization.hpp"
#include "support/fixtures.hpp"

using namespace qsd;

namespace {

const testing::Toy& toy() {
  static const testing::Toy t;
  return t;
}

struct Circle {
  Model model = testing::tasep_circle(6);
  StateSpace space = enumerate_states(model.lattice(), StateConstraint::canonical(3));
  KilledGenerator gen = build_killed_generator(space, model);
};

const Circle& circle() {
  static const Circle c;
  return c;
}

}  // namespace

TEST_CASE("toy state space sizes") {
  CHECK(count_states(4, testing::toy_constraint()) == 996);
  CHECK(toy().space.size() == 996);
  CHECK(toy().gen.size() == 501);
  CHECK(toy().gen.dropped_jumps == 0);
  // Only the mass outside the target is kept; the rest has tau = 0.
  CHECK(toy().nu.sum() < 1.0);
  CHECK(toy().nu.minCoeff() > 0.0);
}

TEST_CASE("toy decay rate") {
  const auto r = principal_decay(toy().gen);
  CHECK_FALSE(r.defective);
  CHECK_FALSE(r.absorbing);
  CHECK(r.lambda == doctest::Approx(0.1188981413).epsilon(1e-9));
  CHECK(r.left.sum() == doctest::Approx(1.0));
  CHECK(r.right.maxCoeff() == doctest::Approx(1.0));
  CHECK(r.left.minCoeff() >= 0.0);
  CHECK(r.left_residual < 1e-10);
  CHECK(r.right_residual < 1e-10);
}

TEST_CASE("quasi-stationary law is a fixed point of Phi") {
  const auto r = principal_decay(toy().gen);
  const auto fp = qsd_fixed_point_check(toy().gen, r.left);
  CHECK(fp.phi_distance < 1e-9);
  CHECK(fp.generator_residual < 1e-9);
  CHECK(fp.expected_tau == doctest::Approx(1.0 / r.lambda).epsilon(1e-9));
}

TEST_CASE("exact Phi iterates from the conditioned product measure") {
  const double expect[] = {4.787, 7.092, 7.843, 8.176, 8.315, 8.371, 8.394,
                           8.404, 8.408, 8.409, 8.410, 8.4104, 8.41047};
  const auto it = exact_phi_iterates(toy().gen, toy().nu, 13);
  for (std::size_t n = 0; n <= 12; ++n) CHECK(it.expected_tau(n) == doctest::Approx(expect[n]).epsilon(2e-4));
  // Monotone approach to 1 / lambda.
  for (std::size_t n = 0; n < 12; ++n) CHECK(it.expected_tau(n + 1) >= it.expected_tau(n));
  CHECK(it.expected_tau(12) <= 1.0 / 0.1188981413 + 1e-9);
}

TEST_CASE("exact survival is supermultiplicative and bracketed") {
  const std::vector<double> grid{0.5, 1, 2, 4, 8, 16};
  const auto sm = exact_supermultiplicativity(toy().gen, toy().nu, grid);
  CHECK(sm.pairs > 0);
  CHECK(sm.worst_gap >= -1e-12);
  const auto spec = principal_decay(toy().gen);
  const auto sw = hitting_sandwich_check(toy().gen, toy().nu, spec, grid);
  CHECK(sw.passed);
  for (const auto& row : sw.rows) {
    CHECK(row.lower <= row.survival + 1e-10);
    CHECK(row.survival <= row.upper + 1e-10);
  }
}

TEST_CASE("rayleigh bound against the symmetrized model") {
  const auto sym = build_killed_generator(toy().space, toy().model.symmetrized());
  const auto r = rayleigh_bound(toy().gen, sym, toy().nu);
  CHECK(r.lambda_s == doctest::Approx(0.10761).epsilon(1e-4));
  CHECK(r.lambda >= r.lambda_s);
  CHECK(r.passed);
}

TEST_CASE("uniformization agrees with the spectral tail") {
  const auto spec = principal_decay(toy().gen);
  const double s1 = exact_survival(toy().gen, toy().nu, 200.0);
  const double s2 = exact_survival(toy().gen, toy().nu, 300.0);
  CHECK(std::log(s1 / s2) / 100.0 == doctest::Approx(spec.lambda).epsilon(1e-8));
  const auto v = exact_survival(toy().gen, toy().nu, std::vector<double>{0.0, 1.0});
  CHECK(v[0] == doctest::Approx(toy().nu.sum()));
}

TEST_CASE("TASEP circle has a defective generator with rate 1") {
  const auto& c = circle();
  CHECK(c.gen.size() == 10);
  CHECK(c.space.size() == 20);
  const auto r = principal_decay(c.gen);
  CHECK(r.defective);
  REQUIRE(r.lambda_fit);
  CHECK(*r.lambda_fit == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("TASEP circle survival matches the mixture formula") {
  const auto& c = circle();
  // Uniform over all 20 placements; states inside the target carry tau = 0.
  Eigen::VectorXd u = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(c.gen.size()), 1.0 / 20);
  for (double t : {0.3, 1.0, 2.5, 6.0}) {
    CHECK(exact_survival(c.gen, u, t) == doctest::Approx(tasep_circle_mixture(6, 3, t)).epsilon(1e-10));
  }
  for (std::size_t x = 0; x < c.gen.size(); ++x) {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(c.gen.size()));
    d[static_cast<Eigen::Index>(x)] = 1.0;
    CHECK(exact_survival(c.gen, d, 1.7) ==
          doctest::Approx(tasep_circle_survival(c.gen.states[x], 1.7)).epsilon(1e-10));
  }
}

TEST_CASE("closed form helpers") {
  CHECK(binomial(6, 3) == 20.0);
  CHECK(poisson_below(1, 2.0) == doctest::Approx(std::exp(-2.0)));
  CHECK(tasep_line_lambda(0.3) == 0.3);
  CHECK(tasep_line_survival(0.5, 0.0) == doctest::Approx(0.5));
  CHECK(tasep_circle_lambda() == 1.0);
  CHECK(circle_chi(Configuration({0, 0, 0, 1, 0, 0})) == 3);
}

TEST_CASE("log survival fit recovers a planted rate and power") {
  std::vector<double> t, ls;
  for (int i = 0; i < 64; ++i) {
    const double x = 20.0 + i;
    t.push_back(x);
    ls.push_back(0.3 - 0.25 * x + 1.5 * std::log(x) + 2.0 / x);
  }
  const auto f = fit_log_survival(t, ls);
  CHECK(f.lambda == doctest::Approx(0.25).epsilon(1e-8));
  CHECK(f.power == doctest::Approx(1.5).epsilon(1e-6));
}

TEST_CASE("strongly connected classes of a small chain") {
  // 0 <-> 1 -> 2, with 2 on its own.
  std::vector<Eigen::Triplet<double>> tr{{0, 0, -1}, {0, 1, 1}, {1, 0, 1}, {1, 1, -2},
                                         {1, 2, 1},  {2, 2, -1}};
  SparseMatrix l(3, 3);
  l.setFromTriplets(tr.begin(), tr.end());
  auto cls = strongly_connected_classes(l);
  CHECK(cls.size() == 2);
  for (auto& c : cls) std::sort(c.begin(), c.end());
  std::sort(cls.begin(), cls.end());
  CHECK(cls[0] == std::vector<std::size_t>{0, 1});
  CHECK(cls[1] == std::vector<std::size_t>{2});
}

TEST_CASE("absorbing class gives rate zero") {
  Model m(Lattice({3}, Boundary::blocked), JumpKernel::totally_asymmetric(), RateFunction::exclusion(),
          TargetSet({0}, 0));
  // Particles drift right, away from the target, and jam at the wall.
  const auto space = enumerate_states(m.lattice(), StateConstraint::canonical(1));
  const auto gen = build_killed_generator(space, m);
  const auto r = principal_decay(gen);
  CHECK(r.absorbing);
  CHECK(r.lambda == 0.0);
  CHECK_FALSE(r.has_vectors());
}
