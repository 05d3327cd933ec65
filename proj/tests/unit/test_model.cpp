#include "doctest.h"
#include "qsd/core/error.hpp"
#include "qsd/model/model.hpp"
#include "qsd/model/model_io.hpp"
#include "qsd/model/validation.hpp"

using namespace qsd;

TEST_CASE("lattice coordinates round trip and wrap") {
  Lattice l({4, 3}, Boundary::torus);
  CHECK(l.num_sites() == 12);
  for (Site s = 0; s < l.num_sites(); ++s) CHECK(l.site(l.coords(s)) == s);
  Lattice ring({4}, Boundary::torus);
  const std::vector<int> plus{1};
  CHECK(ring.shift(3, plus) == Site{0});
  Lattice box({4}, Boundary::blocked);
  CHECK_FALSE(box.shift(3, plus).has_value());
}

TEST_CASE("tasep kernel passes validation with drift +1") {
  const auto r = validate_model(Lattice({8}, Boundary::torus), JumpKernel::totally_asymmetric(),
                                RateFunction::exclusion());
  CHECK(r.ok());
  REQUIRE(r.drift.size() == 1);
  CHECK(r.drift[0] == doctest::Approx(1.0));
}

TEST_CASE("kernel weights summing to 0.9 fail normalization") {
  const auto r = validate_model(Lattice({8}, Boundary::torus), JumpKernel({{1}, {-1}}, {0.5, 0.4}),
                                RateFunction::zero_range(OccupancyFunction::constant()));
  CHECK_FALSE(r.ok());
  CHECK(r.failures().size() >= 1);
}

TEST_CASE("capped linear g has delta 1 and passes monotonicity") {
  const auto r = validate_model(Lattice({8}, Boundary::torus), JumpKernel::nearest_neighbour(1, 0.5),
                                RateFunction::zero_range(OccupancyFunction::capped_linear(3)));
  CHECK(r.ok());
  CHECK(r.delta == doctest::Approx(1.0));
}

TEST_CASE("apply_jump examples") {
  Model zr(Lattice({2}, Boundary::torus), JumpKernel::totally_asymmetric(),
           RateFunction::zero_range(OccupancyFunction::linear()), TargetSet({0}, 5));
  CHECK(zr.apply_jump(Configuration({2, 0}), 0, 1) == Configuration({1, 1}));
  Model ex(Lattice({2}, Boundary::torus), JumpKernel::totally_asymmetric(), RateFunction::exclusion(),
           TargetSet({0}, 5));
  CHECK_THROWS(ex.apply_jump(Configuration({1, 1}), 0, 1));
  Model ring(Lattice({4}, Boundary::torus), JumpKernel::totally_asymmetric(), RateFunction::exclusion(),
             TargetSet({0}, 5));
  CHECK(ring.destination(3, 0) == 0);
}

TEST_CASE("target membership") {
  CHECK(TargetSet({0}, 0).contains(Configuration({1, 0})));
  CHECK_FALSE(TargetSet({0, 1}, 3).contains(Configuration({2, 1, 0})));
  CHECK(TargetSet({0, 1}, 3).contains(Configuration({2, 2, 0})));
}

TEST_CASE("jump rate examples") {
  Model zr(Lattice({3}, Boundary::torus), JumpKernel::totally_asymmetric(),
           RateFunction::zero_range(OccupancyFunction::linear()), TargetSet({2}, 10));
  CHECK(zr.jump_rate(Configuration({3, 0, 0}), 0, 1) == doctest::Approx(3.0));
  Model ex(Lattice({3}, Boundary::torus), JumpKernel::totally_asymmetric(), RateFunction::exclusion(),
           TargetSet({2}, 10));
  CHECK(ex.jump_rate(Configuration({1, 1, 0}), 0, 1) == 0.0);
  Model mis(Lattice({3}, Boundary::torus), JumpKernel::totally_asymmetric(),
            RateFunction::misanthrope_ratio(OccupancyFunction::linear()), TargetSet({2}, 10));
  CHECK(mis.jump_rate(Configuration({2, 1, 0}), 0, 1) == doctest::Approx(1.0));
}

TEST_CASE("misanthrope ratio rates satisfy b(0, .) = 0 and monotonicity") {
  const auto b = RateFunction::misanthrope_ratio(OccupancyFunction::linear());
  for (int m = 0; m < 5; ++m) CHECK(b.b(0, m) == 0.0);
  for (int n = 1; n < 5; ++n)
    for (int m = 0; m < 5; ++m) {
      CHECK(b.b(n + 1, m) >= b.b(n, m));
      CHECK(b.b(n, m + 1) <= b.b(n, m));
    }
}

TEST_CASE("configuration bookkeeping") {
  Configuration c({1, 0, 2});
  CHECK(c.total() == 3);
  c.move(2, 1);
  CHECK(c == Configuration({1, 1, 1}));
  CHECK_THROWS(Configuration({0, 1}).move(0, 1));
  CHECK(Configuration({0, 1}).dominated_by(Configuration({1, 1})));
  CHECK_FALSE(Configuration({2, 0}).dominated_by(Configuration({1, 1})));
}

TEST_CASE("model json round trip") {
  Model m(Lattice({5, 2}, Boundary::blocked), JumpKernel::nearest_neighbour(2, 0.6),
          RateFunction::zero_range(OccupancyFunction::capped_linear(2)), TargetSet({0, 1}, 2), 12);
  const auto j = model_to_json(m);
  const Model back = model_from_json(j);
  CHECK(model_to_json(back) == j);
  CHECK(back.occupancy_cap() == 12);
  CHECK(back.target().region() == m.target().region());
}

TEST_CASE("reversed and symmetrized kernels") {
  const auto k = JumpKernel::nearest_neighbour(1, 0.8);
  CHECK(k.reversed().drift()[0] == doctest::Approx(-k.drift()[0]));
  CHECK(k.symmetrized().drift()[0] == doctest::Approx(0.0));
  CHECK(k.symmetrized_irreducible_on(Lattice({6}, Boundary::torus)));
}
