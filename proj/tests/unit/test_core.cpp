#include <atomic>
#include <cmath>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "qsd/core/parallel.hpp"
#include "qsd/core/rng.hpp"

using namespace qsd;

TEST_CASE("philox known answers") {
  using C = Philox4x32::Counter;
  using K = Philox4x32::Key;
  CHECK(Philox4x32::block(C{0, 0, 0, 0}, K{0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::block(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::block(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
  auto a = make_stream(42, stream_purpose::trajectory, 7);
  auto b = make_stream(42, stream_purpose::trajectory, 7);
  auto c = make_stream(42, stream_purpose::trajectory, 8);
  auto d = make_stream(42, stream_purpose::bootstrap, 7);
  bool differ_c = false, differ_d = false;
  for (int i = 0; i < 64; ++i) {
    const auto x = a();
    CHECK(x == b());
    differ_c |= x != c();
    differ_d |= x != d();
  }
  CHECK(differ_c);
  CHECK(differ_d);
}

TEST_CASE("uniform stays inside the open interval and has the right mean") {
  auto r = make_stream(1, stream_purpose::sampling, 0);
  double s = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    s += u;
  }
  CHECK(std::abs(s / n - 0.5) < 4 * std::sqrt(1.0 / 12 / n));
}

TEST_CASE("below is unbiased on a small range") {
  auto r = make_stream(3, stream_purpose::sampling, 1);
  std::vector<int> counts(3, 0);
  const int n = 90000;
  for (int i = 0; i < n; ++i) ++counts[r.below(3)];
  for (int c : counts) CHECK(std::abs(c - n / 3.0) < 4 * std::sqrt(n * (1.0 / 3) * (2.0 / 3)));
  CHECK(r.below(1) == 0);
}

TEST_CASE("exponential mean") {
  auto r = make_stream(5, stream_purpose::sampling, 2);
  double s = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) s += r.exponential(2.0);
  CHECK(std::abs(s / n - 0.5) < 4 * 0.5 / std::sqrt(n));
}

TEST_CASE("parallel_for covers every index once for any worker count") {
  for (unsigned w : {1u, 3u, 8u}) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), w, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
  }
}

TEST_CASE("parallel_for rethrows the first exception") {
  CHECK_THROWS_AS(parallel_for(100, 4,
                               [](std::size_t i) {
                                 if (i == 37) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
}

TEST_CASE("effective_workers clamps") {
  CHECK(effective_workers(0) >= 1);
  CHECK(effective_workers(1) == 1);
}
