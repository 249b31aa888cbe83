#include "regulus/curvature.hpp"

#include "test_support.hpp"

#include <doctest.h>

using namespace regulus;
using regulus::testing::Vec;

namespace {
Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}
} // namespace

TEST_CASE("push_pair caches inner products") {
  PairHistory<double> h(5);
  CHECK(h.empty());
  CHECK(push_pair(h, v2(1, 0), v2(2, 0)));
  REQUIRE(h.size() == 1);
  CHECK(h.newest().sy == 2.0);
  CHECK(h.newest().ss == 1.0);
  CHECK(h.newest().yy == 4.0);
}

TEST_CASE("push_pair evicts oldest first") {
  PairHistory<double> h(2);
  push_pair(h, v2(1, 0), v2(1, 0));
  push_pair(h, v2(2, 0), v2(1, 0));
  push_pair(h, v2(3, 0), v2(1, 0));
  REQUIRE(h.size() == 2);
  CHECK(h.oldest().s[0] == 2.0);
  CHECK(h.newest().s[0] == 3.0);
}

TEST_CASE("eviction order is FIFO regardless of pair contents") {
  std::mt19937_64 rng(3);
  PairHistory<double> h(4);
  std::vector<Vec> pushed;
  for (int i = 0; i < 30; ++i) {
    Vec s = regulus::testing::random_vector(rng, 3);
    REQUIRE(h.push(s, regulus::testing::random_vector(rng, 3, 100.0)));
    pushed.push_back(s);
    REQUIRE(h.size() == std::min<std::size_t>(pushed.size(), 4));
    for (std::size_t j = 0; j < h.size(); ++j)
      CHECK(h[j].s == pushed[pushed.size() - h.size() + j]);
  }
}

TEST_CASE("push_pair rejects degenerate pairs") {
  PairHistory<double> h(3);
  CHECK_FALSE(push_pair(h, v2(0, 0), v2(1, 0)));
  CHECK_FALSE(push_pair(h, v2(1, std::numeric_limits<double>::infinity()), v2(1, 0)));
  CHECK_FALSE(push_pair(h, v2(1, 0), v2(std::numeric_limits<double>::quiet_NaN(), 0)));
  CHECK(h.empty());
  CHECK_THROWS_AS(push_pair(h, v2(1, 0), Vec(Vec::Ones(3))), std::invalid_argument);
  CHECK_THROWS_AS(PairHistory<double>(0), std::invalid_argument);
}

TEST_CASE("shifted_curvature hand examples") {
  PairHistory<double> h(2);
  push_pair(h, v2(1, 0), v2(2, 0));
  push_pair(h, v2(1, 0), v2(-1, 0));

  SUBCASE("positive curvature is a plain shift") {
    const auto r = shifted_curvature(h[0], 1.0);
    CHECK(r.y_tilde == v2(3, 0));
    CHECK(r.s_dot_y_tilde == 3.0);
  }
  SUBCASE("negative curvature gets corrected") {
    const auto r = shifted_curvature(h[1], 0.5);
    CHECK(r.y_tilde == v2(0.5, 0));
    CHECK(r.s_dot_y_tilde == 0.5);
  }
  SUBCASE("mu = 0 leaves y untouched") {
    const auto r = shifted_curvature(h[0], 0.0);
    CHECK(r.y_tilde == h[0].y);
  }
  CHECK_THROWS_AS(shifted_curvature(h[0], -1.0), std::invalid_argument);
}

TEST_CASE("s'y~ >= mu |s|^2 for random pairs") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> dim(1, 10);
  int negative = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index n = dim(rng);
    PairHistory<double> h(1);
    h.push(regulus::testing::random_vector(rng, n), regulus::testing::random_vector(rng, n));
    const auto &p = h.newest();
    negative += p.sy < 0;
    for (double mu : {1e-3, 0.1, 1.0, 1e3}) {
      const auto r = shifted_curvature(p, mu);
      // from the materialized vector, not the cached shortcut
      const double sy = p.s.dot(r.y_tilde);
      CHECK(sy > 0.0);
      CHECK(sy >= mu * p.ss * (1 - 1e-12) - 1e-12 * std::abs(p.sy));
      CHECK(r.s_dot_y_tilde == doctest::Approx(sy).epsilon(1e-10));
    }
  }
  CHECK(negative > 100);
}

TEST_CASE("shift is affine in mu when s'y >= 0") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto h = regulus::testing::random_convex_history(rng, 5, 1, 1);
    const auto &p = h.newest();
    const auto a = shifted_curvature(p, 0.25);
    const auto b = shifted_curvature(p, 8.25);
    CHECK((b.y_tilde - a.y_tilde - 8.0 * p.s).norm() <= 1e-12 * (1 + b.y_tilde.norm()));
  }
}
