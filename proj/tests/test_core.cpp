#include "regulus/core.hpp"

#include "test_support.hpp"

#include <doctest.h>

using namespace regulus;
using regulus::testing::Vec;

namespace {

FunctionObjective<double> half_norm(Eigen::Index n) {
  return {n, [](const Vec &x) { return 0.5 * x.squaredNorm(); },
          [](const Vec &x, Vec &g) { g = x; }};
}

} // namespace

TEST_CASE("check_termination") {
  SolverConfig config;
  EvalCounter counters;

  SUBCASE("zero gradient converges") {
    CHECK(check_termination<double>(Vec::Zero(3), Vec::Constant(3, 7.0), counters, config) ==
          Termination::Converged);
  }
  SUBCASE("budget exceeded") {
    counters.n_f = 10001;
    Vec g(2), x(2);
    g << 0.3, 0.0;
    x << 0.5, 0.0;
    CHECK(check_termination(g, x, counters, config) == Termination::EvalBudgetExceeded);
    counters.n_f = 10000;
    CHECK(check_termination(g, x, counters, config) == Termination::Continue);
  }
  SUBCASE("small point uses unscaled norm") {
    Vec g(1), x(1);
    g << 1e-6;
    x << 0.5;
    CHECK(check_termination(g, x, counters, config) == Termination::Converged);
  }
  SUBCASE("convergence is tested before the budget") {
    counters.n_f = 20000;
    CHECK(check_termination<double>(Vec::Zero(2), Vec::Zero(2), counters, config) ==
          Termination::Converged);
  }
  SUBCASE("large point scales the gradient") {
    Vec g(1), x(1);
    g << 5e-5;
    x << 10.0; // 5e-6 after scaling
    CHECK(check_termination(g, x, counters, config) == Termination::Converged);
    x << 4.0;
    CHECK(check_termination(g, x, counters, config) == Termination::Continue);
  }
  SUBCASE("non-finite gradient") {
    Vec g(2);
    g << 1.0, std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(check_termination<double>(g, Vec::Zero(2), counters, config), SolverError);
  }
  SUBCASE("length mismatch") {
    CHECK_THROWS_AS(check_termination<double>(Vec::Zero(2), Vec::Zero(3), counters, config),
                    std::invalid_argument);
  }
}

TEST_CASE("termination is scale-correct inside the unit ball") {
  std::mt19937_64 rng(11);
  SolverConfig config;
  EvalCounter counters;
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    Vec x = regulus::testing::random_vector(rng, 4);
    x *= std::abs(U(rng)) / std::max(1.0, x.norm());
    Vec g = regulus::testing::random_vector(rng, 4);
    g *= 2e-5 * std::abs(U(rng)) / g.norm();
    const bool expect = g.norm() < config.grad_tol;
    CHECK((check_termination(g, x, counters, config) == Termination::Converged) == expect);
  }
}

TEST_CASE("evaluate counts exactly what was requested") {
  const auto fn = half_norm(2);
  Vec x(2);
  x << 3.0, 4.0;
  EvalCounter c;

  auto v = evaluate<double>(fn, x, c, Request::Value);
  CHECK(v.value == 12.5);
  CHECK(c == EvalCounter{1, 0});

  auto g = evaluate<double>(fn, x, c, Request::Gradient);
  CHECK(g.gradient == x);
  CHECK(c == EvalCounter{1, 1});

  auto both = evaluate<double>(fn, x, c, Request::Both);
  CHECK(both.value == 12.5);
  CHECK(both.gradient == x);
  CHECK(c == EvalCounter{2, 2});
}

TEST_CASE("evaluate rejects non-finite results and bad dimensions") {
  FunctionObjective<double> bad(
      1, [](const Vec &) { return std::numeric_limits<double>::infinity(); },
      [](const Vec &, Vec &g) { g.setConstant(std::numeric_limits<double>::quiet_NaN()); });
  EvalCounter c;
  try {
    evaluate<double>(bad, Vec::Zero(1), c, Request::Value);
    FAIL("expected NumericalBreakdown");
  } catch (const SolverError &e) {
    CHECK(e.status() == Status::NumericalBreakdown);
  }
  CHECK(c.n_f == 1);
  CHECK_THROWS_AS(evaluate<double>(bad, Vec::Zero(1), c, Request::Gradient), SolverError);
  CHECK_THROWS_AS(evaluate<double>(half_norm(2), Vec::Zero(3), c, Request::Value),
                  std::invalid_argument);
}

TEST_CASE("config defaults") {
  const SolverConfig c;
  CHECK(c.eta1 == 0.01);
  CHECK(c.eta2 == 0.9);
  CHECK(c.mu_min == 1e-3);
  CHECK(c.memory == 5);
  CHECK(c.gamma1 == 0.1);
  CHECK(c.gamma2 == 10.0);
  CHECK(c.nonmonotone == 10);
  CHECK(c.grad_tol == 1e-5);
  CHECK(c.max_fevals == 10000);
  CHECK(c.mu0 == 1.0);
  CHECK(c.mu_max == 1e15);
  CHECK(c.c1 == 1e-4);
  CHECK(c.c2 == 0.9);
  CHECK(c.alpha_floor == 1e-8);
  CHECK(c.max_ls_iters == 20);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("config file parsing") {
  const auto c = parse_config(R"(
# comparison run
M = 8
m=7
gamma2 = 5.0   # trailing comment
max_fevals = 1e4
mu0 = 2
)");
  CHECK(c.nonmonotone == 8);
  CHECK(c.memory == 7);
  CHECK(c.gamma2 == 5.0);
  CHECK(c.max_fevals == 10000);
  CHECK(c.mu0 == 2.0);
  CHECK(c.eta1 == 0.01);

  CHECK(parse_config("nonmonotone = 0\nmemory = 3\n").nonmonotone == 0);
  CHECK(parse_config("").memory == 5);

  CHECK_THROWS_AS(parse_config("bogus = 1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("eta1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("eta1 = abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("m = 2.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("eta1 = 0.95"), std::invalid_argument);   // eta1 >= eta2
  CHECK_THROWS_AS(parse_config("mu_min = 2"), std::invalid_argument);    // mu_min > mu0
  CHECK_THROWS_AS(parse_config("gamma1 = 1.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("gamma2 = 1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("c2 = 1e-5"), std::invalid_argument);
}

TEST_CASE("status names round-trip") {
  for (Status s : {Status::Converged, Status::EvalBudgetExceeded, Status::RegularizationOverflow,
                   Status::LineSearchFailure, Status::NumericalBreakdown})
    CHECK(status_from_string(to_string(s)) == s);
  CHECK_THROWS_AS(status_from_string("Solved"), std::invalid_argument);
}
