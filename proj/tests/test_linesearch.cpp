#include "regulus/linesearch.hpp"

#include <doctest.h>

#include <random>

using namespace regulus;

namespace {

/// phi(a) = q a^2 - s a + A sin(w a): bounded below, descent at 0 when s > A w.
struct Wiggly {
  double q, s, A, w;
  double phi(double a) const { return q * a * a - s * a + A * std::sin(w * a); }
  double dphi(double a) const { return 2 * q * a - s + A * w * std::cos(w * a); }
  LineProbe<double> probe() const {
    return {phi(0), dphi(0), [this](double a) { return LinePoint<double>{a, phi(a), dphi(a)}; }};
  }
};

Wiggly random_wiggly(std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  Wiggly p;
  p.q = std::pow(10.0, -2 + 4 * U(rng));
  p.w = std::pow(10.0, -1 + 2 * U(rng));
  p.A = U(rng) * 2.0;
  p.s = p.A * p.w + std::pow(10.0, -2 + 3 * U(rng));
  return p;
}

bool strong_wolfe(const Wiggly &p, const LinePoint<double> &r, double c1, double c2) {
  const double a = r.alpha;
  return p.phi(a) <= p.phi(0) + c1 * a * p.dphi(0) &&
         std::abs(p.dphi(a)) <= c2 * std::abs(p.dphi(0));
}

} // namespace

TEST_CASE("quadratic: exact step accepted immediately") {
  Wiggly p{0.5, 1.0, 0.0, 1.0}; // minimum at 1
  LineSearchLog<double> log;
  const auto r = strong_wolfe_search(p.probe(), 1e-4, 0.9, 1.0, 20, &log);
  REQUIRE(r);
  CHECK(r->alpha == 1.0);
  CHECK(log.evaluations == 1);
}

TEST_CASE("quadratic: too long a step triggers zoom") {
  Wiggly p{0.5, 1.0, 0.0, 1.0};
  LineSearchLog<double> log;
  const auto r = strong_wolfe_search(p.probe(), 1e-4, 0.1, 10.0, 20, &log);
  REQUIRE(r);
  CHECK(strong_wolfe(p, *r, 1e-4, 0.1));
  CHECK_FALSE(log.brackets.empty());
}

TEST_CASE("quadratic: too short a step extrapolates") {
  Wiggly p{0.5e-3, 1.0, 0.0, 1.0}; // minimum at 1000
  LineSearchLog<double> log;
  const auto r = strong_wolfe_search(p.probe(), 1e-4, 0.9, 1.0, 30, &log);
  REQUIRE(r);
  CHECK(r->alpha > 1.0);
  CHECK(strong_wolfe(p, *r, 1e-4, 0.9));
}

TEST_CASE("random profiles satisfy strong Wolfe with nested brackets") {
  std::mt19937_64 rng(43);
  int solved = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Wiggly p = random_wiggly(rng);
    for (double c2 : {0.9, 0.1}) {
      LineSearchLog<double> log;
      const auto r = strong_wolfe_search(p.probe(), 1e-4, c2, 1.0, 60, &log);
      CAPTURE(trial);
      REQUIRE(r);
      ++solved;
      CHECK(strong_wolfe(p, *r, 1e-4, c2));
      CHECK(r->phi == p.phi(r->alpha));
      CHECK(log.evaluations <= 60);
      for (std::size_t i = 1; i < log.brackets.size(); ++i) {
        CHECK(log.brackets[i].first >= log.brackets[i - 1].first);
        CHECK(log.brackets[i].second <= log.brackets[i - 1].second);
      }
    }
  }
  CHECK(solved == 600);
}

TEST_CASE("unbounded ray fails at alpha_max") {
  Wiggly p{0.0, 1.0, 0.0, 1.0}; // phi = -a
  LineSearchLimits limits;
  limits.alpha_max = 1e6;
  const auto r = strong_wolfe_search<double>(p.probe(), 1e-4, 0.9, 1.0, 100, nullptr, limits);
  CHECK_FALSE(r);
}

TEST_CASE("iteration budget is respected") {
  Wiggly p{0.5e-12, 1.0, 0.0, 1.0};
  LineSearchLog<double> log;
  CHECK_FALSE(strong_wolfe_search(p.probe(), 1e-4, 0.9, 1.0, 5, &log));
  CHECK(log.evaluations == 5);
}

TEST_CASE("non-finite values are treated as an upper bracket end") {
  // phi = (a-1)^2/2 - ... but infinite beyond a = 3
  LineProbe<double> probe{0.5, -1.0, [](double a) {
                            if (a > 3)
                              return LinePoint<double>{a, std::numeric_limits<double>::infinity(),
                                                       std::numeric_limits<double>::quiet_NaN()};
                            return LinePoint<double>{a, 0.5 * (a - 1) * (a - 1), a - 1};
                          }};
  const auto r = strong_wolfe_search(probe, 1e-4, 0.1, 8.0, 30);
  REQUIRE(r);
  CHECK(std::abs(r->dphi) <= 0.1);
}

TEST_CASE("argument validation") {
  Wiggly p{0.5, 1.0, 0.0, 1.0};
  CHECK_THROWS_AS(strong_wolfe_search(p.probe(), 0.5, 0.4, 1.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(strong_wolfe_search(p.probe(), 1e-4, 0.9, 0.0, 10), std::invalid_argument);
  Wiggly up{0.5, -1.0, 0.0, 1.0};
  CHECK_THROWS_AS(strong_wolfe_search(up.probe(), 1e-4, 0.9, 1.0, 10), std::invalid_argument);
}

TEST_CASE("cubic minimizer recovers a cubic's local minimum") {
  // f = a^3 - 3a has a local minimum at 1
  auto f = [](double a) { return a * a * a - 3 * a; };
  auto df = [](double a) { return 3 * a * a - 3; };
  CHECK(detail::cubic_minimizer(0.0, f(0), df(0), 2.0, f(2), df(2)) == doctest::Approx(1.0));
  CHECK(detail::cubic_minimizer(2.0, f(2), df(2), 0.0, f(0), df(0)) == doctest::Approx(1.0));
}

TEST_CASE("each evaluation is one probe call") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 50; ++trial) {
    const Wiggly p = random_wiggly(rng);
    int calls = 0;
    LineProbe<double> probe{p.phi(0), p.dphi(0), [&](double a) {
                              ++calls;
                              return LinePoint<double>{a, p.phi(a), p.dphi(a)};
                            }};
    LineSearchLog<double> log;
    strong_wolfe_search(probe, 1e-4, 0.1, 1.0, 20, &log);
    CHECK(calls == log.evaluations);
  }
}
