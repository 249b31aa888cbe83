#pragma once

#include "regulus/core.hpp"
#include "regulus/curvature.hpp"
#include "regulus/direction.hpp"

#include <atomic>
#include <memory>
#include <random>

namespace regulus::testing {

using Vec = Vector<double>;
using Mat = Matrix<double>;

/// Forwards to another objective and counts what it actually received.
class CountingObjective final : public Objective<double> {
public:
  explicit CountingObjective(const Objective<double> &inner) : inner_(inner) {}

  Eigen::Index dimension() const override { return inner_.dimension(); }
  double value(const Vec &x) const override {
    ++values_;
    return inner_.value(x);
  }
  void gradient(const Vec &x, Vec &g) const override {
    ++gradients_;
    inner_.gradient(x, g);
  }

  std::int64_t values() const { return values_; }
  std::int64_t gradients() const { return gradients_; }

private:
  const Objective<double> &inner_;
  mutable std::atomic<std::int64_t> values_{0};
  mutable std::atomic<std::int64_t> gradients_{0};
};

/// f = 1/2 x'Ax + b'x with A symmetric.
inline std::shared_ptr<FunctionObjective<double>> quadratic(Mat A, Vec b) {
  const Eigen::Index n = A.rows();
  auto a = std::make_shared<const Mat>(std::move(A));
  auto c = std::make_shared<const Vec>(std::move(b));
  return std::make_shared<FunctionObjective<double>>(
      n, [a, c](const Vec &x) { return 0.5 * x.dot(*a * x) + c->dot(x); },
      [a, c](const Vec &x, Vec &g) { g = *a * x + *c; });
}

inline Vec random_vector(std::mt19937_64 &rng, Eigen::Index n, double scale = 1.0) {
  std::normal_distribution<double> N(0.0, scale);
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    v[i] = N(rng);
  return v;
}

/// Symmetric positive definite with eigenvalues in [lo, hi].
inline Mat random_spd(std::mt19937_64 &rng, Eigen::Index n, double lo, double hi) {
  Eigen::HouseholderQR<Mat> qr(Mat::NullaryExpr(n, n, [&] {
    return std::normal_distribution<double>(0.0, 1.0)(rng);
  }));
  const Mat Q = qr.householderQ();
  std::uniform_real_distribution<double> U(lo, hi);
  Vec ev(n);
  for (Eigen::Index i = 0; i < n; ++i)
    ev[i] = U(rng);
  return Q * ev.asDiagonal() * Q.transpose();
}

/// History whose pairs satisfy y = A s for an SPD A, so s'y > 0.
inline PairHistory<double> random_convex_history(std::mt19937_64 &rng, Eigen::Index n,
                                                 std::size_t pairs, std::size_t capacity) {
  PairHistory<double> h(capacity);
  const Mat A = random_spd(rng, n, 0.5, 5.0);
  for (std::size_t i = 0; i < pairs; ++i) {
    const Vec s = random_vector(rng, n);
    h.push(s, A * s);
  }
  return h;
}

/// History with unconstrained y, so s'y may be negative.
inline PairHistory<double> random_history(std::mt19937_64 &rng, Eigen::Index n,
                                          std::size_t pairs, std::size_t capacity) {
  PairHistory<double> h(capacity);
  for (std::size_t i = 0; i < pairs; ++i)
    h.push(random_vector(rng, n), random_vector(rng, n));
  return h;
}

/// Pairs y = A s for a symmetric indefinite A, so s'y takes both signs but
/// stays away from zero (|s'y| >= 0.1 |s||y|). The newest pair is convex,
/// which keeps gamma on the s'y/|y|^2 branch.
inline PairHistory<double> random_mixed_history(std::mt19937_64 &rng, Eigen::Index n,
                                                std::size_t pairs, std::size_t capacity) {
  Eigen::HouseholderQR<Mat> qr(Mat::NullaryExpr(n, n, [&] {
    return std::normal_distribution<double>(0.0, 1.0)(rng);
  }));
  const Mat Q = qr.householderQ();
  std::uniform_real_distribution<double> U(0.5, 5.0);
  Vec ev(n);
  for (Eigen::Index i = 0; i < n; ++i)
    ev[i] = (i % 2 ? -1.0 : 1.0) * U(rng);
  const Mat A = Q * ev.asDiagonal() * Q.transpose();
  PairHistory<double> h(capacity);
  for (std::size_t k = 0; k < pairs;) {
    const Vec s = random_vector(rng, n);
    const Vec y = A * s;
    const double sy = s.dot(y);
    if (std::abs(sy) < 0.1 * s.norm() * y.norm() || (k + 1 == pairs && sy <= 0))
      continue;
    h.push(s, y);
    ++k;
  }
  return h;
}

} // namespace regulus::testing
