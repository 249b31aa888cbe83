#pragma once

#include "regulus/core.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace regulus {

template <typename Scalar>
struct LinePoint {
  Scalar alpha{};
  Scalar phi{};
  Scalar dphi{};
};

/// phi(alpha) = f(base + alpha*dir) restricted to a ray. `evaluate` returns
/// phi and phi' at alpha and is responsible for evaluation accounting.
template <typename Scalar>
struct LineProbe {
  Scalar phi0{};
  Scalar dphi0{};
  std::function<LinePoint<Scalar>(Scalar)> evaluate;
};

/// Optional diagnostics filled by strong_wolfe_search.
template <typename Scalar>
struct LineSearchLog {
  int evaluations = 0;
  /// [low, high] bounds of the bracket before each zoom evaluation.
  std::vector<std::pair<Scalar, Scalar>> brackets;
};

struct LineSearchLimits {
  double alpha_min = 1e-20;
  double alpha_max = 1e20;
};

namespace detail {

/// Minimizer of the cubic matching (a, fa, da) and (b, fb, db); NaN if none.
template <typename Scalar>
Scalar cubic_minimizer(Scalar a, Scalar fa, Scalar da, Scalar b, Scalar fb, Scalar db) {
  const Scalar d1 = da + db - Scalar(3) * (fa - fb) / (a - b);
  const Scalar disc = d1 * d1 - da * db;
  if (!(disc >= Scalar(0)))
    return std::numeric_limits<Scalar>::quiet_NaN();
  const Scalar sign = b > a ? Scalar(1) : Scalar(-1);
  const Scalar d2 = sign * std::sqrt(disc);
  return b - (b - a) * (db + d2 - d1) / (db - da + Scalar(2) * d2);
}

template <typename Scalar>
bool armijo_fails(const LinePoint<Scalar> &p, Scalar phi0, Scalar dphi0, Scalar c1) {
  return !std::isfinite(p.phi) || p.phi > phi0 + c1 * p.alpha * dphi0;
}

} // namespace detail

/// Step length satisfying the strong Wolfe conditions
///   phi(a) <= phi(0) + c1 a phi'(0)   and   |phi'(a)| <= c2 |phi'(0)|
/// by bracketing then zooming with safeguarded cubic interpolation.
/// Returns nullopt after max_iters evaluations, or when the bracket collapses
/// or the trial step leaves [alpha_min, alpha_max].
template <typename Scalar>
std::optional<LinePoint<Scalar>> strong_wolfe_search(const LineProbe<Scalar> &probe, Scalar c1,
                                                     Scalar c2, Scalar alpha_init, int max_iters,
                                                     LineSearchLog<Scalar> *log = nullptr,
                                                     LineSearchLimits limits = {}) {
  if (!(c1 > Scalar(0) && c1 < c2 && c2 < Scalar(1)))
    throw std::invalid_argument("strong_wolfe_search: need 0 < c1 < c2 < 1");
  if (!(probe.dphi0 < Scalar(0)))
    throw std::invalid_argument("strong_wolfe_search: direction is not a descent direction");
  if (!(alpha_init > Scalar(0)))
    throw std::invalid_argument("strong_wolfe_search: alpha_init must be positive");

  const Scalar phi0 = probe.phi0;
  const Scalar dphi0 = probe.dphi0;
  const Scalar curvature_bound = -c2 * dphi0;
  const Scalar alpha_min(limits.alpha_min);
  const Scalar alpha_max(limits.alpha_max);
  int evals = 0;

  auto eval = [&](Scalar a) {
    ++evals;
    if (log)
      ++log->evaluations;
    LinePoint<Scalar> p = probe.evaluate(a);
    p.alpha = a;
    return p;
  };
  auto strong_curvature = [&](const LinePoint<Scalar> &p) {
    return std::isfinite(p.dphi) && std::abs(p.dphi) <= curvature_bound;
  };

  auto zoom = [&](LinePoint<Scalar> lo, LinePoint<Scalar> hi) -> std::optional<LinePoint<Scalar>> {
    while (evals < max_iters) {
      const Scalar a = std::min(lo.alpha, hi.alpha);
      const Scalar b = std::max(lo.alpha, hi.alpha);
      const Scalar width = b - a;
      if (width < alpha_min ||
          width <= Scalar(4) * std::numeric_limits<Scalar>::epsilon() * b || b < alpha_min)
        return std::nullopt;
      if (log)
        log->brackets.emplace_back(a, b);

      Scalar trial = std::numeric_limits<Scalar>::quiet_NaN();
      if (std::isfinite(hi.phi) && std::isfinite(hi.dphi))
        trial = detail::cubic_minimizer(lo.alpha, lo.phi, lo.dphi, hi.alpha, hi.phi, hi.dphi);
      const Scalar margin = Scalar(0.1) * width;
      if (!std::isfinite(trial) || trial < a + margin || trial > b - margin)
        trial = a + Scalar(0.5) * width;

      const LinePoint<Scalar> cur = eval(trial);
      if (detail::armijo_fails(cur, phi0, dphi0, c1) || cur.phi >= lo.phi ||
          !std::isfinite(cur.dphi)) {
        hi = cur;
        continue;
      }
      if (strong_curvature(cur))
        return cur;
      if (cur.dphi * (hi.alpha - lo.alpha) >= Scalar(0))
        hi = lo;
      lo = cur;
    }
    return std::nullopt;
  };

  LinePoint<Scalar> prev{Scalar(0), phi0, dphi0};
  Scalar alpha = std::min(alpha_init, alpha_max);
  for (bool first = true; evals < max_iters; first = false) {
    const LinePoint<Scalar> cur = eval(alpha);
    if (detail::armijo_fails(cur, phi0, dphi0, c1) || (!first && cur.phi >= prev.phi) ||
        !std::isfinite(cur.dphi))
      return zoom(prev, cur);
    if (strong_curvature(cur))
      return cur;
    if (cur.dphi >= Scalar(0))
      return zoom(cur, prev);

    if (alpha >= alpha_max)
      return std::nullopt;
    // Secant step on phi', kept within [1.1, 4] times the current step.
    Scalar next = Scalar(4) * alpha;
    if (cur.dphi > prev.dphi) {
      const Scalar secant = cur.alpha - cur.dphi * (cur.alpha - prev.alpha) / (cur.dphi - prev.dphi);
      if (std::isfinite(secant))
        next = std::clamp(secant, Scalar(1.1) * alpha, Scalar(4) * alpha);
    }
    prev = cur;
    alpha = std::min(next, alpha_max);
  }
  return std::nullopt;
}

} // namespace regulus
