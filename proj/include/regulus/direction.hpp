#pragma once

#include "regulus/curvature.hpp"

#include <optional>
#include <vector>

namespace regulus {

/// Scale gamma of the initial inverse-Hessian guess; always > 0.
template <typename Scalar>
struct ScalingState {
  Scalar gamma = Scalar(1);
};

/// gamma = s'y/|y|^2 from the latest pair, or alpha_floor*|s|^2/|y|^2 when
/// s'y < alpha_floor*|s|^2. Without a pair gamma = 1.
template <typename Scalar>
ScalingState<Scalar> gamma_scale(const CurvaturePair<Scalar> *last_pair, Scalar alpha_floor) {
  if (!(alpha_floor > Scalar(0)))
    throw std::invalid_argument("gamma_scale: alpha_floor must be positive");
  if (last_pair == nullptr)
    return {Scalar(1)};
  const auto &p = *last_pair;
  if (!(p.yy > Scalar(0)))
    throw SolverError(Status::NumericalBreakdown, "gamma_scale: zero gradient difference");
  const Scalar gamma = p.sy >= alpha_floor * p.ss ? p.sy / p.yy : alpha_floor * p.ss / p.yy;
  if (!(gamma > Scalar(0)) || !std::isfinite(gamma))
    throw SolverError(Status::NumericalBreakdown, "gamma_scale: scale not positive and finite");
  return {gamma};
}

template <typename Scalar>
ScalingState<Scalar> gamma_scale(const PairHistory<Scalar> &history, Scalar alpha_floor) {
  return gamma_scale(history.empty() ? nullptr : &history.newest(), alpha_floor);
}

/// h0 = gamma / (1 + gamma*mu), the diagonal of the regularized initial matrix.
template <typename Scalar>
Scalar initial_diag(Scalar gamma, Scalar mu) {
  return gamma / (Scalar(1) + gamma * mu);
}

/// d = -H(mu) g via the two-loop recursion over pairs (s_i, y~_i(mu)).
///
/// The shifted vectors are never formed: y~_i' v = y_i' v + c_i s_i' v with
/// c_i the shift coefficient, so the cost stays O(m n) for any mu.
template <typename Scalar>
Vector<Scalar> two_loop_direction(const PairHistory<Scalar> &history, const Vector<Scalar> &g,
                                  Scalar mu, const ScalingState<Scalar> &scaling) {
  if (mu < Scalar(0))
    throw std::invalid_argument("two_loop_direction: mu must be nonnegative");
  const std::size_t m = history.size();
  std::vector<Scalar> rho(m), alpha(m), shift(m);

  Vector<Scalar> q = g;
  for (std::size_t j = m; j-- > 0;) {
    const auto &p = history[j];
    const Scalar sy_tilde = shifted_inner(p, mu);
    rho[j] = Scalar(1) / sy_tilde;
    if (!std::isfinite(rho[j]))
      throw SolverError(Status::NumericalBreakdown, "two_loop_direction: s'y~ is zero");
    shift[j] = shift_coefficient(p, mu);
    alpha[j] = rho[j] * p.s.dot(q);
    q -= alpha[j] * p.y;
    q -= (alpha[j] * shift[j]) * p.s;
  }

  q *= initial_diag(scaling.gamma, mu);

  for (std::size_t j = 0; j < m; ++j) {
    const auto &p = history[j];
    const Scalar beta = rho[j] * (p.y.dot(q) + shift[j] * p.s.dot(q));
    q += (alpha[j] - beta) * p.s;
  }
  return -q;
}

} // namespace regulus
