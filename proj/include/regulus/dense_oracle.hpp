#pragma once

#include "regulus/direction.hpp"

namespace regulus {

/// Explicit BFGS matrix B(mu) built from (1/h0) I and the pairs (s_i, y~_i(mu)),
/// oldest first. Dense and O(n^2); for checking two_loop_direction on small n.
template <typename Scalar>
Matrix<Scalar> dense_bfgs_oracle(const PairHistory<Scalar> &history, Scalar mu,
                                 const ScalingState<Scalar> &scaling, Eigen::Index n) {
  if (n <= 0 || n > 64)
    throw std::invalid_argument("dense_bfgs_oracle: dimension must be in [1, 64]");
  Matrix<Scalar> B = Matrix<Scalar>::Identity(n, n) / initial_diag(scaling.gamma, mu);
  for (const auto &pair : history) {
    if (pair.s.size() != n)
      throw std::invalid_argument("dense_bfgs_oracle: pair dimension mismatch");
    const auto shifted = shifted_curvature(pair, mu);
    const Vector<Scalar> Bs = B * pair.s;
    const Scalar sBs = pair.s.dot(Bs);
    // recompute s'y~ from the vector, independently of the cached shortcut
    const Scalar sy = pair.s.dot(shifted.y_tilde);
    if (!(sBs > Scalar(0)) || !(sy > Scalar(0)))
      throw std::domain_error("dense_bfgs_oracle: nonpositive update denominator");
    B -= (Bs * Bs.transpose()) / sBs;
    B += (shifted.y_tilde * shifted.y_tilde.transpose()) / sy;
  }
  return B;
}

} // namespace regulus
