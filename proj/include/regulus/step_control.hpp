#pragma once

#include "regulus/core.hpp"

#include <algorithm>
#include <deque>

namespace regulus {

/// Objective values of the most recent accepted iterates, newest last.
/// Holds at most M+1 values.
template <typename Scalar>
class FWindow {
public:
  explicit FWindow(int nonmonotone) : capacity_(static_cast<std::size_t>(nonmonotone) + 1) {
    if (nonmonotone < 0)
      throw std::invalid_argument("FWindow: M must be nonnegative");
  }

  void push(Scalar f) {
    if (values_.size() == capacity_)
      values_.pop_front();
    values_.push_back(f);
  }

  std::size_t size() const noexcept { return values_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  bool empty() const noexcept { return values_.empty(); }
  Scalar newest() const { return values_.back(); }
  Scalar max() const { return *std::max_element(values_.begin(), values_.end()); }
  Scalar operator[](std::size_t i) const { return values_[i]; }

private:
  std::size_t capacity_;
  std::deque<Scalar> values_;
};

/// f(x_k) - q_k(d) = -g'd / 2, using d'H^{-1}d = -d'g so H^{-1} is never formed.
/// Returns 0 for g = 0; any other nonpositive result raises NumericalBreakdown.
template <typename Scalar>
Scalar model_reduction(const Vector<Scalar> &g, const Vector<Scalar> &d) {
  const Scalar red = Scalar(-0.5) * g.dot(d);
  if (red > Scalar(0))
    return red;
  if (red == Scalar(0) && g.isZero(Scalar(0)))
    return red;
  throw SolverError(Status::NumericalBreakdown, "nonpositive model reduction");
}

template <typename Scalar>
Scalar acceptance_ratio(Scalar f_ref, Scalar f_trial, Scalar model_red) {
  if (!(model_red > Scalar(0)))
    throw std::invalid_argument("acceptance_ratio: model reduction must be positive");
  return (f_ref - f_trial) / model_red;
}

/// Numerator reference of the nonmonotone ratio: the largest of the last
/// min{k, M}+1 accepted values. While k < M (and always for M = 0) it is f(x_k).
template <typename Scalar>
Scalar nonmonotone_reference(const FWindow<Scalar> &window, long k, int nonmonotone) {
  if (window.empty())
    throw std::invalid_argument("nonmonotone_reference: empty window");
  if (nonmonotone == 0 || k < nonmonotone)
    return window.newest();
  return window.max();
}

} // namespace regulus
