#pragma once

#include "regulus/core.hpp"

#include <algorithm>
#include <cstddef>
#include <deque>

namespace regulus {

/// One displacement / gradient-difference pair with its inner products cached.
/// The raw y is stored; any mu-shift is applied on demand.
template <typename Scalar>
struct CurvaturePair {
  Vector<Scalar> s;
  Vector<Scalar> y;
  Scalar sy{};
  Scalar ss{};
  Scalar yy{};
};

/// Bounded FIFO of the most recent pairs, oldest first.
template <typename Scalar>
class PairHistory {
public:
  using Pair = CurvaturePair<Scalar>;

  explicit PairHistory(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0)
      throw std::invalid_argument("PairHistory: capacity must be positive");
  }

  /// Returns false (history unchanged) when s is zero or either vector has
  /// a non-finite entry.
  bool push(const Vector<Scalar> &s, const Vector<Scalar> &y) {
    if (s.size() != y.size())
      throw std::invalid_argument("PairHistory::push: s and y differ in length");
    if (!pairs_.empty() && s.size() != pairs_.front().s.size())
      throw std::invalid_argument("PairHistory::push: dimension changed");
    if (!all_finite(s) || !all_finite(y))
      return false;
    Pair p{s, y, s.dot(y), s.squaredNorm(), y.squaredNorm()};
    if (!(p.ss > Scalar(0)) || !std::isfinite(p.sy) || !std::isfinite(p.ss) ||
        !std::isfinite(p.yy))
      return false;
    if (pairs_.size() == capacity_)
      pairs_.pop_front();
    pairs_.push_back(std::move(p));
    return true;
  }

  void clear() { pairs_.clear(); }

  std::size_t size() const noexcept { return pairs_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  bool empty() const noexcept { return pairs_.empty(); }

  const Pair &operator[](std::size_t i) const { return pairs_[i]; }
  const Pair &newest() const { return pairs_.back(); }
  const Pair &oldest() const { return pairs_.front(); }

  auto begin() const { return pairs_.begin(); }
  auto end() const { return pairs_.end(); }

private:
  std::size_t capacity_;
  std::deque<Pair> pairs_;
};

template <typename Scalar>
bool push_pair(PairHistory<Scalar> &history, const Vector<Scalar> &s, const Vector<Scalar> &y) {
  return history.push(s, y);
}

template <typename Scalar>
struct ShiftedCurvature {
  Vector<Scalar> y_tilde;
  Scalar s_dot_y_tilde{};
};

/// Coefficient c with y~ = y + c*s, i.e. max{0, -s'y/|s|^2} + mu.
template <typename Scalar>
Scalar shift_coefficient(const CurvaturePair<Scalar> &pair, Scalar mu) {
  return std::max(Scalar(0), -pair.sy / pair.ss) + mu;
}

/// s'y~ = max{0, s'y} + mu*|s|^2, computed from the cached products.
template <typename Scalar>
Scalar shifted_inner(const CurvaturePair<Scalar> &pair, Scalar mu) {
  return std::max(Scalar(0), pair.sy) + mu * pair.ss;
}

/// y~(mu) = y + (max{0, -s'y/|s|^2} + mu) s.  Reduces to y + mu*s when s'y >= 0.
template <typename Scalar>
ShiftedCurvature<Scalar> shifted_curvature(const CurvaturePair<Scalar> &pair, Scalar mu) {
  if (mu < Scalar(0))
    throw std::invalid_argument("shifted_curvature: mu must be nonnegative");
  ShiftedCurvature<Scalar> out;
  out.y_tilde = pair.y + shift_coefficient(pair, mu) * pair.s;
  out.s_dot_y_tilde = shifted_inner(pair, mu);
  return out;
}

} // namespace regulus
