#pragma once

#include "regulus/core.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace regulus {

/// A bundled test problem with its standard starting point.
struct ProblemDef {
  std::string name;    // "family:n", e.g. "rosenbrock:1000"
  std::string family;
  Eigen::Index dimension = 0;
  Vector<double> x0;
  std::shared_ptr<const Objective<double>> objective;
  std::optional<double> f_star;
};

/// Families that make_problem understands, sorted.
std::vector<std::string> problem_families();

/// Builds a problem from "family" (default size) or "family:n".
/// Throws std::invalid_argument for unknown families or unsupported sizes.
ProblemDef make_problem(std::string_view spec);

/// The fixed benchmark suite.
std::vector<ProblemDef> registry();

/// Central differences (f(x + h e_i) - f(x - h e_i)) / 2h.
template <typename Scalar>
Vector<Scalar> finite_difference_gradient(const Objective<Scalar> &fn, const Vector<Scalar> &x,
                                          Scalar h) {
  if (!(h > Scalar(0)))
    throw std::invalid_argument("finite_difference_gradient: h must be positive");
  Vector<Scalar> g(x.size());
  Vector<Scalar> xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const Scalar xi = x[i];
    xp[i] = xi + h;
    const Scalar fp = fn.value(xp);
    xp[i] = xi - h;
    const Scalar fm = fn.value(xp);
    xp[i] = xi;
    g[i] = (fp - fm) / (Scalar(2) * h);
  }
  return g;
}

/// Same, with the step on coordinate i scaled to h * max(1, |x_i|).
template <typename Scalar>
Vector<Scalar> scaled_finite_difference_gradient(const Objective<Scalar> &fn,
                                                 const Vector<Scalar> &x, Scalar h) {
  Vector<Scalar> g(x.size());
  Vector<Scalar> xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const Scalar xi = x[i];
    const Scalar hi = h * std::max(Scalar(1), std::abs(xi));
    xp[i] = xi + hi;
    const Scalar fp = fn.value(xp);
    xp[i] = xi - hi;
    const Scalar fm = fn.value(xp);
    xp[i] = xi;
    // divide by the realized spacing rather than 2*hi
    g[i] = (fp - fm) / ((xi + hi) - (xi - hi));
  }
  return g;
}

} // namespace regulus
