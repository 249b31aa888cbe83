#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace regulus {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

enum class Status {
  Converged,
  EvalBudgetExceeded,
  RegularizationOverflow,
  LineSearchFailure,
  NumericalBreakdown,
};

inline std::string_view to_string(Status s) {
  switch (s) {
  case Status::Converged: return "Converged";
  case Status::EvalBudgetExceeded: return "EvalBudgetExceeded";
  case Status::RegularizationOverflow: return "RegularizationOverflow";
  case Status::LineSearchFailure: return "LineSearchFailure";
  case Status::NumericalBreakdown: return "NumericalBreakdown";
  }
  return "Unknown";
}

/// Parses the names produced by to_string(Status). Throws std::invalid_argument otherwise.
Status status_from_string(std::string_view name);

/// Raised inside a run; the driver turns it into RunReport::status.
class SolverError : public std::runtime_error {
public:
  SolverError(Status status, const std::string &what)
      : std::runtime_error(what), status_(status) {}
  Status status() const noexcept { return status_; }

private:
  Status status_;
};

/// Smooth objective f: R^n -> R with an analytic gradient.
/// Implementations must be deterministic and safe to call concurrently.
template <typename Scalar>
class Objective {
public:
  using VectorType = Vector<Scalar>;

  virtual ~Objective() = default;
  virtual Eigen::Index dimension() const = 0;
  virtual Scalar value(const VectorType &x) const = 0;
  virtual void gradient(const VectorType &x, VectorType &g) const = 0;
};

/// Objective assembled from two callables.
template <typename Scalar>
class FunctionObjective final : public Objective<Scalar> {
public:
  using VectorType = Vector<Scalar>;
  using ValueFn = std::function<Scalar(const VectorType &)>;
  using GradientFn = std::function<void(const VectorType &, VectorType &)>;

  FunctionObjective(Eigen::Index n, ValueFn value, GradientFn gradient)
      : n_(n), value_(std::move(value)), gradient_(std::move(gradient)) {}

  Eigen::Index dimension() const override { return n_; }
  Scalar value(const VectorType &x) const override { return value_(x); }
  void gradient(const VectorType &x, VectorType &g) const override { gradient_(x, g); }

private:
  Eigen::Index n_;
  ValueFn value_;
  GradientFn gradient_;
};

struct EvalCounter {
  std::int64_t n_f = 0;
  std::int64_t n_g = 0;

  friend bool operator==(const EvalCounter &, const EvalCounter &) = default;
};

enum class Request { Value, Gradient, Both };

template <typename Scalar>
struct Evaluation {
  Scalar value = std::numeric_limits<Scalar>::quiet_NaN();
  Vector<Scalar> gradient;
};

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived> &v) {
  return v.allFinite();
}

/// Evaluates f and/or its gradient, bumping the matching counters once each.
/// Non-finite results raise NumericalBreakdown.
template <typename Scalar>
Evaluation<Scalar> evaluate(const Objective<Scalar> &fn, const Vector<Scalar> &x,
                            EvalCounter &counters, Request what) {
  if (x.size() != fn.dimension())
    throw std::invalid_argument("evaluate: point dimension does not match objective");
  Evaluation<Scalar> out;
  if (what != Request::Gradient) {
    out.value = fn.value(x);
    ++counters.n_f;
    if (!std::isfinite(out.value))
      throw SolverError(Status::NumericalBreakdown, "non-finite objective value");
  }
  if (what != Request::Value) {
    out.gradient.resize(x.size());
    fn.gradient(x, out.gradient);
    ++counters.n_g;
    if (!all_finite(out.gradient))
      throw SolverError(Status::NumericalBreakdown, "non-finite gradient");
  }
  return out;
}

struct SolverConfig {
  double mu0 = 1.0;
  double mu_min = 1e-3;
  double gamma1 = 0.1;
  double gamma2 = 10.0;
  double eta1 = 0.01;
  double eta2 = 0.9;
  int memory = 5;      // m
  int nonmonotone = 10; // M
  double c1 = 1e-4;
  double c2 = 0.9;
  double grad_tol = 1e-5;
  std::int64_t max_fevals = 10000;
  double mu_max = 1e15;
  double alpha_floor = 1e-8;
  int max_ls_iters = 20;

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;
};

/// Reads `key = value` lines (blank lines and `#` comments allowed).
/// Every key is optional; unknown keys are an error.
SolverConfig parse_config(std::string_view text, SolverConfig base = {});
SolverConfig load_config(const std::string &path, SolverConfig base = {});
/// Applies a single `key=value` override.
void set_config_value(SolverConfig &config, std::string_view key, std::string_view value);

struct RunReport {
  Status status = Status::NumericalBreakdown;
  std::int64_t iterations = 0;
  std::int64_t inner_iterations = 0;
  EvalCounter counters;
  double final_f = 0.0;
  double final_residual = 0.0;
  double wall_time = 0.0;
  std::string solver_name;
};

enum class Termination { Continue, Converged, EvalBudgetExceeded };

/// ||g|| / max(1, ||x||), the scaled residual used by the stopping rule.
template <typename Scalar>
Scalar scaled_residual(const Vector<Scalar> &g, const Vector<Scalar> &x) {
  using std::max;
  return g.norm() / max(Scalar(1), x.norm());
}

template <typename Scalar>
Termination check_termination(const Vector<Scalar> &g, const Vector<Scalar> &x,
                              const EvalCounter &counters, const SolverConfig &config) {
  if (g.size() != x.size())
    throw std::invalid_argument("check_termination: gradient and point differ in length");
  if (!all_finite(g))
    throw SolverError(Status::NumericalBreakdown, "non-finite gradient");
  if (scaled_residual(g, x) < Scalar(config.grad_tol))
    return Termination::Converged;
  if (counters.n_f > config.max_fevals)
    return Termination::EvalBudgetExceeded;
  return Termination::Continue;
}

} // namespace regulus
