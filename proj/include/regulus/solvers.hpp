#pragma once

#include "regulus/core.hpp"
#include "regulus/curvature.hpp"
#include "regulus/direction.hpp"
#include "regulus/linesearch.hpp"
#include "regulus/step_control.hpp"

#include <chrono>
#include <limits>
#include <string>
#include <vector>

namespace regulus {

/// One outer iteration as seen by the driver.
///
/// `alpha` is the multiplier of d in x_{k+1} = x_k + alpha*d: 1 for a plain
/// regularized step, 1 + alpha_ls when the extension search succeeded, the
/// Wolfe step for baseline L-BFGS. `ratio` is NaN for baseline L-BFGS.
template <typename Scalar>
struct TraceRecord {
  long k = 0;
  Scalar mu{};
  Scalar ratio = std::numeric_limits<Scalar>::quiet_NaN();
  Scalar gnorm{};
  Scalar alpha{};
  std::int64_t nf = 0;

  Scalar f{};          // f(x_k)
  Scalar f_trial{};    // f(x_k + d), the value the ratio test saw
  Scalar f_next{};     // f(x_{k+1})
  Scalar reference{};  // ratio numerator reference
  Scalar model_red{};
  long inner_iters = 0;
  bool ls_fired = false;
  bool ls_failed = false;
};

template <typename Scalar>
struct RunOptions {
  std::vector<TraceRecord<Scalar>> *trace = nullptr;
  Vector<Scalar> *final_point = nullptr;
  /// Use f(x_k) as the ratio reference, bypassing the nonmonotone window.
  bool monotone_ratio = false;
  /// Never fire the Wolfe extension in RL-BFGS-SW.
  bool disable_wolfe_trigger = false;
};

template <typename Scalar>
struct IterateState {
  Vector<Scalar> x;
  Scalar f{};
  Vector<Scalar> g;
  Scalar mu{};
  PairHistory<Scalar> history;
  ScalingState<Scalar> scaling;
  FWindow<Scalar> fwindow;
  long k = 0;

  explicit IterateState(const SolverConfig &config)
      : mu(Scalar(config.mu0)), history(static_cast<std::size_t>(config.memory)),
        fwindow(config.nonmonotone) {}
};

template <typename Scalar>
struct AcceptedStep {
  Vector<Scalar> d;
  Scalar mu_used{};
  Scalar f_trial{};
  Scalar ratio{};
  Scalar model_red{};
  Scalar reference{};
  long inner_iters = 0;
};

namespace detail {

inline void check_budget(const EvalCounter &counters, const SolverConfig &config) {
  if (counters.n_f > config.max_fevals)
    throw SolverError(Status::EvalBudgetExceeded, "function evaluation budget exceeded");
}

/// Objective value for a trial point. Non-finite values count as +inf so the
/// ratio test rejects them instead of aborting the run.
template <typename Scalar>
Scalar trial_value(const Objective<Scalar> &fn, const Vector<Scalar> &x, EvalCounter &counters) {
  const Scalar v = fn.value(x);
  ++counters.n_f;
  return std::isfinite(v) ? v : std::numeric_limits<Scalar>::infinity();
}

template <typename Scalar>
Vector<Scalar> gradient_at(const Objective<Scalar> &fn, const Vector<Scalar> &x,
                           EvalCounter &counters) {
  return evaluate(fn, x, counters, Request::Gradient).gradient;
}

/// Line probe along base + alpha*dir that keeps the gradient of the last
/// evaluated point for reuse by the caller.
template <typename Scalar>
struct RayProbe {
  const Objective<Scalar> &fn;
  const Vector<Scalar> &base;
  const Vector<Scalar> &dir;
  EvalCounter &counters;
  const SolverConfig &config;

  RayProbe(const Objective<Scalar> &f, const Vector<Scalar> &b, const Vector<Scalar> &d,
           EvalCounter &c, const SolverConfig &cfg)
      : fn(f), base(b), dir(d), counters(c), config(cfg) {}

  Scalar last_alpha = std::numeric_limits<Scalar>::quiet_NaN();
  Vector<Scalar> last_x;
  Vector<Scalar> last_g;

  LinePoint<Scalar> operator()(Scalar alpha) {
    last_alpha = alpha;
    last_x = base + alpha * dir;
    const Scalar phi = trial_value(fn, last_x, counters);
    check_budget(counters, config);
    last_g.resize(last_x.size());
    fn.gradient(last_x, last_g);
    ++counters.n_g;
    Scalar dphi = last_g.dot(dir);
    if (!std::isfinite(dphi))
      dphi = std::numeric_limits<Scalar>::quiet_NaN();
    return {alpha, phi, dphi};
  }
};

/// Stores the accepted pair and refreshes gamma. A pair with y = 0 keeps
/// the previous scale since gamma would be undefined.
template <typename Scalar>
void record_pair(IterateState<Scalar> &state, const Vector<Scalar> &s, const Vector<Scalar> &y,
                 const SolverConfig &config) {
  if (!push_pair(state.history, s, y))
    return;
  if (state.history.newest().yy > Scalar(0))
    state.scaling = gamma_scale(&state.history.newest(), Scalar(config.alpha_floor));
}

template <typename Scalar>
IterateState<Scalar> initial_state(const Objective<Scalar> &fn, const Vector<Scalar> &x0,
                                   const SolverConfig &config, EvalCounter &counters) {
  if (x0.size() != fn.dimension())
    throw std::invalid_argument("solver: x0 dimension does not match objective");
  if (!all_finite(x0))
    throw std::invalid_argument("solver: x0 has non-finite entries");
  config.validate();
  IterateState<Scalar> state(config);
  state.x = x0;
  auto e = evaluate(fn, x0, counters, Request::Both);
  state.f = e.value;
  state.g = std::move(e.gradient);
  state.fwindow.push(state.f);
  return state;
}

} // namespace detail

/// Inner loop of the regularized method: grow mu by gamma2 until the
/// (nonmonotone) ratio reaches eta1. Throws RegularizationOverflow once mu
/// passes mu_max and EvalBudgetExceeded as soon as n_f passes the budget.
template <typename Scalar>
AcceptedStep<Scalar> accept_step_rlbfgs(const IterateState<Scalar> &state,
                                        const SolverConfig &config, const Objective<Scalar> &fn,
                                        EvalCounter &counters, bool monotone_ratio = false) {
  const Scalar reference = monotone_ratio
                               ? state.f
                               : nonmonotone_reference(state.fwindow, state.k, config.nonmonotone);
  AcceptedStep<Scalar> step;
  step.reference = reference;
  Scalar mu = state.mu;
  for (;;) {
    step.d = two_loop_direction(state.history, state.g, mu, state.scaling);
    step.model_red = model_reduction(state.g, step.d);
    if (!(step.model_red > Scalar(0)))
      throw SolverError(Status::NumericalBreakdown, "zero model reduction at nonzero gradient");
    const Vector<Scalar> trial = state.x + step.d;
    step.f_trial = detail::trial_value(fn, trial, counters);
    detail::check_budget(counters, config);
    step.ratio = acceptance_ratio(reference, step.f_trial, step.model_red);
    if (step.ratio >= Scalar(config.eta1))
      break;
    mu *= Scalar(config.gamma2);
    ++step.inner_iters;
    if (mu > Scalar(config.mu_max))
      throw SolverError(Status::RegularizationOverflow, "regularization parameter overflow");
  }
  step.mu_used = mu;
  return step;
}

template <typename Scalar>
Scalar update_mu(Scalar mu_used, Scalar ratio, const SolverConfig &config) {
  if (ratio >= Scalar(config.eta2))
    return std::max(Scalar(config.mu_min), Scalar(config.gamma1) * mu_used);
  return mu_used;
}

namespace detail {

template <typename Scalar, typename Step>
RunReport drive(const Objective<Scalar> &fn, const Vector<Scalar> &x0, const SolverConfig &config,
                const RunOptions<Scalar> &options, std::string name, Step &&step) {
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.solver_name = std::move(name);
  EvalCounter counters;
  std::optional<IterateState<Scalar>> state;
  try {
    state.emplace(initial_state(fn, x0, config, counters));
    for (;;) {
      const Termination t = check_termination(state->g, state->x, counters, config);
      if (t == Termination::Converged) {
        report.status = Status::Converged;
        break;
      }
      if (t == Termination::EvalBudgetExceeded) {
        report.status = Status::EvalBudgetExceeded;
        break;
      }
      step(*state, counters, report);
    }
  } catch (const SolverError &e) {
    report.status = e.status();
  }
  report.counters = counters;
  if (state) {
    report.iterations = state->k;
    report.final_f = static_cast<double>(state->f);
    report.final_residual = state->g.size() == state->x.size()
                                ? static_cast<double>(scaled_residual(state->g, state->x))
                                : std::numeric_limits<double>::quiet_NaN();
    if (options.final_point)
      *options.final_point = state->x;
  }
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

template <typename Scalar>
RunReport solve_regularized(const Objective<Scalar> &fn, const Vector<Scalar> &x0,
                            const SolverConfig &config, const RunOptions<Scalar> &options,
                            bool wolfe_extension) {
  auto step = [&](IterateState<Scalar> &state, EvalCounter &counters, RunReport &report) {
    TraceRecord<Scalar> rec;
    rec.k = state.k;
    rec.gnorm = state.g.norm();
    rec.f = state.f;

    const AcceptedStep<Scalar> acc =
        accept_step_rlbfgs(state, config, fn, counters, options.monotone_ratio);
    report.inner_iterations += acc.inner_iters;
    const Scalar mu_next = update_mu(acc.mu_used, acc.ratio, config);

    Vector<Scalar> x_next = state.x + acc.d;
    Scalar f_next = acc.f_trial;
    Vector<Scalar> g_next = gradient_at(fn, x_next, counters);
    rec.alpha = Scalar(1);

    const Scalar slope0 = acc.d.dot(state.g);
    const Scalar slope1 = acc.d.dot(g_next);
    if (wolfe_extension && !options.disable_wolfe_trigger &&
        slope1 < Scalar(config.c2) * slope0 && acc.mu_used == Scalar(config.mu_min)) {
      rec.ls_fired = true;
      RayProbe<Scalar> ray(fn, x_next, acc.d, counters, config);
      LineProbe<Scalar> probe{f_next, slope1, std::ref(ray)};
      const auto found = strong_wolfe_search(probe, Scalar(config.c1), Scalar(config.c2),
                                             Scalar(1), config.max_ls_iters);
      if (found) {
        if (ray.last_alpha != found->alpha)
          throw std::logic_error("line search returned a point other than its last probe");
        x_next = ray.last_x;
        f_next = found->phi;
        g_next = ray.last_g;
        rec.alpha = Scalar(1) + found->alpha;
      } else {
        rec.ls_failed = true;
      }
    }

    const Vector<Scalar> s = x_next - state.x;
    const Vector<Scalar> y = g_next - state.g;
    record_pair(state, s, y, config);

    state.x = std::move(x_next);
    state.f = f_next;
    state.g = std::move(g_next);
    state.mu = mu_next;
    state.fwindow.push(state.f);
    ++state.k;

    if (options.trace) {
      rec.mu = acc.mu_used;
      rec.ratio = acc.ratio;
      rec.nf = counters.n_f;
      rec.f_trial = acc.f_trial;
      rec.f_next = state.f;
      rec.reference = acc.reference;
      rec.model_red = acc.model_red;
      rec.inner_iters = acc.inner_iters;
      options.trace->push_back(rec);
    }
  };
  return drive(fn, x0, config, options, wolfe_extension ? "rlbfgs-sw" : "rlbfgs", step);
}

} // namespace detail

/// Regularized L-BFGS: no line search; mu is steered by the ratio test.
template <typename Scalar>
RunReport solve_rlbfgs(const Objective<Scalar> &fn, const Vector<Scalar> &x0,
                       const SolverConfig &config, const RunOptions<Scalar> &options = {}) {
  return detail::solve_regularized(fn, x0, config, options, false);
}

/// Regularized L-BFGS plus a strong Wolfe extension of the accepted step
/// whenever it was computed at mu_min and still leaves a steep slope.
template <typename Scalar>
RunReport solve_rlbfgs_sw(const Objective<Scalar> &fn, const Vector<Scalar> &x0,
                          const SolverConfig &config, const RunOptions<Scalar> &options = {}) {
  return detail::solve_regularized(fn, x0, config, options, true);
}

/// Baseline L-BFGS with a strong Wolfe line search started at alpha = 1.
template <typename Scalar>
RunReport solve_lbfgs(const Objective<Scalar> &fn, const Vector<Scalar> &x0,
                      const SolverConfig &config, const RunOptions<Scalar> &options = {}) {
  auto step = [&](IterateState<Scalar> &state, EvalCounter &counters, RunReport &) {
    TraceRecord<Scalar> rec;
    rec.k = state.k;
    rec.gnorm = state.g.norm();
    rec.f = state.f;

    const Vector<Scalar> d = two_loop_direction(state.history, state.g, Scalar(0), state.scaling);
    const Scalar slope = state.g.dot(d);
    if (!(slope < Scalar(0)))
      throw SolverError(Status::NumericalBreakdown, "L-BFGS direction is not a descent direction");

    detail::RayProbe<Scalar> ray(fn, state.x, d, counters, config);
    LineProbe<Scalar> probe{state.f, slope, std::ref(ray)};
    const auto found = strong_wolfe_search(probe, Scalar(config.c1), Scalar(config.c2), Scalar(1),
                                           config.max_ls_iters);
    if (!found)
      throw SolverError(Status::LineSearchFailure, "strong Wolfe line search failed");
    if (ray.last_alpha != found->alpha)
      throw std::logic_error("line search returned a point other than its last probe");

    const Vector<Scalar> s = ray.last_x - state.x;
    const Vector<Scalar> y = ray.last_g - state.g;
    // mu = 0 has no curvature correction, so only pairs with s'y > 0 are kept.
    if (s.dot(y) > Scalar(0))
      detail::record_pair(state, s, y, config);

    state.x = ray.last_x;
    state.f = found->phi;
    state.g = ray.last_g;
    state.fwindow.push(state.f);
    ++state.k;

    if (options.trace) {
      rec.alpha = found->alpha;
      rec.nf = counters.n_f;
      rec.f_trial = found->phi;
      rec.f_next = found->phi;
      options.trace->push_back(rec);
    }
  };
  return detail::drive(fn, x0, config, options, "lbfgs", step);
}

} // namespace regulus
