#pragma once

#include "regulus/core.hpp"
#include "regulus/problems.hpp"
#include "regulus/solvers.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace regulus {

enum class SolverKind { LBFGS, RLBFGS, RLBFGS_SW };

std::string_view to_string(SolverKind kind);
/// Accepts "lbfgs", "rlbfgs" and "rlbfgs-sw".
SolverKind parse_solver(std::string_view name);

RunReport run_solver(SolverKind kind, const ProblemDef &problem, const SolverConfig &config,
                     const RunOptions<double> &options = {});

struct RunRecord {
  std::string problem;
  std::string solver;
  Status status = Status::NumericalBreakdown;
  std::int64_t n_f = 0;
  std::int64_t n_g = 0;
  std::int64_t iterations = 0;
  double wall_time = 0.0;
  double final_residual = 0.0;
};

RunRecord make_record(const std::string &problem, const RunReport &report);

/// Runs every (problem, solver) cell with fresh state. `jobs` > 1 spreads
/// cells over worker threads. Records come back ordered by problem name,
/// then solver name.
std::vector<RunRecord> run_batch(const std::vector<ProblemDef> &problems,
                                 const std::vector<SolverKind> &solvers,
                                 const SolverConfig &config, int jobs = 1);

void write_records_csv(std::ostream &out, const std::vector<RunRecord> &records);
/// Throws std::invalid_argument on a malformed file.
std::vector<RunRecord> read_records_csv(std::istream &in);

enum class ProfileMetric { Evaluations, WallTime };

struct ProfileCurve {
  std::string solver;
  std::vector<std::pair<double, double>> points; // (tau, F(tau))
};

class EmptyIntersection : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::vector<double> default_tau_grid();

/// Dolan-More distribution functions over the problems every solver solved.
/// With `union_of_solved` the problem set is those solved by at least one
/// solver and failures count as t = inf.
std::vector<ProfileCurve> performance_profile(const std::vector<RunRecord> &records,
                                              ProfileMetric metric,
                                              const std::vector<double> &tau_grid,
                                              bool union_of_solved = false);

void write_profile_csv(std::ostream &out, const std::vector<ProfileCurve> &curves);

/// {"k":..,"mu":..,"ratio":..,"gnorm":..,"alpha":..,"nf":..}; NaN becomes null.
std::string trace_json_line(const TraceRecord<double> &record);
std::string report_json(const RunReport &report, const std::string &problem);

} // namespace regulus
