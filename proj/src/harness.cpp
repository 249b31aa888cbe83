#include "regulus/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

namespace regulus {

namespace {

constexpr std::string_view kCsvHeader =
    "problem,solver,status,n_f,n_g,iterations,wall_time,final_residual";

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

template <typename T>
T parse_number(std::string_view field, std::size_t line) {
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw std::invalid_argument("records line " + std::to_string(line) + ": bad number '" +
                                std::string(field) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  for (;;) {
    const auto pos = line.find(sep);
    out.push_back(line.substr(0, pos));
    if (pos == std::string_view::npos)
      break;
    line = line.substr(pos + 1);
  }
  return out;
}

nlohmann::json number_or_null(double v) {
  if (std::isfinite(v))
    return v;
  return nullptr;
}

} // namespace

std::string_view to_string(SolverKind kind) {
  switch (kind) {
  case SolverKind::LBFGS: return "lbfgs";
  case SolverKind::RLBFGS: return "rlbfgs";
  case SolverKind::RLBFGS_SW: return "rlbfgs-sw";
  }
  return "unknown";
}

SolverKind parse_solver(std::string_view name) {
  for (SolverKind k : {SolverKind::LBFGS, SolverKind::RLBFGS, SolverKind::RLBFGS_SW})
    if (to_string(k) == name)
      return k;
  throw std::invalid_argument("unknown solver '" + std::string(name) + "'");
}

RunReport run_solver(SolverKind kind, const ProblemDef &problem, const SolverConfig &config,
                     const RunOptions<double> &options) {
  switch (kind) {
  case SolverKind::LBFGS: return solve_lbfgs(*problem.objective, problem.x0, config, options);
  case SolverKind::RLBFGS: return solve_rlbfgs(*problem.objective, problem.x0, config, options);
  case SolverKind::RLBFGS_SW:
    return solve_rlbfgs_sw(*problem.objective, problem.x0, config, options);
  }
  throw std::invalid_argument("run_solver: bad solver kind");
}

RunRecord make_record(const std::string &problem, const RunReport &report) {
  return {problem,
          report.solver_name,
          report.status,
          report.counters.n_f,
          report.counters.n_g,
          report.iterations,
          report.wall_time,
          report.final_residual};
}

std::vector<RunRecord> run_batch(const std::vector<ProblemDef> &problems,
                                 const std::vector<SolverKind> &solvers,
                                 const SolverConfig &config, int jobs) {
  if (problems.empty() || solvers.empty())
    throw std::invalid_argument("run_batch: empty problem or solver selection");
  config.validate();

  struct Cell {
    const ProblemDef *problem;
    SolverKind solver;
  };
  std::vector<Cell> cells;
  for (const auto &p : problems)
    for (SolverKind s : solvers)
      cells.push_back({&p, s});
  std::sort(cells.begin(), cells.end(), [](const Cell &a, const Cell &b) {
    if (a.problem->name != b.problem->name)
      return a.problem->name < b.problem->name;
    return to_string(a.solver) < to_string(b.solver);
  });

  std::vector<RunRecord> records(cells.size());
  auto run_cell = [&](std::size_t i) {
    const Cell &c = cells[i];
    RunReport report;
    try {
      report = run_solver(c.solver, *c.problem, config);
    } catch (const std::exception &) {
      // precondition failures (bad x0, bad dimension) still yield a record
      report.solver_name = std::string(to_string(c.solver));
      report.status = Status::NumericalBreakdown;
      report.final_residual = std::numeric_limits<double>::quiet_NaN();
    }
    records[i] = make_record(c.problem->name, report);
  };

  const std::size_t workers =
      std::min<std::size_t>(cells.size(), static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      run_cell(i);
    return records;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < cells.size(); i = next++)
        run_cell(i);
    });
  for (auto &t : pool)
    t.join();
  return records;
}

void write_records_csv(std::ostream &out, const std::vector<RunRecord> &records) {
  out << kCsvHeader << '\n';
  for (const auto &r : records)
    out << r.problem << ',' << r.solver << ',' << to_string(r.status) << ',' << r.n_f << ','
        << r.n_g << ',' << r.iterations << ',' << format_double(r.wall_time) << ','
        << format_double(r.final_residual) << '\n';
}

std::vector<RunRecord> read_records_csv(std::istream &in) {
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("records: empty file");
  if (!line.empty() && line.back() == '\r')
    line.pop_back();
  if (line != kCsvHeader)
    throw std::invalid_argument("records: unexpected header '" + line + "'");
  std::vector<RunRecord> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    const auto f = split(line, ',');
    if (f.size() != 8)
      throw std::invalid_argument("records line " + std::to_string(lineno) +
                                  ": expected 8 fields");
    RunRecord r;
    r.problem = std::string(f[0]);
    r.solver = std::string(f[1]);
    r.status = status_from_string(f[2]);
    r.n_f = parse_number<std::int64_t>(f[3], lineno);
    r.n_g = parse_number<std::int64_t>(f[4], lineno);
    r.iterations = parse_number<std::int64_t>(f[5], lineno);
    r.wall_time = parse_number<double>(f[6], lineno);
    r.final_residual = parse_number<double>(f[7], lineno);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<double> default_tau_grid() { return {1, 1.25, 1.5, 2, 3, 5, 8, 13, 21}; }

std::vector<ProfileCurve> performance_profile(const std::vector<RunRecord> &records,
                                              ProfileMetric metric,
                                              const std::vector<double> &tau_grid,
                                              bool union_of_solved) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::set<std::string> solvers;
  std::map<std::string, std::map<std::string, double>> cost; // problem -> solver -> t
  for (const auto &r : records) {
    solvers.insert(r.solver);
    auto &row = cost[r.problem];
    if (row.count(r.solver))
      throw std::invalid_argument("performance_profile: duplicate record for " + r.problem +
                                  " / " + r.solver);
    const double t = metric == ProfileMetric::Evaluations ? static_cast<double>(r.n_f)
                                                          : r.wall_time;
    row[r.solver] = r.status == Status::Converged ? t : inf;
  }

  std::vector<std::pair<std::string, double>> kept; // problem, t*
  for (const auto &[problem, row] : cost) {
    std::size_t solved = 0;
    double best = inf;
    for (const auto &s : solvers) {
      const auto it = row.find(s);
      if (it != row.end() && it->second < inf) {
        ++solved;
        best = std::min(best, it->second);
      }
    }
    const bool keep = union_of_solved ? solved > 0 : solved == solvers.size();
    if (keep)
      kept.emplace_back(problem, best);
  }
  if (kept.empty())
    throw EmptyIntersection(union_of_solved ? "no problem was solved by any solver"
                                            : "no problem was solved by all solvers");

  std::vector<ProfileCurve> curves;
  const double total = static_cast<double>(kept.size());
  for (const auto &s : solvers) {
    ProfileCurve curve{s, {}};
    for (double tau : tau_grid) {
      std::size_t hits = 0;
      for (const auto &[problem, best] : kept) {
        const auto &row = cost.at(problem);
        const auto it = row.find(s);
        const double t = it == row.end() ? inf : it->second;
        if (t <= tau * best)
          ++hits;
      }
      curve.points.emplace_back(tau, static_cast<double>(hits) / total);
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

void write_profile_csv(std::ostream &out, const std::vector<ProfileCurve> &curves) {
  out << "solver,tau,F\n";
  for (const auto &c : curves)
    for (const auto &[tau, F] : c.points)
      out << c.solver << ',' << format_double(tau) << ',' << format_double(F) << '\n';
}

std::string trace_json_line(const TraceRecord<double> &r) {
  nlohmann::ordered_json j;
  j["k"] = r.k;
  j["mu"] = number_or_null(r.mu);
  j["ratio"] = number_or_null(r.ratio);
  j["gnorm"] = number_or_null(r.gnorm);
  j["alpha"] = number_or_null(r.alpha);
  j["nf"] = r.nf;
  if (r.ls_failed)
    j["ls_failed"] = true;
  return j.dump();
}

std::string report_json(const RunReport &report, const std::string &problem) {
  nlohmann::ordered_json j;
  j["problem"] = problem;
  j["solver"] = report.solver_name;
  j["status"] = std::string(to_string(report.status));
  j["iterations"] = report.iterations;
  j["inner_iterations"] = report.inner_iterations;
  j["n_f"] = report.counters.n_f;
  j["n_g"] = report.counters.n_g;
  j["final_f"] = number_or_null(report.final_f);
  j["final_residual"] = number_or_null(report.final_residual);
  j["wall_time"] = report.wall_time;
  return j.dump(2);
}

} // namespace regulus
