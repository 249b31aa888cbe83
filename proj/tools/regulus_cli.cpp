// regulus: run the regularized L-BFGS family on bundled problems, batch
// benchmarks into CSV, and turn records into performance profiles.

#include "regulus/harness.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

regulus::SolverConfig build_config(const std::string &config_path,
                                   const std::vector<std::string> &params) {
  regulus::SolverConfig config;
  if (!config_path.empty())
    config = regulus::load_config(config_path);
  for (const auto &p : params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos)
      throw UsageError("--param expects key=value, got '" + p + "'");
    regulus::set_config_value(config, std::string_view(p).substr(0, eq),
                              std::string_view(p).substr(eq + 1));
  }
  config.validate();
  return config;
}

std::vector<std::string> split_list(const std::string &s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty())
      out.push_back(item);
  return out;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Regularized L-BFGS solvers and benchmark harness", "regulus"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> params;
  auto add_config_flags = [&](CLI::App *sub) {
    sub->add_option("--config", config_path, "key = value parameter file");
    sub->add_option("-p,--param", params, "parameter override key=value (repeatable)");
  };

  auto *solve = app.add_subcommand("solve", "Solve one problem and print a JSON report");
  std::string problem_spec, solver_name = "rlbfgs", trace_path;
  solve->add_option("problem", problem_spec, "problem name or name:n")->required();
  solve->add_option("--solver", solver_name, "lbfgs | rlbfgs | rlbfgs-sw");
  solve->add_option("--trace", trace_path, "write per-iteration JSON lines here");
  add_config_flags(solve);

  auto *bench = app.add_subcommand("bench", "Run a problem x solver batch into a CSV");
  std::string problem_list = "all", solver_list = "lbfgs,rlbfgs,rlbfgs-sw", out_path;
  int jobs = 1;
  bench->add_option("--problems", problem_list, "comma-separated problems, or 'all'");
  bench->add_option("--solvers", solver_list, "comma-separated solvers");
  bench->add_option("--out", out_path, "records CSV")->required();
  bench->add_option("--jobs", jobs, "worker threads (REGULUS_JOBS overrides)");
  add_config_flags(bench);

  auto *profile = app.add_subcommand("profile", "Performance profile from a records CSV");
  std::string in_path, metric_name = "nf", profile_out, tau_list;
  bool use_union = false;
  profile->add_option("--in", in_path, "records CSV")->required();
  profile->add_option("--metric", metric_name, "nf | time");
  profile->add_option("--out", profile_out, "profile CSV")->required();
  profile->add_option("--tau", tau_list, "comma-separated tau grid");
  profile->add_flag("--union", use_union,
                    "profile over problems solved by any solver (failures count as inf)");

  auto *list = app.add_subcommand("list", "List problem families and the benchmark suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*solve) {
      const auto kind = regulus::parse_solver(solver_name);
      const auto problem = regulus::make_problem(problem_spec);
      const auto config = build_config(config_path, params);
      std::vector<regulus::TraceRecord<double>> trace;
      regulus::RunOptions<double> options;
      if (!trace_path.empty())
        options.trace = &trace;
      const auto report = regulus::run_solver(kind, problem, config, options);
      if (!trace_path.empty()) {
        std::ofstream out(trace_path);
        if (!out)
          throw std::runtime_error("cannot write " + trace_path);
        for (const auto &r : trace)
          out << regulus::trace_json_line(r) << '\n';
      }
      std::cout << regulus::report_json(report, problem.name) << '\n';
      return report.status == regulus::Status::Converged ? kOk : kFailure;
    }

    if (*bench) {
      std::vector<regulus::ProblemDef> problems;
      if (problem_list == "all")
        problems = regulus::registry();
      else
        for (const auto &p : split_list(problem_list))
          problems.push_back(regulus::make_problem(p));
      std::vector<regulus::SolverKind> solvers;
      for (const auto &s : split_list(solver_list))
        solvers.push_back(regulus::parse_solver(s));
      if (problems.empty() || solvers.empty())
        throw UsageError("bench needs at least one problem and one solver");
      if (const char *env = std::getenv("REGULUS_JOBS"))
        jobs = std::stoi(env);
      const auto config = build_config(config_path, params);
      const auto records = regulus::run_batch(problems, solvers, config, jobs);
      std::ofstream out(out_path);
      if (!out)
        throw std::runtime_error("cannot write " + out_path);
      regulus::write_records_csv(out, records);
      return kOk;
    }

    if (*profile) {
      regulus::ProfileMetric metric;
      if (metric_name == "nf")
        metric = regulus::ProfileMetric::Evaluations;
      else if (metric_name == "time")
        metric = regulus::ProfileMetric::WallTime;
      else
        throw UsageError("unknown metric '" + metric_name + "'");
      std::vector<double> grid = regulus::default_tau_grid();
      if (!tau_list.empty()) {
        grid.clear();
        for (const auto &t : split_list(tau_list))
          grid.push_back(std::stod(t));
      }
      std::ifstream in(in_path);
      if (!in)
        throw std::runtime_error("cannot read " + in_path);
      const auto records = regulus::read_records_csv(in);
      const auto curves = regulus::performance_profile(records, metric, grid, use_union);
      std::ofstream out(profile_out);
      if (!out)
        throw std::runtime_error("cannot write " + profile_out);
      regulus::write_profile_csv(out, curves);
      return kOk;
    }

    if (*list) {
      std::cout << "families:";
      for (const auto &f : regulus::problem_families())
        std::cout << ' ' << f;
      std::cout << "\nsuite:";
      for (const auto &p : regulus::registry())
        std::cout << ' ' << p.name;
      std::cout << '\n';
      return kOk;
    }
  } catch (const regulus::EmptyIntersection &e) {
    std::cerr << "EmptyIntersection: " << e.what() << '\n';
    return kFailure;
  } catch (const UsageError &e) {
    std::cerr << "usage error: " << e.what() << '\n' << app.help();
    return kUsage;
  } catch (const std::invalid_argument &e) {
    std::cerr << "usage error: " << e.what() << '\n' << app.help();
    return kUsage;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}
