#include "regulus/core.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace regulus {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double to_double(std::string_view key, std::string_view text) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw std::invalid_argument("config: bad real for '" + std::string(key) + "': " +
                                std::string(text));
  return v;
}

std::int64_t to_int(std::string_view key, std::string_view text) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    // allow 1e4-style integers
    const double d = to_double(key, text);
    if (d != static_cast<double>(static_cast<std::int64_t>(d)))
      throw std::invalid_argument("config: bad integer for '" + std::string(key) + "': " +
                                  std::string(text));
    return static_cast<std::int64_t>(d);
  }
  return v;
}

} // namespace

Status status_from_string(std::string_view name) {
  for (Status s : {Status::Converged, Status::EvalBudgetExceeded, Status::RegularizationOverflow,
                   Status::LineSearchFailure, Status::NumericalBreakdown})
    if (to_string(s) == name)
      return s;
  throw std::invalid_argument("unknown status: " + std::string(name));
}

void SolverConfig::validate() const {
  auto require = [](bool ok, const char *what) {
    if (!ok)
      throw std::invalid_argument(std::string("config: ") + what);
  };
  require(mu_min > 0 && mu_min <= mu0, "need 0 < mu_min <= mu0");
  require(gamma1 > 0 && gamma1 <= 1, "need 0 < gamma1 <= 1");
  require(gamma2 > 1, "need gamma2 > 1");
  require(eta1 > 0 && eta1 < eta2 && eta2 <= 1, "need 0 < eta1 < eta2 <= 1");
  require(memory > 0, "need m > 0");
  require(nonmonotone >= 0, "need M >= 0");
  require(c1 > 0 && c1 < c2 && c2 < 1, "need 0 < c1 < c2 < 1");
  require(grad_tol > 0, "need grad_tol > 0");
  require(max_fevals > 0, "need max_fevals > 0");
  require(mu_max >= mu0, "need mu_max >= mu0");
  require(alpha_floor > 0, "need alpha_floor > 0");
  require(max_ls_iters > 0, "need max_ls_iters > 0");
}

void set_config_value(SolverConfig &c, std::string_view key, std::string_view raw) {
  key = trim(key);
  const std::string_view value = trim(raw);
  if (key == "mu0")
    c.mu0 = to_double(key, value);
  else if (key == "mu_min")
    c.mu_min = to_double(key, value);
  else if (key == "gamma1")
    c.gamma1 = to_double(key, value);
  else if (key == "gamma2")
    c.gamma2 = to_double(key, value);
  else if (key == "eta1")
    c.eta1 = to_double(key, value);
  else if (key == "eta2")
    c.eta2 = to_double(key, value);
  else if (key == "m" || key == "memory")
    c.memory = static_cast<int>(to_int(key, value));
  else if (key == "M" || key == "nonmonotone")
    c.nonmonotone = static_cast<int>(to_int(key, value));
  else if (key == "c1")
    c.c1 = to_double(key, value);
  else if (key == "c2")
    c.c2 = to_double(key, value);
  else if (key == "grad_tol")
    c.grad_tol = to_double(key, value);
  else if (key == "max_fevals")
    c.max_fevals = to_int(key, value);
  else if (key == "mu_max")
    c.mu_max = to_double(key, value);
  else if (key == "alpha_floor")
    c.alpha_floor = to_double(key, value);
  else if (key == "max_ls_iters")
    c.max_ls_iters = static_cast<int>(to_int(key, value));
  else
    throw std::invalid_argument("config: unknown key '" + std::string(key) + "'");
}

SolverConfig parse_config(std::string_view text, SolverConfig config) {
  std::size_t lineno = 0;
  while (!text.empty()) {
    ++lineno;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    set_config_value(config, line.substr(0, eq), line.substr(eq + 1));
  }
  config.validate();
  return config;
}

SolverConfig load_config(const std::string &path, SolverConfig base) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), base);
}

} // namespace regulus
