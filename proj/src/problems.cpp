#include "regulus/problems.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>

namespace regulus {

namespace {

using Vec = Vector<double>;
using Mat = Matrix<double>;

struct Family {
  Eigen::Index default_n;
  std::function<bool(Eigen::Index)> valid_n;
  std::function<ProblemDef(Eigen::Index)> build;
};

ProblemDef finish(std::string family, Eigen::Index n, Vec x0, FunctionObjective<double>::ValueFn f,
                  FunctionObjective<double>::GradientFn g, std::optional<double> f_star) {
  ProblemDef p;
  p.name = family + ":" + std::to_string(n);
  p.family = std::move(family);
  p.dimension = n;
  p.x0 = std::move(x0);
  p.objective = std::make_shared<FunctionObjective<double>>(n, std::move(f), std::move(g));
  p.f_star = f_star;
  return p;
}

ProblemDef rosenbrock(Eigen::Index n) {
  Vec x0(n);
  for (Eigen::Index i = 0; i < n; i += 2) {
    x0[i] = -1.2;
    x0[i + 1] = 1.0;
  }
  auto f = [](const Vec &x) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); i += 2) {
      const double t1 = x[i + 1] - x[i] * x[i];
      const double t2 = 1.0 - x[i];
      s += 100.0 * t1 * t1 + t2 * t2;
    }
    return s;
  };
  auto g = [](const Vec &x, Vec &out) {
    for (Eigen::Index i = 0; i < x.size(); i += 2) {
      const double t1 = x[i + 1] - x[i] * x[i];
      const double t2 = 1.0 - x[i];
      out[i] = -400.0 * x[i] * t1 - 2.0 * t2;
      out[i + 1] = 200.0 * t1;
    }
  };
  return finish("rosenbrock", n, x0, f, g, 0.0);
}

ProblemDef powell(Eigen::Index n) {
  Vec x0(n);
  for (Eigen::Index i = 0; i < n; i += 4)
    x0.segment<4>(i) << 3.0, -1.0, 0.0, 1.0;
  auto f = [](const Vec &x) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); i += 4) {
      const double a = x[i] + 10.0 * x[i + 1];
      const double b = x[i + 2] - x[i + 3];
      const double c = x[i + 1] - 2.0 * x[i + 2];
      const double e = x[i] - x[i + 3];
      s += a * a + 5.0 * b * b + std::pow(c, 4) + 10.0 * std::pow(e, 4);
    }
    return s;
  };
  auto g = [](const Vec &x, Vec &out) {
    for (Eigen::Index i = 0; i < x.size(); i += 4) {
      const double a = x[i] + 10.0 * x[i + 1];
      const double b = x[i + 2] - x[i + 3];
      const double c3 = std::pow(x[i + 1] - 2.0 * x[i + 2], 3);
      const double e3 = std::pow(x[i] - x[i + 3], 3);
      out[i] = 2.0 * a + 40.0 * e3;
      out[i + 1] = 20.0 * a + 4.0 * c3;
      out[i + 2] = 10.0 * b - 8.0 * c3;
      out[i + 3] = -10.0 * b - 40.0 * e3;
    }
  };
  return finish("powell", n, x0, f, g, 0.0);
}

ProblemDef diagonal_quadratic(std::string family, Vec diag) {
  const Eigen::Index n = diag.size();
  auto d = std::make_shared<const Vec>(std::move(diag));
  auto f = [d](const Vec &x) { return 0.5 * x.dot(d->cwiseProduct(x)); };
  auto g = [d](const Vec &x, Vec &out) { out = d->cwiseProduct(x); };
  return finish(std::move(family), n, Vec::Ones(n), f, g, 0.0);
}

ProblemDef quadratic_diag(Eigen::Index n) {
  return diagonal_quadratic("quadratic-diag", Vec::LinSpaced(n, 1.0, static_cast<double>(n)));
}

// Eigenvalues log-spaced over [1, 1e6].
ProblemDef quadratic_ill(Eigen::Index n) {
  Vec d(n);
  for (Eigen::Index i = 0; i < n; ++i)
    d[i] = std::pow(10.0, 6.0 * static_cast<double>(i) / static_cast<double>(n - 1));
  return diagonal_quadratic("quadratic-ill", d);
}

ProblemDef dixon_price(Eigen::Index n) {
  auto f = [](const Vec &x) {
    double s = (x[0] - 1.0) * (x[0] - 1.0);
    for (Eigen::Index i = 1; i < x.size(); ++i) {
      const double t = 2.0 * x[i] * x[i] - x[i - 1];
      s += static_cast<double>(i + 1) * t * t;
    }
    return s;
  };
  auto g = [](const Vec &x, Vec &out) {
    out.setZero();
    out[0] = 2.0 * (x[0] - 1.0);
    for (Eigen::Index i = 1; i < x.size(); ++i) {
      const double w = 2.0 * static_cast<double>(i + 1) * (2.0 * x[i] * x[i] - x[i - 1]);
      out[i] += 4.0 * x[i] * w;
      out[i - 1] -= w;
    }
  };
  return finish("dixon-price", n, Vec::Ones(n), f, g, 0.0);
}

ProblemDef trigonometric(Eigen::Index n) {
  // r_i = n - sum_j cos x_j + i (1 - cos x_i) - sin x_i, i = 1..n
  auto residuals = [](const Vec &x) {
    const double n = static_cast<double>(x.size());
    const double cos_sum = x.array().cos().sum();
    Vec r(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i)
      r[i] = n - cos_sum + static_cast<double>(i + 1) * (1.0 - std::cos(x[i])) - std::sin(x[i]);
    return r;
  };
  auto f = [residuals](const Vec &x) { return residuals(x).squaredNorm(); };
  auto g = [residuals](const Vec &x, Vec &out) {
    const Vec r = residuals(x);
    const double rsum = r.sum();
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      const double sj = std::sin(x[j]);
      out[j] = 2.0 * sj * rsum +
               2.0 * r[j] * (static_cast<double>(j + 1) * sj - std::cos(x[j]));
    }
  };
  return finish("trigonometric", n, Vec::Constant(n, 1.0 / static_cast<double>(n)), f, g, 0.0);
}

ProblemDef beale(Eigen::Index) {
  auto f = [](const Vec &v) {
    const double x = v[0], y = v[1];
    const double t1 = 1.5 - x + x * y;
    const double t2 = 2.25 - x + x * y * y;
    const double t3 = 2.625 - x + x * y * y * y;
    return t1 * t1 + t2 * t2 + t3 * t3;
  };
  auto g = [](const Vec &v, Vec &out) {
    const double x = v[0], y = v[1];
    const double t1 = 1.5 - x + x * y;
    const double t2 = 2.25 - x + x * y * y;
    const double t3 = 2.625 - x + x * y * y * y;
    out[0] = 2.0 * (t1 * (y - 1.0) + t2 * (y * y - 1.0) + t3 * (y * y * y - 1.0));
    out[1] = 2.0 * x * (t1 + 2.0 * t2 * y + 3.0 * t3 * y * y);
  };
  return finish("beale", 2, Vec::Ones(2), f, g, 0.0);
}

ProblemDef penalty1(Eigen::Index n) {
  constexpr double a = 1e-5;
  auto f = [](const Vec &x) {
    const double t = x.squaredNorm() - 0.25;
    return a * (x.array() - 1.0).square().sum() + t * t;
  };
  auto g = [](const Vec &x, Vec &out) {
    const double t = x.squaredNorm() - 0.25;
    out = 2.0 * a * (x.array() - 1.0).matrix() + 4.0 * t * x;
  };
  return finish("penalty1", n, Vec::LinSpaced(n, 1.0, static_cast<double>(n)), f, g,
                std::nullopt);
}

ProblemDef hilbert(Eigen::Index n) {
  auto h = std::make_shared<Mat>(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      (*h)(i, j) = 1.0 / static_cast<double>(i + j + 1);
  auto f = [h](const Vec &x) { return 0.5 * x.dot(*h * x); };
  auto g = [h](const Vec &x, Vec &out) { out.noalias() = *h * x; };
  return finish("hilbert", n, Vec::Ones(n), f, g, 0.0);
}

// sum (x_i^2 - 1)^2 + 1/2 sum (x_{i+1} - x_i)^2: wells at +-1, saddle at 0.
ProblemDef two_well(Eigen::Index n) {
  Vec x0(n);
  for (Eigen::Index i = 0; i < n; ++i)
    x0[i] = i % 2 == 0 ? 0.5 : -0.5;
  auto f = [](const Vec &x) {
    double s = (x.array().square() - 1.0).square().sum();
    for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
      const double t = x[i + 1] - x[i];
      s += 0.5 * t * t;
    }
    return s;
  };
  auto g = [](const Vec &x, Vec &out) {
    out = (4.0 * x.array() * (x.array().square() - 1.0)).matrix();
    for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
      const double t = x[i + 1] - x[i];
      out[i + 1] += t;
      out[i] -= t;
    }
  };
  return finish("two-well", n, x0, f, g, 0.0);
}

ProblemDef raydan1(Eigen::Index n) {
  auto w = std::make_shared<const Vec>(Vec::LinSpaced(n, 1.0, static_cast<double>(n)) / 10.0);
  auto f = [w](const Vec &x) { return w->dot((x.array().exp() - x.array()).matrix()); };
  auto g = [w](const Vec &x, Vec &out) {
    out = w->cwiseProduct((x.array().exp() - 1.0).matrix());
  };
  const double nn = static_cast<double>(n);
  return finish("raydan1", n, Vec::Ones(n), f, g, nn * (nn + 1.0) / 20.0);
}

ProblemDef arwhead(Eigen::Index n) {
  auto f = [](const Vec &x) {
    const Eigen::Index last = x.size() - 1;
    const double z2 = x[last] * x[last];
    double s = 0.0;
    for (Eigen::Index i = 0; i < last; ++i) {
      const double q = x[i] * x[i] + z2;
      s += q * q - 4.0 * x[i] + 3.0;
    }
    return s;
  };
  auto g = [](const Vec &x, Vec &out) {
    const Eigen::Index last = x.size() - 1;
    const double z = x[last];
    double gz = 0.0;
    for (Eigen::Index i = 0; i < last; ++i) {
      const double q = x[i] * x[i] + z * z;
      out[i] = 4.0 * x[i] * q - 4.0;
      gz += 4.0 * z * q;
    }
    out[last] = gz;
  };
  return finish("arwhead", n, Vec::Ones(n), f, g, 0.0);
}

ProblemDef liarwhd(Eigen::Index n) {
  auto f = [](const Vec &x) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double a = x[i] * x[i] - x[0];
      const double b = x[i] - 1.0;
      s += 4.0 * a * a + b * b;
    }
    return s;
  };
  auto g = [](const Vec &x, Vec &out) {
    double g0 = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double a = x[i] * x[i] - x[0];
      out[i] = 16.0 * x[i] * a + 2.0 * (x[i] - 1.0);
      g0 -= 8.0 * a;
    }
    out[0] += g0;
  };
  return finish("liarwhd", n, Vec::Constant(n, 4.0), f, g, 0.0);
}

ProblemDef engval1(Eigen::Index n) {
  auto f = [](const Vec &x) {
    double s = 0.0;
    for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
      const double q = x[i] * x[i] + x[i + 1] * x[i + 1];
      s += q * q - 4.0 * x[i] + 3.0;
    }
    return s;
  };
  auto g = [](const Vec &x, Vec &out) {
    out.setZero();
    for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
      const double q = x[i] * x[i] + x[i + 1] * x[i + 1];
      out[i] += 4.0 * x[i] * q - 4.0;
      out[i + 1] += 4.0 * x[i + 1] * q;
    }
  };
  return finish("engval1", n, Vec::Constant(n, 2.0), f, g, std::nullopt);
}

ProblemDef wood(Eigen::Index) {
  auto f = [](const Vec &x) {
    const double a = x[1] - x[0] * x[0], b = 1.0 - x[0];
    const double c = x[3] - x[2] * x[2], d = 1.0 - x[2];
    const double e = x[1] - 1.0, h = x[3] - 1.0;
    return 100.0 * a * a + b * b + 90.0 * c * c + d * d + 10.1 * (e * e + h * h) + 19.8 * e * h;
  };
  auto g = [](const Vec &x, Vec &out) {
    const double a = x[1] - x[0] * x[0], b = 1.0 - x[0];
    const double c = x[3] - x[2] * x[2], d = 1.0 - x[2];
    const double e = x[1] - 1.0, h = x[3] - 1.0;
    out[0] = -400.0 * x[0] * a - 2.0 * b;
    out[1] = 200.0 * a + 20.2 * e + 19.8 * h;
    out[2] = -360.0 * x[2] * c - 2.0 * d;
    out[3] = 180.0 * c + 20.2 * h + 19.8 * e;
  };
  Vec x0(4);
  x0 << -3.0, -1.0, -3.0, -1.0;
  return finish("wood", 4, x0, f, g, 0.0);
}

ProblemDef helical(Eigen::Index) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  auto theta = [](double x1, double x2) {
    if (x1 == 0.0)
      return x2 >= 0.0 ? 0.25 : -0.25;
    const double t = std::atan(x2 / x1) / two_pi;
    return x1 > 0.0 ? t : t + 0.5;
  };
  auto f = [theta](const Vec &x) {
    const double a = x[2] - 10.0 * theta(x[0], x[1]);
    const double r = std::hypot(x[0], x[1]) - 1.0;
    return 100.0 * (a * a + r * r) + x[2] * x[2];
  };
  auto g = [theta](const Vec &x, Vec &out) {
    const double r2 = x[0] * x[0] + x[1] * x[1];
    const double r = std::sqrt(r2);
    const double a = x[2] - 10.0 * theta(x[0], x[1]);
    const double dth1 = -x[1] / (two_pi * r2);
    const double dth2 = x[0] / (two_pi * r2);
    out[0] = 200.0 * (-10.0 * a * dth1 + (r - 1.0) * x[0] / r);
    out[1] = 200.0 * (-10.0 * a * dth2 + (r - 1.0) * x[1] / r);
    out[2] = 200.0 * a + 2.0 * x[2];
  };
  Vec x0(3);
  x0 << -1.0, 0.0, 0.0;
  return finish("helical", 3, x0, f, g, 0.0);
}

ProblemDef broyden_tridiagonal(Eigen::Index n) {
  auto residual = [](const Vec &x, Eigen::Index i) {
    const double left = i > 0 ? x[i - 1] : 0.0;
    const double right = i + 1 < x.size() ? x[i + 1] : 0.0;
    return (3.0 - 2.0 * x[i]) * x[i] - left - 2.0 * right + 1.0;
  };
  auto f = [residual](const Vec &x) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double r = residual(x, i);
      s += r * r;
    }
    return s;
  };
  auto g = [residual](const Vec &x, Vec &out) {
    out.setZero();
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double r2 = 2.0 * residual(x, i);
      out[i] += r2 * (3.0 - 4.0 * x[i]);
      if (i > 0)
        out[i - 1] -= r2;
      if (i + 1 < x.size())
        out[i + 1] -= 2.0 * r2;
    }
  };
  return finish("broyden-tridiagonal", n, Vec::Constant(n, -1.0), f, g, 0.0);
}

ProblemDef tridia(Eigen::Index n) {
  auto f = [](const Vec &x) {
    double s = (x[0] - 1.0) * (x[0] - 1.0);
    for (Eigen::Index i = 1; i < x.size(); ++i) {
      const double t = 2.0 * x[i] - x[i - 1];
      s += static_cast<double>(i + 1) * t * t;
    }
    return s;
  };
  auto g = [](const Vec &x, Vec &out) {
    out.setZero();
    out[0] = 2.0 * (x[0] - 1.0);
    for (Eigen::Index i = 1; i < x.size(); ++i) {
      const double w = 2.0 * static_cast<double>(i + 1) * (2.0 * x[i] - x[i - 1]);
      out[i] += 2.0 * w;
      out[i - 1] -= w;
    }
  };
  return finish("tridia", n, Vec::Ones(n), f, g, 0.0);
}

const std::map<std::string, Family, std::less<>> &families() {
  auto any = [](Eigen::Index lo) { return [lo](Eigen::Index n) { return n >= lo; }; };
  auto exactly = [](Eigen::Index k) { return [k](Eigen::Index n) { return n == k; }; };
  static const std::map<std::string, Family, std::less<>> table = {
      {"rosenbrock", {2, [](Eigen::Index n) { return n >= 2 && n % 2 == 0; }, rosenbrock}},
      {"powell", {4, [](Eigen::Index n) { return n >= 4 && n % 4 == 0; }, powell}},
      {"quadratic-diag", {100, any(1), quadratic_diag}},
      {"quadratic-ill", {10, any(2), quadratic_ill}},
      {"dixon-price", {10, any(2), dixon_price}},
      {"trigonometric", {10, any(1), trigonometric}},
      {"beale", {2, exactly(2), beale}},
      {"penalty1", {10, any(1), penalty1}},
      {"hilbert", {8, [](Eigen::Index n) { return n >= 1 && n <= 64; }, hilbert}},
      {"two-well", {100, any(1), two_well}},
      {"raydan1", {100, any(1), raydan1}},
      {"arwhead", {1000, any(2), arwhead}},
      {"liarwhd", {1000, any(1), liarwhd}},
      {"engval1", {1000, any(2), engval1}},
      {"wood", {4, exactly(4), wood}},
      {"helical", {3, exactly(3), helical}},
      {"broyden-tridiagonal", {1000, any(1), broyden_tridiagonal}},
      {"tridia", {100, any(2), tridia}},
  };
  return table;
}

} // namespace

std::vector<std::string> problem_families() {
  std::vector<std::string> names;
  for (const auto &[name, fam] : families())
    names.push_back(name);
  return names;
}

ProblemDef make_problem(std::string_view spec) {
  std::string_view family = spec;
  std::optional<Eigen::Index> n;
  if (const auto colon = spec.find(':'); colon != std::string_view::npos) {
    family = spec.substr(0, colon);
    const std::string_view digits = spec.substr(colon + 1);
    long long value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || value <= 0)
      throw std::invalid_argument("bad problem dimension in '" + std::string(spec) + "'");
    n = static_cast<Eigen::Index>(value);
  }
  const auto it = families().find(family);
  if (it == families().end())
    throw std::invalid_argument("unknown problem '" + std::string(family) + "'");
  const Eigen::Index dim = n.value_or(it->second.default_n);
  if (!it->second.valid_n(dim))
    throw std::invalid_argument("problem '" + std::string(family) + "' does not support n = " +
                                std::to_string(dim));
  return it->second.build(dim);
}

std::vector<ProblemDef> registry() {
  static const char *const specs[] = {
      "rosenbrock:2",       "rosenbrock:100",      "rosenbrock:1000",
      "powell:100",         "powell:1000",         "quadratic-diag:100",
      "quadratic-diag:1000", "quadratic-ill:10",   "quadratic-ill:100",
      "dixon-price:10",     "dixon-price:100",     "trigonometric:10",
      "trigonometric:100",  "beale:2",             "penalty1:10",
      "penalty1:100",       "hilbert:8",           "two-well:100",
      "raydan1:100",        "arwhead:1000",        "liarwhd:1000",
      "engval1:1000",       "wood:4",              "helical:3",
      "broyden-tridiagonal:1000", "tridia:100",
  };
  std::vector<ProblemDef> out;
  for (const char *s : specs)
    out.push_back(make_problem(s));
  return out;
}

} // namespace regulus
