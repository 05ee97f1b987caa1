// Copyright 2026 the gpsamp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GPSAMP_TESTBEDS_HPP
#define GPSAMP_TESTBEDS_HPP

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gpsamp/errors.hpp"
#include "gpsamp/sobol.hpp"
#include "gpsamp/truss.hpp"

namespace gpsamp::testbeds {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline double schwefel(const VectorXd& x) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    s += x(i) * std::sin(std::sqrt(std::abs(x(i))));
  return 418.9829 * static_cast<double>(x.size()) - s;
}

inline double rosenbrock(const VectorXd& x) {
  double s = 0.0;
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
    const double a = x(i + 1) - x(i) * x(i);
    const double b = x(i) - 1.0;
    s += 100.0 * a * a + b * b;
  }
  return s;
}

inline double powell(const VectorXd& x) {
  require_dims(x.size() % 4 == 0, "powell: dimension must be divisible by 4");
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size() / 4; ++i) {
    const double x1 = x(4 * i), x2 = x(4 * i + 1), x3 = x(4 * i + 2),
                 x4 = x(4 * i + 3);
    const double t1 = x1 + 10.0 * x2;
    const double t2 = x3 - x4;
    const double t3 = x2 - 2.0 * x3;
    const double t4 = x1 - x4;
    s += t1 * t1 + 5.0 * t2 * t2 + t3 * t3 * t3 * t3 + 10.0 * t4 * t4 * t4 * t4;
  }
  return s;
}

inline double ackley(const VectorXd& x) {
  const double a = 20.0, b = 0.2, h = 2.0 * M_PI;
  const double d = static_cast<double>(x.size());
  const double q = std::sqrt(x.squaredNorm() / d);
  double cs = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) cs += std::cos(h * x(i));
  return -a * std::exp(-b * q) - std::exp(cs / d) + a + std::exp(1.0);
}

inline double levy1(const VectorXd& x) {
  require_dims(x.size() == 1, "levy1: one-dimensional");
  const double w = 1.0 + (x(0) - 1.0) / 4.0;
  const double sw = std::sin(M_PI * w);
  const double s2 = std::sin(2.0 * M_PI * w);
  return sw * sw + (w - 1.0) * (w - 1.0) * (1.0 + s2 * s2);
}

inline double ishigami(const VectorXd& x) {
  require_dims(x.size() == 3, "ishigami: three-dimensional");
  const double s1 = std::sin(x(0));
  const double s2 = std::sin(x(1));
  return s1 + 7.0 * s2 * s2 + 0.1 * std::pow(x(2), 4) * s1;
}

struct TestFunction {
  std::string name;
  Eigen::Index dim = 1;
  MatrixXd bounds;  // d x 2
  std::function<double(const VectorXd&)> eval;
  std::optional<std::pair<VectorXd, double>> known_minimum;
  std::optional<std::pair<VectorXd, VectorXd>> known_indices;  // (S, ST)
};

namespace detail {
inline MatrixXd box(Eigen::Index d, double lo, double hi) {
  MatrixXd b(d, 2);
  b.col(0).setConstant(lo);
  b.col(1).setConstant(hi);
  return b;
}
}  // namespace detail

// down-facing truss objective over the ten cross-section areas (1e-4 m^2)
inline double truss_so_objective(const VectorXd& a) {
  require_dims(a.size() == 10, "truss objective: ten areas");
  return truss_weighted_objective(a.data());
}

inline const std::vector<TestFunction>& so_benchmarks() {
  static const std::vector<TestFunction> reg = [] {
    std::vector<TestFunction> v;
    {
      TestFunction f;
      f.name = "schwefel2";
      f.dim = 2;
      f.bounds = detail::box(2, -500, 500);
      f.eval = schwefel;
      f.known_minimum = {VectorXd::Constant(2, 420.9687), 0.0};
      v.push_back(std::move(f));
    }
    {
      TestFunction f;
      f.name = "rosenbrock4";
      f.dim = 4;
      f.bounds = detail::box(4, -5, 10);
      f.eval = rosenbrock;
      f.known_minimum = {VectorXd::Ones(4), 0.0};
      v.push_back(std::move(f));
    }
    {
      TestFunction f;
      f.name = "powell4";
      f.dim = 4;
      f.bounds = detail::box(4, -4, 5);
      f.eval = powell;
      f.known_minimum = {VectorXd::Zero(4), 0.0};
      v.push_back(std::move(f));
    }
    {
      TestFunction f;
      f.name = "ackley16";
      f.dim = 16;
      f.bounds = detail::box(16, -10, 10);
      f.eval = ackley;
      f.known_minimum = {VectorXd::Zero(16), 0.0};
      v.push_back(std::move(f));
    }
    {
      TestFunction f;
      f.name = "levy1";
      f.dim = 1;
      f.bounds = detail::box(1, -10, 10);
      f.eval = levy1;
      f.known_minimum = {VectorXd::Ones(1), 0.0};
      v.push_back(std::move(f));
    }
    {
      TestFunction f;
      f.name = "ishigami";
      f.dim = 3;
      f.bounds = detail::box(3, -M_PI, M_PI);
      f.eval = ishigami;
      VectorXd S(3), ST(3);
      S << 0.3138, 0.4424, 0.0;
      ST << 0.5574, 0.4424, 0.2436;
      f.known_indices = {S, ST};
      v.push_back(std::move(f));
    }
    {
      TestFunction f;
      f.name = "truss10";
      f.dim = 10;
      f.bounds = detail::box(10, 1.0, 20.0);  // areas in 1e-4 m^2
      f.eval = truss_so_objective;
      v.push_back(std::move(f));
    }
    return v;
  }();
  return reg;
}

inline const TestFunction& so_benchmark(const std::string& name) {
  for (const auto& f : so_benchmarks())
    if (f.name == name) return f;
  throw ConfigError("unknown benchmark: " + name);
}

// --- multi-objective problems ---

inline VectorXd kno1(const VectorXd& x) {
  require_dims(x.size() == 2, "kno1: two-dimensional");
  const double sum = x(0) + x(1);
  const double r = 9.0 - (3.0 * std::sin(5.0 / (2.0 * sum * sum)) +
                          3.0 * std::sin(4.0 * sum) +
                          5.0 * std::sin(2.0 * sum + 2.0));
  const double phi = M_PI / (12.0 * (x(0) - x(1) + 3.0));
  VectorXd y(2);
  y << 20.0 - r * std::cos(phi), 20.0 - r * std::sin(phi);
  return y;
}

inline VectorXd vlmop2(const VectorXd& x) {
  require_dims(x.size() == 2, "vlmop2: two-dimensional");
  const double inv = 1.0 / std::sqrt(2.0);
  double s1 = 0.0, s2 = 0.0;
  for (Eigen::Index i = 0; i < 2; ++i) {
    s1 += (x(i) - inv) * (x(i) - inv);
    s2 += (x(i) + inv) * (x(i) + inv);
  }
  VectorXd y(2);
  y << 1.0 - std::exp(-s1), 1.0 - std::exp(-s2);
  return y;
}

inline VectorXd vlmop3(const VectorXd& x) {
  require_dims(x.size() == 2, "vlmop3: two-dimensional");
  const double a = x(0) * x(0) + x(1) * x(1);
  VectorXd y(3);
  y(0) = 0.5 * a + std::sin(a);
  y(1) = std::pow(3.0 * x(0) - 2.0 * x(1) + 4.0, 2) / 8.0 +
         std::pow(x(0) - x(1) + 1.0, 2) / 27.0 + 15.0;
  y(2) = 1.0 / (a + 1.0) - 1.1 * std::exp(-a);
  return y;
}

inline VectorXd dtlz2a(const VectorXd& x) {
  require_dims(x.size() == 8, "dtlz2a: eight-dimensional");
  double g = 0.0;
  for (Eigen::Index i = 2; i < 8; ++i) g += (x(i) - 0.5) * (x(i) - 0.5);
  const double c1 = std::cos(0.5 * M_PI * x(0));
  const double s1 = std::sin(0.5 * M_PI * x(0));
  const double c2 = std::cos(0.5 * M_PI * x(1));
  const double s2 = std::sin(0.5 * M_PI * x(1));
  VectorXd y(3);
  y << (1.0 + g) * c1 * c2, (1.0 + g) * c1 * s2, (1.0 + g) * s1;
  return y;
}

// bi-objective truss: total area (1e-4 m^2) against node-3 displacement
// (1e-2 m)
inline VectorXd truss_mo(const VectorXd& a) {
  require_dims(a.size() == 10, "truss_mo: ten areas");
  VectorXd y(2);
  y(0) = a.sum();
  y(1) = truss_displacement(60.0, 40.0, 10.0, 200.0, 1.0, a.data()) / 1e-2;
  return y;
}

struct TestMoFunction {
  std::string name;
  Eigen::Index dim = 2;
  Eigen::Index n_obj = 2;
  MatrixXd bounds;
  std::function<VectorXd(const VectorXd&)> eval;
  VectorXd report_ref;  // fixed reference point for hypervolume reporting
};

inline const std::vector<TestMoFunction>& mo_benchmarks() {
  static const std::vector<TestMoFunction> reg = [] {
    std::vector<TestMoFunction> v;
    auto add = [&](const std::string& name, Eigen::Index d, Eigen::Index nc,
                   MatrixXd bounds,
                   std::function<VectorXd(const VectorXd&)> f,
                   std::initializer_list<double> ref) {
      TestMoFunction t;
      t.name = name;
      t.dim = d;
      t.n_obj = nc;
      t.bounds = std::move(bounds);
      t.eval = std::move(f);
      t.report_ref = Eigen::Map<const VectorXd>(ref.begin(),
                                                static_cast<long>(ref.size()));
      v.push_back(std::move(t));
    };
    add("kno1", 2, 2, detail::box(2, 0, 3), kno1, {25, 25});
    add("vlmop2", 2, 2, detail::box(2, -2, 2), vlmop2, {2, 2});
    add("vlmop3", 2, 3, detail::box(2, -3, 3), vlmop3, {10, 18, 0.2});
    add("dtlz2a", 8, 3, detail::box(8, 0, 1), dtlz2a, {2, 2, 2});
    add("truss10-mo", 10, 2, detail::box(10, 1, 20), truss_mo, {200, 2.5});
    return v;
  }();
  return reg;
}

inline const TestMoFunction& mo_benchmark(const std::string& name) {
  for (const auto& f : mo_benchmarks())
    if (f.name == name) return f;
  throw ConfigError("unknown multi-objective benchmark: " + name);
}

// Table of probabilistic inputs for the ten-bar truss sensitivity study:
// loads and material properties are Gaussian with coefficient-of-variation
// spreads, areas uniform.
inline InputDistribution truss_input_distribution() {
  std::vector<Marginal> m;
  m.push_back(Marginal::gaussian_cov(60.0, 0.6));   // P1 [kN]
  m.push_back(Marginal::gaussian_cov(40.0, 0.4));   // P2 [kN]
  m.push_back(Marginal::gaussian_cov(10.0, 0.1));   // P3 [kN]
  m.push_back(Marginal::gaussian_cov(200.0, 0.2));  // E [GPa]
  m.push_back(Marginal::gaussian_cov(1.0, 0.05));   // L [m]
  m.push_back(Marginal::uniform(6.5, 14.5));        // A1 [1e-4 m^2]
  m.push_back(Marginal::uniform(3.5, 7.5));         // A2
  m.push_back(Marginal::uniform(10.0, 18.0));       // A3
  m.push_back(Marginal::uniform(0.4, 1.6));         // A4
  m.push_back(Marginal::uniform(0.4, 1.6));         // A5
  m.push_back(Marginal::uniform(0.4, 1.6));         // A6
  m.push_back(Marginal::uniform(3.5, 7.5));         // A7
  m.push_back(Marginal::uniform(7.0, 15.0));        // A8
  m.push_back(Marginal::uniform(0.4, 1.6));         // A9
  m.push_back(Marginal::uniform(6.5, 14.5));        // A10
  return InputDistribution(std::move(m));
}

// 15-variable truss response for the sensitivity study
inline double truss_response(const VectorXd& v) {
  require_dims(v.size() == 15, "truss_response: fifteen variables");
  return truss_displacement(v(0), v(1), v(2), v(3), v(4), v.data() + 5);
}

}  // namespace gpsamp::testbeds

#endif
