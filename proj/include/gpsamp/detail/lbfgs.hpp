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

#ifndef GPSAMP_DETAIL_LBFGS_HPP
#define GPSAMP_DETAIL_LBFGS_HPP

#include <cmath>
#include <deque>
#include <limits>
#include <utility>

#include <Eigen/Dense>

namespace gpsamp::detail {

using Eigen::VectorXd;

struct LbfgsOptions {
  int max_iter = 200;
  double grad_tol = 1e-8;   // projected-gradient infinity norm
  double f_tol = 1e-12;     // relative objective decrease
  int memory = 8;
  int max_linesearch = 40;
};

struct LbfgsResult {
  VectorXd x;
  double f = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
};

// Projected L-BFGS over a box. fg(x, grad) returns the objective and fills the
// gradient. Non-finite objectives abort the line search step.
template <typename F>
LbfgsResult minimize_box(F&& fg, VectorXd x0, const VectorXd& lo,
                         const VectorXd& hi, const LbfgsOptions& opt = {}) {
  const auto project = [&](VectorXd v) {
    return v.cwiseMax(lo).cwiseMin(hi).eval();
  };
  LbfgsResult res;
  VectorXd x = project(std::move(x0));
  const Eigen::Index n = x.size();
  VectorXd g(n);
  double f = fg(x, g);
  if (!std::isfinite(f)) {
    res.x = x;
    res.f = f;
    return res;
  }

  std::deque<std::pair<VectorXd, VectorXd>> pairs;  // (s, y)
  VectorXd d(n);

  for (int iter = 0; iter < opt.max_iter; ++iter) {
    const double pg = (x - project(x - g)).template lpNorm<Eigen::Infinity>();
    if (pg <= opt.grad_tol) {
      res.converged = true;
      break;
    }

    // two-loop recursion
    d = -g;
    if (!pairs.empty()) {
      Eigen::VectorXd alpha(pairs.size());
      int i = static_cast<int>(pairs.size()) - 1;
      for (auto it = pairs.rbegin(); it != pairs.rend(); ++it, --i) {
        const double rho = 1.0 / it->second.dot(it->first);
        alpha(i) = rho * it->first.dot(d);
        d -= alpha(i) * it->second;
      }
      const auto& last = pairs.back();
      d *= last.first.dot(last.second) / last.second.squaredNorm();
      i = 0;
      for (auto it = pairs.begin(); it != pairs.end(); ++it, ++i) {
        const double rho = 1.0 / it->second.dot(it->first);
        const double beta = rho * it->second.dot(d);
        d += (alpha(i) - beta) * it->first;
      }
    }
    if (d.dot(g) >= 0) d = -g;

    // backtracking Armijo along the projected path
    double step = 1.0;
    double f_new = f;
    VectorXd x_new = x, g_new = g;
    bool ok = false;
    for (int ls = 0; ls < opt.max_linesearch; ++ls) {
      x_new = project(x + step * d);
      f_new = fg(x_new, g_new);
      const double decrease = 1e-4 * g.dot(x_new - x);
      if (std::isfinite(f_new) && f_new <= f + decrease) {
        ok = true;
        break;
      }
      step *= 0.5;
    }
    if (!ok) {
      res.converged = true;  // no further progress along any step size
      break;
    }

    VectorXd s = x_new - x;
    VectorXd yv = g_new - g;
    if (s.dot(yv) > 1e-12 * s.norm() * yv.norm()) {
      pairs.emplace_back(std::move(s), std::move(yv));
      if (static_cast<int>(pairs.size()) > opt.memory) pairs.pop_front();
    }
    const double df = f - f_new;
    x.swap(x_new);
    g.swap(g_new);
    f = f_new;
    res.iterations = iter + 1;
    if (df <= opt.f_tol * std::max(1.0, std::abs(f))) {
      res.converged = true;
      break;
    }
  }
  res.x = std::move(x);
  res.f = f;
  return res;
}

}  // namespace gpsamp::detail

#endif
