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

#ifndef GPSAMP_STUDIES_HPP
#define GPSAMP_STUDIES_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "gpsamp/features.hpp"
#include "gpsamp/paths.hpp"
#include "gpsamp/testbeds.hpp"

namespace gpsamp::studies {

// Relative L2 error of the feature reconstruction of one kernel slice
// kappa(., x_ref) over a grid: the full cross-gram is quadratic in the grid
// size, a slice keeps sweeps affordable without changing convergence rates.
inline double kernel_slice_error(const FeatureMap& fm, const KernelSpec& spec,
                                 const MatrixXd& grid, const VectorXd& x_ref) {
  const VectorXd phi_ref = fm.eval(x_ref);
  const VectorXd approx = fm.eval_rows(grid) * phi_ref;
  VectorXd exact(grid.rows());
  for (Eigen::Index i = 0; i < grid.rows(); ++i)
    exact(i) = kernel_eval(spec, grid.row(i).transpose(), x_ref);
  return (approx - exact).norm() / exact.norm();
}

inline MatrixXd grid_1d(double lo, double hi, Eigen::Index n) {
  MatrixXd g(n, 1);
  for (Eigen::Index i = 0; i < n; ++i)
    g(i, 0) = lo + (hi - lo) * static_cast<double>(i) /
                       static_cast<double>(n - 1);
  return g;
}

// least-squares slope of log10(y) against log10(x)
inline double loglog_slope(const std::vector<double>& x,
                           const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log10(x[i]), ly = std::log10(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct ConvergenceRow {
  std::string method;
  Eigen::Index n_phi = 0;
  double err_mean = 0.0;
  double err_q05 = 0.0;
  double err_q95 = 0.0;
};

struct ConvergenceConfig {
  KernelSpec spec;       // one-dimensional kernel
  double lo = -5, hi = 5;
  Eigen::Index grid_n = 2000;
  std::vector<Eigen::Index> n_phi_list;
  int repeats = 100;     // random methods only
  double mercer_sigma = std::sqrt(3.0) / 2.0;
  std::vector<std::string> methods{"rff", "qmc", "mercer", "hilbert"};
};

inline std::vector<ConvergenceRow> convergence_study(
    const ConvergenceConfig& cfg, RngStream& rng) {
  require(cfg.spec.dim() == 1, "convergence_study: one-dimensional kernels");
  const MatrixXd grid = grid_1d(cfg.lo, cfg.hi, cfg.grid_n);
  // reference point: the grid point closest to the domain center
  Eigen::Index ref_idx = 0;
  const double center = 0.5 * (cfg.lo + cfg.hi);
  double best = std::abs(grid(0, 0) - center);
  for (Eigen::Index i = 1; i < grid.rows(); ++i)
    if (std::abs(grid(i, 0) - center) < best) {
      best = std::abs(grid(i, 0) - center);
      ref_idx = i;
    }
  const VectorXd x_ref = grid.row(ref_idx).transpose();

  std::vector<ConvergenceRow> rows;
  for (const auto& method : cfg.methods) {
    for (const Eigen::Index n_phi : cfg.n_phi_list) {
      ConvergenceRow row;
      row.method = method;
      row.n_phi = n_phi;
      std::vector<double> errs;
      if (method == "rff") {
        for (int rep = 0; rep < cfg.repeats; ++rep) {
          RngStream r = rng.split(1000 * rep + n_phi);
          errs.push_back(kernel_slice_error(build_rff(cfg.spec, n_phi, r),
                                            cfg.spec, grid, x_ref));
        }
      } else if (method == "qmc") {
        errs.push_back(
            kernel_slice_error(build_qmc(cfg.spec, n_phi), cfg.spec, grid, x_ref));
      } else if (method == "mercer") {
        require(cfg.spec.family == KernelFamily::SquaredExponential,
                "convergence_study: Mercer expansion covers the SE kernel");
        errs.push_back(kernel_slice_error(
            build_mercer_se(cfg.spec.lengthscales, cfg.spec.sigma_f,
                            VectorXd::Constant(1, cfg.mercer_sigma), n_phi),
            cfg.spec, grid, x_ref));
      } else if (method == "hilbert") {
        const double L = std::max(std::abs(cfg.lo), std::abs(cfg.hi));
        errs.push_back(kernel_slice_error(
            build_hilbert(cfg.spec, VectorXd::Constant(1, L), n_phi), cfg.spec,
            grid, x_ref));
      } else {
        throw ConfigError("convergence_study: unknown method " + method);
      }
      std::sort(errs.begin(), errs.end());
      row.err_mean = 0.0;
      for (double e : errs) row.err_mean += e;
      row.err_mean /= static_cast<double>(errs.size());
      row.err_q05 = errs[static_cast<std::size_t>(0.05 * (errs.size() - 1))];
      row.err_q95 = errs[static_cast<std::size_t>(0.95 * (errs.size() - 1))];
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

// Closed-form Gaussian approximations of the two samplers at a fixed query
// grid, compared with the exact posterior in the 2-Wasserstein metric. The
// cross term runs through a low-rank factor of the exact posterior covariance
// (pivoted Cholesky with on-demand entries; the smooth-kernel posterior has
// tiny numerical rank); equivalent to wasserstein2 on the full matrices.
class WassersteinEvaluator {
 public:
  WassersteinEvaluator(const FittedGP& gp, const MatrixXd& grid)
      : gp_(gp), grid_(grid) {
    Kq_ = kernel_gram(gp.kernel(), gp.data().X(), grid);  // N x Nq
    A_ = gp.chol_C().solve(Kq_).transpose();              // Nq x N
    exact_mean_ = A_ * gp.data().y();

    // posterior covariance entries: kappa(xi, xj) - a_i . k_j
    const Eigen::Index nq = grid.rows();
    const double sf2 = gp.kernel().sigma_f * gp.kernel().sigma_f;
    auto cov_col = [&](Eigen::Index j, VectorXd& out) {
      const MatrixXd kj =
          kernel_gram(gp.kernel(), grid, grid.row(j));  // nq x 1
      out = kj.col(0) - A_ * Kq_.col(j);
    };
    VectorXd diag(nq);
    for (Eigen::Index i = 0; i < nq; ++i)
      diag(i) = std::max(sf2 - A_.row(i).dot(Kq_.col(i)), 0.0);
    exact_trace_ = diag.sum();
    // greedy pivoted Cholesky
    const double tol = std::max(diag.maxCoeff(), 1e-300) * 1e-12;
    const Eigen::Index max_rank = std::min<Eigen::Index>(nq, 600);
    MatrixXd P(nq, max_rank);
    VectorXd col(nq);
    Eigen::Index r = 0;
    VectorXd d = diag;
    while (r < max_rank) {
      Eigen::Index piv;
      const double dmax = d.maxCoeff(&piv);
      if (dmax <= tol) break;
      cov_col(piv, col);
      if (r > 0)
        col -= P.leftCols(r) * P.row(piv).head(r).transpose();
      const double root = std::sqrt(std::max(col(piv), tol));
      P.col(r) = col / root;
      d -= P.col(r).cwiseAbs2();
      d = d.cwiseMax(0.0);
      ++r;
    }
    // rotate the factor so columns are the scaled eigenbasis
    const MatrixXd G = P.leftCols(r).transpose() * P.leftCols(r);
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(G);
    VL_ = P.leftCols(r) * eig.eigenvectors();
  }

  // weight-space sampler: mean Phi_q mu_w, cov Phi_q Sigma_w Phi_q^T
  double rff_distance(const FeatureMap& fm) const {
    const MatrixXd Phi_q = fm.eval_rows(grid_);               // Nq x Nphi
    const MatrixXd Phi_t = fm.eval_rows(gp_.data().X());      // N x Nphi
    const double sn2 = gp_.sigma_n() * gp_.sigma_n();
    MatrixXd M = Phi_t * Phi_t.transpose();
    M.diagonal().array() += sn2;
    const CholeskyResult ch = jittered_cholesky(M, 0.0);
    if (ch.jitter > 0) M.diagonal().array() += ch.jitter;
    Eigen::LLT<MatrixXd> llt(M);
    const VectorXd mean = Phi_q * (Phi_t.transpose() * llt.solve(gp_.data().y()));
    // trace of Phi_q (I - Phi_t^T M^{-1} Phi_t) Phi_q^T
    const MatrixXd G = Phi_t * Phi_q.transpose();  // N x Nq
    const MatrixXd L = MatrixXd(llt.matrixL());
    const MatrixXd W = L.triangularView<Eigen::Lower>().solve(G);
    const double trace = Phi_q.squaredNorm() - W.squaredNorm();
    // cross term in the exact eigenbasis
    const MatrixXd P = Phi_q.transpose() * VL_;  // Nphi x r
    const MatrixXd Q = Phi_t * P;                // N x r
    const MatrixXd Mr = P.transpose() * P - Q.transpose() * llt.solve(Q);
    return assemble(mean, trace, Mr);
  }

  // pathwise sampler: exact mean, cov U U^T + sn^2 A A^T with
  // U = Phi_q - A Phi_t
  double pc_distance(const FeatureMap& fm) const {
    const MatrixXd Phi_q = fm.eval_rows(grid_);
    const MatrixXd Phi_t = fm.eval_rows(gp_.data().X());
    const double sn2 = gp_.sigma_n() * gp_.sigma_n();
    const MatrixXd U = Phi_q - A_ * Phi_t;
    const double trace = U.squaredNorm() + sn2 * A_.squaredNorm();
    const MatrixXd P = U.transpose() * VL_;   // Nphi x r
    const MatrixXd Q = A_.transpose() * VL_;  // N x r
    const MatrixXd Mr =
        P.transpose() * P + sn2 * (Q.transpose() * Q);
    return assemble(exact_mean_, trace, Mr);
  }

 private:
  double assemble(const VectorXd& mean, double trace, const MatrixXd& Mr) const {
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(0.5 * (Mr + Mr.transpose()));
    const double cross = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    const double d2 = (mean - exact_mean_).squaredNorm() + exact_trace_ +
                      trace - 2.0 * cross;
    return std::sqrt(std::max(0.0, d2));
  }

  const FittedGP& gp_;
  MatrixXd grid_;
  VectorXd exact_mean_;
  double exact_trace_ = 0.0;
  MatrixXd VL_;  // eigenvectors scaled by sqrt(eigenvalue)
  MatrixXd Kq_;
  MatrixXd A_;
};

struct WassersteinRow {
  Eigen::Index n_train = 0;
  std::string method;
  double median = 0.0, q25 = 0.0, q75 = 0.0;
};

struct WassersteinConfig {
  std::vector<Eigen::Index> n_train_list{4, 16, 64, 256, 1024};
  Eigen::Index n_phi = 2000;
  int realizations = 20;  // trials: fresh training set + feature draw each
  Eigen::Index grid_n = 2000;
  double sigma_n = 1e-3;
  int fit_restarts = 3;
};

// Levy-function setup: training inputs drawn from the middle 20-60% band of
// the domain, outputs scaled by the function's min/max over the domain, exact
// posterior evaluated on an even grid of the normalized inputs. Each trial
// redraws the training set, refits, and draws one feature realization, so the
// medians average over data randomness as well as feature randomness.
inline std::vector<WassersteinRow> wasserstein_study(
    const WassersteinConfig& cfg, RngStream& rng) {
  const auto& levy = testbeds::so_benchmark("levy1");
  const double lo = levy.bounds(0, 0), hi = levy.bounds(0, 1);
  // min/max normalization constants over the domain
  double fmin = std::numeric_limits<double>::infinity(), fmax = -fmin;
  {
    const MatrixXd g = grid_1d(lo, hi, 200001);
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      const double v = levy.eval(g.row(i).transpose());
      fmin = std::min(fmin, v);
      fmax = std::max(fmax, v);
    }
  }
  const MatrixXd grid_norm = grid_1d(0.0, 1.0, cfg.grid_n);

  std::vector<WassersteinRow> rows;
  for (const Eigen::Index n : cfg.n_train_list) {
    std::vector<double> d_rff, d_pc;
    for (int trial = 0; trial < cfg.realizations; ++trial) {
      RngStream trial_rng = rng.split(1000 * (trial + 1) + n);
      MatrixXd Xn(n, 1);
      VectorXd y(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double x_raw =
            trial_rng.uniform(lo + 0.2 * (hi - lo), lo + 0.6 * (hi - lo));
        Xn(i, 0) = (x_raw - lo) / (hi - lo);
        y(i) = (levy.eval(VectorXd::Constant(1, x_raw)) - fmin) / (fmax - fmin);
      }
      Dataset data = Dataset::from_normalized(Xn, y);
      FittedGP gp = fit(data, KernelFamily::SquaredExponential, cfg.sigma_n,
                        cfg.fit_restarts, trial_rng);
      const WassersteinEvaluator ev(gp, grid_norm);
      const FeatureMap fm = build_rff(gp.kernel(), cfg.n_phi, trial_rng);
      d_rff.push_back(ev.rff_distance(fm));
      d_pc.push_back(ev.pc_distance(fm));
    }
    auto quant = [](std::vector<double> v, double q) {
      std::sort(v.begin(), v.end());
      const double pos = q * (v.size() - 1);
      const std::size_t i = static_cast<std::size_t>(pos);
      const std::size_t j = std::min(i + 1, v.size() - 1);
      return v[i] + (pos - i) * (v[j] - v[i]);
    };
    rows.push_back({n, "rff", quant(d_rff, 0.5), quant(d_rff, 0.25),
                    quant(d_rff, 0.75)});
    rows.push_back(
        {n, "pc", quant(d_pc, 0.5), quant(d_pc, 0.25), quant(d_pc, 0.75)});
  }
  return rows;
}

}  // namespace gpsamp::studies

#endif
