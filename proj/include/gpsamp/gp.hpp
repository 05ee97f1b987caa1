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

#ifndef GPSAMP_GP_HPP
#define GPSAMP_GP_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gpsamp/dataset.hpp"
#include "gpsamp/detail/lbfgs.hpp"
#include "gpsamp/errors.hpp"
#include "gpsamp/gaussian.hpp"
#include "gpsamp/kernels.hpp"

namespace gpsamp {

namespace detail {

struct KernelMatrices {
  MatrixXd K;                   // noise-free gram
  Eigen::LLT<MatrixXd> llt;     // factor of K + (sigma_n^2 + jitter) I
  double jitter = 0.0;
  double log_det_half = 0.0;    // sum log L_ii
};

inline KernelMatrices factor_train_gram(const KernelSpec& spec,
                                        const MatrixXd& X, double sigma_n) {
  KernelMatrices km;
  km.K = kernel_gram(spec, X, X, 0.0);
  MatrixXd C = km.K;
  C.diagonal().array() += sigma_n * sigma_n;
  const CholeskyResult ch = jittered_cholesky(C, 0.0);
  km.jitter = ch.jitter;
  if (ch.jitter > 0) C.diagonal().array() += ch.jitter;
  km.llt.compute(C);
  if (km.llt.info() != Eigen::Success)
    throw NotPositiveDefinite("factor_train_gram: LLT failed");
  km.log_det_half =
      MatrixXd(km.llt.matrixL()).diagonal().array().log().sum();
  return km;
}

}  // namespace detail

inline double log_marginal_likelihood(const Dataset& data,
                                      const KernelSpec& spec, double sigma_n) {
  require_dims(data.dim() == spec.dim(), "lml: kernel/data dimension mismatch");
  const auto km = detail::factor_train_gram(spec, data.X(), sigma_n);
  const VectorXd alpha = km.llt.solve(data.y());
  const double n = static_cast<double>(data.size());
  return -0.5 * data.y().dot(alpha) - km.log_det_half -
         0.5 * n * std::log(2.0 * M_PI);
}

namespace detail {

// lml and gradient in log-hyperparameters [log sigma_f, log l_1..d, (log
// sigma_n)]; gradient entries are d lml / d theta.
inline double lml_with_grad(const Dataset& data, KernelFamily family,
                            const VectorXd& theta, bool fit_noise,
                            double fixed_sigma_n, VectorXd& grad) {
  const Eigen::Index d = data.dim();
  const double sigma_f = std::exp(theta(0));
  VectorXd ls = theta.segment(1, d).array().exp();
  const double sigma_n =
      fit_noise ? std::exp(theta(1 + d)) : fixed_sigma_n;
  KernelSpec spec(family, sigma_f, ls);
  const auto km = factor_train_gram(spec, data.X(), sigma_n);
  const Eigen::Index n = data.size();
  const VectorXd alpha = km.llt.solve(data.y());
  const double lml = -0.5 * data.y().dot(alpha) - km.log_det_half -
                     0.5 * n * std::log(2.0 * M_PI);
  const MatrixXd Cinv = km.llt.solve(MatrixXd::Identity(n, n));
  // W = alpha alpha^T - C^{-1}; grad_j = tr(W dC/dtheta_j) / 2
  const MatrixXd W = alpha * alpha.transpose() - Cinv;
  grad.resize(theta.size());
  grad(0) = (W.array() * km.K.array()).sum();  // dC/dlog sf = 2K, halves cancel
  // per-dimension scaled squared differences
  const MatrixXd& X = data.X();
  for (Eigen::Index j = 0; j < d; ++j) {
    const VectorXd xj = X.col(j);
    MatrixXd D = (xj.replicate(1, n) - xj.transpose().replicate(n, 1));
    D = D.array().square() / (ls(j) * ls(j));
    MatrixXd dK(n, n);
    if (family == KernelFamily::SquaredExponential) {
      dK = km.K.array() * D.array();
    } else {
      // recover r from the full scaled distance
      MatrixXd R2 = MatrixXd::Zero(n, n);
      for (Eigen::Index q = 0; q < d; ++q) {
        const VectorXd xq = X.col(q);
        MatrixXd Dq = (xq.replicate(1, n) - xq.transpose().replicate(n, 1));
        R2 += (Dq.array().square() / (ls(q) * ls(q))).matrix();
      }
      Eigen::ArrayXXd r = R2.array().max(0.0).sqrt();
      const double sf2 = sigma_f * sigma_f;
      if (family == KernelFamily::Matern32) {
        dK = (3.0 * sf2 * (-std::sqrt(3.0) * r).exp() * D.array()).matrix();
      } else {
        dK = ((5.0 / 3.0) * sf2 * (1.0 + std::sqrt(5.0) * r) *
              (-std::sqrt(5.0) * r).exp() * D.array())
                 .matrix();
      }
    }
    grad(1 + j) = 0.5 * (W.array() * dK.array()).sum();
  }
  if (fit_noise)
    grad(1 + d) = sigma_n * sigma_n * W.trace();
  return lml;
}

}  // namespace detail

// Trained regression state: data snapshot, kernel, and the factorized
// C = K + sigma_n^2 I with alpha = C^{-1} y.
class FittedGP {
 public:
  FittedGP() = default;
  FittedGP(Dataset data, KernelSpec spec, double sigma_n)
      : data_(std::move(data)), spec_(std::move(spec)), sigma_n_(sigma_n) {
    require_dims(data_.dim() == spec_.dim(),
                 "FittedGP: kernel/data dimension mismatch");
    auto km = detail::factor_train_gram(spec_, data_.X(), sigma_n_);
    llt_ = std::move(km.llt);
    jitter_ = km.jitter;
    alpha_ = llt_.solve(data_.y());
    log_lik_ = -0.5 * data_.y().dot(alpha_) - km.log_det_half -
               0.5 * data_.size() * std::log(2.0 * M_PI);
  }

  const Dataset& data() const { return data_; }
  const KernelSpec& kernel() const { return spec_; }
  double sigma_n() const { return sigma_n_; }
  double jitter() const { return jitter_; }
  double log_likelihood() const { return log_lik_; }
  const VectorXd& alpha() const { return alpha_; }
  const Eigen::LLT<MatrixXd>& chol_C() const { return llt_; }

  // posterior over normalized-space queries (rows of Xq)
  GaussianDist predict(const MatrixXd& Xq) const {
    require_dims(Xq.cols() == data_.dim(), "predict: dimension mismatch");
    const MatrixXd Kq = kernel_gram(spec_, data_.X(), Xq);  // N x Nq
    VectorXd mu = Kq.transpose() * alpha_;
    MatrixXd cov = kernel_gram(spec_, Xq, Xq) - Kq.transpose() * llt_.solve(Kq);
    cov = 0.5 * (cov + cov.transpose()).eval();
    cov.diagonal() = cov.diagonal().cwiseMax(0.0);
    return GaussianDist(std::move(mu), std::move(cov));
  }

  // mean/variance at a single point, with optional gradients
  void predict_point(const VectorXd& x, double& mu, double& var,
                     VectorXd* dmu = nullptr, VectorXd* dvar = nullptr) const {
    const Eigen::Index n = data_.size();
    VectorXd kx(n);
    for (Eigen::Index i = 0; i < n; ++i)
      kx(i) = kernel_eval(spec_, x, data_.X().row(i).transpose());
    mu = kx.dot(alpha_);
    const VectorXd cinv_kx = llt_.solve(kx);
    var = kernel_eval(spec_, x, x) - kx.dot(cinv_kx);
    if (var < 0) var = 0;
    if (dmu || dvar) {
      MatrixXd J(n, data_.dim());  // rows: d kappa(x, x_i) / dx
      for (Eigen::Index i = 0; i < n; ++i)
        J.row(i) =
            kernel_grad_x(spec_, x, data_.X().row(i).transpose()).transpose();
      if (dmu) *dmu = J.transpose() * alpha_;
      if (dvar) *dvar = -2.0 * J.transpose() * cinv_kx;
    }
  }

 private:
  Dataset data_;
  KernelSpec spec_;
  double sigma_n_ = 0.0;
  Eigen::LLT<MatrixXd> llt_;
  double jitter_ = 0.0;
  VectorXd alpha_;
  double log_lik_ = -std::numeric_limits<double>::infinity();
};

struct FitOptions {
  int restarts = 10;
  int max_iter = 200;
  double grad_tol = 1e-8;
  bool fit_noise = false;
  // log-space search box, in normalized input/output units
  double log_ls_lo = std::log(1e-3), log_ls_hi = std::log(1e2);
  double log_sf_lo = std::log(1e-3), log_sf_hi = std::log(1e3);
  double log_sn_lo = std::log(1e-6), log_sn_hi = std::log(1.0);
  std::optional<VectorXd> warm_start;  // [log sf, log l.., (log sn)]
};

// Multi-start MLE over log hyperparameters: Latin-hypercube restarts plus an
// optional warm start; best objective wins.
inline FittedGP fit(const Dataset& data, KernelFamily family, double sigma_n,
                    int restarts, RngStream& rng, const FitOptions& opt_in = {}) {
  FitOptions opt = opt_in;
  opt.restarts = restarts;
  require(opt.restarts >= 1, "fit: restarts must be >= 1");
  const Eigen::Index d = data.dim();
  const Eigen::Index p = 1 + d + (opt.fit_noise ? 1 : 0);
  VectorXd lo(p), hi(p);
  lo(0) = opt.log_sf_lo;
  hi(0) = opt.log_sf_hi;
  lo.segment(1, d).setConstant(opt.log_ls_lo);
  hi.segment(1, d).setConstant(opt.log_ls_hi);
  if (opt.fit_noise) {
    lo(p - 1) = opt.log_sn_lo;
    hi(p - 1) = opt.log_sn_hi;
  }

  auto objective = [&](const VectorXd& theta, VectorXd& grad) -> double {
    VectorXd g;
    double lml;
    try {
      lml = detail::lml_with_grad(data, family, theta, opt.fit_noise, sigma_n, g);
    } catch (const NotPositiveDefinite&) {
      grad = VectorXd::Zero(theta.size());
      return std::numeric_limits<double>::infinity();
    }
    grad = -g;
    return -lml;
  };

  // Latin hypercube start points over the log box
  std::vector<VectorXd> starts;
  if (opt.warm_start) {
    VectorXd w = *opt.warm_start;
    require_dims(w.size() == p, "fit: warm start has wrong length");
    starts.push_back(w.cwiseMax(lo).cwiseMin(hi));
  }
  {
    const int m = opt.restarts;
    MatrixXd lhs(m, p);
    for (Eigen::Index j = 0; j < p; ++j) {
      std::vector<int> perm(m);
      for (int i = 0; i < m; ++i) perm[i] = i;
      for (int i = m - 1; i > 0; --i)
        std::swap(perm[i], perm[rng.uniform_index(i + 1)]);
      for (int i = 0; i < m; ++i)
        lhs(i, j) = (perm[i] + rng.uniform()) / m;
    }
    for (int i = 0; i < m; ++i)
      starts.push_back(lo + lhs.row(i).transpose().cwiseProduct(hi - lo));
  }

  detail::LbfgsOptions lopt;
  lopt.max_iter = opt.max_iter;
  lopt.grad_tol = opt.grad_tol;
  double best_f = std::numeric_limits<double>::infinity();
  VectorXd best_theta;
  for (const auto& s : starts) {
    auto r = detail::minimize_box(objective, s, lo, hi, lopt);
    if (std::isfinite(r.f) && r.f < best_f) {
      best_f = r.f;
      best_theta = r.x;
    }
  }
  if (!std::isfinite(best_f))
    throw FitFailed("fit: no restart produced a finite objective");

  const double sf = std::exp(best_theta(0));
  VectorXd ls = best_theta.segment(1, d).array().exp();
  const double sn = opt.fit_noise ? std::exp(best_theta(p - 1)) : sigma_n;
  return FittedGP(data, KernelSpec(family, sf, ls), sn);
}

// Gaussian over feature weights given observations y = Phi w + noise.
struct WeightPosterior {
  VectorXd mean;
  MatrixXd cov;
};

// mu = (Phi^T Phi + sn^2 I)^{-1} Phi^T y, Sigma = sn^2 (Phi^T Phi + sn^2 I)^{-1}.
// With use_smw the same quantities go through the N x N system
// M = Phi Phi^T + sn^2 I, the cheaper route when N_phi >> N.
inline WeightPosterior weight_posterior(const MatrixXd& Phi, const VectorXd& y,
                                        double sigma_n, bool use_smw = false) {
  require(sigma_n > 0, "weight_posterior: sigma_n must be positive");
  require_dims(Phi.rows() == y.size(), "weight_posterior: Phi/y mismatch");
  const Eigen::Index nphi = Phi.cols();
  const double sn2 = sigma_n * sigma_n;
  WeightPosterior wp;
  if (!use_smw) {
    MatrixXd A = Phi.transpose() * Phi;
    A.diagonal().array() += sn2;
    const CholeskyResult ch = jittered_cholesky(A, 0.0);
    if (ch.jitter > 0) A.diagonal().array() += ch.jitter;
    Eigen::LLT<MatrixXd> llt(A);
    wp.mean = llt.solve(Phi.transpose() * y);
    wp.cov = sn2 * llt.solve(MatrixXd::Identity(nphi, nphi));
  } else {
    MatrixXd M = Phi * Phi.transpose();
    M.diagonal().array() += sn2;
    const CholeskyResult ch = jittered_cholesky(M, 0.0);
    if (ch.jitter > 0) M.diagonal().array() += ch.jitter;
    Eigen::LLT<MatrixXd> llt(M);
    wp.mean = Phi.transpose() * llt.solve(y);
    wp.cov = MatrixXd::Identity(nphi, nphi) -
             Phi.transpose() * llt.solve(Phi);
  }
  wp.cov = 0.5 * (wp.cov + wp.cov.transpose()).eval();
  return wp;
}

// One draw w ~ N(mu_w, Sigma_w). The accelerated route shifts a prior draw by
// the weight-space update through the N x N factor instead of factorizing the
// N_phi x N_phi posterior covariance.
inline VectorXd draw_weight_sample(const MatrixXd& Phi, const VectorXd& y,
                                   double sigma_n, RngStream& rng,
                                   bool accelerated = false) {
  const Eigen::Index nphi = Phi.cols();
  const Eigen::Index n = Phi.rows();
  if (!accelerated) {
    const WeightPosterior wp = weight_posterior(Phi, y, sigma_n, false);
    const MatrixXd L = cholesky(wp.cov, 1e-14);
    return wp.mean + L * rng.normal_vector(nphi);
  }
  const double sn2 = sigma_n * sigma_n;
  const VectorXd w0 = rng.normal_vector(nphi);
  const VectorXd eps = sigma_n * rng.normal_vector(n);
  MatrixXd M = Phi * Phi.transpose();
  M.diagonal().array() += sn2;
  const CholeskyResult ch = jittered_cholesky(M, 0.0);
  if (ch.jitter > 0) M.diagonal().array() += ch.jitter;
  Eigen::LLT<MatrixXd> llt(M);
  return w0 + Phi.transpose() * llt.solve(y - Phi * w0 - eps);
}

}  // namespace gpsamp

#endif
