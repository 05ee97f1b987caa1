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

#ifndef GPSAMP_PATHS_HPP
#define GPSAMP_PATHS_HPP

#include <cmath>
#include <memory>
#include <optional>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "gpsamp/features.hpp"
#include "gpsamp/gp.hpp"

namespace gpsamp {

enum class PathKind { WeightSpace, Pathwise };

// Kernel-weighted data correction attached to a pathwise-conditioned draw:
// update(x) = sum_i v_i kappa(x, x_i) with v = C^{-1}(y - f - eps).
struct PcUpdate {
  MatrixXd X_train;
  VectorXd v;
  KernelSpec kernel;
};

// A deterministic, differentiable function drawn from a GP prior or
// posterior. Evaluation at equal inputs is bit-identical; all randomness is
// spent at draw time.
class SamplePath {
 public:
  SamplePath(PathKind kind, std::shared_ptr<const FeatureMap> features,
             VectorXd weights, std::optional<PcUpdate> update = std::nullopt)
      : kind_(kind), features_(std::move(features)), w_(std::move(weights)),
        update_(std::move(update)) {
    require_dims(w_.size() == features_->count(),
                 "SamplePath: weight/feature size mismatch");
  }

  PathKind kind() const { return kind_; }
  const FeatureMap& features() const { return *features_; }
  const VectorXd& weights() const { return w_; }
  const std::optional<PcUpdate>& update() const { return update_; }
  Eigen::Index dim() const { return features_->dim(); }

  double value(const VectorXd& x) const {
    double v = features_->eval(x).dot(w_);
    if (update_) {
      const Eigen::Index n = update_->X_train.rows();
      for (Eigen::Index i = 0; i < n; ++i)
        v += update_->v(i) *
             kernel_eval(update_->kernel, x, update_->X_train.row(i).transpose());
    }
    return v;
  }

  VectorXd values(const MatrixXd& X) const {
    // block-wise so the feature buffer stays cache-resident
    const Eigen::Index n = X.rows();
    constexpr Eigen::Index kBlock = 256;
    VectorXd out(n);
    for (Eigen::Index start = 0; start < n; start += kBlock) {
      const Eigen::Index b = std::min(kBlock, n - start);
      const MatrixXd Xb = X.middleRows(start, b);
      out.segment(start, b) = features_->eval_rows(Xb) * w_;
      if (update_)
        out.segment(start, b) +=
            kernel_gram(update_->kernel, Xb, update_->X_train) * update_->v;
    }
    return out;
  }

  VectorXd gradient(const VectorXd& x) const {
    VectorXd g = features_->grad(x).transpose() * w_;
    if (update_) {
      const Eigen::Index n = update_->X_train.rows();
      for (Eigen::Index i = 0; i < n; ++i)
        g += update_->v(i) * kernel_grad_x(update_->kernel, x,
                                           update_->X_train.row(i).transpose());
    }
    return g;
  }

  // value and gradient in one pass (shared trig evaluation)
  double value_and_gradient(const VectorXd& x, VectorXd& grad) const {
    double val;
    if (features_->kind == FeatureKind::Rff ||
        features_->kind == FeatureKind::Qmc) {
      VectorXd t = features_->omega * x + features_->phase;
      VectorXd s(t.size()), c(t.size());
      fastmath::sincos_array(t.data(), s.data(), c.data(), t.size());
      const double scale = features_->trig_scale();
      val = scale * c.dot(w_);
      grad = (-scale) * (features_->omega.transpose() * s.cwiseProduct(w_));
    } else {
      val = features_->eval(x).dot(w_);
      grad = features_->grad(x).transpose() * w_;
    }
    if (update_) {
      const Eigen::Index n = update_->X_train.rows();
      for (Eigen::Index i = 0; i < n; ++i) {
        const VectorXd xi = update_->X_train.row(i).transpose();
        val += update_->v(i) * kernel_eval(update_->kernel, x, xi);
        grad += update_->v(i) * kernel_grad_x(update_->kernel, x, xi);
      }
    }
    return val;
  }

 private:
  PathKind kind_;
  std::shared_ptr<const FeatureMap> features_;
  VectorXd w_;
  std::optional<PcUpdate> update_;
};

inline VectorXd path_eval(const SamplePath& path, const MatrixXd& Xq) {
  return path.values(Xq);
}

inline VectorXd path_grad(const SamplePath& path, const VectorXd& x) {
  return path.gradient(x);
}

// prior draw: w ~ N(0, I)
inline SamplePath draw_prior_path(std::shared_ptr<const FeatureMap> fmap,
                                  RngStream& rng) {
  VectorXd w = rng.normal_vector(fmap->count());
  return SamplePath(PathKind::WeightSpace, std::move(fmap), std::move(w));
}

// posterior draw in weight space: w ~ N(mu_w, Sigma_w) from the feature
// regression on the training set; path(x) = w . phi(x). `accelerated` routes
// the draw through the N x N system.
inline SamplePath draw_weight_space_path(const FittedGP& gp,
                                         std::shared_ptr<const FeatureMap> fmap,
                                         RngStream& rng,
                                         bool accelerated = false) {
  require(gp.sigma_n() > 0,
          "draw_weight_space_path: sigma_n must be positive");
  const MatrixXd Phi = fmap->eval_rows(gp.data().X());
  VectorXd w = draw_weight_sample(Phi, gp.data().y(), gp.sigma_n(), rng,
                                  accelerated);
  return SamplePath(PathKind::WeightSpace, std::move(fmap), std::move(w));
}

// pathwise conditioning: prior path plus the kernel-weighted residual
// correction v = C^{-1}(y - f - eps), f the prior at the training inputs.
inline SamplePath draw_pathwise_path(const FittedGP& gp,
                                     std::shared_ptr<const FeatureMap> fmap,
                                     RngStream& rng) {
  const Eigen::Index n = gp.data().size();
  VectorXd w = rng.normal_vector(fmap->count());
  VectorXd eps(n);
  for (Eigen::Index i = 0; i < n; ++i) eps(i) = gp.sigma_n() * rng.normal();
  const VectorXd f = fmap->eval_rows(gp.data().X()) * w;
  PcUpdate up;
  up.X_train = gp.data().X();
  up.kernel = gp.kernel();
  up.v = gp.chol_C().solve(gp.data().y() - f - eps);
  return SamplePath(PathKind::Pathwise, std::move(fmap), std::move(w),
                    std::move(up));
}

// draws from the exact finite-dimensional posterior at the query points;
// cubic in |Xq|
inline MatrixXd exhaustive_sample(const FittedGP& gp, const MatrixXd& Xq,
                                  Eigen::Index count, RngStream& rng) {
  const GaussianDist post = gp.predict(Xq);
  return sample_mvn(post, count, rng);
}

namespace detail {
// symmetric PSD square root with negative eigenvalues clipped to zero
inline MatrixXd psd_sqrt(const MatrixXd& S) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(S);
  VectorXd lam = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * lam.asDiagonal() *
         eig.eigenvectors().transpose();
}
}  // namespace detail

// 2-Wasserstein distance between Gaussians:
//   d^2 = |m1 - m2|^2 + tr(S1 + S2 - 2 (S1^{1/2} S2 S1^{1/2})^{1/2})
inline double wasserstein2(const GaussianDist& exact,
                           const VectorXd& approx_mean,
                           const MatrixXd& approx_cov) {
  require_dims(approx_mean.size() == exact.dim() &&
                   approx_cov.rows() == exact.dim() &&
                   approx_cov.cols() == exact.dim(),
               "wasserstein2: dimension mismatch");
  const MatrixXd root = detail::psd_sqrt(exact.cov());
  const MatrixXd inner = root * approx_cov * root;
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(inner);
  const double cross = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  const double d2 = (exact.mean() - approx_mean).squaredNorm() +
                    exact.cov().trace() + approx_cov.trace() - 2.0 * cross;
  return std::sqrt(std::max(0.0, d2));
}

}  // namespace gpsamp

#endif
