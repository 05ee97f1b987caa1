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

#ifndef GPSAMP_GAUSSIAN_HPP
#define GPSAMP_GAUSSIAN_HPP

#include <memory>
#include <mutex>
#include <optional>
#include <utility>

#include <Eigen/Dense>

#include "gpsamp/errors.hpp"
#include "gpsamp/rng.hpp"

namespace gpsamp {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct CholeskyResult {
  MatrixXd lower;
  double jitter = 0.0;  // total diagonal inflation actually applied
};

// Cholesky with an escalating jitter ladder: the requested jitter first, then
// 1e-10 * mean(diag) growing tenfold, at most 3 retries past the first
// non-zero rung. Throws NotPositiveDefinite when the ladder is exhausted.
inline CholeskyResult jittered_cholesky(const MatrixXd& cov,
                                        double jitter = 0.0) {
  require_dims(cov.rows() == cov.cols(), "jittered_cholesky: matrix not square");
  require(jitter >= 0.0, "jittered_cholesky: negative jitter");
  const Eigen::Index n = cov.rows();
  double base = cov.diagonal().mean();
  if (!(base > 0)) base = 1.0;
  double current = jitter;
  for (int attempt = 0; attempt < 5; ++attempt) {
    MatrixXd work = cov;
    if (current > 0) work.diagonal().array() += current;
    Eigen::LLT<MatrixXd> llt(work);
    if (llt.info() == Eigen::Success) {
      return {MatrixXd(llt.matrixL()), current};
    }
    current = (current == 0.0) ? 1e-10 * base : current * 10.0;
  }
  throw NotPositiveDefinite("jittered_cholesky: factorization failed after jitter ladder");
}

inline MatrixXd cholesky(const MatrixXd& cov, double jitter = 0.0) {
  return jittered_cholesky(cov, jitter).lower;
}

// Mean vector + covariance with a lazily cached lower Cholesky factor.
// Immutable after construction; the cache is guarded so concurrent readers
// can trigger the first factorization safely.
class GaussianDist {
 public:
  GaussianDist() = default;
  GaussianDist(VectorXd mean, MatrixXd cov)
      : mean_(std::move(mean)), cov_(std::move(cov)),
        cache_(std::make_shared<Cache>()) {
    require_dims(cov_.rows() == cov_.cols() && cov_.rows() == mean_.size(),
                 "GaussianDist: mean/cov dimension mismatch");
  }

  Eigen::Index dim() const { return mean_.size(); }
  const VectorXd& mean() const { return mean_; }
  const MatrixXd& cov() const { return cov_; }

  const MatrixXd& chol() const {
    std::call_once(cache_->once, [this] {
      cache_->result = jittered_cholesky(cov_, 0.0);
    });
    return cache_->result.lower;
  }
  double chol_jitter() const {
    chol();
    return cache_->result.jitter;
  }

 private:
  struct Cache {
    std::once_flag once;
    CholeskyResult result;
  };
  VectorXd mean_;
  MatrixXd cov_;
  std::shared_ptr<Cache> cache_;
};

// Joint Gaussian split into a leading block (size n1) and trailing block.
struct BlockGaussian {
  GaussianDist base;
  Eigen::Index n1 = 0;

  BlockGaussian(GaussianDist joint, Eigen::Index first_block)
      : base(std::move(joint)), n1(first_block) {
    require_dims(n1 >= 1 && n1 < base.dim(),
                 "BlockGaussian: invalid block split");
  }

  Eigen::Index n2() const { return base.dim() - n1; }
  VectorXd mean1() const { return base.mean().head(n1); }
  VectorXd mean2() const { return base.mean().tail(n2()); }
  MatrixXd sigma11() const { return base.cov().topLeftCorner(n1, n1); }
  MatrixXd sigma12() const { return base.cov().topRightCorner(n1, n2()); }
  MatrixXd sigma21() const { return base.cov().bottomLeftCorner(n2(), n1); }
  MatrixXd sigma22() const { return base.cov().bottomRightCorner(n2(), n2()); }
};

// rows are i.i.d. draws mean + L * e
inline MatrixXd sample_mvn(const GaussianDist& dist, Eigen::Index count,
                           RngStream& rng) {
  require(count >= 1, "sample_mvn: count must be >= 1");
  const Eigen::Index n = dist.dim();
  const MatrixXd& L = dist.chol();
  MatrixXd out(count, n);
  VectorXd e(n);
  for (Eigen::Index r = 0; r < count; ++r) {
    for (Eigen::Index i = 0; i < n; ++i) e(i) = rng.normal();
    out.row(r) = (dist.mean() + L * e).transpose();
  }
  return out;
}

// Conditional N(mu_{2|1}, Sigma_{2|1}) of the trailing block given the leading
// block equals `observed`. The conditional covariance does not depend on the
// observed value.
inline GaussianDist condition(const BlockGaussian& joint,
                              const VectorXd& observed) {
  require_dims(observed.size() == joint.n1,
               "condition: observed length != first block size");
  const MatrixXd s11 = joint.sigma11();
  const MatrixXd s12 = joint.sigma12();
  const MatrixXd s21 = joint.sigma21();
  const CholeskyResult ch = jittered_cholesky(s11, 0.0);
  Eigen::LLT<MatrixXd> llt;
  MatrixXd s11j = s11;
  if (ch.jitter > 0) s11j.diagonal().array() += ch.jitter;
  llt.compute(s11j);
  VectorXd mu = joint.mean2() + s21 * llt.solve(observed - joint.mean1());
  MatrixXd cov = joint.sigma22() - s21 * llt.solve(s12);
  cov = 0.5 * (cov + cov.transpose()).eval();
  return GaussianDist(std::move(mu), std::move(cov));
}

namespace detail {
// update rule applied to one joint draw (f1, f2):
//   f2 + Sigma21 Sigma11^{-1} (observed - f1)
inline VectorXd matheron_update(const BlockGaussian& joint,
                                const VectorXd& joint_draw,
                                const VectorXd& observed) {
  require_dims(joint_draw.size() == joint.base.dim(),
               "matheron_update: draw has wrong length");
  require_dims(observed.size() == joint.n1,
               "matheron_update: observed length != first block size");
  MatrixXd s11 = joint.sigma11();
  const CholeskyResult ch = jittered_cholesky(s11, 0.0);
  if (ch.jitter > 0) s11.diagonal().array() += ch.jitter;
  Eigen::LLT<MatrixXd> llt(s11);
  const VectorXd f1 = joint_draw.head(joint.n1);
  const VectorXd f2 = joint_draw.tail(joint.n2());
  return f2 + joint.sigma21() * llt.solve(observed - f1);
}
}  // namespace detail

// Conditional sample without forming the conditional distribution: draw from
// the joint, then shift by the update rule.
inline VectorXd matheron_conditional_sample(const BlockGaussian& joint,
                                            const VectorXd& observed,
                                            RngStream& rng) {
  const MatrixXd draw = sample_mvn(joint.base, 1, rng);
  return detail::matheron_update(joint, draw.row(0).transpose(), observed);
}

}  // namespace gpsamp

#endif
