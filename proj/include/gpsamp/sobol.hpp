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

#ifndef GPSAMP_SOBOL_HPP
#define GPSAMP_SOBOL_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gpsamp/errors.hpp"
#include "gpsamp/fastmath.hpp"
#include "gpsamp/paths.hpp"

namespace gpsamp {

struct Marginal {
  enum class Kind { Uniform, Gaussian } kind = Kind::Uniform;
  double a = 0.0;  // lower (Uniform) or mean (Gaussian)
  double b = 1.0;  // upper (Uniform) or std (Gaussian)

  static Marginal uniform(double lo, double hi) {
    if (!(lo < hi)) throw InvalidDistribution("Marginal: lower must be < upper");
    return {Kind::Uniform, lo, hi};
  }
  static Marginal gaussian_std(double mean, double std) {
    if (!(std > 0)) throw InvalidDistribution("Marginal: std must be > 0");
    return {Kind::Gaussian, mean, std};
  }
  // coefficient-of-variation form: std = mean * cov
  static Marginal gaussian_cov(double mean, double cov) {
    return gaussian_std(mean, std::abs(mean) * cov);
  }

  double sample(RngStream& rng) const {
    return kind == Kind::Uniform ? rng.uniform(a, b) : a + b * rng.normal();
  }
  double mean() const { return kind == Kind::Uniform ? 0.5 * (a + b) : a; }
  double lo_cover(double k_sigma) const {
    return kind == Kind::Uniform ? a : a - k_sigma * b;
  }
  double hi_cover(double k_sigma) const {
    return kind == Kind::Uniform ? b : a + k_sigma * b;
  }
};

// independent marginals
class InputDistribution {
 public:
  InputDistribution() = default;
  explicit InputDistribution(std::vector<Marginal> m) : m_(std::move(m)) {
    require(!m_.empty(), "InputDistribution: empty marginal list");
  }
  Eigen::Index dim() const { return static_cast<Eigen::Index>(m_.size()); }
  const Marginal& marginal(Eigen::Index i) const { return m_[i]; }

  MatrixXd sample_matrix(Eigen::Index n, RngStream& rng) const {
    MatrixXd X(n, dim());
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index j = 0; j < dim(); ++j) X(r, j) = m_[j].sample(rng);
    return X;
  }

  // covering box for training-set normalization; Gaussians use +-k sigma
  MatrixXd cover_bounds(double k_sigma = 4.0) const {
    MatrixXd b(dim(), 2);
    for (Eigen::Index j = 0; j < dim(); ++j) {
      b(j, 0) = m_[j].lo_cover(k_sigma);
      b(j, 1) = m_[j].hi_cover(k_sigma);
    }
    return b;
  }

 private:
  std::vector<Marginal> m_;
};

// the paired base matrices; the column-swapped hybrids are materialized on
// demand
struct PickFreezeMatrices {
  MatrixXd A;
  MatrixXd B;

  Eigen::Index n() const { return A.rows(); }
  Eigen::Index dim() const { return A.cols(); }
  MatrixXd hybrid(Eigen::Index i) const {
    MatrixXd M = A;
    M.col(i) = B.col(i);
    return M;
  }
};

inline PickFreezeMatrices generate_pick_freeze(const InputDistribution& dist,
                                               Eigen::Index n_x,
                                               RngStream& rng) {
  require(n_x >= 2, "generate_pick_freeze: n_x must be >= 2");
  PickFreezeMatrices pf;
  pf.A = dist.sample_matrix(n_x, rng);
  pf.B = dist.sample_matrix(n_x, rng);
  return pf;
}

namespace detail {
// Pooled mean and sample variance of [cA; cB]. All evaluations are centered
// by the pooled mean before the estimator sums run, which keeps the index
// ratios exactly invariant under output shifts.
struct PooledStats {
  double mean = 0.0;
  double variance = 0.0;
};

inline PooledStats pooled_stats(const VectorXd& cA, const VectorXd& cB) {
  PooledStats s;
  const Eigen::Index n = cA.size() + cB.size();
  s.mean = (cA.sum() + cB.sum()) / static_cast<double>(n);
  s.variance = ((cA.array() - s.mean).square().sum() +
                (cB.array() - s.mean).square().sum()) /
               static_cast<double>(n - 1);
  return s;
}

// first-order and total-effect ratios from the three centered evaluation
// vectors; hybrid column i shared with B
inline std::pair<double, double> indices_from_vectors(const VectorXd& cA,
                                                      const VectorXd& cB,
                                                      const VectorXd& cABi,
                                                      const PooledStats& st) {
  const double n = static_cast<double>(cA.size());
  const double vi =
      ((cB.array() - st.mean) * (cABi - cA).array()).sum() / n;
  const double ei = (cA - cABi).squaredNorm() / (2.0 * n);
  return {vi / st.variance, ei / st.variance};
}
}  // namespace detail

// Monte Carlo pick-freeze estimate on a directly evaluable model.
// fn maps a parameter row to a scalar.
inline std::pair<VectorXd, VectorXd> estimate_indices(
    const std::function<double(const VectorXd&)>& fn,
    const PickFreezeMatrices& pf) {
  const Eigen::Index n = pf.n(), d = pf.dim();
  VectorXd cA(n), cB(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    cA(r) = fn(pf.A.row(r).transpose());
    cB(r) = fn(pf.B.row(r).transpose());
  }
  const detail::PooledStats stats = detail::pooled_stats(cA, cB);
  if (!(stats.variance > 1e-12))
    throw DegenerateVariance("estimate_indices: output variance below 1e-12");
  VectorXd S(d), ST(d), cABi(n);
  VectorXd row;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index r = 0; r < n; ++r) {
      row = pf.A.row(r).transpose();
      row(i) = pf.B(r, i);
      cABi(r) = fn(row);
    }
    auto [s, st] = detail::indices_from_vectors(cA, cB, cABi, stats);
    S(i) = s;
    ST(i) = st;
  }
  return {S, ST};
}

enum class PathSampler { Rff, Pathwise };

struct SensitivityResult {
  MatrixXd S;         // d x (n_s * pairs) flattened per-dimension values
  MatrixXd ST;        // same layout
  VectorXd S_median, S_iqr;
  VectorXd ST_median, ST_iqr;
  Eigen::Index excluded_paths = 0;

  void finalize() {
    const Eigen::Index d = S.rows();
    S_median.resize(d);
    S_iqr.resize(d);
    ST_median.resize(d);
    ST_iqr.resize(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      S_median(i) = quantile(S.row(i), 0.5);
      S_iqr(i) = quantile(S.row(i), 0.75) - quantile(S.row(i), 0.25);
      ST_median(i) = quantile(ST.row(i), 0.5);
      ST_iqr(i) = quantile(ST.row(i), 0.75) - quantile(ST.row(i), 0.25);
    }
  }

  static double quantile(const Eigen::RowVectorXd& row, double q) {
    std::vector<double> v(row.data(), row.data() + row.size());
    std::sort(v.begin(), v.end());
    const double pos = q * (v.size() - 1);
    const size_t lo = static_cast<size_t>(pos);
    const size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - lo) * (v[hi] - v[lo]);
  }
};

namespace detail {

// Single-precision batch evaluator for one sample path over large normalized
// point sets. Feature products run as float GEMM + polynomial cos; sums that
// feed the estimators are accumulated in double.
class PathBatchEvaluator {
 public:
  explicit PathBatchEvaluator(const SamplePath& path) {
    const FeatureMap& fm = path.features();
    require(fm.kind == FeatureKind::Rff || fm.kind == FeatureKind::Qmc,
            "PathBatchEvaluator: trigonometric feature maps only");
    omega_t_ = fm.omega.transpose().cast<float>();
    phase_ = fm.phase.transpose().cast<float>();
    w_ = (path.weights() * fm.trig_scale()).cast<float>();
    if (path.update()) {
      has_update_ = true;
      const PcUpdate& up = *path.update();
      v_ = up.v.cast<float>();
      kernel_ = up.kernel;
      inv_l_ = up.kernel.lengthscales.array().inverse().cast<float>();
      Xt_s_ = up.X_train.transpose().cast<float>();
      Xt_s_ = Xt_s_.array().colwise() * inv_l_.array();
      xt_sq_ = Xt_s_.colwise().squaredNorm();
    }
  }

  // values of the path at rows of Xn (normalized space, float)
  VectorXd eval(const Eigen::MatrixXf& Xn) const {
    const Eigen::Index n = Xn.rows();
    VectorXd out(n);
    constexpr Eigen::Index kBlock = 1024;
    Eigen::MatrixXf T;
    Eigen::MatrixXf Xs;
    for (Eigen::Index start = 0; start < n; start += kBlock) {
      const Eigen::Index b = std::min(kBlock, n - start);
      const auto Xb = Xn.middleRows(start, b);
      T.noalias() = Xb * omega_t_;
      T.rowwise() += phase_;
      fastmath::cos_array_f(T.data(), T.data(), T.size());
      Eigen::VectorXf vals = T * w_;
      if (has_update_) {
        // scaled squared distances to the training set
        Xs = Xb.array().rowwise() * inv_l_.transpose().array();
        Eigen::MatrixXf Q = -2.0f * (Xs * Xt_s_);
        Q.colwise() += Xs.rowwise().squaredNorm();
        Q.rowwise() += xt_sq_;
        Q = Q.cwiseMax(0.0f);
        apply_kernel(Q);
        vals += Q * v_;
      }
      out.segment(start, b) = vals.cast<double>();
    }
    return out;
  }

 private:
  void apply_kernel(Eigen::MatrixXf& Q) const {
    const float sf2 = static_cast<float>(kernel_.sigma_f * kernel_.sigma_f);
    if (kernel_.family == KernelFamily::SquaredExponential) {
      Q *= -0.5f;
      fastmath::exp_array_f(Q.data(), Q.data(), Q.size());
      Q *= sf2;
      return;
    }
    const float cnu = kernel_.family == KernelFamily::Matern32
                          ? std::sqrt(3.0f)
                          : std::sqrt(5.0f);
    const bool m32 = kernel_.family == KernelFamily::Matern32;
    float* q = Q.data();
    const Eigen::Index sz = Q.size();
    for (Eigen::Index i = 0; i < sz; ++i) {
      const float s = cnu * std::sqrt(q[i]);
      q[i] = m32 ? (1.0f + s) : (1.0f + s + s * s / 3.0f);
      q[i] *= std::exp(-s);
    }
    Q *= sf2;
  }

  Eigen::MatrixXf omega_t_;  // d x N_phi
  Eigen::RowVectorXf phase_;
  Eigen::VectorXf w_;
  bool has_update_ = false;
  Eigen::MatrixXf Xt_s_;  // lengthscale-scaled training inputs, d x N_train
  Eigen::RowVectorXf xt_sq_;
  Eigen::VectorXf v_;
  KernelSpec kernel_;
  Eigen::VectorXf inv_l_;
};

}  // namespace detail

struct GsaOptions {
  Eigen::Index n_phi = 2000;
  PathSampler sampler = PathSampler::Rff;
  Eigen::Index pairs = 10;
  bool accelerated_weights = false;  // SMW route for the weight draw
  int threads = 1;
};

// Sensitivity indices from GP posterior sample paths: for every path and every
// pick-freeze pair, run the estimators on the path values; all values are
// flattened per dimension. Degenerate-variance paths are excluded and counted.
inline SensitivityResult gp_gsa(const FittedGP& gp,
                                const InputDistribution& dist,
                                Eigen::Index n_x, Eigen::Index n_s,
                                const GsaOptions& opt, RngStream& rng) {
  require(n_s >= 1, "gp_gsa: n_s must be >= 1");
  require(opt.pairs >= 1, "gp_gsa: need at least one pick-freeze pair");
  require_dims(dist.dim() == gp.data().dim(),
               "gp_gsa: distribution dimension mismatch");
  const Eigen::Index d = dist.dim();

  // pick-freeze pairs in the GP's normalized input space, single precision
  std::vector<Eigen::MatrixXf> An(opt.pairs), Bn(opt.pairs);
  for (Eigen::Index p = 0; p < opt.pairs; ++p) {
    RngStream pf_rng = rng.split(500 + p);
    PickFreezeMatrices pf = generate_pick_freeze(dist, n_x, pf_rng);
    An[p] = gp.data().to_normalized_rows(pf.A).cast<float>();
    Bn[p] = gp.data().to_normalized_rows(pf.B).cast<float>();
  }

  const Eigen::Index total = n_s * opt.pairs;
  MatrixXd Sv(d, total), STv(d, total);
  std::vector<char> valid(static_cast<size_t>(total), 0);
  std::atomic<Eigen::Index> excluded{0};

  auto run_path = [&](Eigen::Index k) {
    RngStream path_rng = rng.split(1000 + k);
    std::shared_ptr<const FeatureMap> fmap =
        std::make_shared<FeatureMap>(build_rff(gp.kernel(), opt.n_phi, path_rng));
    SamplePath path =
        opt.sampler == PathSampler::Rff
            ? draw_weight_space_path(gp, fmap, path_rng,
                                     opt.accelerated_weights)
            : draw_pathwise_path(gp, fmap, path_rng);
    detail::PathBatchEvaluator ev(path);
    Eigen::MatrixXf H;
    for (Eigen::Index p = 0; p < opt.pairs; ++p) {
      const VectorXd cA = ev.eval(An[p]);
      const VectorXd cB = ev.eval(Bn[p]);
      const detail::PooledStats stats = detail::pooled_stats(cA, cB);
      const Eigen::Index slot = k * opt.pairs + p;
      if (!(stats.variance > 1e-12)) {
        excluded.fetch_add(1);
        continue;
      }
      for (Eigen::Index i = 0; i < d; ++i) {
        H = An[p];
        H.col(i) = Bn[p].col(i);
        const VectorXd cABi = ev.eval(H);
        auto [s, st] = detail::indices_from_vectors(cA, cB, cABi, stats);
        Sv(i, slot) = s;
        STv(i, slot) = st;
      }
      valid[static_cast<size_t>(slot)] = 1;
    }
  };

  if (opt.threads <= 1) {
    for (Eigen::Index k = 0; k < n_s; ++k) run_path(k);
  } else {
    std::atomic<Eigen::Index> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < opt.threads; ++t)
      pool.emplace_back([&] {
        for (;;) {
          const Eigen::Index k = next.fetch_add(1);
          if (k >= n_s) break;
          run_path(k);
        }
      });
    for (auto& th : pool) th.join();
  }

  // compact the valid slots
  Eigen::Index kept = 0;
  for (Eigen::Index s = 0; s < total; ++s)
    if (valid[static_cast<size_t>(s)]) ++kept;
  require(kept > 0, "gp_gsa: all paths degenerate");
  SensitivityResult res;
  res.S.resize(d, kept);
  res.ST.resize(d, kept);
  Eigen::Index w = 0;
  for (Eigen::Index s = 0; s < total; ++s) {
    if (!valid[static_cast<size_t>(s)]) continue;
    res.S.col(w) = Sv.col(s);
    res.ST.col(w) = STv.col(s);
    ++w;
  }
  res.excluded_paths = excluded.load();
  res.finalize();
  return res;
}

}  // namespace gpsamp

#endif
