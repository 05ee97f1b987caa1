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

#ifndef GPSAMP_FEATURES_HPP
#define GPSAMP_FEATURES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <queue>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gpsamp/detail/specfun.hpp"
#include "gpsamp/errors.hpp"
#include "gpsamp/fastmath.hpp"
#include "gpsamp/kernels.hpp"
#include "gpsamp/rng.hpp"

namespace gpsamp {

enum class FeatureKind { Rff, Qmc, MercerSe, HilbertDirichlet };

// Finite feature map phi: R^d -> R^{N_phi} whose inner products approximate a
// kernel. Trigonometric kinds store frequency rows and phases; the
// eigen-expansion kinds store per-dimension basis parameters, a multi-index
// table, and per-feature weights.
class FeatureMap {
 public:
  FeatureKind kind = FeatureKind::Rff;
  double sigma_f = 1.0;

  // Rff / Qmc
  MatrixXd omega;  // N_phi x d
  VectorXd phase;  // N_phi

  // MercerSe: per-dim (a, c) with psi recurrence; HilbertDirichlet: per-dim L
  VectorXd mercer_a, mercer_c;
  VectorXd hilbert_L;
  Eigen::MatrixXi index;  // N_phi x d multi-indices
  VectorXd weight;        // per-feature scale (sqrt eigen mass), includes sigma_f

  Eigen::Index count() const {
    return (kind == FeatureKind::Rff || kind == FeatureKind::Qmc)
               ? omega.rows()
               : weight.size();
  }
  Eigen::Index dim() const {
    return (kind == FeatureKind::Rff || kind == FeatureKind::Qmc)
               ? omega.cols()
               : index.cols();
  }

  VectorXd eval(const VectorXd& x) const {
    require_dims(x.size() == dim(), "FeatureMap::eval: dimension mismatch");
    if (kind == FeatureKind::Rff || kind == FeatureKind::Qmc) {
      VectorXd t = omega * x + phase;
      VectorXd out(t.size());
      fastmath::cos_array(t.data(), out.data(), t.size());
      return trig_scale() * out;
    }
    return eval_expansion(x, nullptr);
  }

  // rows of X -> rows of Phi (n x N_phi)
  MatrixXd eval_rows(const MatrixXd& X) const {
    require_dims(X.cols() == dim(), "FeatureMap::eval_rows: dimension mismatch");
    const Eigen::Index n = X.rows();
    MatrixXd Phi(n, count());
    if (kind == FeatureKind::Rff || kind == FeatureKind::Qmc) {
      MatrixXd T = X * omega.transpose();
      T.rowwise() += phase.transpose();
      fastmath::cos_array(T.data(), Phi.data(), T.size());
      Phi *= trig_scale();
      return Phi;
    }
    for (Eigen::Index i = 0; i < n; ++i)
      Phi.row(i) = eval_expansion(X.row(i).transpose(), nullptr).transpose();
    return Phi;
  }

  // gradient d phi / dx, N_phi x d
  MatrixXd grad(const VectorXd& x) const {
    require_dims(x.size() == dim(), "FeatureMap::grad: dimension mismatch");
    if (kind == FeatureKind::Rff || kind == FeatureKind::Qmc) {
      VectorXd t = omega * x + phase;
      VectorXd s(t.size()), c(t.size());
      fastmath::sincos_array(t.data(), s.data(), c.data(), t.size());
      return (-trig_scale()) * s.asDiagonal() * omega;
    }
    MatrixXd g;
    eval_expansion(x, &g);
    return g;
  }

  double trig_scale() const {
    return std::sqrt(2.0 * sigma_f * sigma_f / static_cast<double>(count()));
  }

 private:
  // tensor-product evaluation of eigenfunction expansions, with optional
  // gradient via per-dimension derivative tables
  VectorXd eval_expansion(const VectorXd& x, MatrixXd* grad_out) const {
    const Eigen::Index d = dim();
    const Eigen::Index m = count();
    const int maxk = index.maxCoeff();
    // per-dim tables psi[k] and dpsi[k]
    MatrixXd psi(maxk + 1, d), dpsi(maxk + 1, d);
    for (Eigen::Index j = 0; j < d; ++j) {
      if (kind == FeatureKind::MercerSe) {
        mercer_tables(x(j), mercer_a(j), mercer_c(j), maxk, psi.col(j).data(),
                      dpsi.col(j).data());
      } else {
        hilbert_tables(x(j), hilbert_L(j), maxk, psi.col(j).data(),
                       dpsi.col(j).data());
      }
    }
    VectorXd out(m);
    if (grad_out) grad_out->resize(m, d);
    for (Eigen::Index f = 0; f < m; ++f) {
      double prod = weight(f);
      for (Eigen::Index j = 0; j < d; ++j) prod *= psi(index(f, j), j);
      out(f) = prod;
      if (grad_out) {
        for (Eigen::Index j = 0; j < d; ++j) {
          double g = weight(f);
          for (Eigen::Index q = 0; q < d; ++q)
            g *= (q == j) ? dpsi(index(f, q), q) : psi(index(f, q), q);
          (*grad_out)(f, j) = g;
        }
      }
    }
    return out;
  }

  // psi_k(x) = (pi c / a)^{1/4} hf_k(sqrt(c) x) e^{a x^2 / 2} via the Hermite
  // function recurrence; derivative psi'_k = (a - c) x psi_k + sqrt(2kc)
  // psi_{k-1}
  static void mercer_tables(double x, double a, double c, int maxk,
                            double* psi, double* dpsi) {
    const double u = std::sqrt(c) * x;
    const double s = std::pow(M_PI * c / a, 0.25) * std::exp(0.5 * a * x * x);
    double h0 = std::pow(M_PI, -0.25) * std::exp(-0.5 * u * u);
    double h1 = std::sqrt(2.0) * u * h0;
    psi[0] = s * h0;
    if (maxk >= 1) psi[1] = s * h1;
    for (int k = 2; k <= maxk; ++k) {
      const double hk =
          std::sqrt(2.0 / k) * u * h1 - std::sqrt((k - 1.0) / k) * h0;
      h0 = h1;
      h1 = hk;
      psi[k] = s * hk;
    }
    dpsi[0] = (a - c) * x * psi[0];
    for (int k = 1; k <= maxk; ++k)
      dpsi[k] = (a - c) * x * psi[k] + std::sqrt(2.0 * k * c) * psi[k - 1];
  }

  // Dirichlet sine basis on [-L, L]: psi_k(x) = L^{-1/2} sin(pi k (x+L)/(2L)),
  // k >= 1; slot 0 unused
  static void hilbert_tables(double x, double L, int maxk, double* psi,
                             double* dpsi) {
    psi[0] = 0.0;
    dpsi[0] = 0.0;
    const double invsq = 1.0 / std::sqrt(L);
    for (int k = 1; k <= maxk; ++k) {
      const double w = M_PI * k / (2.0 * L);
      psi[k] = invsq * std::sin(w * (x + L));
      dpsi[k] = invsq * w * std::cos(w * (x + L));
    }
  }
};

inline FeatureMap build_rff(const KernelSpec& spec, Eigen::Index n_phi,
                            RngStream& rng) {
  require(n_phi >= 1, "build_rff: n_phi must be >= 1");
  FeatureMap fm;
  fm.kind = FeatureKind::Rff;
  fm.sigma_f = spec.sigma_f;
  fm.omega = sample_frequencies(spectral_density_of(spec), n_phi, rng);
  fm.phase.resize(n_phi);
  for (Eigen::Index i = 0; i < n_phi; ++i)
    fm.phase(i) = rng.uniform(0.0, 2.0 * M_PI);
  return fm;
}

namespace detail {
inline double radical_inverse(std::uint64_t n, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base);
  double f = inv, r = 0.0;
  while (n > 0) {
    r += f * static_cast<double>(n % base);
    n /= base;
    f *= inv;
  }
  return r;
}
constexpr std::uint64_t kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19,
                                     23, 29, 31, 37, 41, 43, 47, 53};
}  // namespace detail

// Deterministic low-discrepancy features: Halton points in [0,1]^{d+1} (one
// extra coordinate for the Matern scale mixture) mapped to frequencies through
// the inverse CDF, plus a phase coordinate.
inline FeatureMap build_qmc(const KernelSpec& spec, Eigen::Index n_phi) {
  require(n_phi >= 1, "build_qmc: n_phi must be >= 1");
  const Eigen::Index d = spec.dim();
  const bool matern = spec.family != KernelFamily::SquaredExponential;
  const Eigen::Index coords = d + (matern ? 2 : 1);
  require(coords <= 16, "build_qmc: dimension too large for Halton bases");
  FeatureMap fm;
  fm.kind = FeatureKind::Qmc;
  fm.sigma_f = spec.sigma_f;
  fm.omega.resize(n_phi, d);
  fm.phase.resize(n_phi);
  const double nu = spec.nu();
  for (Eigen::Index i = 0; i < n_phi; ++i) {
    const std::uint64_t idx = static_cast<std::uint64_t>(i) + 1;
    double mix = 1.0;
    if (matern) {
      const double t = detail::radical_inverse(idx, detail::kPrimes[d]);
      const double q =
          detail::chi_squared_inv(2.0 * nu, std::min(std::max(t, 1e-12), 1.0 - 1e-12));
      mix = std::sqrt(q / (2.0 * nu));
    }
    for (Eigen::Index j = 0; j < d; ++j) {
      double t = detail::radical_inverse(idx, detail::kPrimes[j]);
      t = std::min(std::max(t, 1e-12), 1.0 - 1e-12);
      fm.omega(i, j) = detail::norm_ppf(t) / (spec.lengthscales(j) * mix);
    }
    const double tb =
        detail::radical_inverse(idx, detail::kPrimes[d + (matern ? 1 : 0)]);
    fm.phase(i) = 2.0 * M_PI * tb;
  }
  return fm;
}

namespace detail {
// top n_phi multi-indices by a per-dimension decreasing weight product
inline std::pair<Eigen::MatrixXi, VectorXd> top_product_indices(
    const std::vector<std::vector<double>>& dim_weights, Eigen::Index n_phi) {
  const Eigen::Index d = static_cast<Eigen::Index>(dim_weights.size());
  struct Node {
    double w;
    std::array<int, 3> idx;
  };
  auto cmp = [](const Node& a, const Node& b) { return a.w < b.w; };
  std::priority_queue<Node, std::vector<Node>, decltype(cmp)> heap(cmp);
  std::set<std::uint64_t> seen;
  auto key = [&](const std::array<int, 3>& idx) {
    return (static_cast<std::uint64_t>(idx[0]) << 42) |
           (static_cast<std::uint64_t>(idx[1]) << 21) |
           static_cast<std::uint64_t>(idx[2]);
  };
  Node first{1.0, {0, 0, 0}};
  for (Eigen::Index j = 0; j < d; ++j) first.w *= dim_weights[j][0];
  heap.push(first);
  seen.insert(key(first.idx));
  Eigen::MatrixXi index(n_phi, d);
  VectorXd weight(n_phi);
  Eigen::Index got = 0;
  while (got < n_phi && !heap.empty()) {
    Node cur = heap.top();
    heap.pop();
    for (Eigen::Index j = 0; j < d; ++j) index(got, j) = cur.idx[j];
    weight(got) = cur.w;
    ++got;
    for (Eigen::Index j = 0; j < d; ++j) {
      if (cur.idx[j] + 1 >= static_cast<int>(dim_weights[j].size())) continue;
      Node next = cur;
      next.idx[j] += 1;
      if (!seen.insert(key(next.idx)).second) continue;
      next.w = 1.0;
      for (Eigen::Index q = 0; q < d; ++q)
        next.w *= dim_weights[q][next.idx[q]];
      heap.push(next);
    }
  }
  require(got == n_phi, "top_product_indices: not enough candidate indices");
  return {index, weight};
}
}  // namespace detail

// Eigen-expansion of the squared-exponential kernel against a centered
// Gaussian measure with scale sigma_measure per dimension:
//   a = 1/(2 sigma^2), b = 1/(2 l^2), c = sqrt(a^2 + 4ab), A = a/2 + b + c/2,
//   lambda_k = sqrt(a/A) (b/A)^k, features sqrt(lambda_k) psi_k.
// Tensor products cover d <= 3; the eigenvalue decay is geometric so feature
// counts stay small.
inline FeatureMap build_mercer_se(const VectorXd& lengthscales, double sigma_f,
                                  const VectorXd& sigma_measure,
                                  Eigen::Index n_phi) {
  require(n_phi >= 1, "build_mercer_se: n_phi must be >= 1");
  const Eigen::Index d = lengthscales.size();
  require(d >= 1 && d <= 3, "build_mercer_se: tensor form limited to d <= 3");
  require_dims(sigma_measure.size() == d,
               "build_mercer_se: measure scale dimension mismatch");
  FeatureMap fm;
  fm.kind = FeatureKind::MercerSe;
  fm.sigma_f = sigma_f;
  fm.mercer_a.resize(d);
  fm.mercer_c.resize(d);
  std::vector<std::vector<double>> lambdas(d);
  const int per_dim = static_cast<int>(n_phi) + 1;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double a = 1.0 / (2.0 * sigma_measure(j) * sigma_measure(j));
    const double b = 1.0 / (2.0 * lengthscales(j) * lengthscales(j));
    const double c = std::sqrt(a * a + 4.0 * a * b);
    const double A = 0.5 * a + b + 0.5 * c;
    fm.mercer_a(j) = a;
    fm.mercer_c(j) = c;
    lambdas[j].resize(per_dim);
    double lam = std::sqrt(a / A);
    for (int k = 0; k < per_dim; ++k) {
      lambdas[j][k] = lam;
      lam *= b / A;
    }
  }
  auto [index, weight] = detail::top_product_indices(lambdas, n_phi);
  fm.index = index;
  fm.weight = sigma_f * weight.array().sqrt();
  return fm;
}

namespace detail {
// Spectral density S(omega) = sigma_f^2 (2 pi)^d p(omega) with p the exact
// frequency density: Gaussian for the squared exponential, Student-t for
// Matern. Both normalizations integrate to sigma_f^2 (2 pi)^d; the Matern
// constant is 2^d pi^{d/2} Gamma(nu + d/2) (2 nu)^nu / Gamma(nu).
inline double spectral_S(const KernelSpec& spec, const VectorXd& omega) {
  const Eigen::Index d = spec.dim();
  const double sf2 = spec.sigma_f * spec.sigma_f;
  const double prod_l = spec.lengthscales.prod();
  const double q =
      (spec.lengthscales.array() * omega.array()).square().sum();
  if (spec.family == KernelFamily::SquaredExponential) {
    return sf2 * std::pow(2.0 * M_PI, 0.5 * d) * prod_l * std::exp(-0.5 * q);
  }
  const double nu = spec.nu();
  const double c = sf2 * std::pow(2.0, d) * std::pow(M_PI, 0.5 * d) *
                   std::pow(2.0 * nu, nu) *
                   std::exp(std::lgamma(nu + 0.5 * d) - std::lgamma(nu)) *
                   prod_l;
  return c * std::pow(2.0 * nu + q, -(nu + 0.5 * d));
}
}  // namespace detail

// Laplacian eigenbasis on the box prod (-L_j, L_j) with homogeneous Dirichlet
// boundaries: sqrt(lambda_k) = pi k / (2 L) per axis, features
// sqrt(S(omega_k)) prod_j L_j^{-1/2} sin(pi k_j (x_j + L_j) / (2 L_j)).
inline FeatureMap build_hilbert(const KernelSpec& spec,
                                const VectorXd& halfwidth,
                                Eigen::Index n_phi) {
  require(n_phi >= 1, "build_hilbert: n_phi must be >= 1");
  const Eigen::Index d = spec.dim();
  require(d >= 1 && d <= 3, "build_hilbert: tensor form limited to d <= 3");
  require_dims(halfwidth.size() == d, "build_hilbert: halfwidth dim mismatch");
  require((halfwidth.array() > 0).all(), "build_hilbert: halfwidth must be > 0");
  FeatureMap fm;
  fm.kind = FeatureKind::HilbertDirichlet;
  fm.sigma_f = spec.sigma_f;
  fm.hilbert_L = halfwidth;
  // rank multi-indices by S at the axis frequencies; S decreases in each k
  const int per_dim = static_cast<int>(n_phi) + 1;
  std::vector<std::vector<double>> surrogate(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    surrogate[j].resize(per_dim + 1);
    surrogate[j][0] = 0.0;  // k = 0 not part of the basis
    for (int k = 1; k <= per_dim; ++k) {
      VectorXd w = VectorXd::Zero(d);
      w(j) = M_PI * k / (2.0 * halfwidth(j));
      surrogate[j][k] = detail::spectral_S(spec, w) /
                        detail::spectral_S(spec, VectorXd::Zero(d));
    }
  }
  // shift so index 0 maps to k=1 in every dimension
  std::vector<std::vector<double>> shifted(d);
  for (Eigen::Index j = 0; j < d; ++j)
    shifted[j].assign(surrogate[j].begin() + 1, surrogate[j].end());
  auto [index0, w0] = detail::top_product_indices(shifted, n_phi);
  fm.index = index0.array() + 1;
  fm.weight.resize(n_phi);
  const double invsqL = 1.0;  // folded into psi tables
  (void)invsqL;
  for (Eigen::Index f = 0; f < n_phi; ++f) {
    VectorXd w(d);
    for (Eigen::Index j = 0; j < d; ++j)
      w(j) = M_PI * fm.index(f, j) / (2.0 * halfwidth(j));
    fm.weight(f) = std::sqrt(detail::spectral_S(spec, w));
  }
  return fm;
}

}  // namespace gpsamp

#endif
