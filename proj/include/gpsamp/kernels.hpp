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

#ifndef GPSAMP_KERNELS_HPP
#define GPSAMP_KERNELS_HPP

#include <cmath>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "gpsamp/errors.hpp"
#include "gpsamp/rng.hpp"

namespace gpsamp {

using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

enum class KernelFamily { SquaredExponential, Matern32, Matern52 };

inline std::string to_string(KernelFamily f) {
  switch (f) {
    case KernelFamily::SquaredExponential: return "se";
    case KernelFamily::Matern32: return "matern32";
    case KernelFamily::Matern52: return "matern52";
  }
  return "se";
}

inline KernelFamily kernel_family_from_string(const std::string& s) {
  if (s == "se" || s == "squared_exponential" || s == "rbf")
    return KernelFamily::SquaredExponential;
  if (s == "matern32") return KernelFamily::Matern32;
  if (s == "matern52") return KernelFamily::Matern52;
  throw ConfigError("unknown kernel family: " + s);
}

// Stationary covariance with anisotropic lengthscales. Isotropic use is just
// equal entries.
struct KernelSpec {
  KernelFamily family = KernelFamily::SquaredExponential;
  double sigma_f = 1.0;
  VectorXd lengthscales;

  KernelSpec() = default;
  KernelSpec(KernelFamily fam, double sf, VectorXd ls)
      : family(fam), sigma_f(sf), lengthscales(std::move(ls)) {
    require(sigma_f > 0, "KernelSpec: sigma_f must be positive");
    require(lengthscales.size() >= 1 && (lengthscales.array() > 0).all(),
            "KernelSpec: lengthscales must be positive");
  }

  static KernelSpec isotropic(KernelFamily fam, double sf, double l, int d) {
    return KernelSpec(fam, sf, VectorXd::Constant(d, l));
  }

  Eigen::Index dim() const { return lengthscales.size(); }
  double nu() const {
    switch (family) {
      case KernelFamily::Matern32: return 1.5;
      case KernelFamily::Matern52: return 2.5;
      default: return std::numeric_limits<double>::infinity();
    }
  }
};

namespace detail {
inline double matern_of_r(KernelFamily family, double sf2, double r) {
  if (family == KernelFamily::Matern32) {
    const double s = std::sqrt(3.0) * r;
    return sf2 * (1.0 + s) * std::exp(-s);
  }
  const double s = std::sqrt(5.0) * r;
  return sf2 * (1.0 + s + s * s / 3.0) * std::exp(-s);
}
}  // namespace detail

inline double kernel_eval(const KernelSpec& spec, const VectorXd& x,
                          const VectorXd& x2) {
  require_dims(x.size() == spec.dim() && x2.size() == spec.dim(),
               "kernel_eval: point dimension mismatch");
  const double sf2 = spec.sigma_f * spec.sigma_f;
  const VectorXd z = (x - x2).cwiseQuotient(spec.lengthscales);
  const double r2 = z.squaredNorm();
  if (spec.family == KernelFamily::SquaredExponential)
    return sf2 * std::exp(-0.5 * r2);
  return detail::matern_of_r(spec.family, sf2, std::sqrt(r2));
}

// d(kappa)/dx; zero at coincident points for all three families
inline VectorXd kernel_grad_x(const KernelSpec& spec, const VectorXd& x,
                              const VectorXd& x2) {
  require_dims(x.size() == spec.dim() && x2.size() == spec.dim(),
               "kernel_grad_x: point dimension mismatch");
  const double sf2 = spec.sigma_f * spec.sigma_f;
  const VectorXd delta = x - x2;
  const VectorXd inv_l2 = spec.lengthscales.array().square().inverse();
  const double r2 = (delta.array().square() * inv_l2.array()).sum();
  if (spec.family == KernelFamily::SquaredExponential) {
    const double k = sf2 * std::exp(-0.5 * r2);
    return (-k) * delta.cwiseProduct(inv_l2);
  }
  const double r = std::sqrt(r2);
  double coeff;  // d(kappa)/dr / r, finite as r -> 0
  if (spec.family == KernelFamily::Matern32) {
    coeff = -3.0 * sf2 * std::exp(-std::sqrt(3.0) * r);
  } else {
    coeff = -(5.0 / 3.0) * sf2 * (1.0 + std::sqrt(5.0) * r) *
            std::exp(-std::sqrt(5.0) * r);
  }
  return coeff * delta.cwiseProduct(inv_l2);
}

// Gram matrix; observation noise sigma_n^2 enters the diagonal only for a
// self-gram (X and X2 the same set).
inline MatrixXd kernel_gram(const KernelSpec& spec, const MatrixXd& X,
                            const MatrixXd& X2, double sigma_n = 0.0) {
  require_dims(X.cols() == spec.dim() && X2.cols() == spec.dim(),
               "kernel_gram: input dimension mismatch");
  require(sigma_n >= 0.0, "kernel_gram: negative noise");
  const double sf2 = spec.sigma_f * spec.sigma_f;
  const Eigen::Index n = X.rows(), m = X2.rows();
  // scaled squared distances via the norm expansion
  MatrixXd Xs = X.array().rowwise() /
                spec.lengthscales.transpose().array();
  MatrixXd Ys = X2.array().rowwise() /
                spec.lengthscales.transpose().array();
  VectorXd xn = Xs.rowwise().squaredNorm();
  VectorXd yn = Ys.rowwise().squaredNorm();
  MatrixXd R2 = (-2.0 * Xs * Ys.transpose()).eval();
  R2.colwise() += xn;
  R2.rowwise() += yn.transpose();
  R2 = R2.cwiseMax(0.0);
  MatrixXd K(n, m);
  if (spec.family == KernelFamily::SquaredExponential) {
    K = sf2 * (-0.5 * R2.array()).exp();
  } else {
    const double cnu = spec.family == KernelFamily::Matern32 ? std::sqrt(3.0)
                                                             : std::sqrt(5.0);
    Eigen::ArrayXXd s = cnu * R2.array().sqrt();
    if (spec.family == KernelFamily::Matern32)
      K = sf2 * (1.0 + s) * (-s).exp();
    else
      K = sf2 * (1.0 + s + s.square() / 3.0) * (-s).exp();
  }
  const bool self_gram =
      (&X == &X2) || (n == m && X.data() == X2.data()) ||
      (n == m && X.isApprox(X2));
  if (self_gram && sigma_n > 0.0)
    K.diagonal().array() += sigma_n * sigma_n;
  return K;
}

enum class SpectralKind { Gaussian, StudentT };

// Spectral density of the kernel's normalized correlation: Gaussian with
// per-axis scales 1/l_i for the squared exponential, multivariate Student-t
// with dof = 2*nu for the Matern family.
struct SpectralDensity {
  SpectralKind kind = SpectralKind::Gaussian;
  VectorXd inv_lengthscales;  // per-axis frequency scales 1/l_i
  double dof = 0.0;           // Student-t only

  Eigen::Index dim() const { return inv_lengthscales.size(); }
};

inline SpectralDensity spectral_density_of(const KernelSpec& spec) {
  SpectralDensity sd;
  sd.inv_lengthscales = spec.lengthscales.array().inverse();
  if (spec.family == KernelFamily::SquaredExponential) {
    sd.kind = SpectralKind::Gaussian;
  } else {
    sd.kind = SpectralKind::StudentT;
    sd.dof = 2.0 * spec.nu();
  }
  return sd;
}

// i.i.d. frequency rows; Student-t drawn as Gaussian over sqrt(chi2_dof/dof)
// with one mixing variable per row
inline MatrixXd sample_frequencies(const SpectralDensity& sd,
                                   Eigen::Index count, RngStream& rng) {
  require(count >= 1, "sample_frequencies: count must be >= 1");
  const Eigen::Index d = sd.dim();
  MatrixXd W(count, d);
  for (Eigen::Index r = 0; r < count; ++r) {
    double mix = 1.0;
    if (sd.kind == SpectralKind::StudentT)
      mix = std::sqrt(rng.chi_squared(sd.dof) / sd.dof);
    for (Eigen::Index j = 0; j < d; ++j)
      W(r, j) = rng.normal() * sd.inv_lengthscales(j) / mix;
  }
  return W;
}

// JSON schema: {family, sigma_f, lengthscales[], sigma_n}
inline nlohmann::json kernel_to_json(const KernelSpec& spec, double sigma_n) {
  nlohmann::json j;
  j["family"] = to_string(spec.family);
  j["sigma_f"] = spec.sigma_f;
  j["lengthscales"] = std::vector<double>(
      spec.lengthscales.data(), spec.lengthscales.data() + spec.dim());
  j["sigma_n"] = sigma_n;
  return j;
}

inline std::pair<KernelSpec, double> kernel_from_json(const nlohmann::json& j) {
  const auto ls = j.at("lengthscales").get<std::vector<double>>();
  VectorXd l = Eigen::Map<const VectorXd>(ls.data(), ls.size());
  KernelSpec spec(kernel_family_from_string(j.at("family").get<std::string>()),
                  j.at("sigma_f").get<double>(), std::move(l));
  return {spec, j.at("sigma_n").get<double>()};
}

}  // namespace gpsamp

#endif
