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

#include <catch2/catch.hpp>

#include "gpsamp/paths.hpp"
#include "gpsamp/studies.hpp"
#include "../oracles.hpp"

using namespace gpsamp;

namespace {
Dataset sine_dataset(Eigen::Index n, RngStream& rng, double noise = 0.0) {
  MatrixXd X(n, 1);
  VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    X(i, 0) = rng.uniform();
    y(i) = std::sin(7.0 * X(i, 0)) + noise * rng.normal();
  }
  return Dataset::from_normalized(X, y);
}
}  // namespace

TEST_CASE("prior paths have prior variance", "[paths][slow]") {
  RngStream rng(2);
  const auto spec =
      KernelSpec::isotropic(KernelFamily::SquaredExponential, 1.4, 0.3, 1);
  const VectorXd x = VectorXd::Constant(1, 0.37);
  double sum = 0, sumsq = 0;
  const int n = 3000;
  for (int k = 0; k < n; ++k) {
    auto fmap = std::make_shared<FeatureMap>(build_rff(spec, 800, rng));
    const double v = draw_prior_path(fmap, rng).value(x);
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / n, var = sumsq / n - mean * mean;
  CHECK(std::abs(mean) < 0.1);
  CHECK(var == Approx(1.4 * 1.4).margin(0.15));
}

TEST_CASE("weight-space posterior paths track the exact posterior mean",
          "[paths][slow]") {
  RngStream rng(5);
  Dataset data = sine_dataset(25, rng);
  const auto spec =
      KernelSpec::isotropic(KernelFamily::SquaredExponential, 1.0, 0.15, 1);
  FittedGP gp(data, spec, 1e-3);
  const MatrixXd grid = studies::grid_1d(0.0, 1.0, 40);
  const GaussianDist exact = gp.predict(grid);
  VectorXd mean_path = VectorXd::Zero(40);
  const int n_paths = 500;
  for (int k = 0; k < n_paths; ++k) {
    auto fmap = std::make_shared<FeatureMap>(build_rff(spec, 2000, rng));
    mean_path += draw_weight_space_path(gp, fmap, rng).values(grid);
  }
  mean_path /= n_paths;
  CHECK((mean_path - exact.mean()).cwiseAbs().maxCoeff() <= 0.1);
}

TEST_CASE("paths are deterministic functions after the draw", "[paths]") {
  RngStream rng(7);
  Dataset data = sine_dataset(10, rng);
  const auto spec =
      KernelSpec::isotropic(KernelFamily::SquaredExponential, 1.0, 0.2, 1);
  FittedGP gp(data, spec, 1e-3);
  RngStream r1(31), r2(31);
  auto f1 = std::make_shared<FeatureMap>(build_rff(spec, 300, r1));
  auto f2 = std::make_shared<FeatureMap>(build_rff(spec, 300, r2));
  const SamplePath a = draw_weight_space_path(gp, f1, r1);
  const SamplePath b = draw_weight_space_path(gp, f2, r2);
  for (double t : {0.1, 0.45, 0.83}) {
    const VectorXd p = VectorXd::Constant(1, t);
    CHECK(a.value(p) == b.value(p));      // same seed, same path
    CHECK(a.value(p) == a.value(p));      // re-evaluation is bit-identical
  }
}

TEST_CASE("pathwise paths pass near the data at tiny noise", "[paths]") {
  RngStream rng(9);
  Dataset data = sine_dataset(12, rng);
  const auto spec =
      KernelSpec::isotropic(KernelFamily::SquaredExponential, 1.0, 0.25, 1);
  FittedGP gp(data, spec, 1e-6);
  auto fmap = std::make_shared<FeatureMap>(build_rff(spec, 2000, rng));
  const SamplePath path = draw_pathwise_path(gp, fmap, rng);
  const VectorXd at_train = path.values(data.X());
  CHECK((at_train - data.y()).cwiseAbs().maxCoeff() < 1e-2);
}

TEST_CASE("path gradients match finite differences", "[paths]") {
  RngStream rng(12);
  Dataset data = sine_dataset(8, rng);
  const auto spec =
      KernelSpec::isotropic(KernelFamily::Matern52, 1.1, 0.3, 1);
  FittedGP gp(data, spec, 1e-3);
  auto fmap = std::make_shared<FeatureMap>(build_rff(spec, 400, rng));
  const SamplePath ws = draw_weight_space_path(gp, fmap, rng);
  const SamplePath pc = draw_pathwise_path(gp, fmap, rng);
  for (const SamplePath* path : {&ws, &pc}) {
    for (int t = 0; t < 50; ++t) {
      const VectorXd x = rng.uniform_vector(1);
      const VectorXd g = path_grad(*path, x);
      const VectorXd fd = oracles::finite_diff_grad(
          [&](const VectorXd& p) { return path->value(p); }, x);
      CHECK((g - fd).norm() <= 1e-5 * std::max(1.0, fd.norm()));
      VectorXd g2;
      const double v = path->value_and_gradient(x, g2);
      CHECK(v == Approx(path->value(x)).margin(1e-12));
      CHECK((g2 - g).norm() < 1e-12);
    }
  }
}

TEST_CASE("constant path has zero gradient", "[paths]") {
  RngStream rng(13);
  const auto spec =
      KernelSpec::isotropic(KernelFamily::SquaredExponential, 1.0, 0.5, 2);
  auto fmap = std::make_shared<FeatureMap>(build_rff(spec, 64, rng));
  const SamplePath path(PathKind::WeightSpace, fmap, VectorXd::Zero(64));
  CHECK(path_grad(path, rng.uniform_vector(2)).norm() == 0.0);
}

TEST_CASE("exhaustive sampling reproduces the posterior moments",
          "[paths][slow]") {
  RngStream rng(15);
  Dataset data = sine_dataset(10, rng);
  const auto spec =
      KernelSpec::isotropic(KernelFamily::SquaredExponential, 1.0, 0.2, 1);
  FittedGP gp(data, spec, 1e-2);
  const MatrixXd grid = studies::grid_1d(0.0, 1.0, 20);
  const GaussianDist exact = gp.predict(grid);
  const Eigen::Index n = 10000;
  const MatrixXd draws = exhaustive_sample(gp, grid, n, rng);
  const VectorXd mean = draws.colwise().mean().transpose();
  for (int j = 0; j < 20; ++j) {
    const double sd = std::sqrt(exact.cov()(j, j));
    CHECK(std::abs(mean(j) - exact.mean()(j)) <=
          4.0 * sd / std::sqrt(double(n)) + 1e-9);
    const double var =
        (draws.col(j).array() - mean(j)).square().sum() / double(n - 1);
    CHECK(std::abs(var - exact.cov()(j, j)) <=
          4.0 * std::sqrt(2.0) * exact.cov()(j, j) / std::sqrt(double(n)) +
              1e-9);
  }
}

TEST_CASE("single-point exhaustive sample is the scalar posterior", "[paths]") {
  RngStream rng(16);
  Dataset data = sine_dataset(6, rng);
  const auto spec =
      KernelSpec::isotropic(KernelFamily::SquaredExponential, 1.0, 0.3, 1);
  FittedGP gp(data, spec, 1e-2);
  MatrixXd q(1, 1);
  q << 0.5;
  RngStream r1(77), r2(77);
  const MatrixXd draws = exhaustive_sample(gp, q, 5000, r1);
  const GaussianDist post = gp.predict(q);
  const double mean = draws.col(0).mean();
  CHECK(std::abs(mean - post.mean()(0)) <
        4.0 * std::sqrt(post.cov()(0, 0) / 5000.0));
  // determinism
  const MatrixXd again = exhaustive_sample(gp, q, 5000, r2);
  CHECK(draws == again);
}

TEST_CASE("wasserstein distance of identical Gaussians is zero", "[paths]") {
  RngStream rng(19);
  MatrixXd B(5, 5);
  for (int i = 0; i < 5; ++i) B.row(i) = rng.normal_vector(5).transpose();
  const MatrixXd S = B * B.transpose() + MatrixXd::Identity(5, 5);
  const VectorXd m = rng.normal_vector(5);
  const GaussianDist d(m, S);
  CHECK(wasserstein2(d, m, S) == Approx(0.0).margin(1e-6));
}

TEST_CASE("wasserstein distance reduces to the mean shift", "[paths]") {
  RngStream rng(20);
  MatrixXd B(4, 4);
  for (int i = 0; i < 4; ++i) B.row(i) = rng.normal_vector(4).transpose();
  const MatrixXd S = B * B.transpose() + MatrixXd::Identity(4, 4);
  const VectorXd m = VectorXd::Zero(4);
  VectorXd shift(4);
  shift << 1, -2, 0.5, 3;
  CHECK(wasserstein2(GaussianDist(m, S), m + shift, S) ==
        Approx(shift.norm()).margin(1e-6));
}

TEST_CASE("wasserstein diagonal closed form", "[paths]") {
  VectorXd a(3), b(3);
  a << 1.0, 4.0, 9.0;
  b << 2.0, 1.0, 16.0;
  const GaussianDist d(VectorXd::Zero(3), MatrixXd(a.asDiagonal()));
  double want = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double t = std::sqrt(a(i)) - std::sqrt(b(i));
    want += t * t;
  }
  CHECK(wasserstein2(d, VectorXd::Zero(3), MatrixXd(b.asDiagonal())) ==
        Approx(std::sqrt(want)).margin(1e-10));
}

TEST_CASE("study evaluator agrees with the direct wasserstein distance",
          "[paths]") {
  RngStream rng(23);
  Dataset data = sine_dataset(12, rng);
  const auto spec =
      KernelSpec::isotropic(KernelFamily::SquaredExponential, 1.0, 0.2, 1);
  FittedGP gp(data, spec, 1e-3);
  const MatrixXd grid = studies::grid_1d(0.0, 1.0, 60);
  const studies::WassersteinEvaluator ev(gp, grid);
  const GaussianDist exact = gp.predict(grid);
  const FeatureMap fm = build_rff(spec, 300, rng);

  // direct construction of both approximations
  const MatrixXd Phi_q = fm.eval_rows(grid);
  const MatrixXd Phi_t = fm.eval_rows(data.X());
  const WeightPosterior wp = weight_posterior(Phi_t, data.y(), gp.sigma_n());
  const VectorXd rff_mean = Phi_q * wp.mean;
  const MatrixXd rff_cov = Phi_q * wp.cov * Phi_q.transpose();
  CHECK(ev.rff_distance(fm) ==
        Approx(wasserstein2(exact, rff_mean, rff_cov)).margin(1e-5));

  const MatrixXd Kq = kernel_gram(spec, data.X(), grid);
  const MatrixXd A = gp.chol_C().solve(Kq).transpose();
  const MatrixXd U = Phi_q - A * Phi_t;
  const MatrixXd pc_cov =
      U * U.transpose() + gp.sigma_n() * gp.sigma_n() * A * A.transpose();
  CHECK(ev.pc_distance(fm) ==
        Approx(wasserstein2(exact, exact.mean(), pc_cov)).margin(1e-5));
}
