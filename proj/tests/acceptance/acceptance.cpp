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
//
// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line with
// its measured quantities; the process exit code is the number of failures.
// Usage: acceptance [criterion-number ...]   (no arguments runs all)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "gpsamp/gpsamp.hpp"
#include "gpsamp/studies.hpp"
#include "../oracles.hpp"

using namespace gpsamp;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what,
            const std::string& detail) {
  std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL",
              criterion, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ---------------------------------------------------------------- criterion 1
// RFF kernel reconstruction converges at the Monte Carlo rate.
void criterion_1() {
  RngStream rng(101);
  studies::ConvergenceConfig cfg;
  cfg.spec = KernelSpec::isotropic(KernelFamily::SquaredExponential, 1.0, 1.0, 1);
  cfg.lo = -5.0;
  cfg.hi = 5.0;
  cfg.grid_n = 2000;
  cfg.n_phi_list = {50, 100, 200, 500, 1000, 2000, 5000, 10000};
  cfg.repeats = 100;
  cfg.methods = {"rff"};
  const auto rows = studies::convergence_study(cfg, rng);
  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    xs.push_back(static_cast<double>(r.n_phi));
    ys.push_back(r.err_mean);
  }
  const double slope = studies::loglog_slope(xs, ys);
  char buf[128];
  std::snprintf(buf, sizeof(buf), "slope = %.3f, window [-0.65, -0.35]", slope);
  report(1, slope > -0.65 && slope < -0.35,
         "RFF approximation error decays at the Monte Carlo rate", buf);
}

// ---------------------------------------------------------------- criterion 2
// Feature-construction ordering at 64 features on [-10, 10], SE l = sqrt(5).
void criterion_2() {
  const double l = std::sqrt(5.0);
  const auto spec =
      KernelSpec::isotropic(KernelFamily::SquaredExponential, 1.0, l, 1);
  const MatrixXd grid = studies::grid_1d(-10.0, 10.0, 2000);
  Eigen::Index ref_idx = 0;
  double best = 1e30;
  for (Eigen::Index i = 0; i < grid.rows(); ++i)
    if (std::abs(grid(i, 0)) < best) {
      best = std::abs(grid(i, 0));
      ref_idx = i;
    }
  const VectorXd x_ref = grid.row(ref_idx).transpose();
  const Eigen::Index nphi = 64;

  const double err_mercer = studies::kernel_slice_error(
      build_mercer_se(VectorXd::Constant(1, l), 1.0,
                      VectorXd::Constant(1, std::sqrt(3.0) / 2.0), nphi),
      spec, grid, x_ref);
  const double err_hilbert = studies::kernel_slice_error(
      build_hilbert(spec, VectorXd::Constant(1, 10.0), nphi), spec, grid,
      x_ref);
  const double err_qmc = studies::kernel_slice_error(build_qmc(spec, nphi),
                                                     spec, grid, x_ref);
  std::vector<double> rff_errs;
  RngStream rng(202);
  for (int rep = 0; rep < 50; ++rep)
    rff_errs.push_back(studies::kernel_slice_error(
        build_rff(spec, nphi, rng), spec, grid, x_ref));
  const double err_rff = median_of(rff_errs);

  const bool order = err_mercer < err_hilbert &&
                     10.0 * err_hilbert <= err_qmc && err_qmc < err_rff;

  // exponential decay of the eigen-expansion: at least 10x per 4 features
  // over the pre-saturation regime
  bool decay = true;
  double prev = studies::kernel_slice_error(
      build_mercer_se(VectorXd::Constant(1, l), 1.0,
                      VectorXd::Constant(1, std::sqrt(3.0) / 2.0), 4),
      spec, grid, x_ref);
  for (Eigen::Index n = 8; n <= 28; n += 4) {
    const double cur = studies::kernel_slice_error(
        build_mercer_se(VectorXd::Constant(1, l), 1.0,
                        VectorXd::Constant(1, std::sqrt(3.0) / 2.0), n),
        spec, grid, x_ref);
    if (prev > 1e-12 && cur > prev / 10.0) decay = false;
    prev = cur;
  }

  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "mercer %.2e < hilbert %.2e << qmc %.2e < rff %.2e; decay %s",
                err_mercer, err_hilbert, err_qmc, err_rff,
                decay ? "exp" : "sub-exp");
  report(2, order && decay, "feature-construction accuracy ordering at 64 features",
         buf);
}

// ---------------------------------------------------------------- criterion 3
// Pathwise conditioning stays stable as training data grow.
void criterion_3() {
  RngStream rng(303);
  studies::WassersteinConfig cfg;
  cfg.n_train_list = {4, 16, 64, 256, 1024};
  cfg.n_phi = 2000;
  cfg.realizations = 20;
  cfg.grid_n = 2000;
  cfg.sigma_n = 1e-3;
  const auto rows = studies::wasserstein_study(cfg, rng);
  auto find = [&](Eigen::Index n, const std::string& m) {
    for (const auto& r : rows)
      if (r.n_train == n && r.method == m) return r.median;
    return -1.0;
  };
  const double pc4 = find(4, "pc");
  const double pc1024 = find(1024, "pc");
  const double rff1024 = find(1024, "rff");
  const bool stable = pc1024 <= 2.0 * pc4;
  const bool separated = rff1024 >= 5.0 * pc1024;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "median d_W: pc@4 = %.3g, pc@1024 = %.3g, rff@1024 = %.3g",
                pc4, pc1024, rff1024);
  report(3, stable && separated,
         "pathwise conditioning is stable in N, weight-space sampling is not",
         buf);
}

// ---------------------------------------------------------------- criterion 4
// Cost scaling: exhaustive sampling is polynomial >= 2.2 in the query count,
// pathwise conditioning stays near-linear in both query and feature counts.
void criterion_4() {
  RngStream rng(404);
  MatrixXd X(20, 1);
  VectorXd y(20);
  for (int i = 0; i < 20; ++i) {
    X(i, 0) = rng.uniform();
    y(i) = std::sin(8.0 * X(i, 0));
  }
  Dataset data = Dataset::from_normalized(X, y);
  const auto spec =
      KernelSpec::isotropic(KernelFamily::SquaredExponential, 1.0, 0.15, 1);
  FittedGP gp(data, spec, 1e-3);

  auto time_best = [](const std::function<void()>& fn, int reps) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
      const auto t0 = std::chrono::steady_clock::now();
      fn();
      const double el = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
      best = std::min(best, el);
    }
    return best;
  };

  const std::vector<Eigen::Index> sizes = {500, 1000, 2000, 4000};
  std::vector<double> nq, t_exh, t_pc_q;
  for (const Eigen::Index n : sizes) {
    const MatrixXd grid = studies::grid_1d(0.0, 1.0, n);
    nq.push_back(static_cast<double>(n));
    t_exh.push_back(time_best(
        [&] {
          RngStream r(1);
          volatile double keep = exhaustive_sample(gp, grid, 1, r)(0, 0);
          (void)keep;
        },
        3));
    t_pc_q.push_back(time_best(
        [&] {
          RngStream r(2);
          auto fmap = std::make_shared<FeatureMap>(build_rff(spec, 1000, r));
          const SamplePath p = draw_pathwise_path(gp, fmap, r);
          volatile double keep = p.values(grid).sum();
          (void)keep;
        },
        3));
  }
  std::vector<double> nphi, t_pc_f;
  const MatrixXd grid1k = studies::grid_1d(0.0, 1.0, 1000);
  for (const Eigen::Index m : sizes) {
    nphi.push_back(static_cast<double>(m));
    t_pc_f.push_back(time_best(
        [&] {
          RngStream r(3);
          auto fmap = std::make_shared<FeatureMap>(build_rff(spec, m, r));
          const SamplePath p = draw_pathwise_path(gp, fmap, r);
          volatile double keep = p.values(grid1k).sum();
          (void)keep;
        },
        3));
  }
  const double e_exh = studies::loglog_slope(nq, t_exh);
  const double e_pcq = studies::loglog_slope(nq, t_pc_q);
  const double e_pcf = studies::loglog_slope(nphi, t_pc_f);
  char buf[192];
  std::snprintf(buf, sizeof(buf),
                "exponents: exhaustive %.2f (>= 2.2), pc-in-queries %.2f, "
                "pc-in-features %.2f (<= 1.3)",
                e_exh, e_pcq, e_pcf);
  report(4, e_exh >= 2.2 && e_pcq <= 1.3 && e_pcf <= 1.3,
         "sampling cost scaling shapes", buf);
}

// ---------------------------------------------------------------- criterion 5
// GP-based Ishigami sensitivity indices.
void criterion_5() {
  RngStream rng(505);
  const auto prob = testbeds::so_benchmark("ishigami");
  const Eigen::Index n_train = 300;
  std::vector<Marginal> marg;
  for (int j = 0; j < 3; ++j) marg.push_back(Marginal::uniform(-M_PI, M_PI));
  InputDistribution dist(marg);
  RngStream data_rng = rng.split(1);
  MatrixXd X = dist.sample_matrix(n_train, data_rng);
  VectorXd y(n_train);
  for (Eigen::Index i = 0; i < n_train; ++i)
    y(i) = prob.eval(X.row(i).transpose());
  Dataset data = Dataset::from_raw(X, y, prob.bounds);
  RngStream fit_rng = rng.split(2);
  FittedGP gp = fit(data, KernelFamily::SquaredExponential, 1e-4, 10, fit_rng);

  GsaOptions opt;
  opt.n_phi = 640;  // single-core budget; tolerances unchanged
  opt.pairs = 10;
  opt.sampler = PathSampler::Rff;
  opt.accelerated_weights = true;
  RngStream gsa_rng = rng.split(3);
  const SensitivityResult res = gp_gsa(gp, dist, 100000, 200, opt, gsa_rng);

  const VectorXd S_exact = prob.known_indices->first;
  const VectorXd ST_exact = prob.known_indices->second;
  bool pass = true;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(res.S_median(i) - S_exact(i)) > 0.03) pass = false;
    if (std::abs(res.ST_median(i) - ST_exact(i)) > 0.03) pass = false;
    if (res.S_iqr(i) > 0.05 || res.ST_iqr(i) > 0.05) pass = false;
  }
  char buf[320];
  std::snprintf(buf, sizeof(buf),
                "S = (%.4f, %.4f, %.4f) vs (0.3138, 0.4424, 0); "
                "ST = (%.4f, %.4f, %.4f) vs (0.5574, 0.4424, 0.2436); "
                "max IQR %.3f",
                res.S_median(0), res.S_median(1), res.S_median(2),
                res.ST_median(0), res.ST_median(1), res.ST_median(2),
                std::max(res.S_iqr.maxCoeff(), res.ST_iqr.maxCoeff()));
  report(5, pass, "Ishigami indices from GP posterior paths", buf);
}

// ---------------------------------------------------------------- criterion 6
// Direct pick-freeze estimator on the additive test function.
void criterion_6() {
  RngStream rng(606);
  InputDistribution dist({Marginal::uniform(0, 1), Marginal::uniform(0, 1)});
  const auto pf = generate_pick_freeze(dist, 100000, rng);
  const auto [S, ST] =
      estimate_indices([](const VectorXd& x) { return x(0) + x(1); }, pf);
  const bool pass = std::abs(S(0) - 0.5) <= 0.02 && std::abs(ST(0) - 0.5) <= 0.02 &&
                    std::abs(S(1) - 0.5) <= 0.02 && std::abs(ST(1) - 0.5) <= 0.02;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "S1 = %.4f, ST1 = %.4f, S2 = %.4f, ST2 = %.4f",
                S(0), ST(0), S(1), ST(1));
  report(6, pass, "direct Monte Carlo estimator on x1 + x2", buf);
}

// ---------------------------------------------------------------- criterion 7
// Ten-bar truss sensitivity rankings via GP paths.
void criterion_7() {
  RngStream rng(707);
  const auto dist = testbeds::truss_input_distribution();
  const Eigen::Index n_train = 600;
  RngStream data_rng = rng.split(1);
  MatrixXd X = dist.sample_matrix(n_train, data_rng);
  VectorXd y(n_train);
  for (Eigen::Index i = 0; i < n_train; ++i)
    y(i) = testbeds::truss_response(X.row(i).transpose());
  Dataset data = Dataset::from_raw(X, y, dist.cover_bounds(4.0));
  RngStream fit_rng = rng.split(2);
  FittedGP gp = fit(data, KernelFamily::SquaredExponential, 1e-4, 10, fit_rng);

  GsaOptions opt;
  opt.n_phi = 512;  // single-core budget; orderings are the gate
  opt.pairs = 10;
  opt.sampler = PathSampler::Rff;
  opt.accelerated_weights = true;
  RngStream gsa_rng = rng.split(3);
  const SensitivityResult res = gp_gsa(gp, dist, 50000, 100, opt, gsa_rng);
  const VectorXd& S = res.S_median;

  const bool g1 = S(3) > S(1) && S(1) > S(4) && S(4) > S(0) && S(0) > S(2);
  const double t1 = std::min(S(12), S(14));
  const double t2lo = std::min(S(5), S(7)), t2hi = std::max(S(5), S(7));
  const double t3lo = std::min(S(6), S(11)), t3hi = std::max(S(6), S(11));
  const double t4 = std::max(std::max(S(8), S(9)), std::max(S(10), S(13)));
  const bool g2 = t1 > t2hi && t2lo > t3hi && t3lo > t4;

  // paper-reported values; +-0.02 agreement upgrades the result to full pass
  const double table[15] = {0.0254, 0.2086, 0.0013, 0.3674, 0.0891,
                            0.0594, 0.0160, 0.0535, 0.0000, 0.0029,
                            0.0001, 0.0183, 0.0736, 0.0002, 0.0699};
  bool values_match = true;
  for (int i = 0; i < 15; ++i)
    if (std::abs(S(i) - table[i]) > 0.02) values_match = false;

  char buf[420];
  std::snprintf(
      buf, sizeof(buf),
      "E %.3f > P2 %.3f > L %.3f > P1 %.3f > P3 %.4f : %s; "
      "A-groups {%.4f} > {%.4f..%.4f} > {%.4f..%.4f} > {%.4f} : %s%s",
      S(3), S(1), S(4), S(0), S(2), g1 ? "ok" : "violated", t1, t2lo, t2hi,
      t3lo, t3hi, t4, g2 ? "ok" : "violated",
      values_match ? "; FULL PASS vs reported values" : "");
  report(7, g1 && g2, "truss sensitivity ranking gates", buf);
}

// ---------------------------------------------------------------- criterion 8
// Thompson-sampling optimization of the Schwefel function.
void criterion_8() {
  const auto prob = testbeds::so_benchmark("schwefel2");
  const int n_seeds = 10;
  const Eigen::Index K = 200;

  auto run = [&](AcquisitionKind kind, std::vector<double>& initial_regret,
                 std::vector<double>& final_regret) {
    for (int s = 0; s < n_seeds; ++s) {
      BoCampaign c;
      c.objective = prob.eval;
      c.bounds = prob.bounds;
      RngStream rng(9000 + s);
      RngStream init_rng = rng.split(55);
      c.X = initial_design(prob.bounds, 20, init_rng);
      c.y.resize(20);
      for (int i = 0; i < 20; ++i)
        c.y(i) = prob.eval(c.X.row(i).transpose());
      initial_regret.push_back(
          std::log10(std::max(c.y_min(), 1e-12)));
      TsOptions opt;
      opt.n_phi = 1024;
      opt.inner_starts = 500;
      opt.accelerated_weights = true;
      AcquisitionSpec acq;
      acq.kind = kind;
      gp_ts_so(c, 1e-3, K, acq, rng, opt);
      final_regret.push_back(std::log10(std::max(c.y_min(), 1e-12)));
    }
  };

  std::vector<double> pc0, pc1, rff0, rff1;
  run(AcquisitionKind::TsPc, pc0, pc1);
  run(AcquisitionKind::TsRff, rff0, rff1);
  const double pc_drop = median_of(pc0) - median_of(pc1);
  const double rff_drop = median_of(rff0) - median_of(rff1);
  const bool decades = pc_drop >= 2.0;
  const bool compare = median_of(pc1) <= median_of(rff1) + 0.5;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "median log10 regret: pc %.2f -> %.2f (drop %.2f), "
                "rff %.2f -> %.2f (drop %.2f)",
                median_of(pc0), median_of(pc1), pc_drop, median_of(rff0),
                median_of(rff1), rff_drop);
  report(8, decades && compare,
         "GP-TS on the 2-D Schwefel function improves by two decades", buf);
}

// ---------------------------------------------------------------- criterion 9
// Multi-objective Thompson sampling on VLMOP2 against an evolutionary
// baseline.
void criterion_9() {
  const auto prob = testbeds::mo_benchmark("vlmop2");
  VectorXd ref(2);
  ref << 2, 2;
  // desk-scale baseline front
  Nsga2Config bcfg;
  bcfg.population = 200;
  bcfg.generations = 200;
  bcfg.n_obj = 2;
  RngStream brng(987654321);
  const ParetoArchive base = nsga2(prob.eval, prob.bounds, bcfg, brng);
  const double base_hv = hypervolume(base.front(), ref);

  std::vector<double> gammas;
  for (int s = 0; s < 5; ++s) {
    MoCampaign c;
    c.objectives = prob.eval;
    c.bounds = prob.bounds;
    c.report_ref = ref;
    RngStream rng(7100 + s);
    RngStream init_rng = rng.split(55);
    c.X = initial_design(prob.bounds, 20, init_rng);
    c.Y.resize(20, 2);
    for (int i = 0; i < 20; ++i)
      c.Y.row(i) = prob.eval(c.X.row(i).transpose()).transpose();
    Nsga2Config ncfg;
    ncfg.population = 500;
    ncfg.generations = 100;
    ncfg.n_obj = 2;
    TsMoOptions opt;
    opt.n_phi = 1024;
    gp_ts_mo(c, VectorXd::Constant(2, 1e-3), 60, ncfg, rng, opt);
    gammas.push_back(c.hv_history.back() / base_hv);
  }
  const double med = median_of(gammas);
  char buf[192];
  std::snprintf(buf, sizeof(buf),
                "median final gamma = %.4f (per seed: %.3f %.3f %.3f %.3f %.3f)",
                med, gammas[0], gammas[1], gammas[2], gammas[3], gammas[4]);
  report(9, med >= 0.95, "GP-TS-MO captures the VLMOP2 baseline hypervolume",
         buf);
}

// --------------------------------------------------------------- criterion 10
// Dual-route oracle equivalences.
void criterion_10() {
  bool all = true;
  std::string detail;

  {  // (a) Matheron samples against the conditional moments
    RngStream rng(41);
    VectorXd m(2);
    m << 0.7, -1.2;
    MatrixXd S(2, 2);
    S << 2.0, 1.1, 1.1, 1.5;
    BlockGaussian joint(GaussianDist(m, S), 1);
    const VectorXd beta = VectorXd::Constant(1, 0.4);
    const GaussianDist cond = condition(joint, beta);
    const Eigen::Index n = 100000;
    double sum = 0, sumsq = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double v = matheron_conditional_sample(joint, beta, rng)(0);
      sum += v;
      sumsq += v * v;
    }
    const double mean = sum / n, var = sumsq / n - mean * mean;
    const double se_mean = std::sqrt(cond.cov()(0, 0) / n);
    const double se_var = std::sqrt(2.0 / n) * cond.cov()(0, 0);
    const bool ok = std::abs(mean - cond.mean()(0)) <= 4 * se_mean &&
                    std::abs(var - cond.cov()(0, 0)) <= 4 * se_var;
    all = all && ok;
    detail += std::string("matheron ") + (ok ? "ok" : "FAIL") + "; ";
  }
  {  // (b) 2-D hypervolume sweep against Monte Carlo on 50 random fronts
    RngStream rng(42);
    bool ok = true;
    for (int t = 0; t < 50; ++t) {
      std::vector<VectorXd> pts;
      const int m = 2 + static_cast<int>(rng.uniform_index(8));
      for (int i = 0; i < m; ++i) pts.push_back(3.5 * rng.uniform_vector(2));
      VectorXd r(2);
      r << 4, 4;
      const double exact = hypervolume(pts, r);
      const long samples = 400000;
      const double mc = oracles::mc_hypervolume(pts, r, samples, 100 + t);
      const double box = 16.0;
      const double se = box * std::sqrt(0.25 / samples);
      if (std::abs(exact - mc) > 4 * se + 1e-9) ok = false;
    }
    all = all && ok;
    detail += std::string("hypervolume ") + (ok ? "ok" : "FAIL") + "; ";
  }
  {  // (c) direct vs SMW weight posterior
    RngStream rng(43);
    MatrixXd Phi(6, 40);
    for (int i = 0; i < 6; ++i)
      Phi.row(i) = rng.normal_vector(40).transpose();
    const VectorXd y = rng.normal_vector(6);
    const auto a = weight_posterior(Phi, y, 0.3, false);
    const auto b = weight_posterior(Phi, y, 0.3, true);
    const bool ok = (a.mean - b.mean).cwiseAbs().maxCoeff() < 1e-8 &&
                    (a.cov - b.cov).cwiseAbs().maxCoeff() < 1e-8;
    all = all && ok;
    detail += std::string("smw ") + (ok ? "ok" : "FAIL") + "; ";
  }
  {  // (d) pareto sort against the pairwise oracle
    RngStream rng(44);
    std::vector<VectorXd> pts;
    for (int i = 0; i < 200; ++i) pts.push_back(rng.normal_vector(3));
    const auto keep = pareto_sort(pts);
    const auto mask = oracles::pareto_mask(pts);
    bool ok = true;
    std::vector<bool> got(pts.size(), false);
    for (auto i : keep) got[static_cast<std::size_t>(i)] = true;
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (got[i] != mask[i]) ok = false;
    all = all && ok;
    detail += std::string("pareto ") + (ok ? "ok" : "FAIL") + "; ";
  }
  {  // (e) path gradients against finite differences
    RngStream rng(45);
    MatrixXd X(10, 2);
    VectorXd y(10);
    for (int i = 0; i < 10; ++i) {
      X.row(i) = rng.uniform_vector(2).transpose();
      y(i) = std::sin(4 * X(i, 0)) + X(i, 1);
    }
    Dataset data = Dataset::from_normalized(X, y);
    FittedGP gp(data,
                KernelSpec::isotropic(KernelFamily::SquaredExponential, 1.0,
                                      0.4, 2),
                1e-3);
    bool ok = true;
    for (int t = 0; t < 100; ++t) {
      auto fmap = std::make_shared<FeatureMap>(
          build_rff(gp.kernel(), 200, rng));
      const SamplePath path = t % 2 == 0
                                  ? draw_weight_space_path(gp, fmap, rng)
                                  : draw_pathwise_path(gp, fmap, rng);
      const VectorXd x = rng.uniform_vector(2);
      const VectorXd g = path_grad(path, x);
      const VectorXd fd = oracles::finite_diff_grad(
          [&](const VectorXd& p) { return path.value(p); }, x);
      if ((g - fd).norm() > 1e-5 * std::max(1.0, fd.norm())) ok = false;
    }
    all = all && ok;
    detail += std::string("path-grad ") + (ok ? "ok" : "FAIL");
  }
  report(10, all, "dual-route oracle equivalences", detail);
}

// --------------------------------------------------------------- criterion 11
// Benchmark ground truths.
void criterion_11() {
  bool all = true;
  std::string bad;
  for (const auto& f : testbeds::so_benchmarks()) {
    if (!f.known_minimum) continue;
    const auto& [xs, cs] = *f.known_minimum;
    const double tol = f.name == "schwefel2" ? 1e-3 : 1e-4;
    if (std::abs(f.eval(xs) - cs) > tol) {
      all = false;
      bad += f.name + " ";
    }
  }
  {  // trivial identities
    using namespace testbeds;
    if (std::abs(vlmop2(VectorXd::Constant(2, M_SQRT1_2))(0)) > 1e-12)
      all = false, bad += "vlmop2-c1 ";
    if (std::abs(vlmop2(VectorXd::Constant(2, M_SQRT1_2))(1) -
                 (1.0 - std::exp(-4.0))) > 1e-12)
      all = false, bad += "vlmop2-c2 ";
    VectorXd xd = VectorXd::Constant(8, 0.5);
    xd(0) = 0.31;
    xd(1) = 0.77;
    if (std::abs(dtlz2a(xd).norm() - 1.0) > 1e-12) all = false, bad += "dtlz2a ";
    if (ishigami(VectorXd::Zero(3)) != 0.0) all = false, bad += "ishigami ";
    const double A[10] = {20, 20, 20, 20, 20, 20, 20, 20, 20, 20};
    const double u = truss_displacement(60, 40, 10, 200, 1, A);
    if (std::abs(truss_weighted_objective(A) - (0.6 + 0.4 * u / 0.03)) > 1e-12)
      all = false, bad += "truss-objective ";
  }
  report(11, all, "benchmark ground truths and trivial identities",
         all ? "all minima and identities hold" : ("violations: " + bad));
}

}  // namespace

int main(int argc, char** argv) {
  const std::function<void()> criteria[] = {
      criterion_1, criterion_2, criterion_3, criterion_4,
      criterion_5, criterion_6, criterion_7, criterion_8,
      criterion_9, criterion_10, criterion_11};
  std::vector<int> selected;
  for (int a = 1; a < argc; ++a) {
    const int idx = std::atoi(argv[a]);
    if (idx < 1 || idx > 11) {
      std::fprintf(stderr, "unknown criterion: %s\n", argv[a]);
      return 64;
    }
    selected.push_back(idx);
  }
  if (selected.empty())
    for (int i = 1; i <= 11; ++i) selected.push_back(i);
  for (const int idx : selected) criteria[idx - 1]();
  return g_failures;
}
