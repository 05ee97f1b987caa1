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

#ifndef GPSAMP_TSOPT_HPP
#define GPSAMP_TSOPT_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gpsamp/detail/lbfgs.hpp"
#include "gpsamp/detail/specfun.hpp"
#include "gpsamp/errors.hpp"
#include "gpsamp/paths.hpp"

namespace gpsamp {

// Jittered Latin hypercube in the raw box: each 1-D projection puts exactly
// one point in each stratum of width 1/n.
inline MatrixXd initial_design(const MatrixXd& bounds, Eigen::Index n,
                               RngStream& rng) {
  require(n >= 1, "initial_design: n must be >= 1");
  require_dims(bounds.cols() == 2, "initial_design: bounds must be d x 2");
  const Eigen::Index d = bounds.rows();
  MatrixXd X(n, d);
  std::vector<int> perm(n);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) perm[i] = static_cast<int>(i);
    for (Eigen::Index i = n - 1; i > 0; --i)
      std::swap(perm[i], perm[rng.uniform_index(i + 1)]);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double u = (perm[i] + rng.uniform()) / static_cast<double>(n);
      X(i, j) = bounds(j, 0) + u * (bounds(j, 1) - bounds(j, 0));
    }
  }
  return X;
}

struct MultistartOptions {
  int n_starts = 500;
  double min_dist = 1e-6;
  detail::LbfgsOptions lbfgs{100, 1e-12, 1e-12, 8, 40};
};

// Multi-start bounded quasi-Newton minimization. Returns the best local
// minimum at least min_dist (Euclidean) from every excluded point; when every
// local minimum violates the exclusion, the best one is pushed min_dist in a
// random in-bounds direction.
template <typename FG>
VectorXd multistart_minimize(FG&& fg, const VectorXd& lo, const VectorXd& hi,
                             int n_starts, RngStream& rng,
                             const std::vector<VectorXd>& exclude = {},
                             double min_dist = 0.0,
                             const MultistartOptions& opt_in = {}) {
  require(n_starts >= 1, "multistart_minimize: n_starts must be >= 1");
  require(min_dist >= 0, "multistart_minimize: min_dist must be >= 0");
  if (!((hi - lo).array() > 0).all() || lo.size() == 0)
    throw NoFeasiblePoint("multistart_minimize: degenerate bounds");
  MultistartOptions opt = opt_in;
  opt.n_starts = n_starts;
  opt.min_dist = min_dist;
  const Eigen::Index d = lo.size();

  std::vector<std::pair<double, VectorXd>> minima;
  minima.reserve(n_starts);
  for (int s = 0; s < n_starts; ++s) {
    VectorXd x0(d);
    for (Eigen::Index j = 0; j < d; ++j) x0(j) = rng.uniform(lo(j), hi(j));
    auto r = detail::minimize_box(fg, std::move(x0), lo, hi, opt.lbfgs);
    if (std::isfinite(r.f)) minima.emplace_back(r.f, std::move(r.x));
  }
  if (minima.empty())
    throw IterationFailed("multistart_minimize: no finite local minimum");
  std::sort(minima.begin(), minima.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  auto feasible = [&](const VectorXd& x) {
    for (const auto& e : exclude)
      if ((x - e).norm() < min_dist) return false;
    return true;
  };
  if (min_dist == 0.0 || exclude.empty()) return minima.front().second;
  for (const auto& [f, x] : minima)
    if (feasible(x)) return x;

  // all local minima sit inside exclusion balls: push the best one away
  const VectorXd& base = minima.front().second;
  for (int attempt = 0; attempt < 256; ++attempt) {
    VectorXd dir(d);
    for (Eigen::Index j = 0; j < d; ++j) dir(j) = rng.normal();
    const double nrm = dir.norm();
    if (nrm < 1e-300) continue;
    const double radius = min_dist * (1.0 + attempt / 16.0);
    VectorXd cand =
        (base + (radius / nrm) * dir).cwiseMax(lo).cwiseMin(hi);
    if (feasible(cand)) return cand;
  }
  throw IterationFailed("multistart_minimize: exclusion could not be satisfied");
}

enum class AcquisitionKind { TsRff, TsPc, Ei, Pi, Lcb };

inline std::string to_string(AcquisitionKind k) {
  switch (k) {
    case AcquisitionKind::TsRff: return "ts-rff";
    case AcquisitionKind::TsPc: return "ts-pc";
    case AcquisitionKind::Ei: return "ei";
    case AcquisitionKind::Pi: return "pi";
    case AcquisitionKind::Lcb: return "lcb";
  }
  return "ts-pc";
}

inline AcquisitionKind acquisition_from_string(const std::string& s) {
  if (s == "ts-rff") return AcquisitionKind::TsRff;
  if (s == "ts-pc") return AcquisitionKind::TsPc;
  if (s == "ei") return AcquisitionKind::Ei;
  if (s == "pi") return AcquisitionKind::Pi;
  if (s == "lcb") return AcquisitionKind::Lcb;
  throw ConfigError("unknown acquisition: " + s);
}

struct AcquisitionSpec {
  AcquisitionKind kind = AcquisitionKind::TsPc;
  double lcb_beta = 2.0;
};

// EI / PI / LCB in minimization form, with gradient. sigma -> 0 limits:
// EI -> max(y_min - mu, 0), PI -> step, LCB -> mu.
inline double acquisition_value(AcquisitionKind kind, const FittedGP& gp,
                                const VectorXd& x, double y_min,
                                VectorXd* grad = nullptr,
                                double lcb_beta = 2.0) {
  double mu, var;
  VectorXd dmu, dvar;
  gp.predict_point(x, mu, var, grad ? &dmu : nullptr, grad ? &dvar : nullptr);
  const double sigma = std::sqrt(std::max(var, 0.0));
  const double diff = y_min - mu;
  if (kind == AcquisitionKind::Lcb) {
    if (grad) {
      VectorXd dsigma = sigma > 1e-12 ? (dvar / (2.0 * sigma)).eval()
                                      : VectorXd::Zero(x.size());
      *grad = dmu - lcb_beta * dsigma;
    }
    return mu - lcb_beta * sigma;
  }
  if (sigma < 1e-12) {
    if (kind == AcquisitionKind::Ei) {
      if (grad) *grad = diff > 0 ? (-dmu).eval() : VectorXd::Zero(x.size());
      return std::max(diff, 0.0);
    }
    if (grad) *grad = VectorXd::Zero(x.size());
    return diff > 0 ? 1.0 : 0.0;
  }
  const double z = diff / sigma;
  const double Phi = detail::norm_cdf(z);
  const double phi = detail::norm_pdf(z);
  if (kind == AcquisitionKind::Ei) {
    if (grad) {
      const VectorXd dsigma = dvar / (2.0 * sigma);
      *grad = -Phi * dmu + phi * dsigma;
    }
    return diff * Phi + sigma * phi;
  }
  // PI
  if (grad) {
    const VectorXd dsigma = dvar / (2.0 * sigma);
    const VectorXd dz = (-dmu - z * dsigma) / sigma;
    *grad = phi * dz;
  }
  return Phi;
}

struct BoHistoryEntry {
  int iteration = 0;  // 0 = initial design
  VectorXd x;
  double y = 0.0;
  double y_min = 0.0;
};

// Growing single-objective campaign state in raw units.
struct BoCampaign {
  std::function<double(const VectorXd&)> objective;  // raw-space evaluator
  MatrixXd bounds;                                   // d x 2
  MatrixXd X;                                        // raw inputs, grows
  VectorXd y;                                        // raw noisy observations
  std::vector<BoHistoryEntry> history;

  Eigen::Index dim() const { return bounds.rows(); }
  Eigen::Index size() const { return y.size(); }
  double y_min() const { return y.minCoeff(); }
  VectorXd x_min() const {
    Eigen::Index idx;
    y.minCoeff(&idx);
    return X.row(idx).transpose();
  }
  void append(const VectorXd& x_new, double y_new, int iteration) {
    X.conservativeResize(X.rows() + 1, Eigen::NoChange);
    X.row(X.rows() - 1) = x_new.transpose();
    y.conservativeResize(y.size() + 1);
    y(y.size() - 1) = y_new;
    history.push_back({iteration, x_new, y_new, y_min()});
  }
};

struct TsOptions {
  Eigen::Index n_phi = 2000;
  int first_fit_restarts = 10;
  int refit_restarts = 3;      // plus the warm start each iteration
  int inner_starts = 500;
  double min_dist = 1e-6;      // in normalized space
  bool accelerated_weights = false;
  KernelFamily family = KernelFamily::SquaredExponential;
};

// One optimization campaign: refit, draw or form the acquisition, minimize it
// away from previous queries, evaluate with observation noise, append. Model
// and acquisition work in normalized space; the campaign records raw values.
inline FittedGP gp_ts_so(BoCampaign& campaign, double sigma_n, Eigen::Index K,
                         const AcquisitionSpec& acq, RngStream& rng,
                         const TsOptions& opt = {}) {
  require(campaign.size() >= 2, "gp_ts_so: need at least 2 initial points");
  require(K >= 0, "gp_ts_so: K must be >= 0");
  const Eigen::Index d = campaign.dim();
  const VectorXd lo = VectorXd::Zero(d), hi = VectorXd::Ones(d);

  std::optional<VectorXd> warm;
  FittedGP gp;
  for (Eigen::Index k = 0; k <= K; ++k) {
    Dataset data = Dataset::from_raw(campaign.X, campaign.y, campaign.bounds);
    RngStream iter_rng = rng.split(static_cast<std::uint64_t>(k));
    FitOptions fopt;
    fopt.warm_start = warm;
    const int restarts =
        (k == 0) ? opt.first_fit_restarts : opt.refit_restarts;
    gp = fit(data, opt.family, sigma_n, restarts, iter_rng, fopt);
    {
      VectorXd theta(1 + d);
      theta(0) = std::log(gp.kernel().sigma_f);
      theta.segment(1, d) = gp.kernel().lengthscales.array().log();
      warm = theta;
    }
    if (k == K) break;

    std::vector<VectorXd> exclude;
    exclude.reserve(data.size());
    for (Eigen::Index i = 0; i < data.size(); ++i)
      exclude.push_back(data.X().row(i).transpose());

    const double y_min_norm = data.y().minCoeff();
    VectorXd x_norm;
    bool done = false;
    for (int attempt = 0; attempt < 2 && !done; ++attempt) {
      RngStream draw_rng = iter_rng.split(10 + attempt);
      try {
        if (acq.kind == AcquisitionKind::TsRff ||
            acq.kind == AcquisitionKind::TsPc) {
          auto fmap = std::make_shared<FeatureMap>(
              build_rff(gp.kernel(), opt.n_phi, draw_rng));
          SamplePath path =
              acq.kind == AcquisitionKind::TsRff
                  ? draw_weight_space_path(gp, fmap, draw_rng,
                                           opt.accelerated_weights)
                  : draw_pathwise_path(gp, fmap, draw_rng);
          auto fg = [&path](const VectorXd& x, VectorXd& g) {
            return path.value_and_gradient(x, g);
          };
          x_norm = multistart_minimize(fg, lo, hi, opt.inner_starts, draw_rng,
                                       exclude, opt.min_dist);
        } else {
          auto fg = [&](const VectorXd& x, VectorXd& g) {
            VectorXd ag;
            const double v = acquisition_value(acq.kind, gp, x, y_min_norm,
                                               &ag, acq.lcb_beta);
            if (acq.kind == AcquisitionKind::Lcb) {
              g = ag;
              return v;
            }
            g = -ag;  // maximize EI / PI
            return -v;
          };
          x_norm = multistart_minimize(fg, lo, hi, opt.inner_starts, draw_rng,
                                       exclude, opt.min_dist);
        }
        done = true;
      } catch (const Error&) {
        if (attempt == 1) throw IterationFailed("gp_ts_so: inner optimization failed twice");
      }
    }

    const VectorXd x_raw = data.to_raw(x_norm);
    const double noise_raw = sigma_n * data.out_std() * iter_rng.normal();
    const double y_raw = campaign.objective(x_raw) + noise_raw;
    campaign.append(x_raw, y_raw, static_cast<int>(k) + 1);
  }
  return gp;
}

}  // namespace gpsamp

#endif
