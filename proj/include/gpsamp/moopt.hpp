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

#ifndef GPSAMP_MOOPT_HPP
#define GPSAMP_MOOPT_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gpsamp/errors.hpp"
#include "gpsamp/paths.hpp"
#include "gpsamp/sobol.hpp"
#include "gpsamp/tsopt.hpp"

namespace gpsamp {

// strict Pareto dominance under minimization
inline bool dominates(const VectorXd& a, const VectorXd& b) {
  bool strict = false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) > b(i)) return false;
    if (a(i) < b(i)) strict = true;
  }
  return strict;
}

// indices of the non-dominated subset; duplicates are both retained
inline std::vector<Eigen::Index> pareto_sort(
    const std::vector<VectorXd>& points) {
  std::vector<Eigen::Index> keep;
  const Eigen::Index n = static_cast<Eigen::Index>(points.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    bool dominated = false;
    for (Eigen::Index j = 0; j < n && !dominated; ++j)
      if (j != i && dominates(points[j], points[i])) dominated = true;
    if (!dominated) keep.push_back(i);
  }
  return keep;
}

// Mutually non-dominated (x, y) pairs, minimization convention.
class ParetoArchive {
 public:
  struct Entry {
    VectorXd x;
    VectorXd y;
  };

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  std::vector<VectorXd> front() const {
    std::vector<VectorXd> ys;
    ys.reserve(entries_.size());
    for (const auto& e : entries_) ys.push_back(e.y);
    return ys;
  }

  // returns true when the candidate enters the archive
  bool insert(VectorXd x, VectorXd y) {
    for (const auto& e : entries_)
      if (dominates(e.y, y)) return false;
    std::erase_if(entries_,
                  [&](const Entry& e) { return dominates(y, e.y); });
    entries_.push_back({std::move(x), std::move(y)});
    return true;
  }

  static ParetoArchive from_points(const MatrixXd& X, const MatrixXd& Y) {
    require_dims(X.rows() == Y.rows(), "ParetoArchive: X/Y row mismatch");
    std::vector<VectorXd> ys;
    ys.reserve(Y.rows());
    for (Eigen::Index i = 0; i < Y.rows(); ++i)
      ys.push_back(Y.row(i).transpose());
    ParetoArchive a;
    for (Eigen::Index i : pareto_sort(ys))
      a.entries_.push_back({X.row(i).transpose(), Y.row(i).transpose()});
    return a;
  }

 private:
  std::vector<Entry> entries_;
};

struct HypervolumeResult {
  double value = 0.0;
  double std_error = 0.0;   // Monte Carlo estimates only
  Eigen::Index ignored = 0;  // points outside the reference box
};

// Dominated volume bounded by the reference point. Exact sweep for two
// objectives, Monte Carlo for three or more.
inline HypervolumeResult hypervolume_full(const std::vector<VectorXd>& front,
                                          const VectorXd& r,
                                          Eigen::Index mc_samples = 1000000,
                                          std::uint64_t mc_seed = 2718281828) {
  HypervolumeResult res;
  std::vector<VectorXd> pts;
  for (const auto& p : front) {
    require_dims(p.size() == r.size(), "hypervolume: dimension mismatch");
    if ((p.array() <= r.array()).all())
      pts.push_back(p);
    else
      ++res.ignored;
  }
  if (pts.empty()) return res;
  // reduce to the non-dominated subset
  {
    std::vector<VectorXd> nd;
    for (Eigen::Index i : pareto_sort(pts)) nd.push_back(pts[i]);
    pts.swap(nd);
  }
  const Eigen::Index nc = r.size();
  if (nc == 1) {
    double best = pts[0](0);
    for (const auto& p : pts) best = std::min(best, p(0));
    res.value = r(0) - best;
    return res;
  }
  if (nc == 2) {
    std::sort(pts.begin(), pts.end(),
              [](const VectorXd& a, const VectorXd& b) { return a(0) < b(0); });
    double hv = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double next_x = (i + 1 < pts.size()) ? pts[i + 1](0) : r(0);
      hv += (next_x - pts[i](0)) * (r(1) - pts[i](1));
    }
    res.value = hv;
    return res;
  }
  // MC: uniform box [low, r], low = componentwise front minimum
  VectorXd low = pts[0];
  for (const auto& p : pts) low = low.cwiseMin(p);
  const double box = (r - low).prod();
  RngStream rng(mc_seed);
  Eigen::Index hits = 0;
  VectorXd z(nc);
  for (Eigen::Index s = 0; s < mc_samples; ++s) {
    for (Eigen::Index j = 0; j < nc; ++j) z(j) = rng.uniform(low(j), r(j));
    for (const auto& p : pts) {
      if ((p.array() <= z.array()).all()) {
        ++hits;
        break;
      }
    }
  }
  const double f = static_cast<double>(hits) / mc_samples;
  res.value = box * f;
  res.std_error = box * std::sqrt(std::max(f * (1.0 - f), 0.0) / mc_samples);
  return res;
}

inline double hypervolume(const std::vector<VectorXd>& front, const VectorXd& r,
                          Eigen::Index mc_samples = 1000000) {
  return hypervolume_full(front, r, mc_samples).value;
}

// hypervolume improvement of candidate c against a front; zero when c is
// dominated or outside the reference box
inline double hvi(const VectorXd& c, const std::vector<VectorXd>& front,
                  const VectorXd& r, Eigen::Index mc_samples = 100000,
                  std::uint64_t mc_seed = 2718281828) {
  require_dims(c.size() == r.size(), "hvi: dimension mismatch");
  if (!((c.array() <= r.array()).all())) return 0.0;
  if (r.size() <= 2) {
    std::vector<VectorXd> with = front;
    with.push_back(c);
    const double delta =
        hypervolume(with, r) - hypervolume(front, r);
    return std::max(delta, 0.0);
  }
  // samples confined to the candidate's own box [c, r]; count those not
  // already dominated by the front
  const double box = (r - c).prod();
  if (!(box > 0)) return 0.0;
  for (const auto& p : front)
    if ((p.array() <= c.array()).all()) return 0.0;
  RngStream rng(mc_seed);
  const Eigen::Index nc = r.size();
  Eigen::Index fresh = 0;
  VectorXd z(nc);
  for (Eigen::Index s = 0; s < mc_samples; ++s) {
    for (Eigen::Index j = 0; j < nc; ++j) z(j) = rng.uniform(c(j), r(j));
    bool dominated = false;
    for (const auto& p : front) {
      if ((p.array() <= z.array()).all()) {
        dominated = true;
        break;
      }
    }
    if (!dominated) ++fresh;
  }
  return box * static_cast<double>(fresh) / mc_samples;
}

// componentwise maximum of observed objective values
inline VectorXd reference_point(const MatrixXd& Y) {
  if (Y.rows() == 0) throw EmptyData("reference_point: no observations");
  return Y.colwise().maxCoeff().transpose();
}

struct Nsga2Config {
  int population = 500;
  int generations = 100;
  double crossover_fraction = 0.65;
  double eta_crossover = 15.0;
  double eta_mutation = 20.0;
  double mutation_prob = -1.0;  // <0 means 1/d
  Eigen::Index n_obj = 2;
};

namespace detail {

struct Nsga2Individual {
  VectorXd x;
  VectorXd y;
  int rank = 0;
  double crowding = 0.0;
};

inline void fast_nondominated_rank(std::vector<Nsga2Individual>& pop) {
  const std::size_t n = pop.size();
  std::vector<std::vector<std::size_t>> dominated_by(n);
  std::vector<int> count(n, 0);
  std::vector<std::size_t> current;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (dominates(pop[i].y, pop[j].y))
        dominated_by[i].push_back(j);
      else if (dominates(pop[j].y, pop[i].y))
        ++count[i];
    }
    if (count[i] == 0) {
      pop[i].rank = 0;
      current.push_back(i);
    }
  }
  int rank = 0;
  while (!current.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t i : current) {
      for (std::size_t j : dominated_by[i]) {
        if (--count[j] == 0) {
          pop[j].rank = rank + 1;
          next.push_back(j);
        }
      }
    }
    ++rank;
    current.swap(next);
  }
}

inline void crowding_distance(std::vector<Nsga2Individual*>& front) {
  const std::size_t n = front.size();
  for (auto* ind : front) ind->crowding = 0.0;
  if (n <= 2) {
    for (auto* ind : front)
      ind->crowding = std::numeric_limits<double>::infinity();
    return;
  }
  const Eigen::Index nc = front[0]->y.size();
  for (Eigen::Index m = 0; m < nc; ++m) {
    std::sort(front.begin(), front.end(),
              [m](const Nsga2Individual* a, const Nsga2Individual* b) {
                return a->y(m) < b->y(m);
              });
    front.front()->crowding = std::numeric_limits<double>::infinity();
    front.back()->crowding = std::numeric_limits<double>::infinity();
    const double span = front.back()->y(m) - front.front()->y(m);
    if (span <= 0) continue;
    for (std::size_t i = 1; i + 1 < n; ++i)
      front[i]->crowding += (front[i + 1]->y(m) - front[i - 1]->y(m)) / span;
  }
}

}  // namespace detail

// Real-coded NSGA-II: fast non-dominated sorting, crowding truncation, binary
// tournament on (rank, crowding), simulated-binary crossover, polynomial
// mutation. Deterministic for a fixed RngStream.
inline ParetoArchive nsga2(
    const std::function<VectorXd(const VectorXd&)>& objectives,
    const MatrixXd& bounds, const Nsga2Config& cfg, RngStream& rng) {
  require(cfg.population >= 4 && cfg.population % 2 == 0,
          "nsga2: population must be even and >= 4");
  require(cfg.generations >= 1, "nsga2: generations must be >= 1");
  require(cfg.crossover_fraction > 0 && cfg.crossover_fraction <= 1,
          "nsga2: crossover fraction in (0, 1]");
  const Eigen::Index d = bounds.rows();
  const double pm = cfg.mutation_prob > 0 ? cfg.mutation_prob
                                          : 1.0 / static_cast<double>(d);
  using detail::Nsga2Individual;

  const MatrixXd init = initial_design(bounds, cfg.population, rng);
  std::vector<Nsga2Individual> pop(cfg.population);
  for (int i = 0; i < cfg.population; ++i) {
    pop[i].x = init.row(i).transpose();
    pop[i].y = objectives(pop[i].x);
  }

  auto rank_and_crowd = [&](std::vector<Nsga2Individual>& p) {
    detail::fast_nondominated_rank(p);
    int max_rank = 0;
    for (const auto& ind : p) max_rank = std::max(max_rank, ind.rank);
    for (int rk = 0; rk <= max_rank; ++rk) {
      std::vector<Nsga2Individual*> front;
      for (auto& ind : p)
        if (ind.rank == rk) front.push_back(&ind);
      if (!front.empty()) detail::crowding_distance(front);
    }
  };
  rank_and_crowd(pop);

  auto tournament = [&](const std::vector<Nsga2Individual>& p)
      -> const Nsga2Individual& {
    const auto& a = p[rng.uniform_index(p.size())];
    const auto& b = p[rng.uniform_index(p.size())];
    if (a.rank != b.rank) return a.rank < b.rank ? a : b;
    return a.crowding >= b.crowding ? a : b;
  };

  auto sbx = [&](const VectorXd& p1, const VectorXd& p2, VectorXd& c1,
                 VectorXd& c2) {
    c1 = p1;
    c2 = p2;
    for (Eigen::Index j = 0; j < d; ++j) {
      if (rng.uniform() > 0.5) continue;
      const double u = rng.uniform();
      const double exponent = 1.0 / (cfg.eta_crossover + 1.0);
      const double beta = u <= 0.5
                              ? std::pow(2.0 * u, exponent)
                              : std::pow(1.0 / (2.0 * (1.0 - u)), exponent);
      c1(j) = 0.5 * ((1 + beta) * p1(j) + (1 - beta) * p2(j));
      c2(j) = 0.5 * ((1 - beta) * p1(j) + (1 + beta) * p2(j));
    }
  };
  auto mutate = [&](VectorXd& x) {
    for (Eigen::Index j = 0; j < d; ++j) {
      if (rng.uniform() > pm) continue;
      const double u = rng.uniform();
      const double exponent = 1.0 / (cfg.eta_mutation + 1.0);
      const double delta = u < 0.5
                               ? std::pow(2.0 * u, exponent) - 1.0
                               : 1.0 - std::pow(2.0 * (1.0 - u), exponent);
      x(j) += delta * (bounds(j, 1) - bounds(j, 0));
    }
  };
  auto clip = [&](VectorXd& x) {
    for (Eigen::Index j = 0; j < d; ++j)
      x(j) = std::min(std::max(x(j), bounds(j, 0)), bounds(j, 1));
  };

  for (int gen = 0; gen < cfg.generations; ++gen) {
    std::vector<Nsga2Individual> offspring;
    offspring.reserve(cfg.population);
    while (static_cast<int>(offspring.size()) < cfg.population) {
      const auto& p1 = tournament(pop);
      const auto& p2 = tournament(pop);
      VectorXd c1, c2;
      if (rng.uniform() < cfg.crossover_fraction) {
        sbx(p1.x, p2.x, c1, c2);
      } else {
        c1 = p1.x;
        c2 = p2.x;
      }
      mutate(c1);
      mutate(c2);
      clip(c1);
      clip(c2);
      Nsga2Individual o1, o2;
      o1.x = std::move(c1);
      o1.y = objectives(o1.x);
      o2.x = std::move(c2);
      o2.y = objectives(o2.x);
      offspring.push_back(std::move(o1));
      if (static_cast<int>(offspring.size()) < cfg.population)
        offspring.push_back(std::move(o2));
    }
    std::vector<Nsga2Individual> combined;
    combined.reserve(pop.size() + offspring.size());
    for (auto& ind : pop) combined.push_back(std::move(ind));
    for (auto& ind : offspring) combined.push_back(std::move(ind));
    rank_and_crowd(combined);
    std::stable_sort(combined.begin(), combined.end(),
                     [](const Nsga2Individual& a, const Nsga2Individual& b) {
                       if (a.rank != b.rank) return a.rank < b.rank;
                       return a.crowding > b.crowding;
                     });
    combined.resize(cfg.population);
    pop.swap(combined);
  }

  ParetoArchive archive;
  for (const auto& ind : pop)
    if (ind.rank == 0) archive.insert(ind.x, ind.y);
  return archive;
}

// Select the candidate whose predicted objective vector yields the largest
// hypervolume improvement against the incumbent front; ties go to the
// candidate farthest from the observed inputs.
inline ParetoArchive::Entry max_hvi_select(
    const ParetoArchive& candidates, const std::vector<VectorXd>& incumbent,
    const VectorXd& r, const MatrixXd& observed_X,
    Eigen::Index mc_samples = 20000) {
  if (candidates.empty())
    throw EmptyCandidates("max_hvi_select: empty candidate set");
  double best_gain = -1.0;
  double best_dist = -1.0;
  const ParetoArchive::Entry* best = nullptr;
  for (const auto& e : candidates.entries()) {
    const double gain = hvi(e.y, incumbent, r, mc_samples);
    double dist = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < observed_X.rows(); ++i)
      dist = std::min(dist, (e.x - observed_X.row(i).transpose()).norm());
    const bool better =
        gain > best_gain + 1e-12 ||
        (std::abs(gain - best_gain) <= 1e-12 && dist > best_dist);
    if (better) {
      best_gain = gain;
      best_dist = dist;
      best = &e;
    }
  }
  return *best;
}

// Growing multi-objective campaign in raw units; all datasets share X rows.
struct MoCampaign {
  std::function<VectorXd(const VectorXd&)> objectives;  // raw x -> raw y vector
  MatrixXd bounds;  // d x 2
  MatrixXd X;       // raw inputs
  MatrixXd Y;       // raw observations, one column per objective
  std::vector<double> hv_history;  // dominated volume of the data front per
                                   // iteration, against report_ref
  VectorXd report_ref;             // fixed reporting reference point

  Eigen::Index dim() const { return bounds.rows(); }
  Eigen::Index n_obj() const { return Y.cols(); }
  Eigen::Index size() const { return Y.rows(); }

  ParetoArchive archive() const { return ParetoArchive::from_points(X, Y); }

  void append(const VectorXd& x_new, const VectorXd& y_new) {
    X.conservativeResize(X.rows() + 1, Eigen::NoChange);
    X.row(X.rows() - 1) = x_new.transpose();
    Y.conservativeResize(Y.rows() + 1, Eigen::NoChange);
    Y.row(Y.rows() - 1) = y_new.transpose();
  }

  void record_hypervolume() {
    if (report_ref.size() == 0) return;
    hv_history.push_back(hypervolume(archive().front(), report_ref));
  }
};

struct TsMoOptions {
  Eigen::Index n_phi = 2000;
  int first_fit_restarts = 10;
  int refit_restarts = 3;
  PathSampler sampler = PathSampler::Pathwise;
  bool accelerated_weights = false;
  KernelFamily family = KernelFamily::SquaredExponential;
  Eigen::Index hvi_mc_samples = 20000;
};

// Multi-objective Thompson sampling: refit one GP per objective, draw one
// path each, find the sampled front with NSGA-II, pick the max-HVI candidate
// against the data front, evaluate all objectives with noise, update.
inline void gp_ts_mo(MoCampaign& campaign, const VectorXd& sigma_n,
                     Eigen::Index K, const Nsga2Config& nsga_cfg,
                     RngStream& rng, const TsMoOptions& opt = {}) {
  require(campaign.size() >= 2, "gp_ts_mo: need at least 2 initial points");
  require_dims(sigma_n.size() == campaign.n_obj(),
               "gp_ts_mo: sigma_n length != number of objectives");
  const Eigen::Index d = campaign.dim();
  const Eigen::Index nc = campaign.n_obj();
  MatrixXd unit_bounds(d, 2);
  unit_bounds.col(0).setZero();
  unit_bounds.col(1).setOnes();

  std::vector<std::optional<VectorXd>> warm(nc);
  if (campaign.hv_history.empty()) campaign.record_hypervolume();

  for (Eigen::Index k = 0; k < K; ++k) {
    RngStream iter_rng = rng.split(static_cast<std::uint64_t>(k));
    // one GP per objective over the shared inputs
    std::vector<FittedGP> gps;
    std::vector<Dataset> datas;
    gps.reserve(nc);
    for (Eigen::Index j = 0; j < nc; ++j) {
      Dataset data =
          Dataset::from_raw(campaign.X, campaign.Y.col(j), campaign.bounds);
      RngStream fit_rng = iter_rng.split(100 + j);
      FitOptions fopt;
      fopt.warm_start = warm[j];
      const int restarts =
          (k == 0) ? opt.first_fit_restarts : opt.refit_restarts;
      gps.push_back(fit(data, opt.family, sigma_n(j), restarts, fit_rng, fopt));
      VectorXd theta(1 + d);
      theta(0) = std::log(gps.back().kernel().sigma_f);
      theta.segment(1, d) = gps.back().kernel().lengthscales.array().log();
      warm[j] = theta;
      datas.push_back(std::move(data));
    }

    const ParetoArchive data_archive = campaign.archive();
    const MatrixXd observed_norm =
        datas[0].to_normalized_rows(campaign.X);

    bool accepted = false;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      RngStream draw_rng = iter_rng.split(10 + attempt);
      try {
        std::vector<SamplePath> paths;
        paths.reserve(nc);
        for (Eigen::Index j = 0; j < nc; ++j) {
          RngStream path_rng = draw_rng.split(j);
          auto fmap = std::make_shared<FeatureMap>(
              build_rff(gps[j].kernel(), opt.n_phi, path_rng));
          paths.push_back(opt.sampler == PathSampler::Rff
                              ? draw_weight_space_path(
                                    gps[j], fmap, path_rng,
                                    opt.accelerated_weights)
                              : draw_pathwise_path(gps[j], fmap, path_rng));
        }
        // sampled objectives in raw output units over normalized inputs
        auto sampled = [&](const VectorXd& xn) {
          VectorXd y(nc);
          for (Eigen::Index j = 0; j < nc; ++j)
            y(j) = datas[j].denorm_y(paths[j].value(xn));
          return y;
        };
        Nsga2Config cfg = nsga_cfg;
        cfg.n_obj = nc;
        RngStream nsga_rng = draw_rng.split(999);
        const ParetoArchive candidates =
            nsga2(sampled, unit_bounds, cfg, nsga_rng);
        const VectorXd r = reference_point(campaign.Y);
        const auto pick = max_hvi_select(candidates, data_archive.front(), r,
                                         observed_norm, opt.hvi_mc_samples);
        const VectorXd x_raw = datas[0].to_raw(pick.x);
        VectorXd y_new = campaign.objectives(x_raw);
        for (Eigen::Index j = 0; j < nc; ++j)
          y_new(j) += sigma_n(j) * datas[j].out_std() * iter_rng.normal();
        campaign.append(x_raw, y_new);
        accepted = true;
      } catch (const Error&) {
        if (attempt == 1)
          throw IterationFailed("gp_ts_mo: iteration failed twice");
      }
    }
    campaign.record_hypervolume();
  }
}

}  // namespace gpsamp

#endif
