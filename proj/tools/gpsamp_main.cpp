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
// Command-line driver: fit / sample / convergence-study / wasserstein-study /
// gsa / optimize / mo-optimize. Every run writes a manifest next to its
// outputs; re-running a manifest reproduces the data files bit-exactly.
// Exit codes: 0 success, 2 configuration, 3 data, 4 numeric.

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gpsamp/gpsamp.hpp"
#include "gpsamp/studies.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gpsamp;

namespace {

constexpr const char* kBuildId = "gpsamp-0.1.0";
constexpr int kFormatVersion = 1;

struct Cli {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out_dir = "out";
  int threads = 1;
};

json load_config(const std::string& path, const std::string& command,
                 Cli& cli) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (j.contains("config")) {  // manifest replay
    if (j.contains("command") && j["command"] != command)
      throw ConfigError("manifest was produced by command '" +
                        j["command"].get<std::string>() + "'");
    if (!cli.seed_given && j.contains("seed"))
      cli.seed = j["seed"].get<std::uint64_t>();
    return j["config"];
  }
  return j;
}

void check_keys(const json& cfg, const std::set<std::string>& allowed) {
  for (const auto& [key, _] : cfg.items())
    if (!allowed.count(key))
      throw ConfigError("unknown config key: " + key);
}

double get_or(const json& cfg, const std::string& key, double dflt) {
  return cfg.contains(key) ? cfg.at(key).get<double>() : dflt;
}
Eigen::Index get_or_i(const json& cfg, const std::string& key,
                      Eigen::Index dflt) {
  return cfg.contains(key) ? cfg.at(key).get<Eigen::Index>() : dflt;
}
std::string get_or_s(const json& cfg, const std::string& key,
                     const std::string& dflt) {
  return cfg.contains(key) ? cfg.at(key).get<std::string>() : dflt;
}

MatrixXd bounds_from_json(const json& j) {
  MatrixXd b(static_cast<Eigen::Index>(j.size()), 2);
  Eigen::Index i = 0;
  for (const auto& row : j) {
    if (row.size() != 2) throw ConfigError("each bound needs [lower, upper]");
    b(i, 0) = row[0].get<double>();
    b(i, 1) = row[1].get<double>();
    ++i;
  }
  return b;
}

void write_manifest(const Cli& cli, const std::string& command,
                    const json& cfg) {
  json m;
  m["format_version"] = kFormatVersion;
  m["command"] = command;
  m["seed"] = cli.seed;
  m["threads"] = cli.threads;
  m["build"] = kBuildId;
  m["config"] = cfg;
  std::ofstream out(fs::path(cli.out_dir) / "manifest.json");
  out << m.dump(2) << "\n";
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  out << j.dump(2) << "\n";
}

std::FILE* open_csv(const fs::path& path) {
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (!f) throw IoError("cannot write " + path.string());
  return f;
}

// training data drawn from the benchmark's input distribution
struct GsaProblem {
  InputDistribution dist;
  std::function<double(const VectorXd&)> model;
  MatrixXd train_bounds;
};

GsaProblem gsa_problem(const std::string& name) {
  if (name == "truss15") {
    GsaProblem p{testbeds::truss_input_distribution(),
                 testbeds::truss_response, {}};
    p.train_bounds = p.dist.cover_bounds(4.0);
    return p;
  }
  const auto& f = testbeds::so_benchmark(name);
  std::vector<Marginal> m;
  for (Eigen::Index j = 0; j < f.dim; ++j)
    m.push_back(Marginal::uniform(f.bounds(j, 0), f.bounds(j, 1)));
  GsaProblem p{InputDistribution(std::move(m)), f.eval, f.bounds};
  return p;
}

// --- subcommands ---

void cmd_fit(const Cli& cli, const json& cfg) {
  check_keys(cfg, {"data", "bounds", "family", "sigma_n", "restarts",
                   "fit_noise"});
  const Dataset data = Dataset::from_csv(cfg.at("data").get<std::string>(),
                                         bounds_from_json(cfg.at("bounds")));
  const auto family = kernel_family_from_string(get_or_s(cfg, "family", "se"));
  const double sigma_n = get_or(cfg, "sigma_n", 1e-3);
  const int restarts = static_cast<int>(get_or_i(cfg, "restarts", 10));
  FitOptions fopt;
  fopt.fit_noise = cfg.contains("fit_noise") && cfg["fit_noise"].get<bool>();
  RngStream rng(cli.seed);
  const FittedGP gp = fit(data, family, sigma_n, restarts, rng, fopt);

  json out;
  out["format_version"] = kFormatVersion;
  out["kernel"] = kernel_to_json(gp.kernel(), gp.sigma_n());
  const MatrixXd L = MatrixXd(gp.chol_C().matrixL());
  out["diagnostics"] = {
      {"log_marginal_likelihood", gp.log_likelihood()},
      {"condition_estimate",
       std::pow(L.diagonal().maxCoeff() / L.diagonal().minCoeff(), 2)},
      {"jitter", gp.jitter()},
      {"n", data.size()},
      {"d", data.dim()}};
  write_json(fs::path(cli.out_dir) / "model.json", out);
  write_manifest(cli, "fit", cfg);
}

void cmd_sample(const Cli& cli, const json& cfg) {
  check_keys(cfg, {"data", "bounds", "family", "sigma_n", "restarts",
                   "sampler", "n_phi", "n_paths", "grid_n", "accelerated"});
  const Dataset data = Dataset::from_csv(cfg.at("data").get<std::string>(),
                                         bounds_from_json(cfg.at("bounds")));
  if (data.dim() > 2)
    throw ConfigError("sample: grids support one or two input dimensions");
  const auto family = kernel_family_from_string(get_or_s(cfg, "family", "se"));
  const double sigma_n = get_or(cfg, "sigma_n", 1e-3);
  RngStream rng(cli.seed);
  const FittedGP gp =
      fit(data, family, sigma_n,
          static_cast<int>(get_or_i(cfg, "restarts", 10)), rng);
  const Eigen::Index n_phi = get_or_i(cfg, "n_phi", 2000);
  const Eigen::Index n_paths = get_or_i(cfg, "n_paths", 10);
  const Eigen::Index grid_n = get_or_i(cfg, "grid_n", 200);
  const std::string sampler = get_or_s(cfg, "sampler", "pc");
  const bool accel = cfg.contains("accelerated") && cfg["accelerated"].get<bool>();

  MatrixXd grid;
  if (data.dim() == 1) {
    grid = studies::grid_1d(0.0, 1.0, grid_n);
  } else {
    grid.resize(grid_n * grid_n, 2);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < grid_n; ++i)
      for (Eigen::Index j = 0; j < grid_n; ++j) {
        grid(r, 0) = static_cast<double>(i) / (grid_n - 1);
        grid(r, 1) = static_cast<double>(j) / (grid_n - 1);
        ++r;
      }
  }

  std::FILE* f = open_csv(fs::path(cli.out_dir) / "paths.csv");
  if (data.dim() == 1)
    std::fprintf(f, "x1,path_id,value\n");
  else
    std::fprintf(f, "x1,x2,path_id,value\n");
  for (Eigen::Index k = 0; k < n_paths; ++k) {
    RngStream path_rng = rng.split(1000 + k);
    auto fmap = std::make_shared<FeatureMap>(
        build_rff(gp.kernel(), n_phi, path_rng));
    const SamplePath path =
        sampler == "rff" ? draw_weight_space_path(gp, fmap, path_rng, accel)
                         : draw_pathwise_path(gp, fmap, path_rng);
    const VectorXd vals = path.values(grid);
    for (Eigen::Index i = 0; i < grid.rows(); ++i) {
      const VectorXd raw = data.to_raw(grid.row(i).transpose());
      for (Eigen::Index j = 0; j < data.dim(); ++j)
        std::fprintf(f, "%.17g,", raw(j));
      std::fprintf(f, "%" PRId64 ",%.17g\n", static_cast<std::int64_t>(k),
                   data.denorm_y(vals(i)));
    }
  }
  std::fclose(f);
  write_manifest(cli, "sample", cfg);
}

void cmd_convergence_study(const Cli& cli, const json& cfg) {
  check_keys(cfg, {"lengthscale", "sigma_f", "family", "domain", "grid_n",
                   "n_phi_list", "repeats", "methods", "mercer_sigma"});
  studies::ConvergenceConfig sc;
  const double l = get_or(cfg, "lengthscale", 1.0);
  sc.spec = KernelSpec::isotropic(
      kernel_family_from_string(get_or_s(cfg, "family", "se")),
      get_or(cfg, "sigma_f", 1.0), l, 1);
  if (cfg.contains("domain")) {
    sc.lo = cfg["domain"][0].get<double>();
    sc.hi = cfg["domain"][1].get<double>();
  }
  sc.grid_n = get_or_i(cfg, "grid_n", 2000);
  if (cfg.contains("n_phi_list"))
    for (const auto& v : cfg["n_phi_list"])
      sc.n_phi_list.push_back(v.get<Eigen::Index>());
  else
    sc.n_phi_list = {50, 100, 200, 500, 1000, 2000, 5000, 10000};
  sc.repeats = static_cast<int>(get_or_i(cfg, "repeats", 100));
  sc.mercer_sigma = get_or(cfg, "mercer_sigma", std::sqrt(3.0) / 2.0);
  if (cfg.contains("methods")) {
    sc.methods.clear();
    for (const auto& m : cfg["methods"]) sc.methods.push_back(m);
  }
  RngStream rng(cli.seed);
  const auto rows = studies::convergence_study(sc, rng);

  std::FILE* f = open_csv(fs::path(cli.out_dir) / "convergence.csv");
  std::fprintf(f, "n_phi,method,err_mean,err_q05,err_q95\n");
  for (const auto& r : rows)
    std::fprintf(f, "%" PRId64 ",%s,%.17g,%.17g,%.17g\n",
                 static_cast<std::int64_t>(r.n_phi), r.method.c_str(),
                 r.err_mean, r.err_q05, r.err_q95);
  std::fclose(f);

  json slopes;
  for (const auto& m : sc.methods) {
    std::vector<double> xs, ys;
    for (const auto& r : rows)
      if (r.method == m && r.err_mean > 1e-14) {
        xs.push_back(static_cast<double>(r.n_phi));
        ys.push_back(r.err_mean);
      }
    if (xs.size() >= 2) slopes[m] = studies::loglog_slope(xs, ys);
  }
  json out;
  out["format_version"] = kFormatVersion;
  out["loglog_slopes"] = slopes;
  write_json(fs::path(cli.out_dir) / "summary.json", out);
  write_manifest(cli, "convergence-study", cfg);
}

void cmd_wasserstein_study(const Cli& cli, const json& cfg) {
  check_keys(cfg, {"n_train_list", "n_phi", "realizations", "grid_n",
                   "sigma_n", "fit_restarts"});
  studies::WassersteinConfig wc;
  if (cfg.contains("n_train_list")) {
    wc.n_train_list.clear();
    for (const auto& v : cfg["n_train_list"])
      wc.n_train_list.push_back(v.get<Eigen::Index>());
  }
  wc.n_phi = get_or_i(cfg, "n_phi", 2000);
  wc.realizations = static_cast<int>(get_or_i(cfg, "realizations", 20));
  wc.grid_n = get_or_i(cfg, "grid_n", 2000);
  wc.sigma_n = get_or(cfg, "sigma_n", 1e-3);
  wc.fit_restarts = static_cast<int>(get_or_i(cfg, "fit_restarts", 5));
  RngStream rng(cli.seed);
  const auto rows = studies::wasserstein_study(wc, rng);
  std::FILE* f = open_csv(fs::path(cli.out_dir) / "wasserstein.csv");
  std::fprintf(f, "n_train,method,median,q25,q75\n");
  for (const auto& r : rows)
    std::fprintf(f, "%" PRId64 ",%s,%.17g,%.17g,%.17g\n",
                 static_cast<std::int64_t>(r.n_train), r.method.c_str(),
                 r.median, r.q25, r.q75);
  std::fclose(f);
  write_manifest(cli, "wasserstein-study", cfg);
}

void cmd_gsa(const Cli& cli, const json& cfg) {
  check_keys(cfg, {"problem", "n_train", "n_x", "n_s", "pairs", "n_phi",
                   "sampler", "sigma_n", "restarts", "accelerated"});
  const GsaProblem prob = gsa_problem(cfg.at("problem").get<std::string>());
  RngStream rng(cli.seed);
  const Eigen::Index n_train = get_or_i(cfg, "n_train", 300);
  RngStream data_rng = rng.split(1);
  MatrixXd X = prob.dist.sample_matrix(n_train, data_rng);
  VectorXd y(n_train);
  for (Eigen::Index i = 0; i < n_train; ++i)
    y(i) = prob.model(X.row(i).transpose());
  const Dataset data = Dataset::from_raw(X, y, prob.train_bounds);
  const double sigma_n = get_or(cfg, "sigma_n", 1e-4);
  RngStream fit_rng = rng.split(2);
  const FittedGP gp =
      fit(data, KernelFamily::SquaredExponential, sigma_n,
          static_cast<int>(get_or_i(cfg, "restarts", 10)), fit_rng);

  GsaOptions opt;
  opt.n_phi = get_or_i(cfg, "n_phi", 2000);
  opt.pairs = get_or_i(cfg, "pairs", 10);
  opt.sampler = get_or_s(cfg, "sampler", "rff") == "pc" ? PathSampler::Pathwise
                                                        : PathSampler::Rff;
  opt.accelerated_weights =
      cfg.contains("accelerated") && cfg["accelerated"].get<bool>();
  opt.threads = cli.threads;
  RngStream gsa_rng = rng.split(3);
  const SensitivityResult res =
      gp_gsa(gp, prob.dist, get_or_i(cfg, "n_x", 10000),
             get_or_i(cfg, "n_s", 200), opt, gsa_rng);

  json per_dim = json::array();
  for (Eigen::Index i = 0; i < res.S.rows(); ++i)
    per_dim.push_back({{"S_median", res.S_median(i)},
                       {"S_iqr", res.S_iqr(i)},
                       {"ST_median", res.ST_median(i)},
                       {"ST_iqr", res.ST_iqr(i)}});
  json out;
  out["format_version"] = kFormatVersion;
  out["per_dim"] = per_dim;
  out["excluded_paths"] = res.excluded_paths;
  out["kernel"] = kernel_to_json(gp.kernel(), gp.sigma_n());
  write_json(fs::path(cli.out_dir) / "gsa.json", out);
  write_manifest(cli, "gsa", cfg);
}

void cmd_optimize(const Cli& cli, const json& cfg) {
  check_keys(cfg, {"problem", "n_initial", "iterations", "acquisition",
                   "n_phi", "sigma_n", "seeds", "lcb_beta", "min_dist",
                   "inner_starts", "c_star", "accelerated"});
  const auto& prob = testbeds::so_benchmark(cfg.at("problem").get<std::string>());
  const Eigen::Index K = get_or_i(cfg, "iterations", 50);
  const Eigen::Index n_init = get_or_i(cfg, "n_initial", 10 * prob.dim);
  AcquisitionSpec acq;
  acq.kind = acquisition_from_string(get_or_s(cfg, "acquisition", "ts-pc"));
  acq.lcb_beta = get_or(cfg, "lcb_beta", 2.0);
  TsOptions opt;
  opt.n_phi = get_or_i(cfg, "n_phi", 2000);
  opt.min_dist = get_or(cfg, "min_dist", 1e-6);
  opt.inner_starts = static_cast<int>(get_or_i(cfg, "inner_starts", 500));
  opt.accelerated_weights =
      cfg.contains("accelerated") && cfg["accelerated"].get<bool>();
  const double sigma_n = get_or(cfg, "sigma_n", 1e-3);
  std::optional<double> c_star;
  if (cfg.contains("c_star"))
    c_star = cfg["c_star"].get<double>();
  else if (prob.known_minimum)
    c_star = prob.known_minimum->second;

  std::vector<std::uint64_t> seeds;
  if (cfg.contains("seeds"))
    for (const auto& s : cfg["seeds"]) seeds.push_back(s.get<std::uint64_t>());
  else
    seeds.push_back(cli.seed);

  json summary;
  summary["format_version"] = kFormatVersion;
  summary["per_seed"] = json::array();
  for (const std::uint64_t seed : seeds) {
    const auto t0 = std::chrono::steady_clock::now();
    BoCampaign c;
    c.objective = prob.eval;
    c.bounds = prob.bounds;
    RngStream rng(seed);
    RngStream init_rng = rng.split(123);
    c.X = initial_design(prob.bounds, n_init, init_rng);
    c.y.resize(n_init);
    for (Eigen::Index i = 0; i < n_init; ++i) {
      c.y(i) = prob.eval(c.X.row(i).transpose());
      c.history.push_back({0, c.X.row(i).transpose(), c.y(i),
                           c.y.head(i + 1).minCoeff()});
    }
    gp_ts_so(c, sigma_n, K, acq, rng, opt);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();

    char name[64];
    std::snprintf(name, sizeof(name), "history_%" PRIu64 ".jsonl", seed);
    std::ofstream hist(fs::path(cli.out_dir) / name);
    for (const auto& h : c.history) {
      json row;
      row["iteration"] = h.iteration;
      row["x"] = std::vector<double>(h.x.data(), h.x.data() + h.x.size());
      row["y"] = h.y;
      row["y_min"] = h.y_min;
      hist << row.dump() << "\n";
    }
    json entry;
    entry["seed"] = seed;
    const VectorXd xb = c.x_min();
    entry["best_x"] = std::vector<double>(xb.data(), xb.data() + xb.size());
    entry["best_y"] = c.y_min();
    entry["wall_time_s"] = wall;
    if (c_star)
      entry["final_log10_regret"] =
          std::log10(std::max(c.y_min() - *c_star, 1e-12));
    summary["per_seed"].push_back(entry);
  }
  if (!c_star && !cfg.contains("c_star"))
    std::fprintf(stderr,
                 "note: no reference optimum; regret not reported "
                 "(pass c_star for problems without a known minimum)\n");
  write_json(fs::path(cli.out_dir) / "summary.json", summary);
  write_manifest(cli, "optimize", cfg);
}

void cmd_mo_optimize(const Cli& cli, const json& cfg) {
  check_keys(cfg, {"problem", "n_initial", "iterations", "n_phi", "sampler",
                   "sigma_n", "nsga", "seeds", "baseline", "ref"});
  const auto& prob =
      testbeds::mo_benchmark(cfg.at("problem").get<std::string>());
  const Eigen::Index K = get_or_i(cfg, "iterations", 50);
  const Eigen::Index n_init = get_or_i(cfg, "n_initial", 10 * prob.dim);
  Nsga2Config ncfg;
  ncfg.n_obj = prob.n_obj;
  if (cfg.contains("nsga")) {
    const auto& nj = cfg["nsga"];
    check_keys(nj, {"population", "generations", "crossover_fraction"});
    ncfg.population = static_cast<int>(get_or_i(nj, "population", 500));
    ncfg.generations = static_cast<int>(get_or_i(nj, "generations", 100));
    ncfg.crossover_fraction = get_or(nj, "crossover_fraction", 0.65);
  }
  TsMoOptions opt;
  opt.n_phi = get_or_i(cfg, "n_phi", 2000);
  opt.sampler = get_or_s(cfg, "sampler", "pc") == "rff" ? PathSampler::Rff
                                                        : PathSampler::Pathwise;
  const double sigma_n = get_or(cfg, "sigma_n", 1e-3);
  VectorXd ref = prob.report_ref;
  if (cfg.contains("ref")) {
    ref.resize(static_cast<Eigen::Index>(cfg["ref"].size()));
    Eigen::Index i = 0;
    for (const auto& v : cfg["ref"]) ref(i++) = v.get<double>();
  }

  // baseline hypervolume from a long NSGA-II run on the true objectives
  double baseline_hv = 0.0;
  if (cfg.contains("baseline")) {
    const auto& bj = cfg["baseline"];
    check_keys(bj, {"population", "generations"});
    Nsga2Config bcfg;
    bcfg.n_obj = prob.n_obj;
    bcfg.population = static_cast<int>(get_or_i(bj, "population", 200));
    bcfg.generations = static_cast<int>(get_or_i(bj, "generations", 200));
    RngStream brng(987654321);
    const ParetoArchive base = nsga2(prob.eval, prob.bounds, bcfg, brng);
    baseline_hv = hypervolume(base.front(), ref);
  }

  std::vector<std::uint64_t> seeds;
  if (cfg.contains("seeds"))
    for (const auto& s : cfg["seeds"]) seeds.push_back(s.get<std::uint64_t>());
  else
    seeds.push_back(cli.seed);

  json summary;
  summary["format_version"] = kFormatVersion;
  if (baseline_hv > 0) summary["baseline_hv"] = baseline_hv;
  summary["per_seed"] = json::array();
  for (const std::uint64_t seed : seeds) {
    const auto t0 = std::chrono::steady_clock::now();
    MoCampaign c;
    c.objectives = prob.eval;
    c.bounds = prob.bounds;
    c.report_ref = ref;
    RngStream rng(seed);
    RngStream init_rng = rng.split(123);
    c.X = initial_design(prob.bounds, n_init, init_rng);
    c.Y.resize(n_init, prob.n_obj);
    for (Eigen::Index i = 0; i < n_init; ++i)
      c.Y.row(i) = prob.eval(c.X.row(i).transpose()).transpose();
    gp_ts_mo(c, VectorXd::Constant(prob.n_obj, sigma_n), K, ncfg, rng, opt);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();

    char name[64];
    std::snprintf(name, sizeof(name), "archive_%" PRIu64 ".csv", seed);
    std::FILE* f = open_csv(fs::path(cli.out_dir) / name);
    for (Eigen::Index j = 0; j < prob.dim; ++j)
      std::fprintf(f, "x%" PRId64 ",", static_cast<std::int64_t>(j + 1));
    for (Eigen::Index j = 0; j < prob.n_obj; ++j)
      std::fprintf(f, "y%" PRId64 "%s", static_cast<std::int64_t>(j + 1),
                   j + 1 == prob.n_obj ? "\n" : ",");
    const ParetoArchive arch = c.archive();
    for (const auto& e : arch.entries()) {
      for (Eigen::Index j = 0; j < prob.dim; ++j)
        std::fprintf(f, "%.17g,", e.x(j));
      for (Eigen::Index j = 0; j < prob.n_obj; ++j)
        std::fprintf(f, "%.17g%s", e.y(j), j + 1 == prob.n_obj ? "\n" : ",");
    }
    std::fclose(f);

    std::snprintf(name, sizeof(name), "hv_history_%" PRIu64 ".csv", seed);
    std::FILE* h = open_csv(fs::path(cli.out_dir) / name);
    std::fprintf(h, "iteration,hypervolume,gamma\n");
    for (std::size_t i = 0; i < c.hv_history.size(); ++i)
      std::fprintf(h, "%zu,%.17g,%.17g\n", i, c.hv_history[i],
                   baseline_hv > 0 ? c.hv_history[i] / baseline_hv : 0.0);
    std::fclose(h);

    json entry;
    entry["seed"] = seed;
    entry["archive_size"] = arch.size();
    entry["final_hv"] = c.hv_history.empty() ? 0.0 : c.hv_history.back();
    if (baseline_hv > 0)
      entry["final_gamma"] = c.hv_history.back() / baseline_hv;
    entry["wall_time_s"] = wall;
    summary["per_seed"].push_back(entry);
  }
  write_json(fs::path(cli.out_dir) / "summary.json", summary);
  write_manifest(cli, "mo-optimize", cfg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian-process posterior path sampling toolkit"};
  app.require_subcommand(1);
  Cli cli;

  const std::vector<std::string> commands = {
      "fit",          "sample",   "convergence-study", "wasserstein-study",
      "gsa",          "optimize", "mo-optimize"};
  std::map<std::string, CLI::App*> subs;
  for (const auto& name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", cli.config_path, "JSON config or manifest")
        ->required();
    sub->add_option("--seed", cli.seed, "master random seed")
        ->each([&cli](const std::string&) { cli.seed_given = true; });
    sub->add_option("--out", cli.out_dir, "output directory");
    sub->add_option("--threads", cli.threads, "worker threads");
    subs[name] = sub;
  }

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    fs::create_directories(cli.out_dir);
    const json cfg = load_config(cli.config_path, command, cli);
    if (command == "fit")
      cmd_fit(cli, cfg);
    else if (command == "sample")
      cmd_sample(cli, cfg);
    else if (command == "convergence-study")
      cmd_convergence_study(cli, cfg);
    else if (command == "wasserstein-study")
      cmd_wasserstein_study(cli, cfg);
    else if (command == "gsa")
      cmd_gsa(cli, cfg);
    else if (command == "optimize")
      cmd_optimize(cli, cfg);
    else if (command == "mo-optimize")
      cmd_mo_optimize(cli, cfg);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const IoError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 3;
  } catch (const Error& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  }
  return 0;
}
