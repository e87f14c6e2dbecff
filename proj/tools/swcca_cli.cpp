// Command-line front end: generate synthetic benchmark data, run any of the
// solvers on generated or file-based matrices, and tabulate multi-method
// comparisons. See README.md for the file formats and exit codes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "swcca/baselines.hpp"
#include "swcca/core.hpp"
#include "swcca/datagen.hpp"
#include "swcca/io.hpp"
#include "swcca/multiview.hpp"
#include "swcca/penalties.hpp"
#include "swcca/solver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace swcca;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitDegenerate = 4;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Option resolution: command line beats config file beats defaults.

struct FitOptions {
  std::optional<std::string> method;
  std::optional<int> synthetic;
  std::optional<double> noise;
  std::optional<std::string> x_path;
  std::optional<std::string> y_path;
  std::optional<std::string> views;  // comma-separated paths
  std::optional<std::string> ku;     // int, or comma list for mswcca
  std::optional<int> kv;
  std::optional<int> kw;
  std::optional<double> lu;
  std::optional<double> lv;
  std::optional<double> lw;
  std::optional<std::string> groups_u;
  std::optional<std::string> groups_v;
  std::optional<std::string> groups_w;
  std::optional<double> c;
  std::optional<double> cu;
  std::optional<double> cv;
  std::optional<bool> pmd_standardize;
  std::optional<std::string> init;
  std::optional<std::uint64_t> seed;
  std::optional<int> restarts;
  std::optional<int> max_iters;
  std::optional<double> tol;
  std::optional<double> objective_tol;
  std::optional<std::string> out;
  bool plot_data = false;
  std::optional<std::string> config_path;
  // compare-only
  std::optional<std::string> methods;
  std::optional<std::string> seeds;
  std::optional<int> jobs;
  std::optional<std::string> truth_path;
};

template <typename T>
void merge_key(std::optional<T>& slot, const json& cfg, const std::string& key) {
  if (slot.has_value() || !cfg.contains(key)) return;
  const json& value = cfg.at(key);
  if constexpr (std::is_same_v<T, std::string>) {
    slot = value.is_string() ? value.get<std::string>() : value.dump();
  } else if constexpr (std::is_same_v<T, bool>) {
    slot = value.get<bool>();
  } else {
    slot = value.get<T>();
  }
}

void merge_config_file(FitOptions& opt) {
  if (!opt.config_path) return;
  std::ifstream in(*opt.config_path);
  if (!in) throw ConfigError("cannot open config file: " + *opt.config_path);
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw ConfigError("config file is not valid JSON: " + std::string(e.what()));
  }
  merge_key(opt.method, cfg, "method");
  merge_key(opt.synthetic, cfg, "synthetic");
  merge_key(opt.noise, cfg, "noise");
  merge_key(opt.x_path, cfg, "x");
  merge_key(opt.y_path, cfg, "y");
  merge_key(opt.views, cfg, "views");
  merge_key(opt.ku, cfg, "ku");
  merge_key(opt.kv, cfg, "kv");
  merge_key(opt.kw, cfg, "kw");
  merge_key(opt.lu, cfg, "lu");
  merge_key(opt.lv, cfg, "lv");
  merge_key(opt.lw, cfg, "lw");
  merge_key(opt.groups_u, cfg, "groups-u");
  merge_key(opt.groups_v, cfg, "groups-v");
  merge_key(opt.groups_w, cfg, "groups-w");
  merge_key(opt.c, cfg, "c");
  merge_key(opt.cu, cfg, "cu");
  merge_key(opt.cv, cfg, "cv");
  merge_key(opt.pmd_standardize, cfg, "pmd-standardize");
  merge_key(opt.init, cfg, "init");
  merge_key(opt.seed, cfg, "seed");
  merge_key(opt.restarts, cfg, "restarts");
  merge_key(opt.max_iters, cfg, "max-iters");
  merge_key(opt.tol, cfg, "tol");
  merge_key(opt.objective_tol, cfg, "objective-tol");
  merge_key(opt.out, cfg, "out");
  merge_key(opt.methods, cfg, "methods");
  merge_key(opt.seeds, cfg, "seeds");
  merge_key(opt.jobs, cfg, "jobs");
  merge_key(opt.truth_path, cfg, "truth");
}

// ---------------------------------------------------------------------------
// Small parsers.

std::vector<std::string> split(const std::string& text, char delim) {
  std::vector<std::string> out;
  std::string::size_type start = 0;
  while (true) {
    const auto pos = text.find(delim, start);
    out.push_back(text.substr(start, pos == std::string::npos ? pos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& spec) {
  std::vector<std::uint64_t> seeds;
  for (const std::string& part : split(spec, ',')) {
    const auto dash = part.find('-');
    try {
      if (dash != std::string::npos && dash > 0) {
        const std::uint64_t lo = std::stoull(part.substr(0, dash));
        const std::uint64_t hi = std::stoull(part.substr(dash + 1));
        if (hi < lo) throw ConfigError("seed range is reversed: " + part);
        for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
      } else {
        seeds.push_back(std::stoull(part));
      }
    } catch (const std::invalid_argument&) {
      throw ConfigError("cannot parse seed spec: " + part);
    }
  }
  if (seeds.empty()) throw ConfigError("empty seed list");
  return seeds;
}

// Either a block size ("10") or explicit inclusive ranges ("0-9;10-19").
std::vector<std::vector<Eigen::Index>> parse_groups(const std::string& spec,
                                                    Eigen::Index length) {
  std::vector<std::vector<Eigen::Index>> groups;
  if (spec.find(';') == std::string::npos && spec.find('-') == std::string::npos) {
    Eigen::Index block = 0;
    try {
      block = static_cast<Eigen::Index>(std::stoll(spec));
    } catch (const std::exception&) {
      throw ConfigError("cannot parse group spec: " + spec);
    }
    if (block < 1) throw ConfigError("group block size must be positive");
    for (Eigen::Index start = 0; start < length; start += block) {
      std::vector<Eigen::Index> group;
      for (Eigen::Index i = start; i < std::min(start + block, length); ++i)
        group.push_back(i);
      groups.push_back(std::move(group));
    }
    return groups;
  }
  for (const std::string& part : split(spec, ';')) {
    const auto dash = part.find('-');
    if (dash == std::string::npos)
      throw ConfigError("group ranges look like a-b: " + part);
    try {
      const Eigen::Index lo = static_cast<Eigen::Index>(std::stoll(part.substr(0, dash)));
      const Eigen::Index hi = static_cast<Eigen::Index>(std::stoll(part.substr(dash + 1)));
      std::vector<Eigen::Index> group;
      for (Eigen::Index i = lo; i <= hi; ++i) group.push_back(i);
      groups.push_back(std::move(group));
    } catch (const std::exception&) {
      throw ConfigError("cannot parse group range: " + part);
    }
  }
  return groups;
}

InitPolicy parse_init(const std::string& name) {
  if (name == "random" || name == "random_unit") return InitPolicy::kRandomUnit;
  if (name == "warm" || name == "svd_warm_start") return InitPolicy::kSvdWarmStart;
  throw ConfigError("unknown init policy: " + name + " (use random|warm)");
}

// ---------------------------------------------------------------------------
// JSON rendering.

json sparse_json(const CanonicalVector& x) {
  json out = json::object();
  for (Eigen::Index i : x.support()) out[std::to_string(i)] = x[i];
  return out;
}

json penalty_json(const PenaltySpec& penalty) {
  if (const auto* hard = std::get_if<HardCardinality>(&penalty))
    return {{"kind", "hard_cardinality"}, {"k", hard->k}};
  if (const auto* lasso = std::get_if<Lasso>(&penalty))
    return {{"kind", "lasso"}, {"lambda", lasso->lambda}};
  const auto& gl = std::get<GroupLasso>(penalty);
  return {{"kind", "group_lasso"},
          {"lambda", gl.lambda},
          {"n_groups", gl.groups.size()}};
}

json solver_config_json(const SolverConfig& config) {
  return {{"init", config.init == InitPolicy::kRandomUnit ? "random_unit"
                                                          : "svd_warm_start"},
          {"max_iters", config.max_iters},
          {"delta_tol", config.delta_tol},
          {"objective_tol", config.objective_tol},
          {"restarts", config.restarts}};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open file for writing: " + path.string());
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

void write_trace_csv(const fs::path& path, const std::vector<double>& trace) {
  std::ostringstream out;
  out << "iteration,objective\n";
  char buf[64];
  for (std::size_t i = 0; i < trace.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", trace[i]);
    out << i + 1 << ',' << buf << '\n';
  }
  write_text(path, out.str());
}

// ---------------------------------------------------------------------------
// Data loading.

struct LoadedData {
  DataMatrix X;
  DataMatrix Y;
  std::optional<SyntheticTruth> truth;
};

LoadedData load_pair(const FitOptions& opt) {
  if (opt.synthetic) {
    const std::uint64_t seed = opt.seed.value_or(0);
    const double noise = opt.noise.value_or(1.0);
    if (*opt.synthetic == 1) {
      SyntheticData d = generate_synthetic_1(seed, noise);
      return LoadedData{std::move(d.X), std::move(d.Y), std::move(d.truth)};
    }
    if (*opt.synthetic == 2) {
      SyntheticData d = generate_synthetic_2(seed, noise);
      return LoadedData{std::move(d.X), std::move(d.Y), std::move(d.truth)};
    }
    throw ConfigError("--synthetic must be 1 or 2");
  }
  if (!opt.x_path || !opt.y_path)
    throw ConfigError("provide either --synthetic N or both --x and --y");
  MatrixFile x = read_matrix_dsv(*opt.x_path);
  MatrixFile y = read_matrix_dsv(*opt.y_path);
  std::optional<SyntheticTruth> truth;
  if (opt.truth_path) {
    std::ifstream in(*opt.truth_path);
    if (!in) throw Error("cannot open truth file: " + *opt.truth_path);
    json t;
    in >> t;
    SyntheticTruth parsed;
    parsed.seed = t.value("seed", 0ULL);
    for (const auto& i : t.at("support_u")) parsed.support_u.push_back(i.get<Eigen::Index>());
    for (const auto& i : t.at("support_v")) parsed.support_v.push_back(i.get<Eigen::Index>());
    for (const auto& i : t.at("support_w")) parsed.support_w.push_back(i.get<Eigen::Index>());
    const auto dense = [&t](const char* key) {
      Eigen::VectorXd v;
      if (!t.contains(key)) return v;
      const auto& arr = t.at(key);
      v.resize(static_cast<Eigen::Index>(arr.size()));
      for (Eigen::Index i = 0; i < v.size(); ++i)
        v[i] = arr[static_cast<std::size_t>(i)].get<double>();
      return v;
    };
    parsed.u_true = dense("u_true");
    parsed.v_true = dense("v_true");
    parsed.w_true = dense("w_true");
    truth = std::move(parsed);
  }
  return LoadedData{DataMatrix(std::move(x.values)), DataMatrix(std::move(y.values)),
                    std::move(truth)};
}

// ---------------------------------------------------------------------------
// Method runners. Each returns the results.json payload.

struct RunOutput {
  json results;
  std::vector<double> trace;
  std::optional<CanonicalVector> u, v, w;
};

SolverConfig make_solver_config(const FitOptions& opt) {
  SolverConfig config;
  config.seed = opt.seed.value_or(0);
  config.max_iters = opt.max_iters.value_or(1000);
  config.delta_tol = opt.tol.value_or(1e-6);
  config.objective_tol = opt.objective_tol.value_or(0.0);
  config.restarts = opt.restarts.value_or(1);
  if (opt.init) config.init = parse_init(*opt.init);
  return config;
}

int parse_int(const std::string& text, const char* what) {
  try {
    return std::stoi(text);
  } catch (const std::exception&) {
    throw ConfigError(std::string("cannot parse ") + what + ": " + text);
  }
}

PenaltySpec penalty_from(const FitOptions& opt, char which, Eigen::Index length,
                         const std::string& method) {
  if (method == "l0_swcca") {
    std::optional<int> k;
    if (which == 'u') {
      if (opt.ku) k = parse_int(*opt.ku, "--ku");
    } else if (which == 'v') {
      k = opt.kv;
    } else {
      k = opt.kw;
    }
    if (!k) throw ConfigError(std::string("l0_swcca requires --k") + which);
    return HardCardinality{*k};
  }
  if (method == "l1_swcca") {
    std::optional<double> l = which == 'u' ? opt.lu : (which == 'v' ? opt.lv : opt.lw);
    if (!l) throw ConfigError(std::string("l1_swcca requires --l") + which);
    return Lasso{*l};
  }
  // group_swcca
  std::optional<double> l = which == 'u' ? opt.lu : (which == 'v' ? opt.lv : opt.lw);
  const std::optional<std::string>& g =
      which == 'u' ? opt.groups_u : (which == 'v' ? opt.groups_v : opt.groups_w);
  if (!l || !g)
    throw ConfigError(std::string("group_swcca requires --l") + which +
                      " and --groups-" + which);
  return GroupLasso{*l, parse_groups(*g, length)};
}

RunOutput run_two_view(const FitOptions& opt, const std::string& method,
                       const LoadedData& data) {
  RunOutput out;
  json& results = out.results;
  results["method"] = method;
  results["seed"] = opt.seed.value_or(0);

  if (method == "pmd") {
    PmdConfig config{0, 0};
    const double p = static_cast<double>(data.X.p());
    const double q = static_cast<double>(data.Y.p());
    if (opt.cu && opt.cv) {
      config.c1 = *opt.cu * std::sqrt(p);
      config.c2 = *opt.cv * std::sqrt(q);
    } else if (opt.c) {
      config.c1 = *opt.c * std::sqrt(p);
      config.c2 = *opt.c * std::sqrt(q);
    } else {
      throw ConfigError("pmd requires --c or both --cu and --cv");
    }
    config.max_iters = opt.max_iters.value_or(500);
    config.tol = opt.tol.value_or(1e-10);
    config.standardize = opt.pmd_standardize.value_or(true);
    const BaselineFit fit_result = fit_pmd(data.X, data.Y, config);
    results["config"] = {{"c1", config.c1},
                         {"c2", config.c2},
                         {"max_iters", config.max_iters},
                         {"tol", config.tol},
                         {"standardize", config.standardize}};
    results["iterations"] = fit_result.iterations;
    results["converged"] = fit_result.converged;
    out.trace = fit_result.objective_trace;
    out.u = fit_result.u;
    out.v = fit_result.v;
  } else if (method == "l0_scca") {
    if (!opt.ku || !opt.kv) throw ConfigError("l0_scca requires --ku and --kv");
    const int ku = parse_int(*opt.ku, "--ku");
    const SolverConfig config = make_solver_config(opt);
    const BaselineFit fit_result = fit_l0_scca(data.X, data.Y, ku, *opt.kv, config);
    results["config"] = solver_config_json(config);
    results["config"]["penalties"] = {{"u", penalty_json(HardCardinality{ku})},
                                      {"v", penalty_json(HardCardinality{*opt.kv})}};
    results["iterations"] = fit_result.iterations;
    results["converged"] = fit_result.converged;
    out.trace = fit_result.objective_trace;
    out.u = fit_result.u;
    out.v = fit_result.v;
  } else if (method == "l0_swcca" || method == "l1_swcca" || method == "group_swcca") {
    SwccaProblem problem{data.X, data.Y,
                         penalty_from(opt, 'u', data.X.p(), method),
                         penalty_from(opt, 'v', data.Y.p(), method),
                         penalty_from(opt, 'w', data.X.n(), method)};
    const SolverConfig config = make_solver_config(opt);
    const SwccaFit fit_result = method == "l0_swcca"  ? fit(problem, config)
                                : method == "l1_swcca" ? fit_l1(problem, config)
                                                        : fit_group(problem, config);
    results["config"] = solver_config_json(config);
    results["config"]["penalties"] = {{"u", penalty_json(problem.penalty_u)},
                                      {"v", penalty_json(problem.penalty_v)},
                                      {"w", penalty_json(problem.penalty_w)}};
    results["iterations"] = fit_result.iterations;
    results["converged"] = fit_result.converged;
    results["termination_reason"] = to_string(fit_result.termination_reason);
    out.trace = fit_result.objective_trace;
    out.u = fit_result.u;
    out.v = fit_result.v;
    out.w = fit_result.w;
  } else {
    throw ConfigError("unknown method: " + method);
  }

  results["objective"] = out.trace.back();
  results["objective_trace"] = out.trace;
  const Eigen::VectorXd w_eval =
      out.w ? out.w->entries() : Eigen::VectorXd::Ones(data.X.n());
  results["correlation_level"] = correlation_level(
      data.X, data.Y, out.u->entries(), out.v->entries(), w_eval);
  results["u"] = sparse_json(*out.u);
  results["v"] = sparse_json(*out.v);
  results["w"] = out.w ? sparse_json(*out.w) : json();
  return out;
}

RunOutput run_mswcca(const FitOptions& opt) {
  if (!opt.views) throw ConfigError("mswcca requires --views a.tsv,b.tsv,...");
  const std::vector<std::string> paths = split(*opt.views, ',');
  if (paths.size() < 2) throw ConfigError("mswcca needs at least two views");
  if (!opt.ku || !opt.kw)
    throw ConfigError("mswcca requires --ku k1,k2,... and --kw");
  const std::vector<std::string> k_texts = split(*opt.ku, ',');
  if (k_texts.size() != paths.size())
    throw ConfigError("--ku must list one cardinality per view");

  MultiviewProblem problem;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    MatrixFile file = read_matrix_dsv(paths[i]);
    problem.views.emplace_back(std::move(file.values));
    problem.penalties.emplace_back(HardCardinality{parse_int(k_texts[i], "--ku")});
  }
  problem.penalty_w = HardCardinality{*opt.kw};
  const SolverConfig config = make_solver_config(opt);
  const MultiviewFit fit_result = fit_multiview(problem, config);

  RunOutput out;
  json& results = out.results;
  results["method"] = "mswcca";
  results["seed"] = opt.seed.value_or(0);
  results["config"] = solver_config_json(config);
  results["iterations"] = fit_result.iterations;
  results["converged"] = fit_result.converged;
  results["termination_reason"] = to_string(fit_result.termination_reason);
  results["objective"] = fit_result.objective_trace.back();
  results["objective_trace"] = fit_result.objective_trace;
  json us = json::array();
  for (const auto& u : fit_result.us) us.push_back(sparse_json(u));
  results["us"] = std::move(us);
  results["w"] = sparse_json(fit_result.w);
  if (problem.views.size() == 2) {
    results["correlation_level"] = correlation_level(
        problem.views[0], problem.views[1], fit_result.us[0].entries(),
        fit_result.us[1].entries(), fit_result.w.entries());
  } else {
    results["correlation_level"] = json();
  }
  out.trace = fit_result.objective_trace;
  return out;
}

void write_pattern_csv(const fs::path& path, const LoadedData& data,
                       const RunOutput& run) {
  std::ostringstream out;
  out << "vector,index,truth,estimate\n";
  const SyntheticTruth* truth = data.truth ? &*data.truth : nullptr;
  const auto emit = [&](const char* name, const std::optional<CanonicalVector>& est,
                        const Eigen::VectorXd* truth_vec, Eigen::Index length) {
    // Truth columns stay empty when the truth file lacks the dense vectors.
    if (truth_vec && truth_vec->size() != length) truth_vec = nullptr;
    for (Eigen::Index i = 0; i < length; ++i) {
      out << name << ',' << i << ',';
      if (truth_vec) out << (*truth_vec)[i];
      out << ',';
      if (est) out << (*est)[i];
      out << '\n';
    }
  };
  emit("u", run.u, truth ? &truth->u_true : nullptr, data.X.p());
  emit("v", run.v, truth ? &truth->v_true : nullptr, data.Y.p());
  emit("w", run.w, truth ? &truth->w_true : nullptr, data.X.n());
  write_text(path, out.str());
}

// ---------------------------------------------------------------------------
// Subcommand drivers.

int cmd_gen(const FitOptions& opt) {
  if (!opt.synthetic) throw ConfigError("gen requires --synthetic 1|2");
  if (*opt.synthetic != 1 && *opt.synthetic != 2)
    throw ConfigError("--synthetic must be 1 or 2");
  const fs::path dir = opt.out.value_or(".");
  fs::create_directories(dir);
  const std::uint64_t seed = opt.seed.value_or(0);
  const double noise = opt.noise.value_or(1.0);
  const SyntheticData data = *opt.synthetic == 1 ? generate_synthetic_1(seed, noise)
                                                 : generate_synthetic_2(seed, noise);
  write_matrix_dsv(dir / "X.tsv", data.X.values());
  write_matrix_dsv(dir / "Y.tsv", data.Y.values());

  json truth;
  truth["generator"] = *opt.synthetic;
  truth["seed"] = seed;
  truth["noise"] = noise;
  const auto dense = [](const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  truth["u_true"] = dense(data.truth.u_true);
  truth["v_true"] = dense(data.truth.v_true);
  truth["w_true"] = dense(data.truth.w_true);
  truth["support_u"] = data.truth.support_u;
  truth["support_v"] = data.truth.support_v;
  truth["support_w"] = data.truth.support_w;
  write_text(dir / "truth.json", truth.dump(2) + "\n");
  std::cout << "wrote " << (dir / "X.tsv").string() << ", Y.tsv, truth.json\n";
  return kExitOk;
}

int cmd_fit(const FitOptions& opt) {
  if (!opt.method) throw ConfigError("fit requires --method");
  const fs::path dir = opt.out.value_or(".");
  fs::create_directories(dir);

  RunOutput run;
  if (*opt.method == "mswcca") {
    run = run_mswcca(opt);
    write_text(dir / "results.json", run.results.dump(2) + "\n");
    write_trace_csv(dir / "trace.csv", run.trace);
    return kExitOk;
  }
  const LoadedData data = load_pair(opt);
  run = run_two_view(opt, *opt.method, data);
  write_text(dir / "results.json", run.results.dump(2) + "\n");
  write_trace_csv(dir / "trace.csv", run.trace);
  if (opt.plot_data) write_pattern_csv(dir / "pattern.csv", data, run);
  return kExitOk;
}

struct CompareRow {
  std::string method;
  std::uint64_t seed;
  bool failed = false;
  std::string error;
  double correlation = 0.0;
  double objective = 0.0;
  int iterations = 0;
  std::optional<double> f1_u, f1_v, f1_w;
};

CompareRow compare_single(const FitOptions& base, const std::string& method,
                          std::uint64_t seed) {
  CompareRow row;
  row.method = method;
  row.seed = seed;
  try {
    FitOptions opt = base;
    opt.method = method;
    opt.seed = seed;
    const LoadedData data = load_pair(opt);
    const RunOutput run = run_two_view(opt, method, data);
    row.correlation = run.results.at("correlation_level").get<double>();
    row.objective = run.results.at("objective").get<double>();
    row.iterations = run.results.at("iterations").get<int>();
    if (data.truth) {
      if (run.u) row.f1_u = support_recovery(*run.u, data.truth->support_u).f1;
      if (run.v) row.f1_v = support_recovery(*run.v, data.truth->support_v).f1;
      if (run.w) row.f1_w = support_recovery(*run.w, data.truth->support_w).f1;
    }
  } catch (const std::exception& e) {
    row.failed = true;
    row.error = e.what();
  }
  return row;
}

int cmd_compare(const FitOptions& opt) {
  if (!opt.methods) throw ConfigError("compare requires --methods m1,m2,...");
  const std::vector<std::string> methods = split(*opt.methods, ',');
  const std::vector<std::uint64_t> seeds = parse_seed_list(opt.seeds.value_or("0"));
  const fs::path dir = opt.out.value_or(".");
  fs::create_directories(dir);

  struct Task {
    std::string method;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (const std::string& method : methods)
    for (std::uint64_t seed : seeds) tasks.push_back({method, seed});

  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  const int jobs = std::max(1, opt.jobs.value_or(hw > 0 ? hw : 1));
  std::vector<CompareRow> rows(tasks.size());
  std::size_t next = 0;
  while (next < tasks.size()) {
    const std::size_t batch = std::min<std::size_t>(jobs, tasks.size() - next);
    std::vector<std::future<CompareRow>> futures;
    for (std::size_t i = 0; i < batch; ++i) {
      const Task& task = tasks[next + i];
      futures.push_back(std::async(std::launch::async, compare_single, std::cref(opt),
                                   task.method, task.seed));
    }
    for (std::size_t i = 0; i < batch; ++i) rows[next + i] = futures[i].get();
    next += batch;
  }

  std::ostringstream csv;
  csv << "method,seed,correlation,objective,iterations,f1_u,f1_v,f1_w,error\n";
  const auto cell = [](const std::optional<double>& v) {
    return v ? std::to_string(*v) : std::string();
  };
  for (const CompareRow& row : rows) {
    csv << row.method << ',' << row.seed << ',';
    if (row.failed) {
      csv << ",,,,,," << '"' << row.error << '"' << '\n';
      continue;
    }
    csv << row.correlation << ',' << row.objective << ',' << row.iterations << ','
        << cell(row.f1_u) << ',' << cell(row.f1_v) << ',' << cell(row.f1_w) << ",\n";
  }
  // Aggregate means per method over successful rows.
  for (const std::string& method : methods) {
    double corr = 0, obj = 0;
    int count = 0;
    for (const CompareRow& row : rows)
      if (row.method == method && !row.failed) {
        corr += row.correlation;
        obj += row.objective;
        ++count;
      }
    if (count == 0) continue;
    csv << method << ",mean," << corr / count << ',' << obj / count << ",,,,,\n";
  }
  write_text(dir / "compare.csv", csv.str());
  std::cout << "wrote " << (dir / "compare.csv").string() << " (" << rows.size()
            << " runs)\n";
  return kExitOk;
}

void add_common_options(CLI::App* cmd, FitOptions& opt) {
  cmd->add_option("--config", opt.config_path, "JSON config file; flags override");
  cmd->add_option("--synthetic", opt.synthetic, "built-in generator (1 or 2)");
  cmd->add_option("--seed", opt.seed, "generator and solver seed");
  cmd->add_option("--noise", opt.noise, "noise scale for the generators");
  cmd->add_option("--out", opt.out, "output directory (default .)");
}

void add_fit_options(CLI::App* cmd, FitOptions& opt) {
  cmd->add_option("--method", opt.method,
                  "l0_swcca|l1_swcca|group_swcca|mswcca|l0_scca|pmd");
  cmd->add_option("--x", opt.x_path, "X matrix file");
  cmd->add_option("--y", opt.y_path, "Y matrix file");
  cmd->add_option("--views", opt.views, "comma-separated view files (mswcca)");
  cmd->add_option("--ku", opt.ku, "u cardinality (comma list for mswcca)");
  cmd->add_option("--kv", opt.kv, "v cardinality");
  cmd->add_option("--kw", opt.kw, "w cardinality");
  cmd->add_option("--lu", opt.lu, "u shrinkage weight");
  cmd->add_option("--lv", opt.lv, "v shrinkage weight");
  cmd->add_option("--lw", opt.lw, "w shrinkage weight");
  cmd->add_option("--groups-u", opt.groups_u, "u groups: block size or a-b;c-d");
  cmd->add_option("--groups-v", opt.groups_v, "v groups");
  cmd->add_option("--groups-w", opt.groups_w, "w groups");
  cmd->add_option("--c", opt.c, "PMD radius ratio for both sides");
  cmd->add_option("--cu", opt.cu, "PMD radius ratio for u");
  cmd->add_option("--cv", opt.cv, "PMD radius ratio for v");
  cmd->add_option("--pmd-standardize", opt.pmd_standardize,
                  "standardize columns inside PMD (default true)");
  cmd->add_option("--init", opt.init, "random|warm");
  cmd->add_option("--restarts", opt.restarts, "random restarts, best kept");
  cmd->add_option("--max-iters", opt.max_iters, "sweep cap");
  cmd->add_option("--tol", opt.tol, "squared update-length tolerance");
  cmd->add_option("--objective-tol", opt.objective_tol,
                  "objective-delta stop (0 disables)");
  cmd->add_option("--truth", opt.truth_path, "truth.json for recovery scoring");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse weighted canonical correlation analysis toolkit"};
  app.require_subcommand(1);

  FitOptions gen_opt, fit_opt, compare_opt;
  CLI::App* gen = app.add_subcommand("gen", "write synthetic matrices and truth");
  add_common_options(gen, gen_opt);

  CLI::App* fit_cmd = app.add_subcommand("fit", "run one method on one dataset");
  add_common_options(fit_cmd, fit_opt);
  add_fit_options(fit_cmd, fit_opt);
  fit_cmd->add_flag("--plot-data", fit_opt.plot_data,
                    "also write tidy pattern.csv for plotting");

  CLI::App* compare = app.add_subcommand("compare", "run methods x seeds, tabulate");
  add_common_options(compare, compare_opt);
  add_fit_options(compare, compare_opt);
  compare->add_option("--methods", compare_opt.methods, "comma-separated methods");
  compare->add_option("--seeds", compare_opt.seeds, "list/range, e.g. 1-20 or 3,5");
  compare->add_option("--jobs", compare_opt.jobs, "parallel workers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (gen->parsed()) {
      merge_config_file(gen_opt);
      return cmd_gen(gen_opt);
    }
    if (fit_cmd->parsed()) {
      merge_config_file(fit_opt);
      return cmd_fit(fit_opt);
    }
    merge_config_file(compare_opt);
    return cmd_compare(compare_opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidK& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InfeasibleRadius& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParseError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const DimensionMismatch& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const ConstantColumn& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const ZeroProjection& e) {
    std::cerr << "solver degeneracy: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const DegenerateVariance& e) {
    std::cerr << "solver degeneracy: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const NonFiniteValue& e) {
    std::cerr << "solver degeneracy: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const json::exception& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const Error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
