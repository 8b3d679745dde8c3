#pragma once

// Experiment configuration and the sweep/compare runner behind the CLI.
// A config names networks, workloads, rates and cycle budgets; the runner
// executes every (network, workload, rate) point, optionally across a
// bounded worker pool, and writes curve/summary/cost CSVs. Identical config
// and seed always produce byte-identical files: per-point seeds are derived
// from grid coordinates and the output files are written by a single thread
// in grid order after all points complete.

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "minweave/export.hpp"
#include "minweave/metrics.hpp"
#include "minweave/paths.hpp"
#include "minweave/routing.hpp"
#include "minweave/simengine.hpp"
#include "minweave/topology.hpp"
#include "minweave/transforms.hpp"
#include "minweave/workload.hpp"

namespace minweave {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// network specs

struct NetworkSpec {
  std::string kind = "omega";  // omega|butterfly|baseline|gcube|benes|clos|mf-*|flat-*
  int32_t n = 32;
  int32_t k = 2;
  std::string method = "all";  // mf-*: all | pairs
  ClosParams clos{};

  std::string label() const { return kind; }
};

inline Network build_network(const NetworkSpec& spec) {
  auto base = [&](const std::string& name) -> Network {
    if (name == "omega") return build_omega(spec.n, spec.k);
    if (name == "butterfly") return build_butterfly(spec.n, spec.k);
    if (name == "baseline") return build_baseline(spec.n, spec.k);
    if (name == "gcube" || name == "generalized-cube" || name == "generalized_cube")
      return build_generalized_cube(spec.n, spec.k);
    throw ConfigError("unknown network kind: " + spec.kind);
  };
  try {
    if (spec.kind == "benes") return build_benes(spec.n);
    if (spec.kind == "clos") return build_clos(spec.clos);
    if (spec.kind.rfind("mf-", 0) == 0) {
      MergeMethod m;
      if (spec.method == "all")
        m = MergeMethod::all_intermediate;
      else if (spec.method == "pairs")
        m = MergeMethod::grouped_pairs;
      else
        throw ConfigError("mf method must be 'all' or 'pairs'");
      return meta_flatten(base(spec.kind.substr(3)), m);
    }
    if (spec.kind.rfind("flat-", 0) == 0) return full_flatten(base(spec.kind.substr(5)));
    return base(spec.kind);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(e.what()));
  }
}

// ---------------------------------------------------------------------------
// workload declarations (materialized per network size N)

struct WorkloadDecl {
  std::string kind = "uniform";  // uniform|exponential|normal|hotspot|trace
  std::string preset;            // hotspot: fft | waternsq | waterspatial (empty = custom)
  double factor = 4.0;
  std::optional<double> sigma;
  std::vector<double> src_weights, dst_weights;
  std::string trace_path;

  std::string label() const {
    if (kind == "hotspot") return preset.empty() ? "hotspot" : preset;
    return kind;
  }
  bool is_trace() const { return kind == "trace"; }
};

inline WorkloadSpec materialize(const WorkloadDecl& d, int32_t N, double rate, uint64_t seed,
                                int32_t msg_flits) {
  WorkloadSpec spec;
  spec.rate = rate;
  spec.seed = seed;
  spec.msg_flits = msg_flits;
  if (d.kind == "uniform") {
    spec.kind = WorkloadKind::uniform;
  } else if (d.kind == "exponential") {
    spec.kind = WorkloadKind::exponential;
  } else if (d.kind == "normal") {
    spec.kind = WorkloadKind::normal;
    spec.sigma = d.sigma;
  } else if (d.kind == "hotspot") {
    if (d.preset == "fft") return [&] { auto s = fft_proxy(N, rate, seed, d.factor); s.msg_flits = msg_flits; return s; }();
    if (d.preset == "waternsq") return [&] { auto s = waternsq_proxy(N, rate, seed, d.factor); s.msg_flits = msg_flits; return s; }();
    if (d.preset == "waterspatial") return [&] { auto s = waterspatial_proxy(N, rate, seed, d.factor); s.msg_flits = msg_flits; return s; }();
    if (!d.preset.empty()) throw ConfigError("unknown hotspot preset: " + d.preset);
    spec.kind = WorkloadKind::hotspot;
    spec.src_weights = d.src_weights;
    spec.dst_weights = d.dst_weights;
  } else if (d.kind == "trace") {
    spec.kind = WorkloadKind::trace;
    spec.trace_path = d.trace_path;
  } else {
    throw ConfigError("unknown workload kind: " + d.kind);
  }
  return spec;
}

// ---------------------------------------------------------------------------

struct ExperimentConfig {
  std::vector<NetworkSpec> networks;
  std::vector<WorkloadDecl> workloads;
  std::vector<double> rates{0.1};
  int32_t msg_flits = 2;
  uint64_t seed = 1;
  int32_t jobs = 1;
  SimConfig sim;
  std::string out_dir = "out";

  void validate() const {
    if (networks.empty()) throw ConfigError("config names no networks");
    if (workloads.empty()) throw ConfigError("config names no workloads");
    if (rates.empty()) throw ConfigError("config names no rates");
    if (sim.measure <= 0 || sim.warmup < 0) throw ConfigError("cycle budgets must be positive");
  }
};

// Default experiment: every network and workload family of the comparison
// study at 32 terminals, rates 0.05 .. 0.50.
inline ExperimentConfig paper32_preset() {
  ExperimentConfig cfg;
  for (const char* kind : {"omega", "butterfly", "baseline", "gcube", "benes"})
    cfg.networks.push_back({kind, 32, 2, "all", {}});
  cfg.networks.push_back({"clos", 32, 2, "all", ClosParams{2, 8, 16}});
  cfg.networks.push_back({"mf-butterfly", 32, 2, "all", {}});
  cfg.networks.push_back({"mf-baseline", 32, 2, "all", {}});
  for (const char* wl : {"uniform", "exponential", "normal"}) {
    WorkloadDecl d;
    d.kind = wl;
    cfg.workloads.push_back(d);
  }
  for (const char* hs : {"fft", "waternsq", "waterspatial"}) {
    WorkloadDecl d;
    d.kind = "hotspot";
    d.preset = hs;
    cfg.workloads.push_back(d);
  }
  cfg.rates.clear();
  for (int i = 1; i <= 10; ++i) cfg.rates.push_back(0.05 * i);
  return cfg;
}

// ---------------------------------------------------------------------------
// JSON config parsing (flags override afterwards)

namespace detail {

inline NetworkSpec parse_network(const nlohmann::json& j) {
  NetworkSpec spec;
  if (j.is_string()) {
    spec.kind = j.get<std::string>();
    return spec;
  }
  if (!j.is_object()) throw ConfigError("network entry must be a string or object");
  spec.kind = j.value("kind", spec.kind);
  spec.n = j.value("n", spec.n);
  spec.k = j.value("k", spec.k);
  spec.method = j.value("method", spec.method);
  if (j.contains("clos")) {
    const auto& c = j.at("clos");
    spec.clos.n = c.value("n", spec.clos.n);
    spec.clos.m = c.value("m", spec.clos.m);
    spec.clos.r = c.value("r", spec.clos.r);
  }
  return spec;
}

inline WorkloadDecl parse_workload(const nlohmann::json& j) {
  WorkloadDecl d;
  if (j.is_string()) {
    d.kind = j.get<std::string>();
    return d;
  }
  if (!j.is_object()) throw ConfigError("workload entry must be a string or object");
  d.kind = j.value("kind", d.kind);
  d.preset = j.value("preset", d.preset);
  d.factor = j.value("factor", d.factor);
  if (j.contains("sigma")) d.sigma = j.at("sigma").get<double>();
  if (j.contains("src_weights")) d.src_weights = j.at("src_weights").get<std::vector<double>>();
  if (j.contains("dst_weights")) d.dst_weights = j.at("dst_weights").get<std::vector<double>>();
  d.trace_path = j.value("path", d.trace_path);
  return d;
}

}  // namespace detail

inline ExperimentConfig parse_config(const nlohmann::json& j) {
  ExperimentConfig cfg;
  try {
    if (j.contains("preset")) {
      if (j.at("preset").get<std::string>() != "paper32")
        throw ConfigError("unknown preset: " + j.at("preset").get<std::string>());
      cfg = paper32_preset();
    }
    if (j.contains("networks")) {
      cfg.networks.clear();
      for (const auto& e : j.at("networks")) cfg.networks.push_back(detail::parse_network(e));
    } else if (j.contains("network")) {
      cfg.networks = {detail::parse_network(j.at("network"))};
    }
    if (j.contains("workloads")) {
      cfg.workloads.clear();
      for (const auto& e : j.at("workloads")) cfg.workloads.push_back(detail::parse_workload(e));
    } else if (j.contains("workload")) {
      cfg.workloads = {detail::parse_workload(j.at("workload"))};
    }
    if (j.contains("rates")) cfg.rates = j.at("rates").get<std::vector<double>>();
    if (j.contains("rate")) cfg.rates = {j.at("rate").get<double>()};
    cfg.msg_flits = j.value("msg_flits", cfg.msg_flits);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.jobs = j.value("jobs", cfg.jobs);
    cfg.out_dir = j.value("out", cfg.out_dir);
    if (j.contains("sim")) {
      const auto& s = j.at("sim");
      cfg.sim.buffer_depth = s.value("buffer_depth", cfg.sim.buffer_depth);
      cfg.sim.warmup = s.value("warmup", cfg.sim.warmup);
      cfg.sim.measure = s.value("measure", cfg.sim.measure);
      cfg.sim.drain = s.value("drain", cfg.sim.drain);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_config(j);
}

// ---------------------------------------------------------------------------
// runner

struct PointResult {
  std::string network, workload;
  double rate = 0.0;
  SimStats stats;
  std::vector<std::string> violations;
};

struct ExperimentResult {
  std::vector<PointResult> points;           // grid order
  std::vector<PowerProxyReport> power;       // per network
};

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  struct Prepared {
    Network net;
    RoutingTable table;
    std::string label;
  };
  std::vector<Prepared> nets;
  for (const NetworkSpec& ns : cfg.networks) {
    Network net = build_network(ns);
    auto rep = validate_network(net);
    if (!rep.ok()) throw ConfigError("network " + ns.label() + " failed validation: " + rep.problems.front());
    RoutingTable table = precompute_tables(net);
    nets.push_back({std::move(net), std::move(table), ns.label()});
  }

  struct Point {
    size_t net_i, wl_i, rate_i;
  };
  std::vector<Point> grid;
  for (size_t ni = 0; ni < nets.size(); ++ni)
    for (size_t wi = 0; wi < cfg.workloads.size(); ++wi) {
      size_t n_rates = cfg.workloads[wi].is_trace() ? 1 : cfg.rates.size();
      for (size_t ri = 0; ri < n_rates; ++ri) grid.push_back({ni, wi, ri});
    }

  ExperimentResult result;
  result.points.resize(grid.size());
  std::atomic<size_t> next{0};
  std::mutex err_mutex;
  std::string first_error;

  auto worker = [&]() {
    for (size_t i = next.fetch_add(1); i < grid.size(); i = next.fetch_add(1)) {
      try {
        const Point& pt = grid[i];
        const Prepared& prep = nets[pt.net_i];
        const WorkloadDecl& wld = cfg.workloads[pt.wl_i];
        double rate = wld.is_trace() ? 0.0 : cfg.rates[pt.rate_i];
        uint64_t seed = detail::mix_seed(cfg.seed, (pt.net_i << 20) ^ (pt.wl_i << 10) ^ pt.rate_i);
        SimConfig sim = cfg.sim;
        std::vector<TraceRecord> records;
        if (wld.is_trace()) {
          records = load_trace(wld.trace_path, prep.net.n_terminals).records;
          sim.drain = true;
          sim.warmup = 0;
        } else {
          WorkloadSpec spec =
              materialize(wld, prep.net.n_terminals, rate, seed, cfg.msg_flits);
          records = generate_trace(spec, prep.net.n_terminals, sim.warmup + sim.measure);
        }
        RunResult run = run_sim(prep.net, prep.table, std::move(records), sim);
        PointResult pr;
        pr.network = prep.label;
        pr.workload = wld.label();
        pr.rate = rate;
        pr.stats = aggregate_run(run, sim, prep.net.n_terminals);
        pr.violations = run.violations;
        result.points[i] = std::move(pr);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (first_error.empty()) first_error = e.what();
      }
    }
  };
  int32_t jobs = std::max<int32_t>(1, cfg.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int32_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (!first_error.empty()) throw std::runtime_error(first_error);

  for (const Prepared& p : nets) {
    PowerProxyReport rep = power_proxy(p.net);
    rep.label = p.label;
    result.power.push_back(rep);
  }
  return result;
}

// Write curves/summary/table1 under out_dir. Deterministic file contents.
inline void write_experiment_outputs(const ExperimentConfig& cfg, const ExperimentResult& res,
                                     bool with_power) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  fs::create_directories(fs::path(cfg.out_dir) / "curves");

  std::ofstream summary(fs::path(cfg.out_dir) / "summary.csv");
  write_stats_header(summary);
  for (const PointResult& p : res.points)
    write_stats_row(summary, {p.network, p.workload, p.rate, p.stats});

  // one curve file per (workload, network): rate-indexed rows
  std::string cur_key;
  std::ofstream curve;
  for (const PointResult& p : res.points) {
    std::string key = p.workload + "__" + p.network;
    if (key != cur_key) {
      if (curve.is_open()) curve.close();
      curve.open(fs::path(cfg.out_dir) / "curves" / (key + ".csv"));
      curve << "rate,offered_rate,accepted_rate,avg_latency,avg_hops,blocking_rate,messages\n";
      cur_key = key;
    }
    curve << p.rate << ',' << p.stats.offered_rate << ',' << p.stats.accepted_rate << ','
          << p.stats.avg_latency << ',' << p.stats.avg_hops << ',' << p.stats.blocking_rate << ','
          << p.stats.messages << '\n';
  }
  if (curve.is_open()) curve.close();

  if (with_power) {
    std::vector<PowerProxyReport> sorted = res.power;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const PowerProxyReport& a, const PowerProxyReport& b) {
                       return a.proxy_score > b.proxy_score;
                     });
    std::ofstream table1(fs::path(cfg.out_dir) / "table1.csv");
    write_power_csv(table1, sorted);
  }

  std::vector<CompareRow> rows;
  for (const PointResult& p : res.points) rows.push_back({p.network, p.workload, p.rate, p.stats});
  std::ofstream txt(fs::path(cfg.out_dir) / "summary.txt");
  txt << render_compare_table(rows);
}

}  // namespace minweave
