// minweave command line: build/export topologies, run single simulations,
// sweep injection rates, and emit comparison reports.
//
// Exit codes: 0 ok, 1 usage, 2 config, 3 runtime.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "minweave/experiment.hpp"
#include "minweave/export.hpp"
#include "minweave/metrics.hpp"
#include "minweave/paths.hpp"
#include "minweave/routing.hpp"
#include "minweave/simengine.hpp"
#include "minweave/topology.hpp"
#include "minweave/transforms.hpp"
#include "minweave/workload.hpp"

namespace fs = std::filesystem;
using namespace minweave;

namespace {

int cmd_build(const NetworkSpec& spec, const std::string& out_dir, const std::string& routes_path) {
  Network net = build_network(spec);
  ValidationReport rep = validate_network(net);
  if (!rep.ok()) {
    for (const auto& p : rep.problems) std::cerr << "validation: " << p << '\n';
    throw std::runtime_error("built network failed validation");
  }
  fs::create_directories(out_dir);
  std::string base = (fs::path(out_dir) / spec.label()).string();
  write_json(base + ".json", net);
  write_dot(base + ".dot", net);
  std::cout << "wrote " << base << ".json and " << base << ".dot (" << net.routers.size()
            << " routers, " << net.channels.size() << " channels)\n";
  if (!routes_path.empty()) {
    RoutingTable table = precompute_tables(net);
    std::ofstream os(routes_path);
    if (!os) throw std::runtime_error("cannot write " + routes_path);
    dump_tables(net, table, os);
    std::cout << "wrote routing table dump to " << routes_path << '\n';
  }
  return 0;
}

int cmd_sim(ExperimentConfig cfg) {
  if (cfg.networks.size() != 1 || cfg.workloads.size() != 1)
    throw ConfigError("sim expects exactly one network and one workload");
  Network net = build_network(cfg.networks[0]);
  ValidationReport rep = validate_network(net);
  if (!rep.ok()) throw ConfigError("network failed validation: " + rep.problems.front());
  RoutingTable table = precompute_tables(net);

  const WorkloadDecl& wld = cfg.workloads[0];
  SimConfig sim = cfg.sim;
  std::vector<TraceRecord> records;
  double rate = cfg.rates.at(0);
  if (wld.is_trace()) {
    LoadedTrace lt = load_trace(wld.trace_path, net.n_terminals);
    for (const auto& w : lt.warnings) std::cerr << "warning: " << w << '\n';
    records = lt.records;
    sim.drain = true;
    sim.warmup = 0;
    rate = 0.0;
  } else {
    WorkloadSpec spec = materialize(wld, net.n_terminals, rate, cfg.seed, cfg.msg_flits);
    records = generate_trace(spec, net.n_terminals, sim.warmup + sim.measure);
  }
  size_t n_records = records.size();
  RunResult run = run_sim(net, table, std::move(records), sim);
  for (const auto& v : run.violations) std::cerr << "violation: " << v << '\n';
  SimStats stats = aggregate_run(run, sim, net.n_terminals);

  fs::create_directories(cfg.out_dir);
  {
    std::ofstream os(fs::path(cfg.out_dir) / "stats.csv");
    write_stats_header(os);
    write_stats_row(os, {cfg.networks[0].label(), wld.label(), rate, stats});
  }
  {
    std::ofstream os(fs::path(cfg.out_dir) / "messages.csv");
    write_message_log_csv(os, run.log);
  }
  std::cout << "simulated " << run.cycles << " cycles, " << run.log.size() << " messages ("
            << n_records << " offered), avg latency "
            << (stats.empty ? 0.0 : stats.avg_latency) << ", throughput " << stats.throughput
            << "\n";
  if (!run.violations.empty()) throw std::runtime_error("invariant violations during simulation");
  return 0;
}

int cmd_grid(ExperimentConfig cfg, bool with_power) {
  ExperimentResult res = run_experiment(cfg);
  write_experiment_outputs(cfg, res, with_power);
  size_t bad = 0;
  for (const auto& p : res.points) bad += p.violations.size();
  std::cout << "ran " << res.points.size() << " points, outputs under " << cfg.out_dir << '\n';
  if (bad) throw std::runtime_error("invariant violations during sweep");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minweave: multistage interconnection network toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_dir, preset;
  uint64_t seed = 0;
  int32_t jobs = 0;
  app.add_option("--config", config_path, "JSON experiment config")->envname("MINWEAVE_CONFIG");
  auto* seed_opt = app.add_option("--seed", seed, "PRNG seed")->envname("MINWEAVE_SEED");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--jobs", jobs, "worker threads for sweeps");
  app.add_option("--preset", preset, "built-in experiment preset (paper32)");

  // build
  auto* build = app.add_subcommand("build", "construct a topology and export JSON + DOT");
  build->fallthrough();
  NetworkSpec bspec;
  std::string routes_path;
  build->add_option("kind", bspec.kind,
                    "omega|butterfly|baseline|gcube|benes|clos|mf-<kind>|flat-<kind>")
      ->required();
  build->add_option("--n", bspec.n, "terminal count");
  build->add_option("--k", bspec.k, "router radix");
  build->add_option("--method", bspec.method, "mf merge method: all|pairs");
  build->add_option("--clos-n", bspec.clos.n, "clos inputs per ingress switch");
  build->add_option("--clos-m", bspec.clos.m, "clos middle switch count");
  build->add_option("--clos-r", bspec.clos.r, "clos ingress/egress switch count");
  build->add_option("--routes", routes_path, "also dump the routing table to this file");

  auto* sim = app.add_subcommand("sim", "run one simulation from a config file");
  sim->fallthrough();
  auto* sweep = app.add_subcommand("sweep", "sweep injection rates, emit curve CSVs");
  sweep->fallthrough();
  auto* compare = app.add_subcommand("compare", "multi-network comparison incl. cost table");
  compare->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;  // usage errors
  }

  try {
    if (build->parsed()) {
      return cmd_build(bspec, out_dir.empty() ? "." : out_dir, routes_path);
    }
    ExperimentConfig cfg;
    if (!config_path.empty())
      cfg = load_config(config_path);
    else if (!preset.empty() && preset == "paper32")
      cfg = paper32_preset();
    else if (!preset.empty())
      throw ConfigError("unknown preset: " + preset);
    else if (sim->parsed() || sweep->parsed() || compare->parsed())
      throw ConfigError("sim/sweep/compare need --config or --preset");
    if (seed_opt->count() > 0) cfg.seed = seed;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (jobs > 0) cfg.jobs = jobs;
    if (sim->parsed()) return cmd_sim(std::move(cfg));
    if (sweep->parsed()) return cmd_grid(std::move(cfg), false);
    if (compare->parsed()) return cmd_grid(std::move(cfg), true);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const TraceParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
