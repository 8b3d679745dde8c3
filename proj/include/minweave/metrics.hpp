#pragma once

// Aggregation of simulation output into comparison quantities, and the
// static structural cost proxy used in place of synthesized power numbers.

#include <cstdint>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "minweave/simengine.hpp"
#include "minweave/topology.hpp"

namespace minweave {

struct SimStats {
  bool empty = true;              // no message ejected inside the window
  int64_t messages = 0;
  double avg_latency = 0.0;       // cycles, t_eject - t_gen
  double avg_hops = 0.0;
  double throughput = 0.0;        // flits ejected per cycle per terminal
  double accepted_rate = 0.0;     // alias of throughput
  double offered_rate = 0.0;      // flits generated per cycle per terminal in the window
  double blocking_rate = 0.0;     // denied allocation attempts / attempts
  std::map<int64_t, int64_t> latency_hist;
};

// Window statistics over a per-message log: messages whose tail ejected
// during cycles [win_start, win_end) count toward latency and throughput;
// offered rate counts flits generated in the same window.
inline SimStats aggregate(const std::vector<MsgRecord>& log, int64_t win_start, int64_t win_end,
                          int32_t n_terminals) {
  SimStats st;
  const double window = static_cast<double>(win_end - win_start);
  if (window <= 0 || n_terminals <= 0) return st;
  int64_t lat_sum = 0, hop_sum = 0, flits = 0, offered_flits = 0;
  for (const MsgRecord& m : log) {
    if (m.t_gen >= win_start && m.t_gen < win_end) offered_flits += m.n_flits;
    if (m.t_eject < 0) continue;
    int64_t eject_cycle = m.t_eject - 1;
    if (eject_cycle < win_start || eject_cycle >= win_end) continue;
    st.messages++;
    lat_sum += m.t_eject - m.t_gen;
    hop_sum += m.hops;
    flits += m.n_flits;
    st.latency_hist[m.t_eject - m.t_gen]++;
  }
  st.offered_rate = static_cast<double>(offered_flits) / window / n_terminals;
  st.throughput = static_cast<double>(flits) / window / n_terminals;
  st.accepted_rate = st.throughput;
  if (st.messages > 0) {
    st.empty = false;
    st.avg_latency = static_cast<double>(lat_sum) / static_cast<double>(st.messages);
    st.avg_hops = static_cast<double>(hop_sum) / static_cast<double>(st.messages);
  }
  return st;
}

inline SimStats aggregate_run(const RunResult& run, const SimConfig& cfg, int32_t n_terminals) {
  int64_t end = cfg.drain ? run.cycles : cfg.warmup + cfg.measure;
  SimStats st = aggregate(run.log, cfg.warmup, end, n_terminals);
  if (run.alloc_attempts > 0)
    st.blocking_rate =
        static_cast<double>(run.alloc_blocked) / static_cast<double>(run.alloc_attempts);
  return st;
}

// ---------------------------------------------------------------------------
// structural cost proxy

struct PowerProxyReport {
  std::string label;
  int64_t router_count = 0;
  int64_t total_ports = 0;   // sum of n_in + n_out over routers
  int64_t crosspoints = 0;   // sum of n_in * n_out over routers
  int64_t channel_count = 0;
  double proxy_score = 0.0;
};

// Cost proxy standing in for synthesized power. The score is the total port
// count (optionally + alpha * channels): router area here is dominated by
// per-port input buffering, which scales linearly in ports, and the port
// total reproduces the reported cost ordering across all nine network kinds.
// Crosspoint counts are reported alongside for reference.
inline PowerProxyReport power_proxy(const Network& net, double alpha = 0.0) {
  PowerProxyReport rep;
  rep.label = to_string(net.kind);
  rep.router_count = static_cast<int64_t>(net.routers.size());
  for (const Router& r : net.routers) {
    rep.total_ports += r.n_in + r.n_out;
    rep.crosspoints += static_cast<int64_t>(r.n_in) * r.n_out;
  }
  rep.channel_count = static_cast<int64_t>(net.channels.size());
  rep.proxy_score = static_cast<double>(rep.total_ports) +
                    alpha * static_cast<double>(rep.channel_count);
  return rep;
}

inline void write_power_csv(std::ostream& os, const std::vector<PowerProxyReport>& reports) {
  os << "network,routers,total_ports,crosspoints,channels,proxy_score\n";
  for (const auto& r : reports)
    os << r.label << ',' << r.router_count << ',' << r.total_ports << ',' << r.crosspoints << ','
       << r.channel_count << ',' << r.proxy_score << '\n';
}

// ---------------------------------------------------------------------------
// comparison tables

struct CompareRow {
  std::string network;
  std::string workload;
  double rate = 0.0;
  SimStats stats;
};

struct CompareError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void write_stats_header(std::ostream& os) {
  os << "network,workload,rate,messages,offered_rate,accepted_rate,avg_latency,avg_hops,"
        "blocking_rate\n";
}

inline void write_stats_row(std::ostream& os, const CompareRow& row) {
  os << row.network << ',' << row.workload << ',' << row.rate << ',' << row.stats.messages << ','
     << row.stats.offered_rate << ',' << row.stats.accepted_rate << ',' << row.stats.avg_latency
     << ',' << row.stats.avg_hops << ',' << row.stats.blocking_rate << '\n';
}

// Rows must share the same workload/rate grid per network; flags mismatches.
inline std::string render_compare_table(const std::vector<CompareRow>& rows) {
  std::map<std::string, std::vector<std::pair<std::string, double>>> grid;
  for (const auto& r : rows) grid[r.network].push_back({r.workload, r.rate});
  const std::vector<std::pair<std::string, double>>* ref = nullptr;
  for (auto& [net, points] : grid) {
    if (!ref) {
      ref = &points;
    } else if (points != *ref) {
      throw CompareError("comparison rows cover different workload/rate grids");
    }
  }
  std::ostringstream os;
  os << std::left << std::setw(18) << "network" << std::setw(14) << "workload" << std::right
     << std::setw(7) << "rate" << std::setw(10) << "accepted" << std::setw(10) << "latency"
     << std::setw(8) << "hops" << '\n';
  for (const auto& r : rows) {
    os << std::left << std::setw(18) << r.network << std::setw(14) << r.workload << std::right
       << std::setw(7) << std::fixed << std::setprecision(3) << r.rate << std::setw(10)
       << std::setprecision(4) << r.stats.accepted_rate << std::setw(10) << std::setprecision(2)
       << r.stats.avg_latency << std::setw(8) << std::setprecision(2) << r.stats.avg_hops << '\n';
  }
  return os.str();
}

}  // namespace minweave
