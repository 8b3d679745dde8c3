#pragma once

// Per-router output-port legality for a destination. Two policies:
// destination-tag self-routing (digit of the destination address; delta
// networks and the Benes second half) and minimal adaptive (every port on a
// shortest legal continuation). Both are pure functions over an immutable
// network; precompute_tables densifies the adaptive sets for the simulator.

#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "minweave/topology.hpp"

namespace minweave {

enum class Policy : uint8_t { destination_tag, adaptive_minimal };

struct RouteCandidates {
  std::vector<int32_t> ports;  // ascending output-port indices
  Policy policy = Policy::adaptive_minimal;
};

struct UnsupportedPolicyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline constexpr int32_t kUnreachable = std::numeric_limits<int32_t>::max() / 2;

// d[router][budget] = minimal channel crossings (terminal-out included) to
// reach dst, given `budget` intra hops left in the current stage. Computed
// stage-by-stage from the output side; intra hops consume budget, inter hops
// refresh it to the next stage's allowance.
inline std::vector<std::vector<int32_t>> dist_to_dst(const Network& net, int32_t dst) {
  std::vector<std::vector<int32_t>> d(net.routers.size());
  for (const Router& r : net.routers)
    d[static_cast<size_t>(r.id)].assign(
        static_cast<size_t>(net.merged_span[static_cast<size_t>(r.stage)]), kUnreachable);
  const int32_t last = net.output_terminals[static_cast<size_t>(dst)].router;
  for (auto& v : d[static_cast<size_t>(last)]) v = 1;
  for (int32_t t = net.stage_count() - 1; t >= 0; --t) {
    const int32_t span = net.merged_span[static_cast<size_t>(t)];
    for (int32_t b = 0; b < span; ++b) {
      for (int32_t id : net.stages[static_cast<size_t>(t)]) {
        if (id == last) continue;
        int32_t best = kUnreachable;
        for (int32_t cid : net.out_channel[static_cast<size_t>(id)]) {
          const Channel& c = net.channels[static_cast<size_t>(cid)];
          if (c.dst.is_terminal()) continue;
          int32_t via;
          if (c.kind == ChannelKind::intra_stage) {
            if (b == 0) continue;
            via = d[static_cast<size_t>(c.dst.router)][static_cast<size_t>(b) - 1];
          } else {
            via = d[static_cast<size_t>(c.dst.router)].back();
          }
          best = std::min(best, via);
        }
        if (best < kUnreachable)
          d[static_cast<size_t>(id)][static_cast<size_t>(b)] = 1 + best;
      }
    }
  }
  return d;
}

// Inter-hop distances index the fresh budget of the next stage, which is the
// last entry of its budget vector; helper kept with the DP for clarity.

}  // namespace detail

// Every output port of `router` lying on a minimal legal path to output
// terminal dst, fresh intra budget assumed at the router. Ports ascending.
inline RouteCandidates adaptive_candidates(const Network& net, int32_t router, int32_t dst) {
  if (dst < 0 || dst >= net.n_terminals) throw std::invalid_argument("destination out of range");
  if (router < 0 || router >= static_cast<int32_t>(net.routers.size()))
    throw std::invalid_argument("router out of range");
  auto d = detail::dist_to_dst(net, dst);
  RouteCandidates out;
  out.policy = Policy::adaptive_minimal;
  const int32_t here = d[static_cast<size_t>(router)].back();
  if (here >= detail::kUnreachable) return out;
  for (int32_t cid : net.out_channel[static_cast<size_t>(router)]) {
    const Channel& c = net.channels[static_cast<size_t>(cid)];
    int32_t via = detail::kUnreachable;
    if (c.dst.is_terminal()) {
      if (c.dst.port == dst) via = 0;
    } else if (c.kind == ChannelKind::intra_stage) {
      const auto& dv = d[static_cast<size_t>(c.dst.router)];
      if (dv.size() >= 2) via = dv[dv.size() - 2];
    } else {
      via = d[static_cast<size_t>(c.dst.router)].back();
    }
    if (via < detail::kUnreachable && 1 + via == here) out.ports.push_back(c.src.port);
  }
  std::sort(out.ports.begin(), out.ports.end());
  return out;
}

// Destination-tag self-routing: at stage t the output port is the t-th most
// significant base-k digit of dst. Valid on delta networks everywhere and on
// the Benes second half (middle stage onward); merged and Clos stages have no
// digit interpretation and are rejected.
inline RouteCandidates destination_tag(const Network& net, int32_t router, int32_t dst) {
  if (dst < 0 || dst >= net.n_terminals) throw std::invalid_argument("destination out of range");
  if (router < 0 || router >= static_cast<int32_t>(net.routers.size()))
    throw std::invalid_argument("router out of range");
  const Router& r = net.routers[static_cast<size_t>(router)];
  const int32_t s = net.stage_count();
  if (is_delta_family(net.kind)) {
    // fall through
  } else if (net.kind == NetKind::benes) {
    const int32_t n = (s + 1) / 2;
    if (r.stage < n - 1)
      throw UnsupportedPolicyError("destination-tag undefined on the Benes first half");
  } else {
    throw UnsupportedPolicyError("destination-tag requires a delta network or the Benes second half");
  }
  RouteCandidates out;
  out.policy = Policy::destination_tag;
  out.ports.push_back(detail::digit_of(dst, s - 1 - r.stage, net.radix));
  return out;
}

struct RoutingTable {
  // entry[router][dst] = legal adaptive ports; dist[router][dst] = minimal
  // remaining channel crossings with fresh budget (routers left to visit).
  std::vector<std::vector<std::vector<int32_t>>> entry;
  std::vector<std::vector<int32_t>> dist;

  const std::vector<int32_t>& candidates(int32_t router, int32_t dst) const {
    return entry[static_cast<size_t>(router)][static_cast<size_t>(dst)];
  }
};

inline RoutingTable precompute_tables(const Network& net) {
  RoutingTable table;
  const size_t R = net.routers.size(), N = static_cast<size_t>(net.n_terminals);
  table.entry.assign(R, std::vector<std::vector<int32_t>>(N));
  table.dist.assign(R, std::vector<int32_t>(N, detail::kUnreachable));
  for (int32_t dst = 0; dst < net.n_terminals; ++dst) {
    auto d = detail::dist_to_dst(net, dst);
    for (const Router& r : net.routers) {
      const int32_t here = d[static_cast<size_t>(r.id)].back();
      if (here >= detail::kUnreachable) continue;
      table.dist[static_cast<size_t>(r.id)][static_cast<size_t>(dst)] = here;
      auto& ports = table.entry[static_cast<size_t>(r.id)][static_cast<size_t>(dst)];
      for (int32_t cid : net.out_channel[static_cast<size_t>(r.id)]) {
        const Channel& c = net.channels[static_cast<size_t>(cid)];
        int32_t via = detail::kUnreachable;
        if (c.dst.is_terminal()) {
          if (c.dst.port == dst) via = 0;
        } else if (c.kind == ChannelKind::intra_stage) {
          const auto& dv = d[static_cast<size_t>(c.dst.router)];
          if (dv.size() >= 2) via = dv[dv.size() - 2];
        } else {
          via = d[static_cast<size_t>(c.dst.router)].back();
        }
        if (via < detail::kUnreachable && 1 + via == here) ports.push_back(c.src.port);
      }
      std::sort(ports.begin(), ports.end());
    }
  }
  return table;
}

// Debug dump, one line per (router, dst) entry. Not a stability contract.
inline void dump_tables(const Network& net, const RoutingTable& t, std::ostream& os) {
  for (const Router& r : net.routers)
    for (int32_t dst = 0; dst < net.n_terminals; ++dst) {
      os << "router " << r.id << " dst " << dst << " ->";
      for (int32_t p : t.candidates(r.id, dst)) os << ' ' << p;
      os << " (dist " << t.dist[static_cast<size_t>(r.id)][static_cast<size_t>(dst)] << ")\n";
    }
}

}  // namespace minweave
