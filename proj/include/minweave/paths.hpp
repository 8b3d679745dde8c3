#pragma once

// Forward path enumeration and structural validation. Legal paths are
// stage-monotone: inter-stage hops always advance, intra-stage hops stay in a
// merged stage and are limited to one per merged boundary (merged_span - 1
// hops per stage), never revisiting a router.

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "minweave/topology.hpp"

namespace minweave {

// All legal simple paths from input terminal src to output terminal dst, as
// router-id sequences in lexicographic order, capped at `limit`. Parallel
// channels between the same router pair do not duplicate sequences.
inline std::vector<std::vector<int32_t>> enumerate_paths(const Network& net, int32_t src,
                                                         int32_t dst,
                                                         size_t limit = static_cast<size_t>(-1)) {
  if (src < 0 || src >= net.n_terminals || dst < 0 || dst >= net.n_terminals)
    throw std::invalid_argument("terminal index out of range");
  if (limit == 0) throw std::invalid_argument("limit must be at least 1");
  const int32_t first = net.input_terminals[static_cast<size_t>(src)].router;
  const int32_t last = net.output_terminals[static_cast<size_t>(dst)].router;

  std::vector<std::vector<int32_t>> paths;
  std::vector<int32_t> cur;
  std::vector<char> on_path(net.routers.size(), 0);

  // successors of a router: (next router, is_intra), deduplicated, ascending
  auto successors = [&net](int32_t r) {
    std::vector<std::pair<int32_t, bool>> next;
    for (int32_t cid : net.out_channel[static_cast<size_t>(r)]) {
      const Channel& c = net.channels[static_cast<size_t>(cid)];
      if (c.dst.is_terminal()) continue;
      next.emplace_back(c.dst.router, c.kind == ChannelKind::intra_stage);
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    return next;
  };

  auto dfs = [&](auto&& self, int32_t r, int32_t intra_left) -> bool {
    cur.push_back(r);
    on_path[static_cast<size_t>(r)] = 1;
    bool full = false;
    if (r == last) {
      paths.push_back(cur);
      full = paths.size() >= limit;
    } else {
      for (auto [nxt, intra] : successors(r)) {
        if (on_path[static_cast<size_t>(nxt)]) continue;
        if (intra) {
          if (intra_left == 0) continue;
          full = self(self, nxt, intra_left - 1);
        } else {
          full = self(self, nxt, net.intra_allowance(net.routers[static_cast<size_t>(nxt)].stage));
        }
        if (full) break;
      }
    }
    on_path[static_cast<size_t>(r)] = 0;
    cur.pop_back();
    return full;
  };
  dfs(dfs, first, net.intra_allowance(net.routers[static_cast<size_t>(first)].stage));
  return paths;
}

struct ValidationReport {
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};

// Checks the structural invariants of a Network plus full access (every
// input terminal reaches every output terminal along legal paths).
inline ValidationReport validate_network(const Network& net) {
  ValidationReport rep;
  auto fail = [&rep](std::string msg) { rep.problems.push_back(std::move(msg)); };
  const int32_t N = net.n_terminals;
  const auto nrouters = static_cast<int32_t>(net.routers.size());

  if (static_cast<int32_t>(net.input_terminals.size()) != N ||
      static_cast<int32_t>(net.output_terminals.size()) != N)
    fail("terminal binding count differs from n_terminals");
  if (net.merged_span.size() != net.stages.size()) fail("merged_span size mismatch");

  // router records consistent with stage lists
  {
    std::vector<char> seen(static_cast<size_t>(nrouters), 0);
    for (int32_t t = 0; t < net.stage_count(); ++t) {
      const auto& st = net.stages[static_cast<size_t>(t)];
      for (int32_t row = 0; row < static_cast<int32_t>(st.size()); ++row) {
        int32_t id = st[static_cast<size_t>(row)];
        if (id < 0 || id >= nrouters) {
          fail("stage list references unknown router");
          continue;
        }
        seen[static_cast<size_t>(id)] = 1;
        const Router& r = net.routers[static_cast<size_t>(id)];
        if (r.id != id || r.stage != t || r.row != row)
          fail("router " + std::to_string(id) + " stage/row fields inconsistent");
        if (r.n_in < 1 || r.n_out < 1)
          fail("router " + std::to_string(id) + " must have at least one port per side");
      }
    }
    for (int32_t id = 0; id < nrouters; ++id)
      if (!seen[static_cast<size_t>(id)]) fail("router " + std::to_string(id) + " not in any stage");
  }

  if (is_delta_family(net.kind)) {
    for (const Router& r : net.routers)
      if (r.n_in != net.radix || r.n_out != net.radix)
        fail("delta router " + std::to_string(r.id) + " is not radix x radix");
  }

  // every port attached to exactly one channel endpoint
  {
    std::vector<std::vector<int32_t>> in_hits(static_cast<size_t>(nrouters)),
        out_hits(static_cast<size_t>(nrouters));
    for (const Router& r : net.routers) {
      in_hits[static_cast<size_t>(r.id)].assign(static_cast<size_t>(r.n_in), 0);
      out_hits[static_cast<size_t>(r.id)].assign(static_cast<size_t>(r.n_out), 0);
    }
    auto check_ref = [&](const PortRef& p, Side want, std::vector<std::vector<int32_t>>& hits,
                         int32_t cid) {
      if (p.is_terminal()) {
        if (p.port < 0 || p.port >= N) fail("channel " + std::to_string(cid) + " terminal out of range");
        return;
      }
      if (p.side != want) {
        fail("channel " + std::to_string(cid) + " endpoint on wrong side");
        return;
      }
      if (p.router < 0 || p.router >= nrouters) {
        fail("channel " + std::to_string(cid) + " references unknown router");
        return;
      }
      auto& row = hits[static_cast<size_t>(p.router)];
      if (p.port < 0 || p.port >= static_cast<int32_t>(row.size())) {
        fail("channel " + std::to_string(cid) + " port index out of range");
        return;
      }
      row[static_cast<size_t>(p.port)]++;
    };
    for (const Channel& c : net.channels) {
      check_ref(c.src, Side::output, out_hits, c.id);
      check_ref(c.dst, Side::input, in_hits, c.id);
      if (c.kind == ChannelKind::terminal_in && !c.src.is_terminal())
        fail("terminal_in channel " + std::to_string(c.id) + " has non-terminal source");
      if (c.kind == ChannelKind::terminal_out && !c.dst.is_terminal())
        fail("terminal_out channel " + std::to_string(c.id) + " has non-terminal destination");
      if (c.kind == ChannelKind::intra_stage && !is_flattened_kind(net.kind))
        fail("intra_stage channel " + std::to_string(c.id) + " in unflattened network");
      if (c.kind == ChannelKind::intra_stage && !c.src.is_terminal() && !c.dst.is_terminal()) {
        if (net.routers[static_cast<size_t>(c.src.router)].stage !=
            net.routers[static_cast<size_t>(c.dst.router)].stage)
          fail("intra_stage channel " + std::to_string(c.id) + " crosses stages");
        if (c.src.router == c.dst.router)
          fail("intra_stage channel " + std::to_string(c.id) + " is a self loop");
      }
      if (c.kind == ChannelKind::inter_stage && !c.src.is_terminal() && !c.dst.is_terminal()) {
        if (net.routers[static_cast<size_t>(c.dst.router)].stage !=
            net.routers[static_cast<size_t>(c.src.router)].stage + 1)
          fail("inter_stage channel " + std::to_string(c.id) + " does not advance one stage");
      }
    }
    for (const Router& r : net.routers) {
      for (int32_t p = 0; p < r.n_in; ++p)
        if (in_hits[static_cast<size_t>(r.id)][static_cast<size_t>(p)] != 1)
          fail("router " + std::to_string(r.id) + " input port " + std::to_string(p) +
               " unattached or multiply attached");
      for (int32_t p = 0; p < r.n_out; ++p)
        if (out_hits[static_cast<size_t>(r.id)][static_cast<size_t>(p)] != 1)
          fail("router " + std::to_string(r.id) + " output port " + std::to_string(p) +
               " unattached or multiply attached");
    }
  }

  // terminal bindings match the terminal channels
  {
    std::vector<int32_t> in_seen(static_cast<size_t>(N), 0), out_seen(static_cast<size_t>(N), 0);
    for (const Channel& c : net.channels) {
      if (c.kind == ChannelKind::terminal_in && c.src.is_terminal()) {
        in_seen[static_cast<size_t>(c.src.port)]++;
        if (!(net.input_terminals[static_cast<size_t>(c.src.port)] == c.dst))
          fail("input terminal " + std::to_string(c.src.port) + " binding mismatch");
      }
      if (c.kind == ChannelKind::terminal_out && c.dst.is_terminal()) {
        out_seen[static_cast<size_t>(c.dst.port)]++;
        if (!(net.output_terminals[static_cast<size_t>(c.dst.port)] == c.src))
          fail("output terminal " + std::to_string(c.dst.port) + " binding mismatch");
      }
    }
    for (int32_t i = 0; i < N; ++i) {
      if (in_seen[static_cast<size_t>(i)] != 1)
        fail("input terminal " + std::to_string(i) + " has " +
             std::to_string(in_seen[static_cast<size_t>(i)]) + " channels");
      if (out_seen[static_cast<size_t>(i)] != 1)
        fail("output terminal " + std::to_string(i) + " has " +
             std::to_string(out_seen[static_cast<size_t>(i)]) + " channels");
    }
  }

  if (!rep.ok()) return rep;  // graph structure broken; skip reachability

  // full access along legal paths
  for (int32_t src = 0; src < N; ++src) {
    // BFS over (router, intra budget left) states
    std::vector<std::vector<char>> seen(net.routers.size());
    for (const Router& r : net.routers)
      seen[static_cast<size_t>(r.id)].assign(
          static_cast<size_t>(net.merged_span[static_cast<size_t>(r.stage)]), 0);
    std::vector<std::pair<int32_t, int32_t>> queue;
    auto push = [&](int32_t r, int32_t left) {
      if (!seen[static_cast<size_t>(r)][static_cast<size_t>(left)]) {
        seen[static_cast<size_t>(r)][static_cast<size_t>(left)] = 1;
        queue.emplace_back(r, left);
      }
    };
    int32_t first = net.input_terminals[static_cast<size_t>(src)].router;
    push(first, net.intra_allowance(net.routers[static_cast<size_t>(first)].stage));
    for (size_t head = 0; head < queue.size(); ++head) {
      auto [r, left] = queue[head];
      for (int32_t cid : net.out_channel[static_cast<size_t>(r)]) {
        const Channel& c = net.channels[static_cast<size_t>(cid)];
        if (c.dst.is_terminal()) continue;
        if (c.kind == ChannelKind::intra_stage) {
          if (left > 0) push(c.dst.router, left - 1);
        } else {
          push(c.dst.router, net.intra_allowance(net.routers[static_cast<size_t>(c.dst.router)].stage));
        }
      }
    }
    std::vector<char> reached(static_cast<size_t>(N), 0);
    for (int32_t d = 0; d < N; ++d) {
      int32_t lr = net.output_terminals[static_cast<size_t>(d)].router;
      for (char s : seen[static_cast<size_t>(lr)])
        if (s) {
          reached[static_cast<size_t>(d)] = 1;
          break;
        }
    }
    for (int32_t d = 0; d < N; ++d)
      if (!reached[static_cast<size_t>(d)])
        fail("no path from input " + std::to_string(src) + " to output " + std::to_string(d));
  }
  return rep;
}

}  // namespace minweave
