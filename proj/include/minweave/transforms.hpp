#pragma once

// Row-merging transforms: the full flatten (every stage folded into one) and
// the meta-flatten variant that keeps the first and last stages intact and
// folds only the intermediate stages, either all together or in consecutive
// pairs. Cross-row channels inside a merged group survive as intra-stage
// channels (parallel channels kept); same-row channels become internal wiring
// and are elided.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "minweave/topology.hpp"

namespace minweave {

enum class MergeMethod : uint8_t { grouped_pairs, all_intermediate };

namespace detail {

// Merge consecutive stage groups row-wise. `groups` must partition
// [0, stage_count) into consecutive runs.
inline Network merge_stages(const Network& net, const std::vector<std::vector<int32_t>>& groups,
                            NetKind kind) {
  const int32_t rows = static_cast<int32_t>(net.stages.front().size());
  for (const auto& st : net.stages)
    if (static_cast<int32_t>(st.size()) != rows)
      throw std::invalid_argument("merge requires equal router counts per stage");

  const int32_t new_stages = static_cast<int32_t>(groups.size());
  std::vector<int32_t> stage_of_old(static_cast<size_t>(net.stage_count()), -1);
  for (int32_t ns = 0; ns < new_stages; ++ns)
    for (int32_t os : groups[static_cast<size_t>(ns)]) stage_of_old[static_cast<size_t>(os)] = ns;

  Network out;
  out.kind = kind;
  out.n_terminals = net.n_terminals;
  out.radix = net.radix;
  out.stages.resize(static_cast<size_t>(new_stages));
  for (int32_t ns = 0; ns < new_stages; ++ns) {
    out.merged_span.push_back(static_cast<int32_t>(groups[static_cast<size_t>(ns)].size()));
    for (int32_t r = 0; r < rows; ++r) {
      int32_t id = ns * rows + r;
      out.routers.push_back({id, ns, r, 0, 0});
      out.stages[static_cast<size_t>(ns)].push_back(id);
    }
  }

  auto map_router = [&](int32_t old_id) {
    const Router& r = net.routers[static_cast<size_t>(old_id)];
    return stage_of_old[static_cast<size_t>(r.stage)] * rows + r.row;
  };

  // Walk original channels in id order; assign new port numbers in order of
  // appearance so edge-stage routers keep their original port layout.
  out.input_terminals.resize(static_cast<size_t>(net.n_terminals));
  out.output_terminals.resize(static_cast<size_t>(net.n_terminals));
  for (const Channel& c : net.channels) {
    PortRef src = c.src, dst = c.dst;
    ChannelKind ck = c.kind;
    if (!src.is_terminal() && !dst.is_terminal()) {
      int32_t a = map_router(src.router), b = map_router(dst.router);
      if (a == b) continue;  // merged internally
      src.router = a;
      dst.router = b;
      ck = (out.routers[static_cast<size_t>(a)].stage == out.routers[static_cast<size_t>(b)].stage)
               ? ChannelKind::intra_stage
               : ChannelKind::inter_stage;
    } else if (src.is_terminal()) {
      dst.router = map_router(dst.router);
    } else {
      src.router = map_router(src.router);
    }
    if (!src.is_terminal()) src.port = out.routers[static_cast<size_t>(src.router)].n_out++;
    if (!dst.is_terminal()) dst.port = out.routers[static_cast<size_t>(dst.router)].n_in++;
    int32_t id = static_cast<int32_t>(out.channels.size());
    out.channels.push_back({id, ck, src, dst});
    if (ck == ChannelKind::terminal_in) out.input_terminals[static_cast<size_t>(src.port)] = dst;
    if (ck == ChannelKind::terminal_out) out.output_terminals[static_cast<size_t>(dst.port)] = src;
  }
  out.finalize();
  return out;
}

}  // namespace detail

// Fold every stage into one: a single stage of N/k high-radix routers, each
// keeping its row's terminal attachments, with all cross-row inter-stage
// channels turned into intra-stage channels.
inline Network full_flatten(const Network& net) {
  if (is_flattened_kind(net.kind)) throw std::invalid_argument("network is already flattened");
  if (net.stage_count() < 2) throw std::invalid_argument("nothing to merge in a 1-stage network");
  std::vector<int32_t> all;
  for (int32_t t = 0; t < net.stage_count(); ++t) all.push_back(t);
  return detail::merge_stages(net, {all}, NetKind::flattened);
}

// Keep the first and last stages, fold the intermediate ones row-wise:
// all together (all_intermediate) or in consecutive pairs (grouped_pairs,
// which requires an even number of intermediate stages).
inline Network meta_flatten(const Network& net, MergeMethod method) {
  if (is_flattened_kind(net.kind)) throw std::invalid_argument("network is already flattened");
  const int32_t s = net.stage_count();
  if (s < 3) throw std::invalid_argument("meta_flatten requires at least 3 stages");
  const int32_t mid = s - 2;
  std::vector<std::vector<int32_t>> groups;
  groups.push_back({0});
  if (method == MergeMethod::all_intermediate) {
    std::vector<int32_t> g;
    for (int32_t t = 1; t <= mid; ++t) g.push_back(t);
    groups.push_back(g);
  } else {
    if (mid % 2 != 0)
      throw std::invalid_argument("grouped_pairs requires an even intermediate stage count");
    for (int32_t t = 1; t <= mid; t += 2) groups.push_back({t, t + 1});
  }
  groups.push_back({s - 1});
  return detail::merge_stages(
      net, groups, method == MergeMethod::all_intermediate ? NetKind::mf_full : NetKind::mf_grouped);
}

}  // namespace minweave
