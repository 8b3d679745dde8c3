#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "minweave/paths.hpp"
#include "minweave/topology.hpp"
#include "minweave/transforms.hpp"

using namespace minweave;

namespace {

// Independent brute-force oracle: depth-first search straight over the raw
// channel list, no use of the library's successor helpers or routing code.
// Paths are stage-monotone with at most merged_span-1 intra hops per stage.
void oracle_dfs(const Network& net, int32_t router, int32_t last, int32_t intra_left,
                std::set<int32_t>& visited, std::vector<int32_t>& cur,
                std::set<std::vector<int32_t>>& out) {
  if (router == last) {
    out.insert(cur);
    return;
  }
  for (const Channel& c : net.channels) {
    if (c.src.is_terminal() || c.dst.is_terminal()) continue;
    if (c.src.router != router) continue;
    int32_t nxt = c.dst.router;
    if (visited.count(nxt)) continue;
    int32_t left;
    if (c.kind == ChannelKind::intra_stage) {
      if (intra_left == 0) continue;
      left = intra_left - 1;
    } else {
      left = net.merged_span[static_cast<size_t>(
                 net.routers[static_cast<size_t>(nxt)].stage)] - 1;
    }
    visited.insert(nxt);
    cur.push_back(nxt);
    oracle_dfs(net, nxt, last, left, visited, cur, out);
    cur.pop_back();
    visited.erase(nxt);
  }
}

std::set<std::vector<int32_t>> oracle_paths(const Network& net, int32_t src, int32_t dst) {
  std::set<std::vector<int32_t>> out;
  int32_t first = net.input_terminals[static_cast<size_t>(src)].router;
  int32_t last = net.output_terminals[static_cast<size_t>(dst)].router;
  std::set<int32_t> visited{first};
  std::vector<int32_t> cur{first};
  oracle_dfs(net, first, last,
             net.merged_span[static_cast<size_t>(
                 net.routers[static_cast<size_t>(first)].stage)] - 1,
             visited, cur, out);
  return out;
}

}  // namespace

TEST_CASE("banyan networks have exactly one path per pair", "[paths]") {
  for (auto make : {build_omega, build_butterfly, build_baseline, build_generalized_cube}) {
    auto net = make(16, 2);
    for (int s = 0; s < 16; ++s)
      for (int d = 0; d < 16; ++d) {
        auto paths = enumerate_paths(net, s, d);
        REQUIRE(paths.size() == 1);
        CHECK(paths[0].size() == 4);  // one router per stage
      }
  }
}

TEST_CASE("enumerate_paths agrees with the brute-force oracle", "[paths]") {
  std::vector<Network> nets;
  nets.push_back(build_omega(8, 2));
  nets.push_back(build_benes(8));
  nets.push_back(build_clos({2, 3, 4}));
  nets.push_back(meta_flatten(build_butterfly(16, 2), MergeMethod::all_intermediate));
  nets.push_back(meta_flatten(build_baseline(16, 2), MergeMethod::all_intermediate));
  nets.push_back(full_flatten(build_butterfly(8, 2)));
  for (const Network& net : nets) {
    for (int s = 0; s < net.n_terminals; ++s)
      for (int d = 0; d < net.n_terminals; ++d) {
        auto got = enumerate_paths(net, s, d);
        std::set<std::vector<int32_t>> got_set(got.begin(), got.end());
        REQUIRE(got_set.size() == got.size());  // no duplicates
        CHECK(got_set == oracle_paths(net, s, d));
      }
  }
}

TEST_CASE("paths come out in lexicographic order and respect the limit", "[paths]") {
  auto net = build_benes(8);
  auto paths = enumerate_paths(net, 3, 5);
  REQUIRE(paths.size() == 4);
  for (size_t i = 1; i < paths.size(); ++i) CHECK(paths[i - 1] < paths[i]);
  auto capped = enumerate_paths(net, 3, 5, 2);
  REQUIRE(capped.size() == 2);
  CHECK(capped[0] == paths[0]);
  CHECK(capped[1] == paths[1]);
  CHECK_THROWS_AS(enumerate_paths(net, 0, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_paths(net, 0, 8), std::invalid_argument);
}

TEST_CASE("benes path count is 2^(n-1) per pair", "[paths]") {
  for (int N : {4, 8, 16}) {
    auto net = build_benes(N);
    size_t expect = static_cast<size_t>(N) / 2;  // 2^(log2(N)-1)
    for (int s = 0; s < N; ++s)
      for (int d = 0; d < N; ++d) CHECK(enumerate_paths(net, s, d).size() == expect);
  }
}

TEST_CASE("clos offers one path per middle switch", "[paths]") {
  auto net = build_clos({4, 7, 8});
  for (int s = 0; s < 32; s += 5)
    for (int d = 0; d < 32; d += 3) CHECK(enumerate_paths(net, s, d).size() == 7);
}

TEST_CASE("meta-flattening adds path diversity", "[paths]") {
  for (auto make : {build_butterfly, build_baseline}) {
    auto parent = make(16, 2);
    auto mf = meta_flatten(parent, MergeMethod::all_intermediate);
    int diverse = 0;
    for (int s = 0; s < 16; ++s)
      for (int d = 0; d < 16; ++d) {
        size_t before = enumerate_paths(parent, s, d).size();
        size_t after = enumerate_paths(mf, s, d).size();
        CHECK(after >= 1);  // reachability preserved
        CHECK(before == 1);
        if (after >= 2) ++diverse;
      }
    CHECK(diverse > 0);
  }
}

TEST_CASE("full access on every built network", "[paths]") {
  std::vector<Network> nets;
  nets.push_back(build_omega(32, 2));
  nets.push_back(build_butterfly(32, 2));
  nets.push_back(build_baseline(32, 2));
  nets.push_back(build_generalized_cube(32, 2));
  nets.push_back(build_benes(32));
  nets.push_back(build_clos({2, 8, 16}));
  nets.push_back(meta_flatten(build_butterfly(32, 2), MergeMethod::all_intermediate));
  nets.push_back(meta_flatten(build_baseline(32, 2), MergeMethod::all_intermediate));
  for (const Network& net : nets) {
    CHECK(validate_network(net).ok());  // includes exhaustive reachability
    for (int s = 0; s < net.n_terminals; s += 7)
      for (int d = 0; d < net.n_terminals; d += 5)
        CHECK_FALSE(enumerate_paths(net, s, d, 1).empty());
  }
}

TEST_CASE("meta-flatten stage counts follow the group arrangement", "[paths]") {
  CHECK(meta_flatten(build_butterfly(16, 2), MergeMethod::all_intermediate).stage_count() == 3);
  CHECK(meta_flatten(build_omega(32, 2), MergeMethod::all_intermediate).stage_count() == 3);
  CHECK(meta_flatten(build_butterfly(16, 2), MergeMethod::grouped_pairs).stage_count() == 3);
  CHECK(meta_flatten(build_butterfly(64, 2), MergeMethod::grouped_pairs).stage_count() == 4);
}
