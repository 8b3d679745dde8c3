#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "minweave/export.hpp"
#include "minweave/paths.hpp"
#include "minweave/topology.hpp"
#include "minweave/transforms.hpp"

using namespace minweave;

namespace {

// bit-string oracle for the shuffle: rotate the textual binary form
int shuffle_oracle(int i, int N, int k) {
  int s = 0;
  for (long v = 1; v < N; v *= k) ++s;
  std::vector<int> digits(static_cast<size_t>(s));
  int v = i;
  for (int d = s - 1; d >= 0; --d) {
    digits[static_cast<size_t>(d)] = v % k;
    v /= k;
  }
  std::rotate(digits.begin(), digits.begin() + 1, digits.end());
  int out = 0;
  for (int d : digits) out = out * k + d;
  return out;
}

std::set<std::pair<int, int>> inter_stage_pairs(const Network& net) {
  std::set<std::pair<int, int>> edges;
  for (const Channel& c : net.channels)
    if (c.kind == ChannelKind::inter_stage) edges.insert({c.src.router, c.dst.router});
  return edges;
}

int64_t count_kind(const Network& net, ChannelKind k) {
  int64_t n = 0;
  for (const Channel& c : net.channels) n += c.kind == k;
  return n;
}

}  // namespace

TEST_CASE("perfect shuffle rotates the digit string", "[topology]") {
  CHECK(perfect_shuffle(0, 8, 2) == 0);
  CHECK(perfect_shuffle(1, 8, 2) == 2);  // 001 -> 010
  CHECK(perfect_shuffle(5, 8, 2) == 3);  // 101 -> 011
  for (int N : {8, 16, 32})
    for (int i = 0; i < N; ++i) CHECK(perfect_shuffle(i, N, 2) == shuffle_oracle(i, N, 2));
  for (int i = 0; i < 27; ++i) CHECK(perfect_shuffle(i, 27, 3) == shuffle_oracle(i, 27, 3));
  CHECK_THROWS_AS(perfect_shuffle(0, 12, 2), std::invalid_argument);
  CHECK_THROWS_AS(perfect_shuffle(8, 8, 2), std::invalid_argument);
}

TEST_CASE("delta builders produce s stages of N/k routers", "[topology]") {
  auto bf = build_butterfly(16, 2);
  CHECK(bf.stage_count() == 4);
  for (const auto& st : bf.stages) CHECK(st.size() == 8);
  for (const Router& r : bf.routers) {
    CHECK(r.n_in == 2);
    CHECK(r.n_out == 2);
  }

  auto om = build_omega(32, 2);
  CHECK(om.stage_count() == 5);
  for (const auto& st : om.stages) CHECK(st.size() == 16);
  CHECK(om.routers.size() == 80);

  auto deg = build_baseline(2, 2);
  CHECK(deg.stage_count() == 1);
  CHECK(deg.routers.size() == 1);

  auto q = build_omega(16, 4);
  CHECK(q.stage_count() == 2);
  for (const Router& r : q.routers) CHECK(r.n_in == 4);

  CHECK_THROWS_AS(build_omega(31, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_butterfly(12, 2), std::invalid_argument);
}

TEST_CASE("builders validate and are deterministic", "[topology]") {
  for (auto make : {build_omega, build_butterfly, build_baseline, build_generalized_cube}) {
    Network a = make(16, 2), b = make(16, 2);
    CHECK(validate_network(a).ok());
    REQUIRE(a.channels.size() == b.channels.size());
    for (size_t i = 0; i < a.channels.size(); ++i) {
      CHECK(a.channels[i].src == b.channels[i].src);
      CHECK(a.channels[i].dst == b.channels[i].dst);
    }
  }
  CHECK(validate_network(build_benes(32)).ok());
  CHECK(validate_network(build_clos({2, 8, 16})).ok());
  CHECK(validate_network(build_omega(27, 3)).ok());
}

TEST_CASE("the four delta wirings differ pairwise", "[topology]") {
  std::vector<Network> nets;
  nets.push_back(build_omega(16, 2));
  nets.push_back(build_butterfly(16, 2));
  nets.push_back(build_baseline(16, 2));
  nets.push_back(build_generalized_cube(16, 2));
  for (size_t i = 0; i < nets.size(); ++i)
    for (size_t j = i + 1; j < nets.size(); ++j) {
      bool same_terms = nets[i].input_terminals == nets[j].input_terminals;
      bool same_edges = inter_stage_pairs(nets[i]) == inter_stage_pairs(nets[j]);
      CHECK_FALSE((same_terms && same_edges));
    }
}

TEST_CASE("benes shape", "[topology]") {
  auto b32 = build_benes(32);
  CHECK(b32.stage_count() == 9);
  CHECK(b32.routers.size() == 144);
  auto b2 = build_benes(2);
  CHECK(b2.stage_count() == 1);
  CHECK(b2.routers.size() == 1);
  auto b8 = build_benes(8);
  CHECK(b8.stage_count() == 5);
  for (const auto& st : b8.stages) CHECK(st.size() == 4);
  CHECK_THROWS_AS(build_benes(12), std::invalid_argument);
}

TEST_CASE("clos parameters and structure", "[topology]") {
  ClosParams strict{4, 7, 8};
  CHECK(strict.strict_sense_nonblocking());
  ClosParams loose{4, 3, 8};
  CHECK_FALSE(loose.strict_sense_nonblocking());
  CHECK(validate_network(build_clos(loose)).ok());

  auto c = build_clos({4, 7, 8});
  REQUIRE(c.stage_count() == 3);
  CHECK(c.stages[0].size() == 8);
  CHECK(c.stages[1].size() == 7);
  CHECK(c.stages[2].size() == 8);
  CHECK(c.routers[static_cast<size_t>(c.stages[1][0])].n_in == 8);

  CHECK_THROWS_AS(build_clos({0, 1, 1}), std::invalid_argument);
}

TEST_CASE("clos(2,2,2) is the benes(4) wiring", "[topology]") {
  auto clos = build_clos({2, 2, 2});
  auto benes = build_benes(4);
  REQUIRE(clos.routers.size() == benes.routers.size());
  for (size_t i = 0; i < clos.routers.size(); ++i) {
    CHECK(clos.routers[i].stage == benes.routers[i].stage);
    CHECK(clos.routers[i].n_in == benes.routers[i].n_in);
  }
  // identical channel endpoint sets, kinds aside
  auto key = [](const Network& n) {
    std::set<std::tuple<int, int, int, int, int, int>> s;
    for (const Channel& c : n.channels)
      s.insert({c.src.router, c.src.port, c.dst.router, c.dst.port,
                c.src.is_terminal() ? 1 : 0, c.dst.is_terminal() ? 1 : 0});
    return s;
  };
  CHECK(key(clos) == key(benes));
}

TEST_CASE("full flatten", "[transform]") {
  auto flat16 = full_flatten(build_butterfly(16, 2));
  CHECK(flat16.kind == NetKind::flattened);
  CHECK(flat16.stage_count() == 1);
  CHECK(flat16.stages[0].size() == 8);
  CHECK(flat16.merged_span[0] == 4);
  CHECK(validate_network(flat16).ok());

  auto flat4 = full_flatten(build_butterfly(4, 2));
  CHECK(flat4.routers.size() == 2);
  CHECK(count_kind(flat4, ChannelKind::intra_stage) == 2);  // one each direction
  CHECK(validate_network(flat4).ok());

  CHECK_THROWS_AS(full_flatten(build_baseline(2, 2)), std::invalid_argument);
  CHECK_THROWS_AS(full_flatten(full_flatten(build_omega(8, 2))), std::invalid_argument);
}

TEST_CASE("meta flatten structure", "[transform]") {
  for (auto make : {build_butterfly, build_baseline}) {
    auto mf = meta_flatten(make(16, 2), MergeMethod::all_intermediate);
    CHECK(mf.kind == NetKind::mf_full);
    REQUIRE(mf.stage_count() == 3);
    CHECK(mf.merged_span == std::vector<int32_t>{1, 2, 1});
    CHECK(validate_network(mf).ok());
    // edge routers stay k x k; merged routers have strictly higher degree
    int edge_max = 0, mid_min = 1 << 20;
    for (const Router& r : mf.routers) {
      int deg = r.n_in + r.n_out;
      if (r.stage == 1)
        mid_min = std::min(mid_min, deg);
      else
        edge_max = std::max(edge_max, deg);
    }
    CHECK(edge_max == 4);
    CHECK(mid_min > edge_max);
  }

  auto mf32 = meta_flatten(build_omega(32, 2), MergeMethod::all_intermediate);
  CHECK(mf32.stage_count() == 3);
  CHECK(mf32.merged_span == std::vector<int32_t>{1, 3, 1});
  CHECK(validate_network(mf32).ok());

  // grouped pairs: 6-stage input -> 2 + 2 merged stages
  auto mf64 = meta_flatten(build_baseline(64, 2), MergeMethod::grouped_pairs);
  CHECK(mf64.kind == NetKind::mf_grouped);
  CHECK(mf64.stage_count() == 4);
  CHECK(mf64.merged_span == std::vector<int32_t>{1, 2, 2, 1});
  CHECK(validate_network(mf64).ok());

  CHECK_THROWS_AS(meta_flatten(build_omega(4, 2), MergeMethod::all_intermediate),
                  std::invalid_argument);
  CHECK_THROWS_AS(meta_flatten(build_omega(32, 2), MergeMethod::grouped_pairs),
                  std::invalid_argument);
  CHECK_THROWS_AS(meta_flatten(meta_flatten(build_omega(32, 2), MergeMethod::all_intermediate),
                               MergeMethod::all_intermediate),
                  std::invalid_argument);
}

TEST_CASE("flattening preserves terminal ports", "[transform]") {
  auto net = build_baseline(32, 2);
  auto mf = meta_flatten(net, MergeMethod::all_intermediate);
  CHECK(count_kind(mf, ChannelKind::terminal_in) == 32);
  CHECK(count_kind(mf, ChannelKind::terminal_out) == 32);
  auto flat = full_flatten(net);
  CHECK(count_kind(flat, ChannelKind::terminal_in) == 32);
  CHECK(count_kind(flat, ChannelKind::terminal_out) == 32);
}

TEST_CASE("validator reports broken structure", "[topology]") {
  CHECK(validate_network(build_omega(32, 2)).ok());
  CHECK(validate_network(meta_flatten(build_butterfly(16, 2), MergeMethod::all_intermediate)).ok());

  auto bad = build_omega(8, 2);
  bad.channels.pop_back();  // dangling output port + orphan terminal
  auto rep = validate_network(bad);
  REQUIRE_FALSE(rep.ok());
  bool mentions_port = false;
  for (const auto& p : rep.problems)
    if (p.find("unattached") != std::string::npos) mentions_port = true;
  CHECK(mentions_port);
}

TEST_CASE("topology export matches golden fixtures", "[export]") {
  auto net = build_butterfly(4, 2);
  std::ostringstream dot;
  write_dot(dot, net);
  std::string json = to_json(net).dump(2) + "\n";

  auto slurp = [](const std::string& p) {
    std::ifstream in(p);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  CHECK(json == slurp(std::string(MINWEAVE_FIXTURE_DIR) + "/butterfly_4_2.json"));
  CHECK(dot.str() == slurp(std::string(MINWEAVE_FIXTURE_DIR) + "/butterfly_4_2.dot"));
}
