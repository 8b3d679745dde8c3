#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "minweave/workload.hpp"

using namespace minweave;

namespace {

WorkloadSpec uniform_spec(double rate, uint64_t seed = 7, int flits = 2) {
  WorkloadSpec s;
  s.kind = WorkloadKind::uniform;
  s.rate = rate;
  s.seed = seed;
  s.msg_flits = flits;
  return s;
}

double offered_load(const std::vector<TraceRecord>& recs, int N, int64_t horizon) {
  int64_t flits = 0;
  for (const auto& r : recs) flits += r.n_flits;
  return static_cast<double>(flits) / static_cast<double>(horizon) / N;
}

}  // namespace

TEST_CASE("generation is deterministic per seed", "[workload]") {
  auto a = generate_trace(uniform_spec(0.3, 42), 32, 2000);
  auto b = generate_trace(uniform_spec(0.3, 42), 32, 2000);
  CHECK(a == b);
  auto c = generate_trace(uniform_spec(0.3, 43), 32, 2000);
  CHECK(a != c);
}

TEST_CASE("streams are cycle-sorted with in-range nodes", "[workload]") {
  for (WorkloadKind kind : {WorkloadKind::uniform, WorkloadKind::exponential,
                            WorkloadKind::normal, WorkloadKind::hotspot}) {
    WorkloadSpec s = uniform_spec(0.4, 11);
    s.kind = kind;
    if (kind == WorkloadKind::hotspot) s = waternsq_proxy(32, 0.4, 11);
    auto recs = generate_trace(s, 32, 3000);
    REQUIRE_FALSE(recs.empty());
    for (size_t i = 0; i < recs.size(); ++i) {
      CHECK(recs[i].src >= 0);
      CHECK(recs[i].src < 32);
      CHECK(recs[i].dst >= 0);
      CHECK(recs[i].dst < 32);
      CHECK(recs[i].n_flits == 2);
      if (i) CHECK(recs[i - 1].cycle <= recs[i].cycle);
    }
  }
}

TEST_CASE("zero rate generates nothing", "[workload]") {
  for (WorkloadKind kind : {WorkloadKind::uniform, WorkloadKind::exponential, WorkloadKind::normal}) {
    WorkloadSpec s = uniform_spec(0.0);
    s.kind = kind;
    CHECK(generate_trace(s, 32, 1000).empty());
  }
  CHECK_THROWS_AS(generate_trace(uniform_spec(1.5), 32, 10), std::invalid_argument);
  CHECK_THROWS_AS(generate_trace(uniform_spec(-0.1), 32, 10), std::invalid_argument);
}

TEST_CASE("uniform offered load tracks the configured rate", "[workload]") {
  auto full = generate_trace(uniform_spec(1.0, 5), 32, 1000);
  CHECK(offered_load(full, 32, 1000) == Catch::Approx(1.0).margin(0.05));
  auto light = generate_trace(uniform_spec(0.2, 5), 32, 100000);
  CHECK(offered_load(light, 32, 100000) == Catch::Approx(0.2).epsilon(0.05));
}

TEST_CASE("uniform destinations pass a chi-square test", "[workload]") {
  const int N = 32;
  auto recs = generate_trace(uniform_spec(0.2, 123), N, 100000);
  auto h = histogram(recs, N);
  double expected = static_cast<double>(h.messages) / N;
  double chi2 = 0;
  for (int64_t c : h.dst_counts) chi2 += (c - expected) * (c - expected) / expected;
  // P(chi2_31 <= 52.1914) = 0.99
  CHECK(chi2 < 52.1914);
}

TEST_CASE("exponential gaps have the configured mean", "[workload]") {
  WorkloadSpec s = uniform_spec(0.1, 9);
  s.kind = WorkloadKind::exponential;
  const int64_t horizon = 100000;
  auto recs = generate_trace(s, 32, horizon);
  // mean inter-arrival per node should be msg_flits/rate = 20 cycles
  std::vector<std::vector<int64_t>> per_node(32);
  for (const auto& r : recs) per_node[static_cast<size_t>(r.src)].push_back(r.cycle);
  double gap_sum = 0;
  int64_t gaps = 0;
  for (auto& v : per_node) {
    for (size_t i = 1; i < v.size(); ++i) {
      gap_sum += static_cast<double>(v[i] - v[i - 1]);
      ++gaps;
    }
  }
  double mean = gap_sum / static_cast<double>(gaps);
  CHECK(mean == Catch::Approx(20.0).epsilon(0.05));
  // node-frequency histogram is flat: every node within 3 sigma of its share
  auto h = histogram(recs, 32);
  double expected = static_cast<double>(h.messages) / 32.0;
  for (int64_t c : h.src_counts)
    CHECK(std::abs(static_cast<double>(c) - expected) < 4.0 * std::sqrt(expected));
}

TEST_CASE("normal destinations cluster around the source", "[workload]") {
  WorkloadSpec s = uniform_spec(0.3, 17);
  s.kind = WorkloadKind::normal;
  s.sigma = 2.0;
  const int N = 32;
  auto recs = generate_trace(s, N, 100000);
  int64_t near = 0, total = 0;
  for (const auto& r : recs) {
    if (r.src != 10) continue;
    ++total;
    int fwd = ((r.dst - r.src) % N + N) % N;
    int dist = std::min(fwd, N - fwd);
    near += dist <= 6;  // 3 sigma
  }
  REQUIRE(total > 1000);
  CHECK(static_cast<double>(near) / static_cast<double>(total) >= 0.95);

  SECTION("sigma on the order of N is near-uniform") {
    s.sigma = 32.0;
    auto wide = generate_trace(s, N, 100000);
    auto h = histogram(wide, N);
    double tv = 0;
    for (int64_t c : h.dst_counts)
      tv += std::abs(static_cast<double>(c) / h.messages - 1.0 / N) / 2.0;
    CHECK(tv < 0.1);
  }
  SECTION("sigma must be positive") {
    s.sigma = 0.0;
    CHECK_THROWS_AS(generate_trace(s, N, 10), std::invalid_argument);
  }
}

TEST_CASE("hotspot presets reproduce the hot nodes", "[workload]") {
  SECTION("fft proxy: sources 15/24, destinations 0-3") {
    auto recs = generate_trace(fft_proxy(32, 0.3, 21), 32, 10000);
    auto h = histogram(recs, 32);
    int64_t best_src = 0, best_dst = 0;
    int src_arg = -1, dst_arg = -1;
    for (int i = 0; i < 32; ++i) {
      if (h.src_counts[static_cast<size_t>(i)] > best_src) {
        best_src = h.src_counts[static_cast<size_t>(i)];
        src_arg = i;
      }
      if (h.dst_counts[static_cast<size_t>(i)] > best_dst) {
        best_dst = h.dst_counts[static_cast<size_t>(i)];
        dst_arg = i;
      }
    }
    CHECK((src_arg == 15 || src_arg == 24));
    CHECK(dst_arg <= 3);
  }
  SECTION("waternsq proxy: 16 and 23 on both sides") {
    auto recs = generate_trace(waternsq_proxy(32, 0.3, 22), 32, 10000);
    auto h = histogram(recs, 32);
    auto argmax = [](const std::vector<int64_t>& v) {
      return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
    };
    int sa = argmax(h.src_counts), da = argmax(h.dst_counts);
    CHECK((sa == 16 || sa == 23));
    CHECK((da == 16 || da == 23));
  }
  SECTION("all-equal weights match uniform statistically") {
    WorkloadSpec s = uniform_spec(0.3, 30);
    s.kind = WorkloadKind::hotspot;
    s.src_weights.assign(32, 1.0);
    s.dst_weights.assign(32, 1.0);
    auto recs = generate_trace(s, 32, 100000);
    auto h = histogram(recs, 32);
    double expected = static_cast<double>(h.messages) / 32.0;
    double chi2 = 0;
    for (int64_t c : h.dst_counts) chi2 += (c - expected) * (c - expected) / expected;
    CHECK(chi2 < 52.1914);
  }
  SECTION("weights must be positive and cover all nodes") {
    WorkloadSpec s = uniform_spec(0.3);
    s.kind = WorkloadKind::hotspot;
    s.src_weights.assign(32, 1.0);
    s.dst_weights.assign(32, 1.0);
    s.dst_weights[4] = 0.0;
    CHECK_THROWS_AS(generate_trace(s, 32, 10), std::invalid_argument);
    s.dst_weights[4] = 1.0;
    s.src_weights.pop_back();
    CHECK_THROWS_AS(generate_trace(s, 32, 10), std::invalid_argument);
  }
}

TEST_CASE("trace files parse, validate and round-trip", "[workload]") {
  SECTION("single line") {
    std::istringstream in("0,15,3,2\n");
    auto t = parse_trace(in, 32);
    REQUIRE(t.records.size() == 1);
    CHECK(t.records[0] == TraceRecord{0, 15, 3, 2});
    CHECK(t.warnings.empty());
  }
  SECTION("comments and blanks are ignored") {
    std::istringstream in("# header\n\n  5, 1, 2, 4  # trailing comment\n");
    auto t = parse_trace(in, 32);
    REQUIRE(t.records.size() == 1);
    CHECK(t.records[0] == TraceRecord{5, 1, 2, 4});
  }
  SECTION("empty file gives an empty stream") {
    std::istringstream in("");
    CHECK(parse_trace(in, 32).records.empty());
  }
  SECTION("parse errors carry line numbers") {
    std::istringstream in("0,1,2,2\nbogus line\n");
    try {
      parse_trace(in, 32);
      FAIL("expected TraceParseError");
    } catch (const TraceParseError& e) {
      CHECK(e.line == 2);
    }
  }
  SECTION("out-of-range nodes are rejected") {
    std::istringstream in("0,32,2,2\n");
    CHECK_THROWS_AS(parse_trace(in, 32), TraceParseError);
    std::istringstream neg("0,1,2,0\n");
    CHECK_THROWS_AS(parse_trace(neg, 32), TraceParseError);
  }
  SECTION("unsorted input is sorted with a warning") {
    std::istringstream in("9,1,2,2\n4,3,4,2\n");
    auto t = parse_trace(in, 32);
    REQUIRE(t.records.size() == 2);
    CHECK(t.records[0].cycle == 4);
    REQUIRE(t.warnings.size() == 1);
  }
  SECTION("save/load round-trip") {
    auto recs = generate_trace(uniform_spec(0.2, 77), 32, 500);
    std::ostringstream out;
    save_trace(out, recs);
    std::istringstream in(out.str());
    CHECK(parse_trace(in, 32).records == recs);
  }
}

TEST_CASE("histogram counts per node and sums to the message count", "[workload]") {
  std::vector<TraceRecord> recs{{0, 5, 7, 2}};
  auto h = histogram(recs, 8);
  CHECK(h.src_counts[5] == 1);
  CHECK(h.dst_counts[7] == 1);
  CHECK(h.messages == 1);

  auto many = generate_trace(uniform_spec(0.5, 3), 16, 5000);
  auto hm = histogram(many, 16);
  int64_t ssum = 0, dsum = 0;
  for (int64_t c : hm.src_counts) ssum += c;
  for (int64_t c : hm.dst_counts) dsum += c;
  CHECK(ssum == hm.messages);
  CHECK(dsum == hm.messages);
  CHECK(hm.messages == static_cast<int64_t>(many.size()));

  std::ostringstream os;
  write_histogram_csv(os, h);
  CHECK(os.str().rfind("node,src_count,dst_count\n0,0,0\n", 0) == 0);
}
