#pragma once

// Synthetic traffic generation (uniform, exponential inter-arrival, spatial
// normal, weighted hotspot) and the plain-text trace format. Generation is
// deterministic for a given spec + seed and independent of platform: all
// random mappings are pinned formulas over mt19937_64 output.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace minweave {

struct TraceRecord {
  int64_t cycle = 0;
  int32_t src = 0;
  int32_t dst = 0;
  int32_t n_flits = 1;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

enum class WorkloadKind : uint8_t { uniform, exponential, normal, hotspot, trace };

struct WorkloadSpec {
  WorkloadKind kind = WorkloadKind::uniform;
  double rate = 0.1;      // offered flits per node per cycle (synthetic kinds)
  int32_t msg_flits = 2;  // flits per message
  uint64_t seed = 1;
  std::optional<double> sigma;           // normal: stddev of dst offset, default N/8
  std::vector<double> src_weights;       // hotspot
  std::vector<double> dst_weights;       // hotspot
  std::string trace_path;                // trace
};

// Hotspot presets mirroring the trace-driven node-frequency shapes: hot nodes
// carry `factor` times the baseline weight.
inline WorkloadSpec fft_proxy(int32_t N, double rate, uint64_t seed, double factor = 4.0) {
  if (N < 25) throw std::invalid_argument("fft_proxy preset needs at least 25 nodes");
  WorkloadSpec spec;
  spec.kind = WorkloadKind::hotspot;
  spec.rate = rate;
  spec.seed = seed;
  spec.src_weights.assign(static_cast<size_t>(N), 1.0);
  spec.dst_weights.assign(static_cast<size_t>(N), 1.0);
  spec.src_weights[15] = factor;
  spec.src_weights[24] = factor;
  for (int i = 0; i <= 3; ++i) spec.dst_weights[static_cast<size_t>(i)] = factor;
  return spec;
}

inline WorkloadSpec waternsq_proxy(int32_t N, double rate, uint64_t seed, double factor = 4.0) {
  if (N < 24) throw std::invalid_argument("waternsq_proxy preset needs at least 24 nodes");
  WorkloadSpec spec;
  spec.kind = WorkloadKind::hotspot;
  spec.rate = rate;
  spec.seed = seed;
  spec.src_weights.assign(static_cast<size_t>(N), 1.0);
  spec.dst_weights.assign(static_cast<size_t>(N), 1.0);
  spec.src_weights[16] = spec.dst_weights[16] = factor;
  spec.src_weights[23] = spec.dst_weights[23] = factor;
  return spec;
}

inline WorkloadSpec waterspatial_proxy(int32_t N, double rate, uint64_t seed, double factor = 4.0,
                                       std::vector<int32_t> hot_sources = {8, 27},
                                       std::vector<int32_t> hot_dests = {8, 27}) {
  WorkloadSpec spec;
  spec.kind = WorkloadKind::hotspot;
  spec.rate = rate;
  spec.seed = seed;
  spec.src_weights.assign(static_cast<size_t>(N), 1.0);
  spec.dst_weights.assign(static_cast<size_t>(N), 1.0);
  for (int32_t n : hot_sources) spec.src_weights.at(static_cast<size_t>(n)) = factor;
  for (int32_t n : hot_dests) spec.dst_weights.at(static_cast<size_t>(n)) = factor;
  return spec;
}

namespace detail {

// Platform-pinned draws over the standard mt19937_64 stream.
struct Rng {
  std::mt19937_64 gen;
  explicit Rng(uint64_t seed) : gen(seed) {}

  double uniform01() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

  uint64_t below(uint64_t n) {  // unbiased via rejection
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v = gen();
    while (v >= limit) v = gen();
    return v % n;
  }

  double gaussian(double mean, double sd) {  // Box-Muller, cosine branch only
    double u1 = uniform01(), u2 = uniform01();
    if (u1 < 1e-300) u1 = 1e-300;
    return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }
};

inline uint64_t mix_seed(uint64_t a, uint64_t b) {  // splitmix64 finalizer
  uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline size_t weighted_pick(const std::vector<double>& cumulative, double total, Rng& rng) {
  double x = rng.uniform01() * total;
  size_t lo = 0, hi = cumulative.size() - 1;
  while (lo < hi) {
    size_t mid = (lo + hi) / 2;
    if (cumulative[mid] > x)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

}  // namespace detail

inline void validate_workload(const WorkloadSpec& spec, int32_t N) {
  if (spec.msg_flits < 1) throw std::invalid_argument("msg_flits must be at least 1");
  if (spec.kind != WorkloadKind::trace) {
    if (spec.rate < 0.0 || spec.rate > 1.0)
      throw std::invalid_argument("rate must lie in [0, 1] flits/node/cycle");
  }
  if (spec.kind == WorkloadKind::normal && spec.sigma && *spec.sigma <= 0.0)
    throw std::invalid_argument("sigma must be positive");
  if (spec.kind == WorkloadKind::hotspot) {
    if (spec.src_weights.size() != static_cast<size_t>(N) ||
        spec.dst_weights.size() != static_cast<size_t>(N))
      throw std::invalid_argument("hotspot weight maps must cover all nodes");
    for (double w : spec.src_weights)
      if (!(w > 0.0)) throw std::invalid_argument("hotspot weights must be positive");
    for (double w : spec.dst_weights)
      if (!(w > 0.0)) throw std::invalid_argument("hotspot weights must be positive");
  }
}

// Generate the synthetic stream for cycles [0, horizon), sorted by cycle and
// then by source. Byte-identical for identical (spec, N, horizon).
inline std::vector<TraceRecord> generate_trace(const WorkloadSpec& spec, int32_t N, int64_t horizon) {
  validate_workload(spec, N);
  std::vector<TraceRecord> out;
  const double p = spec.rate / static_cast<double>(spec.msg_flits);  // message starts per slot-cycle
  switch (spec.kind) {
    case WorkloadKind::uniform: {
      detail::Rng rng(spec.seed);
      for (int64_t c = 0; c < horizon; ++c)
        for (int32_t node = 0; node < N; ++node)
          if (rng.uniform01() < p) {
            int32_t dst = static_cast<int32_t>(rng.below(static_cast<uint64_t>(N)));
            out.push_back({c, node, dst, spec.msg_flits});
          }
      break;
    }
    case WorkloadKind::exponential: {
      // geometric gaps with mean msg_flits/rate, independent per node
      for (int32_t node = 0; node < N; ++node) {
        detail::Rng rng(detail::mix_seed(spec.seed, static_cast<uint64_t>(node)));
        if (p <= 0.0) continue;
        const double log1mp = std::log1p(-p);
        double t = 0.0;
        while (true) {
          double u = rng.uniform01();
          if (u < 1e-300) u = 1e-300;
          t += 1.0 + std::floor(std::log(u) / log1mp);
          if (t >= static_cast<double>(horizon)) break;
          int32_t dst = static_cast<int32_t>(rng.below(static_cast<uint64_t>(N)));
          out.push_back({static_cast<int64_t>(t), node, dst, spec.msg_flits});
        }
      }
      std::stable_sort(out.begin(), out.end(), [](const TraceRecord& a, const TraceRecord& b) {
        return a.cycle != b.cycle ? a.cycle < b.cycle : a.src < b.src;
      });
      break;
    }
    case WorkloadKind::normal: {
      detail::Rng rng(spec.seed);
      const double sd = spec.sigma ? *spec.sigma : static_cast<double>(N) / 8.0;
      for (int64_t c = 0; c < horizon; ++c)
        for (int32_t node = 0; node < N; ++node)
          if (rng.uniform01() < p) {
            int64_t raw = std::llround(rng.gaussian(static_cast<double>(node), sd));
            int32_t dst = static_cast<int32_t>(((raw % N) + N) % N);
            out.push_back({c, node, dst, spec.msg_flits});
          }
      break;
    }
    case WorkloadKind::hotspot: {
      detail::Rng rng(spec.seed);
      std::vector<double> src_cum, dst_cum;
      double src_total = 0.0, dst_total = 0.0;
      for (double w : spec.src_weights) src_cum.push_back(src_total += w);
      for (double w : spec.dst_weights) dst_cum.push_back(dst_total += w);
      for (int64_t c = 0; c < horizon; ++c)
        for (int32_t slot = 0; slot < N; ++slot)
          if (rng.uniform01() < p) {
            int32_t src = static_cast<int32_t>(detail::weighted_pick(src_cum, src_total, rng));
            int32_t dst = static_cast<int32_t>(detail::weighted_pick(dst_cum, dst_total, rng));
            out.push_back({c, src, dst, spec.msg_flits});
          }
      break;
    }
    case WorkloadKind::trace:
      throw std::invalid_argument("trace workloads are loaded, not generated");
  }
  return out;
}

// ---------------------------------------------------------------------------
// trace file format: one record per line, "cycle,src,dst,n_flits";
// '#' starts a comment, blank lines ignored.

struct TraceParseError : std::runtime_error {
  int line = 0;
  TraceParseError(const std::string& msg, int line_)
      : std::runtime_error("trace line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

struct LoadedTrace {
  std::vector<TraceRecord> records;
  std::vector<std::string> warnings;
};

inline LoadedTrace parse_trace(std::istream& in, int32_t N) {
  LoadedTrace out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    size_t e = line.find_last_not_of(" \t\r");
    std::string body = line.substr(b, e - b + 1);
    std::array<int64_t, 4> fields{};
    size_t pos = 0;
    for (int f = 0; f < 4; ++f) {
      size_t comma = body.find(',', pos);
      std::string tok = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      try {
        size_t used = 0;
        fields[static_cast<size_t>(f)] = std::stoll(tok, &used);
        while (used < tok.size() && (tok[used] == ' ' || tok[used] == '\t')) ++used;
        if (used != tok.size()) throw std::invalid_argument("trailing junk");
      } catch (const std::exception&) {
        throw TraceParseError("expected 'cycle,src,dst,n_flits', bad field '" + tok + "'", lineno);
      }
      if (f < 3) {
        if (comma == std::string::npos)
          throw TraceParseError("expected 4 comma-separated fields", lineno);
        pos = comma + 1;
      } else if (comma != std::string::npos) {
        throw TraceParseError("expected exactly 4 fields", lineno);
      }
    }
    if (fields[0] < 0) throw TraceParseError("cycle must be non-negative", lineno);
    if (fields[1] < 0 || fields[1] >= N) throw TraceParseError("src out of range", lineno);
    if (fields[2] < 0 || fields[2] >= N) throw TraceParseError("dst out of range", lineno);
    if (fields[3] < 1) throw TraceParseError("n_flits must be at least 1", lineno);
    out.records.push_back({fields[0], static_cast<int32_t>(fields[1]),
                           static_cast<int32_t>(fields[2]), static_cast<int32_t>(fields[3])});
  }
  bool sorted = std::is_sorted(out.records.begin(), out.records.end(),
                               [](const TraceRecord& a, const TraceRecord& b) { return a.cycle < b.cycle; });
  if (!sorted) {
    std::stable_sort(out.records.begin(), out.records.end(),
                     [](const TraceRecord& a, const TraceRecord& b) { return a.cycle < b.cycle; });
    out.warnings.push_back("trace records were not sorted by cycle; sorted on load");
  }
  return out;
}

inline LoadedTrace load_trace(const std::string& path, int32_t N) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);
  return parse_trace(in, N);
}

inline void save_trace(std::ostream& os, const std::vector<TraceRecord>& records) {
  os << "# cycle,src,dst,n_flits\n";
  for (const TraceRecord& r : records)
    os << r.cycle << ',' << r.src << ',' << r.dst << ',' << r.n_flits << '\n';
}

inline void save_trace(const std::string& path, const std::vector<TraceRecord>& records) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write trace file: " + path);
  save_trace(os, records);
}

// ---------------------------------------------------------------------------

struct Histogram {
  std::vector<int64_t> src_counts;
  std::vector<int64_t> dst_counts;
  int64_t messages = 0;
};

inline Histogram histogram(const std::vector<TraceRecord>& records, int32_t N) {
  Histogram h;
  h.src_counts.assign(static_cast<size_t>(N), 0);
  h.dst_counts.assign(static_cast<size_t>(N), 0);
  for (const TraceRecord& r : records) {
    h.src_counts.at(static_cast<size_t>(r.src))++;
    h.dst_counts.at(static_cast<size_t>(r.dst))++;
    h.messages++;
  }
  return h;
}

inline void write_histogram_csv(std::ostream& os, const Histogram& h) {
  os << "node,src_count,dst_count\n";
  for (size_t i = 0; i < h.src_counts.size(); ++i)
    os << i << ',' << h.src_counts[i] << ',' << h.dst_counts[i] << '\n';
}

}  // namespace minweave
