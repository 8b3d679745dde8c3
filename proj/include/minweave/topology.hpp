#pragma once

// Staged router/channel graphs for multistage interconnection networks.
// Builders for the classic delta family (Omega, Butterfly, Baseline,
// Generalized Cube), Benes and Clos networks. All builders are pure and
// produce canonical id numbering (stage-major routers, boundary-major
// channels), so identical inputs yield structurally identical networks.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace minweave {

enum class Side : uint8_t { input, output };

enum class ChannelKind : uint8_t { inter_stage, intra_stage, terminal_in, terminal_out };

enum class NetKind : uint8_t {
  omega,
  butterfly,
  baseline,
  generalized_cube,
  benes,
  clos,
  flattened,
  mf_grouped,
  mf_full,
};

inline const char* to_string(NetKind k) {
  switch (k) {
    case NetKind::omega: return "omega";
    case NetKind::butterfly: return "butterfly";
    case NetKind::baseline: return "baseline";
    case NetKind::generalized_cube: return "generalized_cube";
    case NetKind::benes: return "benes";
    case NetKind::clos: return "clos";
    case NetKind::flattened: return "flattened";
    case NetKind::mf_grouped: return "mf_grouped";
    case NetKind::mf_full: return "mf_full";
  }
  return "?";
}

inline bool is_delta_family(NetKind k) {
  return k == NetKind::omega || k == NetKind::butterfly || k == NetKind::baseline ||
         k == NetKind::generalized_cube;
}

inline bool is_flattened_kind(NetKind k) {
  return k == NetKind::flattened || k == NetKind::mf_grouped || k == NetKind::mf_full;
}

// PortRef with router == kTerminal denotes a terminal endpoint; port then
// holds the terminal index.
inline constexpr int32_t kTerminal = -1;

struct PortRef {
  int32_t router = kTerminal;
  Side side = Side::input;
  int32_t port = 0;

  bool is_terminal() const { return router == kTerminal; }
  friend bool operator==(const PortRef&, const PortRef&) = default;
};

struct Channel {
  int32_t id = 0;
  ChannelKind kind = ChannelKind::inter_stage;
  PortRef src;  // output side
  PortRef dst;  // input side
};

struct Router {
  int32_t id = 0;
  int32_t stage = 0;
  int32_t row = 0;
  int32_t n_in = 0;
  int32_t n_out = 0;
};

struct ClosParams {
  int32_t n = 4;   // inputs per first-stage switch
  int32_t m = 7;   // middle-stage switch count
  int32_t r = 8;   // first/last-stage switch count

  bool strict_sense_nonblocking() const { return m >= 2 * n - 1; }
};

struct Network {
  NetKind kind = NetKind::omega;
  int32_t n_terminals = 0;
  int32_t radix = 0;
  std::vector<std::vector<int32_t>> stages;  // router ids per stage
  std::vector<Router> routers;
  std::vector<Channel> channels;
  std::vector<PortRef> input_terminals;   // router input port fed by terminal i
  std::vector<PortRef> output_terminals;  // router output port feeding terminal i
  std::vector<int32_t> merged_span;       // original stages folded into each stage (1 = plain)

  // Port-to-channel maps, filled by finalize(): channel id attached to each
  // router port, or -1 while under construction.
  std::vector<std::vector<int32_t>> in_channel;
  std::vector<std::vector<int32_t>> out_channel;

  int32_t stage_count() const { return static_cast<int32_t>(stages.size()); }

  const Router& router_at(int32_t stage, int32_t row) const {
    return routers[static_cast<size_t>(stages[static_cast<size_t>(stage)][static_cast<size_t>(row)])];
  }

  // Maximum intra-stage hops a path may take inside the given stage: one per
  // merged stage boundary.
  int32_t intra_allowance(int32_t stage) const {
    return merged_span[static_cast<size_t>(stage)] - 1;
  }

  void finalize() {
    in_channel.assign(routers.size(), {});
    out_channel.assign(routers.size(), {});
    for (const auto& r : routers) {
      in_channel[static_cast<size_t>(r.id)].assign(static_cast<size_t>(r.n_in), -1);
      out_channel[static_cast<size_t>(r.id)].assign(static_cast<size_t>(r.n_out), -1);
    }
    for (const auto& c : channels) {
      if (!c.src.is_terminal()) {
        auto& slot = out_channel[static_cast<size_t>(c.src.router)][static_cast<size_t>(c.src.port)];
        if (slot != -1) throw std::logic_error("duplicate channel on output port");
        slot = c.id;
      }
      if (!c.dst.is_terminal()) {
        auto& slot = in_channel[static_cast<size_t>(c.dst.router)][static_cast<size_t>(c.dst.port)];
        if (slot != -1) throw std::logic_error("duplicate channel on input port");
        slot = c.id;
      }
    }
  }
};

// ---------------------------------------------------------------------------
// digit utilities

namespace detail {

inline int32_t ilog(int32_t value, int32_t base) {
  // exact logarithm; -1 if value is not a power of base
  if (value < 1 || base < 2) return -1;
  int32_t s = 0;
  int64_t v = 1;
  while (v < value) {
    v *= base;
    ++s;
  }
  return v == value ? s : -1;
}

// rotate the base-k digit string of w (kn = k^digits) left by one digit
inline int32_t rotate_left(int32_t w, int32_t k, int64_t kn) {
  int64_t msd = w / (kn / k);
  return static_cast<int32_t>((static_cast<int64_t>(w) * k) % kn + msd);
}

inline int32_t rotate_right(int32_t w, int32_t k, int64_t kn) {
  int64_t lsd = w % k;
  return static_cast<int32_t>(w / k + lsd * (kn / k));
}

inline int32_t digit_of(int32_t value, int32_t index, int32_t k) {
  // base-k digit at position `index`, 0 = least significant
  for (int32_t i = 0; i < index; ++i) value /= k;
  return value % k;
}

}  // namespace detail

// Index whose base-k digit string is i's rotated left by one digit: the
// classic k-ary perfect shuffle over N = k^s terminals.
inline int32_t perfect_shuffle(int32_t i, int32_t N, int32_t k) {
  int32_t s = detail::ilog(N, k);
  if (s < 1) throw std::invalid_argument("perfect_shuffle: N must be a power of radix");
  if (i < 0 || i >= N) throw std::invalid_argument("perfect_shuffle: index out of range");
  return detail::rotate_left(i, k, N);
}

// ---------------------------------------------------------------------------
// builders

namespace detail {

using WireMap = std::function<int32_t(int32_t)>;

// Assemble a staged network from boundary wire permutations. alpha[0] maps
// input terminal -> stage-0 input wire, alpha[t] (0 < t < s) maps stage-(t-1)
// output wire -> stage-t input wire, alpha[s] maps last output wire ->
// output terminal. Wire w attaches to router w/k, port w%k of its stage.
inline Network build_uniform(NetKind kind, int32_t N, int32_t k,
                             const std::vector<WireMap>& alpha) {
  const int32_t s = static_cast<int32_t>(alpha.size()) - 1;
  const int32_t rows = N / k;
  Network net;
  net.kind = kind;
  net.n_terminals = N;
  net.radix = k;
  net.merged_span.assign(static_cast<size_t>(s), 1);
  net.stages.resize(static_cast<size_t>(s));
  for (int32_t t = 0; t < s; ++t) {
    for (int32_t r = 0; r < rows; ++r) {
      int32_t id = t * rows + r;
      net.routers.push_back({id, t, r, k, k});
      net.stages[static_cast<size_t>(t)].push_back(id);
    }
  }
  auto rid = [rows](int32_t t, int32_t w, int32_t k_) { return t * rows + w / k_; };
  auto add = [&net](ChannelKind ck, PortRef src, PortRef dst) {
    net.channels.push_back({static_cast<int32_t>(net.channels.size()), ck, src, dst});
  };
  net.input_terminals.resize(static_cast<size_t>(N));
  net.output_terminals.resize(static_cast<size_t>(N));
  for (int32_t i = 0; i < N; ++i) {
    int32_t w = alpha[0](i);
    PortRef dst{rid(0, w, k), Side::input, w % k};
    add(ChannelKind::terminal_in, PortRef{kTerminal, Side::output, i}, dst);
    net.input_terminals[static_cast<size_t>(i)] = dst;
  }
  for (int32_t t = 1; t < s; ++t) {
    for (int32_t w = 0; w < N; ++w) {
      int32_t w2 = alpha[static_cast<size_t>(t)](w);
      add(ChannelKind::inter_stage, PortRef{rid(t - 1, w, k), Side::output, w % k},
          PortRef{rid(t, w2, k), Side::input, w2 % k});
    }
  }
  for (int32_t w = 0; w < N; ++w) {
    int32_t term = alpha[static_cast<size_t>(s)](w);
    PortRef src{rid(s - 1, w, k), Side::output, w % k};
    add(ChannelKind::terminal_out, src, PortRef{kTerminal, Side::input, term});
    net.output_terminals[static_cast<size_t>(term)] = src;
  }
  net.finalize();
  return net;
}

inline int32_t delta_stages(int32_t N, int32_t k) {
  if (k < 2) throw std::invalid_argument("radix must be at least 2");
  int32_t s = ilog(N, k);
  if (s < 1) throw std::invalid_argument("N must be a power of radix");
  return s;
}

// unshuffle (digit rotate right) within consecutive blocks of `block` wires
inline WireMap block_unshuffle(int32_t block, int32_t k) {
  return [block, k](int32_t w) {
    int32_t b = w / block, l = w % block;
    return b * block + rotate_right(l, k, block);
  };
}

inline WireMap block_shuffle(int32_t block, int32_t k) {
  return [block, k](int32_t w) {
    int32_t b = w / block, l = w % block;
    return b * block + rotate_left(l, k, block);
  };
}

inline WireMap identity_map() {
  return [](int32_t w) { return w; };
}

}  // namespace detail

// Omega: a perfect shuffle precedes every stage, including the terminal
// attachment; outputs connect straight through.
inline Network build_omega(int32_t N, int32_t k = 2) {
  int32_t s = detail::delta_stages(N, k);
  std::vector<detail::WireMap> alpha;
  for (int32_t t = 0; t < s; ++t) alpha.push_back(detail::block_shuffle(N, k));
  alpha.push_back(detail::identity_map());
  return detail::build_uniform(NetKind::omega, N, k, alpha);
}

// Butterfly: shuffle-wired delta network in Patel's style -- terminals attach
// in order and every internal boundary is a full k-ary shuffle.
inline Network build_butterfly(int32_t N, int32_t k = 2) {
  int32_t s = detail::delta_stages(N, k);
  std::vector<detail::WireMap> alpha;
  alpha.push_back(detail::identity_map());
  for (int32_t t = 1; t < s; ++t) alpha.push_back(detail::block_shuffle(N, k));
  alpha.push_back(detail::identity_map());
  return detail::build_uniform(NetKind::butterfly, N, k, alpha);
}

// Baseline: recursive halving; boundary t unshuffles within blocks of
// N / k^(t-1) wires, splitting each block into k sub-baselines.
inline Network build_baseline(int32_t N, int32_t k = 2) {
  int32_t s = detail::delta_stages(N, k);
  std::vector<detail::WireMap> alpha;
  alpha.push_back(detail::identity_map());
  int32_t block = N;
  for (int32_t t = 1; t < s; ++t) {
    alpha.push_back(detail::block_unshuffle(block, k));
    block /= k;
  }
  alpha.push_back(detail::identity_map());
  return detail::build_uniform(NetKind::baseline, N, k, alpha);
}

// Generalized Cube: stage t exchanges sub-cube digit s-1-t (most significant
// first). Each stage pairs the k wires that agree on every digit but its own.
inline Network build_generalized_cube(int32_t N, int32_t k = 2) {
  int32_t s = detail::delta_stages(N, k);
  // pack: wire label -> (row, port) for the stage handling digit j; the row
  // is the label with digit j removed (remaining digits packed LSD-first),
  // the port is digit j itself. unpack is the inverse, used on output sides.
  auto pack = [k, s](int32_t j) {
    return detail::WireMap([k, s, j](int32_t w) {
      int32_t row = 0, mul = 1;
      for (int32_t d = 0; d < s; ++d) {
        if (d == j) continue;
        row += detail::digit_of(w, d, k) * mul;
        mul *= k;
      }
      return row * k + detail::digit_of(w, j, k);
    });
  };
  auto unpack = [k, s](int32_t j) {
    return detail::WireMap([k, s, j](int32_t wire) {
      int32_t rv = wire / k, pj = wire % k;
      int32_t w = 0, mul = 1;
      for (int32_t d = 0; d < s; ++d) {
        int32_t digit;
        if (d == j) {
          digit = pj;
        } else {
          digit = rv % k;
          rv /= k;
        }
        w += digit * mul;
        mul *= k;
      }
      return w;
    });
  };
  std::vector<detail::WireMap> alpha;
  alpha.push_back(pack(s - 1));
  for (int32_t t = 1; t < s; ++t) {
    auto up = unpack(s - t);
    auto pk = pack(s - 1 - t);
    alpha.push_back([up, pk](int32_t w) { return pk(up(w)); });
  }
  alpha.push_back(unpack(0));
  return detail::build_uniform(NetKind::generalized_cube, N, k, alpha);
}

// Benes: baseline back-to-back with its mirror image, sharing the middle
// stage; 2*log2(N)-1 stages of N/2 2x2 routers.
inline Network build_benes(int32_t N) {
  int32_t n = detail::ilog(N, 2);
  if (n < 1) throw std::invalid_argument("N must be a power of 2");
  int32_t s = 2 * n - 1;
  std::vector<detail::WireMap> alpha(static_cast<size_t>(s) + 1, detail::identity_map());
  int32_t block = N;
  for (int32_t t = 1; t < n; ++t) {
    alpha[static_cast<size_t>(t)] = detail::block_unshuffle(block, 2);
    alpha[static_cast<size_t>(s - t)] = detail::block_shuffle(block, 2);
    block /= 2;
  }
  return detail::build_uniform(NetKind::benes, N, 2, alpha);
}

// Clos(n, m, r): r n-by-m ingress switches, m r-by-r middle switches,
// r m-by-n egress switches, complete bipartite wiring between stages.
inline Network build_clos(const ClosParams& p) {
  if (p.n < 1 || p.m < 1 || p.r < 1) throw std::invalid_argument("clos parameters must be positive");
  const int32_t N = p.n * p.r;
  Network net;
  net.kind = NetKind::clos;
  net.n_terminals = N;
  net.radix = p.n;
  net.merged_span.assign(3, 1);
  net.stages.resize(3);
  auto add_router = [&net](int32_t stage, int32_t row, int32_t n_in, int32_t n_out) {
    int32_t id = static_cast<int32_t>(net.routers.size());
    net.routers.push_back({id, stage, row, n_in, n_out});
    net.stages[static_cast<size_t>(stage)].push_back(id);
    return id;
  };
  for (int32_t j = 0; j < p.r; ++j) add_router(0, j, p.n, p.m);
  for (int32_t b = 0; b < p.m; ++b) add_router(1, b, p.r, p.r);
  for (int32_t j = 0; j < p.r; ++j) add_router(2, j, p.m, p.n);
  auto ingress = [&](int32_t j) { return net.stages[0][static_cast<size_t>(j)]; };
  auto middle = [&](int32_t b) { return net.stages[1][static_cast<size_t>(b)]; };
  auto egress = [&](int32_t j) { return net.stages[2][static_cast<size_t>(j)]; };
  auto add = [&net](ChannelKind ck, PortRef src, PortRef dst) {
    net.channels.push_back({static_cast<int32_t>(net.channels.size()), ck, src, dst});
  };
  net.input_terminals.resize(static_cast<size_t>(N));
  net.output_terminals.resize(static_cast<size_t>(N));
  for (int32_t i = 0; i < N; ++i) {
    PortRef dst{ingress(i / p.n), Side::input, i % p.n};
    add(ChannelKind::terminal_in, PortRef{kTerminal, Side::output, i}, dst);
    net.input_terminals[static_cast<size_t>(i)] = dst;
  }
  for (int32_t j = 0; j < p.r; ++j)
    for (int32_t b = 0; b < p.m; ++b)
      add(ChannelKind::inter_stage, PortRef{ingress(j), Side::output, b},
          PortRef{middle(b), Side::input, j});
  for (int32_t b = 0; b < p.m; ++b)
    for (int32_t j = 0; j < p.r; ++j)
      add(ChannelKind::inter_stage, PortRef{middle(b), Side::output, j},
          PortRef{egress(j), Side::input, b});
  for (int32_t i = 0; i < N; ++i) {
    PortRef src{egress(i / p.n), Side::output, i % p.n};
    add(ChannelKind::terminal_out, src, PortRef{kTerminal, Side::input, i});
    net.output_terminals[static_cast<size_t>(i)] = src;
  }
  net.finalize();
  return net;
}

}  // namespace minweave
