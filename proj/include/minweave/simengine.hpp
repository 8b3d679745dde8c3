#pragma once

// Deterministic cycle-level wormhole switching. Each cycle runs four phases:
// injection (source queues feed their terminal channels), allocation (head
// flits at buffer fronts acquire output-port reservations), traversal (every
// flit with a reservation advances one channel), ejection (flits crossing
// terminal-out channels leave and are logged). Decisions inside a phase read
// the phase-entry state only, so results are independent of iteration order.
//
// One cycle per hop, single-flit channel transfer, round-robin arbitration
// per output port, selection among free candidates by least-occupied
// downstream buffer then lowest port index. Source queues are unbounded;
// latency counts from generation time.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "minweave/routing.hpp"
#include "minweave/topology.hpp"
#include "minweave/workload.hpp"

namespace minweave {

struct SimConfig {
  int32_t buffer_depth = 2;   // flits per router input port
  int64_t warmup = 10000;     // cycles discarded from stats
  int64_t measure = 50000;    // measurement window in cycles
  bool drain = false;         // run until all injected messages eject (trace mode)
  int64_t max_cycles = 10'000'000;  // hard cap for drain runs
  bool monitors = false;      // per-cycle invariant checks
};

struct MsgRecord {
  int64_t id = 0;
  int32_t src = 0, dst = 0, n_flits = 0;
  int64_t t_gen = 0;
  int64_t t_inject = -1;  // head entered the network (end-of-cycle time)
  int64_t t_eject = -1;   // tail left the network (end-of-cycle time)
  int32_t hops = 0;       // routers traversed by the head
};

struct RunResult {
  std::vector<MsgRecord> log;
  int64_t cycles = 0;
  int64_t flits_injected = 0;
  int64_t flits_ejected = 0;
  int64_t alloc_attempts = 0;
  int64_t alloc_blocked = 0;
  int64_t in_flight_flits = 0;  // still buffered when the run ended
  std::vector<std::string> violations;
};

class WormholeSim {
 public:
  WormholeSim(const Network& net, const RoutingTable& table, std::vector<TraceRecord> workload,
              SimConfig cfg)
      : net_(net), table_(table), records_(std::move(workload)), cfg_(cfg) {
    if (cfg_.buffer_depth < 1) throw std::invalid_argument("buffer_depth must be at least 1");
    buffers_.resize(net_.routers.size());
    out_res_.resize(net_.routers.size());
    rr_.resize(net_.routers.size());
    for (const Router& r : net_.routers) {
      buffers_[static_cast<size_t>(r.id)].resize(static_cast<size_t>(r.n_in));
      out_res_[static_cast<size_t>(r.id)].assign(static_cast<size_t>(r.n_out), Reservation{});
      rr_[static_cast<size_t>(r.id)].assign(static_cast<size_t>(r.n_out), 0);
    }
    queues_.resize(static_cast<size_t>(net_.n_terminals));
  }

  int64_t now() const { return now_; }
  int64_t in_network_flits() const { return in_network_; }
  bool idle() const {
    return next_record_ >= records_.size() && in_network_ == 0 && queued_msgs_ == 0;
  }

  void step() {
    inject();
    allocate();
    traverse();
    if (cfg_.monitors) check_invariants();
    ++now_;
  }

  RunResult run() {
    if (cfg_.drain) {
      while (!idle()) {
        step();
        if (now_ > cfg_.max_cycles) {
          violation("drain exceeded max_cycles with " + std::to_string(in_network_) +
                    " flits in flight");
          break;
        }
      }
    } else {
      const int64_t budget = cfg_.warmup + cfg_.measure;
      while (now_ < budget) step();
    }
    return finish();
  }

  RunResult finish() {
    RunResult res;
    res.log = msgs_;
    res.cycles = now_;
    res.flits_injected = flits_injected_;
    res.flits_ejected = flits_ejected_;
    res.alloc_attempts = alloc_attempts_;
    res.alloc_blocked = alloc_blocked_;
    res.in_flight_flits = in_network_;
    res.violations = violations_;
    return res;
  }

 private:
  struct Flit {
    int64_t msg = -1;
    int32_t idx = 0;
    int64_t arrived = -1;  // cycle it entered this buffer
  };
  struct Reservation {
    int64_t msg = -1;
    int32_t in_port = -1;
  };
  struct MsgState {
    int32_t emitted = 0;         // flits that left the source queue
    int32_t head_router = -1;    // router currently holding the head flit
    int32_t granted_port = -1;   // output port reserved at head_router, -1 if none
  };

  const Network& net_;
  const RoutingTable& table_;
  std::vector<TraceRecord> records_;
  SimConfig cfg_;

  int64_t now_ = 0;
  size_t next_record_ = 0;
  std::vector<MsgRecord> msgs_;
  std::vector<MsgState> state_;
  std::vector<std::deque<int64_t>> queues_;  // pending message ids per input terminal
  int64_t queued_msgs_ = 0;
  std::vector<std::vector<std::deque<Flit>>> buffers_;     // [router][in_port]
  std::vector<std::vector<Reservation>> out_res_;          // [router][out_port]
  std::vector<std::vector<int32_t>> rr_;                   // round-robin pointers
  int64_t in_network_ = 0;
  int64_t flits_injected_ = 0, flits_ejected_ = 0;
  int64_t alloc_attempts_ = 0, alloc_blocked_ = 0;
  int64_t last_progress_ = 0;
  std::vector<std::string> violations_;

  void violation(std::string msg) {
    if (violations_.size() < 32) violations_.push_back(std::move(msg));
  }

  void inject() {
    while (next_record_ < records_.size() && records_[next_record_].cycle <= now_) {
      const TraceRecord& r = records_[next_record_++];
      int64_t id = static_cast<int64_t>(msgs_.size());
      msgs_.push_back({id, r.src, r.dst, r.n_flits, r.cycle, -1, -1, 0});
      state_.push_back({});
      queues_[static_cast<size_t>(r.src)].push_back(id);
      ++queued_msgs_;
    }
    for (int32_t term = 0; term < net_.n_terminals; ++term) {
      auto& q = queues_[static_cast<size_t>(term)];
      if (q.empty()) continue;
      int64_t id = q.front();
      MsgRecord& m = msgs_[static_cast<size_t>(id)];
      MsgState& st = state_[static_cast<size_t>(id)];
      const PortRef& in = net_.input_terminals[static_cast<size_t>(term)];
      auto& buf = buffers_[static_cast<size_t>(in.router)][static_cast<size_t>(in.port)];
      if (static_cast<int32_t>(buf.size()) >= cfg_.buffer_depth) continue;
      buf.push_back({id, st.emitted, now_});
      if (st.emitted == 0) {
        m.t_inject = now_ + 1;
        m.hops = 1;
        st.head_router = in.router;
      }
      ++st.emitted;
      ++flits_injected_;
      ++in_network_;
      last_progress_ = now_;
      if (st.emitted == m.n_flits) {
        q.pop_front();
        --queued_msgs_;
      }
    }
  }

  void allocate() {
    // Gather requests against the phase-entry reservation/occupancy state,
    // then commit one grant per output port by round-robin.
    struct Request {
      int64_t msg;
      int32_t in_port;
    };
    std::vector<std::pair<std::pair<int32_t, int32_t>, Request>> requests;
    for (const Router& r : net_.routers) {
      for (int32_t ip = 0; ip < r.n_in; ++ip) {
        auto& buf = buffers_[static_cast<size_t>(r.id)][static_cast<size_t>(ip)];
        if (buf.empty() || buf.front().idx != 0) continue;
        int64_t id = buf.front().msg;
        MsgState& st = state_[static_cast<size_t>(id)];
        if (st.head_router != r.id || st.granted_port != -1) continue;
        ++alloc_attempts_;
        const auto& cands =
            table_.candidates(r.id, msgs_[static_cast<size_t>(id)].dst);
        int32_t best_port = -1;
        int32_t best_occ = INT32_MAX;
        for (int32_t p : cands) {
          if (out_res_[static_cast<size_t>(r.id)][static_cast<size_t>(p)].msg != -1) continue;
          int32_t occ = downstream_occupancy(r.id, p);
          if (occ < 0) continue;  // downstream full
          if (occ < best_occ) {
            best_occ = occ;
            best_port = p;
          }
        }
        if (best_port == -1) {
          ++alloc_blocked_;
          continue;
        }
        requests.push_back({{r.id, best_port}, {id, ip}});
      }
    }
    // commit per output port
    std::stable_sort(requests.begin(), requests.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    size_t i = 0;
    while (i < requests.size()) {
      size_t j = i;
      auto key = requests[i].first;
      while (j < requests.size() && requests[j].first == key) ++j;
      int32_t router = key.first, port = key.second;
      int32_t ptr = rr_[static_cast<size_t>(router)][static_cast<size_t>(port)];
      int32_t n_in = net_.routers[static_cast<size_t>(router)].n_in;
      size_t win = i;
      int32_t best = INT32_MAX;
      for (size_t q = i; q < j; ++q) {
        int32_t delta = (requests[q].second.in_port - ptr + n_in) % n_in;
        if (delta < best) {
          best = delta;
          win = q;
        }
      }
      for (size_t q = i; q < j; ++q)
        if (q != win) ++alloc_blocked_;
      const Request& w = requests[win].second;
      out_res_[static_cast<size_t>(router)][static_cast<size_t>(port)] = {w.msg, w.in_port};
      state_[static_cast<size_t>(w.msg)].granted_port = port;
      rr_[static_cast<size_t>(router)][static_cast<size_t>(port)] =
          (w.in_port + 1) % n_in;
      i = j;
    }
  }

  // occupancy of the buffer fed by (router, out_port), or -1 if full;
  // terminal-out channels always have room
  int32_t downstream_occupancy(int32_t router, int32_t port) const {
    int32_t cid = net_.out_channel[static_cast<size_t>(router)][static_cast<size_t>(port)];
    const Channel& c = net_.channels[static_cast<size_t>(cid)];
    if (c.dst.is_terminal()) return 0;
    const auto& buf = buffers_[static_cast<size_t>(c.dst.router)][static_cast<size_t>(c.dst.port)];
    int32_t occ = static_cast<int32_t>(buf.size());
    return occ >= cfg_.buffer_depth ? -1 : occ;
  }

  void traverse() {
    // snapshot downstream occupancies so simultaneous moves cannot cascade
    std::vector<std::vector<int32_t>> occ(buffers_.size());
    for (size_t r = 0; r < buffers_.size(); ++r) {
      occ[r].resize(buffers_[r].size());
      for (size_t p = 0; p < buffers_[r].size(); ++p)
        occ[r][p] = static_cast<int32_t>(buffers_[r][p].size());
    }
    for (const Router& r : net_.routers) {
      for (int32_t op = 0; op < r.n_out; ++op) {
        Reservation& res = out_res_[static_cast<size_t>(r.id)][static_cast<size_t>(op)];
        if (res.msg == -1) continue;
        auto& buf = buffers_[static_cast<size_t>(r.id)][static_cast<size_t>(res.in_port)];
        if (buf.empty() || buf.front().msg != res.msg) continue;  // flit not here yet
        Flit f = buf.front();
        if (f.arrived == now_) continue;  // one channel per cycle
        int32_t cid = net_.out_channel[static_cast<size_t>(r.id)][static_cast<size_t>(op)];
        const Channel& c = net_.channels[static_cast<size_t>(cid)];
        MsgRecord& m = msgs_[static_cast<size_t>(f.msg)];
        MsgState& st = state_[static_cast<size_t>(f.msg)];
        if (c.dst.is_terminal()) {
          buf.pop_front();
          ++flits_ejected_;
          --in_network_;
          last_progress_ = now_;
          if (f.idx == m.n_flits - 1) {
            m.t_eject = now_ + 1;
            res = Reservation{};
          }
          if (cfg_.monitors && c.dst.port != m.dst)
            violation("flit ejected at wrong terminal");
        } else {
          if (occ[static_cast<size_t>(c.dst.router)][static_cast<size_t>(c.dst.port)] >=
              cfg_.buffer_depth)
            continue;
          buf.pop_front();
          buffers_[static_cast<size_t>(c.dst.router)][static_cast<size_t>(c.dst.port)].push_back(
              {f.msg, f.idx, now_});
          last_progress_ = now_;
          if (f.idx == 0) {
            st.head_router = c.dst.router;
            st.granted_port = -1;
            ++m.hops;
          }
          if (f.idx == m.n_flits - 1) res = Reservation{};
        }
      }
    }
    if (cfg_.monitors && in_network_ > 0 && now_ - last_progress_ > 10000)
      violation("no flit movement for 10000 cycles with traffic in flight");
  }

  void check_invariants() {
    int64_t buffered = 0;
    for (size_t r = 0; r < buffers_.size(); ++r)
      for (size_t p = 0; p < buffers_[r].size(); ++p) {
        const auto& buf = buffers_[r][p];
        buffered += static_cast<int64_t>(buf.size());
        if (static_cast<int32_t>(buf.size()) > cfg_.buffer_depth)
          violation("buffer overflow at router " + std::to_string(r));
      }
    if (buffered != in_network_) violation("flit conservation mismatch");
    if (flits_injected_ != flits_ejected_ + in_network_)
      violation("injected != ejected + in-flight");
    for (size_t r = 0; r < out_res_.size(); ++r)
      for (const Reservation& res : out_res_[r])
        if (res.msg != -1) {
          const MsgRecord& m = msgs_[static_cast<size_t>(res.msg)];
          if (m.t_eject != -1) violation("reservation held by ejected message");
        }
  }
};

inline RunResult run_sim(const Network& net, const RoutingTable& table,
                         std::vector<TraceRecord> workload, const SimConfig& cfg) {
  WormholeSim sim(net, table, std::move(workload), cfg);
  return sim.run();
}

}  // namespace minweave
