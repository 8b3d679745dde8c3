#pragma once

// Topology serialization: a JSON document listing routers, channels and
// terminal bindings, and a DOT graph for visualization. Key order and
// element order are fixed so exports are byte-stable.

#include <fstream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "minweave/simengine.hpp"
#include "minweave/topology.hpp"

namespace minweave {

using ordered_json = nlohmann::ordered_json;

inline ordered_json port_json(const PortRef& p) {
  if (p.is_terminal()) return ordered_json{{"terminal", p.port}};
  return ordered_json{{"router", p.router}, {"side", p.side == Side::input ? "in" : "out"},
                      {"port", p.port}};
}

inline const char* to_string(ChannelKind k) {
  switch (k) {
    case ChannelKind::inter_stage: return "inter_stage";
    case ChannelKind::intra_stage: return "intra_stage";
    case ChannelKind::terminal_in: return "terminal_in";
    case ChannelKind::terminal_out: return "terminal_out";
  }
  return "?";
}

inline ordered_json to_json(const Network& net) {
  ordered_json j;
  j["kind"] = to_string(net.kind);
  j["n_terminals"] = net.n_terminals;
  j["radix"] = net.radix;
  j["stages"] = net.stages;
  j["merged_span"] = net.merged_span;
  j["routers"] = ordered_json::array();
  for (const Router& r : net.routers)
    j["routers"].push_back(ordered_json{
        {"id", r.id}, {"stage", r.stage}, {"row", r.row}, {"n_in", r.n_in}, {"n_out", r.n_out}});
  j["channels"] = ordered_json::array();
  for (const Channel& c : net.channels)
    j["channels"].push_back(ordered_json{
        {"id", c.id}, {"kind", to_string(c.kind)}, {"src", port_json(c.src)},
        {"dst", port_json(c.dst)}});
  j["input_terminals"] = ordered_json::array();
  for (const PortRef& p : net.input_terminals) j["input_terminals"].push_back(port_json(p));
  j["output_terminals"] = ordered_json::array();
  for (const PortRef& p : net.output_terminals) j["output_terminals"].push_back(port_json(p));
  return j;
}

inline void write_json(const std::string& path, const Network& net) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << to_json(net).dump(2) << '\n';
}

inline void write_dot(std::ostream& os, const Network& net) {
  os << "digraph " << to_string(net.kind) << " {\n  rankdir=LR;\n  node [shape=box];\n";
  for (int32_t t = 0; t < net.stage_count(); ++t) {
    os << "  { rank=same;";
    for (int32_t id : net.stages[static_cast<size_t>(t)]) os << " r" << id << ';';
    os << " }\n";
  }
  for (const Router& r : net.routers)
    os << "  r" << r.id << " [label=\"s" << r.stage << "r" << r.row << "\\n" << r.n_in << "x"
       << r.n_out << "\"];\n";
  for (int32_t i = 0; i < net.n_terminals; ++i) {
    os << "  in" << i << " [shape=plaintext label=\"" << i << "\"];\n";
    os << "  out" << i << " [shape=plaintext label=\"" << i << "\"];\n";
  }
  for (const Channel& c : net.channels) {
    std::string src = c.src.is_terminal() ? "in" + std::to_string(c.src.port)
                                          : "r" + std::to_string(c.src.router);
    std::string dst = c.dst.is_terminal() ? "out" + std::to_string(c.dst.port)
                                          : "r" + std::to_string(c.dst.router);
    os << "  " << src << " -> " << dst;
    if (c.kind == ChannelKind::intra_stage) os << " [style=dashed constraint=false]";
    os << ";\n";
  }
  os << "}\n";
}

inline void write_dot(const std::string& path, const Network& net) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  write_dot(os, net);
}

inline void write_message_log_csv(std::ostream& os, const std::vector<MsgRecord>& log) {
  os << "msg_id,src,dst,t_gen,t_inject,t_eject,hops\n";
  for (const MsgRecord& m : log)
    os << m.id << ',' << m.src << ',' << m.dst << ',' << m.t_gen << ',' << m.t_inject << ','
       << m.t_eject << ',' << m.hops << '\n';
}

}  // namespace minweave
