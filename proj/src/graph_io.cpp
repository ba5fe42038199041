// Copyright 2026 The Stagegraph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stagegraph/graph_io.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace stagegraph {
namespace {

using Json = nlohmann::ordered_json;

Json stats_json(const GraphStats& s) {
  Json j;
  j["nodes_before_elim"] = s.nodes_before_elim;
  j["nodes_after_elim"] = s.nodes_after_elim;
  j["edges_before_elim"] = s.edges_before_elim;
  j["edges_after_elim"] = s.edges_after_elim;
  j["nodes_materialized"] = s.nodes_materialized;
  j["floating_edges"] = s.floating_edges;
  return j;
}

std::optional<EdgeTag> edge_tag_from_name(std::string_view name) {
  for (auto tag : {EdgeTag::kControlFlow, EdgeTag::kFifoRaw, EdgeTag::kFifoWar,
                   EdgeTag::kAxiRead, EdgeTag::kAxiWriteResp,
                   EdgeTag::kAxiRctl}) {
    if (edge_tag_name(tag) == name) return tag;
  }
  return std::nullopt;
}

}  // namespace

void write_graph(const SimGraph& graph, std::ostream& out) {
  Json j;
  j["format"] = "stagegraph-graph";
  j["version"] = kGraphFormatVersion;
  j["node_count"] = graph.node_count();
  j["end"] = graph.end.value;
  j["modules"] = graph.module_names;
  j["fifos"] = graph.fifo_names;
  j["axis"] = graph.axi_names;
  Json nodes = Json::array();
  for (const NodeInfo& n : graph.nodes) {
    nodes.push_back({n.activation.value, n.module.value, n.stage});
  }
  j["nodes"] = std::move(nodes);
  j["in_offsets"] = graph.in_offsets;
  Json edges = Json::array();
  for (const Edge& e : graph.in_edges) {
    edges.push_back({e.source.value, e.target.value, e.delay,
                     edge_tag_name(e.kind.tag), e.kind.object, e.kind.seq});
  }
  j["edges"] = std::move(edges);
  j["floating_offsets"] = graph.floating_offsets;
  Json floating = Json::array();
  for (const FloatingEdge& f : graph.floating) {
    floating.push_back({f.target.value, f.fifo.value, f.write_seq, f.delay});
  }
  j["floating"] = std::move(floating);
  Json reads = Json::array();
  for (const auto& list : graph.fifo_reads) {
    Json ids = Json::array();
    for (NodeId id : list) ids.push_back(id.value);
    reads.push_back(std::move(ids));
  }
  j["fifo_reads"] = std::move(reads);
  j["stats"] = stats_json(graph.stats);
  out << j.dump() << '\n';
}

std::string write_graph(const SimGraph& graph) {
  std::ostringstream out;
  write_graph(graph, out);
  return out.str();
}

SimGraph read_graph(std::istream& in) {
  SimGraph g;
  try {
    Json j = Json::parse(in);
    if (j.at("format") != "stagegraph-graph") {
      throw ParseError(0, "not a stagegraph graph dump");
    }
    if (j.at("version").get<int>() != kGraphFormatVersion) {
      throw ParseError(0, "unsupported graph dump version");
    }
    g.end = NodeId{j.at("end").get<std::uint32_t>()};
    g.module_names = j.at("modules").get<std::vector<std::string>>();
    g.fifo_names = j.at("fifos").get<std::vector<std::string>>();
    g.axi_names = j.at("axis").get<std::vector<std::string>>();
    for (const auto& n : j.at("nodes")) {
      g.nodes.push_back(NodeInfo{ActivationId{n.at(0).get<std::uint32_t>()},
                                 FunctionId{n.at(1).get<std::uint32_t>()},
                                 n.at(2).get<Stage>()});
    }
    if (j.at("node_count").get<std::size_t>() != g.nodes.size()) {
      throw ParseError(0, "node_count does not match nodes");
    }
    g.in_offsets = j.at("in_offsets").get<std::vector<std::uint64_t>>();
    for (const auto& e : j.at("edges")) {
      auto tag = edge_tag_from_name(e.at(3).get<std::string>());
      if (!tag) throw ParseError(0, "unknown edge kind");
      g.in_edges.push_back(Edge{NodeId{e.at(0).get<std::uint32_t>()},
                                NodeId{e.at(1).get<std::uint32_t>()},
                                e.at(2).get<Cycles>(),
                                EdgeKind{*tag, e.at(4).get<std::uint32_t>(),
                                         e.at(5).get<std::uint64_t>()}});
    }
    g.floating_offsets = j.at("floating_offsets").get<std::vector<std::uint64_t>>();
    for (const auto& f : j.at("floating")) {
      g.floating.push_back(FloatingEdge{NodeId{f.at(0).get<std::uint32_t>()},
                                        FifoId{f.at(1).get<std::uint32_t>()},
                                        f.at(2).get<std::uint64_t>(),
                                        f.at(3).get<Cycles>()});
    }
    for (const auto& list : j.at("fifo_reads")) {
      std::vector<NodeId> ids;
      for (const auto& id : list) ids.push_back(NodeId{id.get<std::uint32_t>()});
      g.fifo_reads.push_back(std::move(ids));
    }
    const Json& s = j.at("stats");
    g.stats.nodes_before_elim = s.at("nodes_before_elim");
    g.stats.nodes_after_elim = s.at("nodes_after_elim");
    g.stats.edges_before_elim = s.at("edges_before_elim");
    g.stats.edges_after_elim = s.at("edges_after_elim");
    g.stats.nodes_materialized = s.at("nodes_materialized");
    g.stats.floating_edges = s.at("floating_edges");
  } catch (const Json::exception& e) {
    throw ParseError(0, std::string("bad graph dump: ") + e.what());
  }
  try {
    check_graph(g);
  } catch (const Error& e) {
    throw ParseError(0, std::string("bad graph dump: ") + e.what());
  }
  return g;
}

SimGraph read_graph(const std::string& text) {
  std::istringstream in(text);
  return read_graph(in);
}

void check_graph(const SimGraph& g) {
  const std::size_t n = g.node_count();
  auto check_offsets = [&](const std::vector<std::uint64_t>& offsets,
                           std::size_t total, const char* what) {
    if (offsets.size() != n + 1 || offsets.front() != 0 ||
        offsets.back() != total) {
      throw Error(std::string(what) + " offsets do not span the edge array");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (offsets[i] > offsets[i + 1]) {
        throw Error(std::string(what) + " offsets decrease");
      }
    }
  };
  check_offsets(g.in_offsets, g.in_edges.size(), "in-edge");
  check_offsets(g.floating_offsets, g.floating.size(), "floating");
  if (n == 0 || g.end.index() >= n) throw Error("end node out of range");
  for (std::size_t v = 0; v < n; ++v) {
    for (const Edge& e : g.in(NodeId{static_cast<std::uint32_t>(v)})) {
      if (e.target.index() != v) throw Error("edge grouped under the wrong target");
      if (e.source >= e.target) throw Error("edge source not below its target");
    }
    for (const FloatingEdge& f : g.floating_in(NodeId{static_cast<std::uint32_t>(v)})) {
      if (f.target.index() != v) {
        throw Error("floating edge grouped under the wrong target");
      }
      if (f.fifo.index() >= g.fifo_reads.size() || f.write_seq < 2) {
        throw Error("floating edge with bad fifo or sequence number");
      }
    }
  }
  if (g.fifo_reads.size() != g.fifo_names.size()) {
    throw Error("fifo read registry does not match fifo list");
  }
  for (const auto& reads : g.fifo_reads) {
    for (NodeId id : reads) {
      if (id.index() >= n) throw Error("fifo read node out of range");
    }
  }
  for (const NodeInfo& info : g.nodes) {
    if (info.module.index() >= g.module_names.size()) {
      throw Error("node module out of range");
    }
  }
}

}  // namespace stagegraph
