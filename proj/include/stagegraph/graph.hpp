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

// The simulation graph and its single-pass compiler.
//
// Each node is one dynamic stage of one activation. Edges carry the minimum
// number of cycles between their endpoints and do not depend on FIFO depths;
// the depth-dependent write-after-read constraints are kept as floating edges
// whose source is bound at traversal time.

#ifndef STAGEGRAPH_GRAPH_HPP_
#define STAGEGRAPH_GRAPH_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "stagegraph/common.hpp"
#include "stagegraph/resolve.hpp"
#include "stagegraph/schedule.hpp"
#include "stagegraph/trace.hpp"

namespace stagegraph {

enum class EdgeTag : std::uint8_t {
  kControlFlow,
  kFifoRaw,
  kFifoWar,
  kAxiRead,
  kAxiWriteResp,
  kAxiRctl,
};

std::string_view edge_tag_name(EdgeTag tag);

struct EdgeKind {
  EdgeTag tag = EdgeTag::kControlFlow;
  // FifoId or AxiId index; kNoTarget for control flow.
  std::uint32_t object = kNoTarget;
  // 1-based transfer sequence number for FIFO edges, 0 otherwise.
  std::uint64_t seq = 0;

  bool operator==(const EdgeKind&) const = default;
};

struct Edge {
  NodeId source;
  NodeId target;
  Cycles delay = 0;
  EdgeKind kind;

  bool operator==(const Edge&) const = default;
};

/// Write-after-read constraint with an unbound source: under depth d the
/// write number `write_seq` waits for read number write_seq - d.
struct FloatingEdge {
  NodeId target;
  FifoId fifo;
  std::uint64_t write_seq = 0;
  Cycles delay = 0;

  bool operator==(const FloatingEdge&) const = default;
};

struct NodeInfo {
  ActivationId activation;
  FunctionId module;
  Stage stage = 0;

  bool operator==(const NodeInfo&) const = default;
};

struct GraphStats {
  // One node per stage of every activation, one control edge between
  // consecutive stages, plus subcall and typed edges.
  std::uint64_t nodes_before_elim = 0;
  std::uint64_t nodes_after_elim = 0;
  std::uint64_t edges_before_elim = 0;
  std::uint64_t edges_after_elim = 0;
  // Stages that carried an event or a boundary role.
  std::uint64_t nodes_materialized = 0;
  std::uint64_t floating_edges = 0;

  bool operator==(const GraphStats&) const = default;
};

struct CompilerConfig {
  bool eliminate = true;
  Cycles subcall_start_delay = 1;
  Cycles subcall_return_delay = 1;
  Cycles fifo_raw_delay = 1;
  Cycles fifo_war_delay = 1;
  Cycles rctl_delay = 1;

  bool operator==(const CompilerConfig&) const = default;
};

/// Immutable after construction; safe to share across threads.
struct SimGraph {
  // CSR of committed in-edges, grouped by target in ascending order:
  // in-edges of node v are in_edges[in_offsets[v] .. in_offsets[v + 1]).
  // Every edge satisfies source < target.
  std::vector<std::uint64_t> in_offsets;
  std::vector<Edge> in_edges;
  // Floating edges in the same layout, grouped by target.
  std::vector<std::uint64_t> floating_offsets;
  std::vector<FloatingEdge> floating;
  // Node of each read, by fifo and 1-based read sequence number minus one.
  std::vector<std::vector<NodeId>> fifo_reads;
  std::vector<NodeInfo> nodes;
  NodeId end;
  std::vector<std::string> module_names;
  std::vector<std::string> fifo_names;
  std::vector<std::string> axi_names;
  GraphStats stats;

  std::size_t node_count() const { return nodes.size(); }
  std::span<const Edge> in(NodeId v) const {
    return {in_edges.data() + in_offsets[v.index()],
            in_edges.data() + in_offsets[v.index() + 1]};
  }
  std::span<const FloatingEdge> floating_in(NodeId v) const {
    return {floating.data() + floating_offsets[v.index()],
            floating.data() + floating_offsets[v.index() + 1]};
  }

  bool operator==(const SimGraph&) const = default;
};

/// Streaming compiler. Feed resolved events in resolution order, then call
/// finish() once.
class GraphCompiler {
 public:
  GraphCompiler(const ScheduleIndex& index, const CompilerConfig& config);
  ~GraphCompiler();
  GraphCompiler(const GraphCompiler&) = delete;
  GraphCompiler& operator=(const GraphCompiler&) = delete;

  void consume(const ResolvedEvent& event);
  SimGraph finish();

  std::uint64_t events_consumed() const;
  /// True if every activation always had at most (largest static stage seen
  /// in it) + 1 uncommitted nodes.
  bool pending_bound_held() const;
  /// Stages of `activation` that have nodes but are not committed yet.
  std::vector<Stage> pending_stages(ActivationId activation) const;

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

/// Resolves and compiles in one streaming pass.
SimGraph compile(const Trace& trace, const ScheduleIndex& index,
                 const CompilerConfig& config = {});
SimGraph compile(const std::vector<ResolvedEvent>& events,
                 const ScheduleIndex& index, const CompilerConfig& config = {});

}  // namespace stagegraph

#endif  // STAGEGRAPH_GRAPH_HPP_
