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

#include "stagegraph/graph.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <queue>

namespace stagegraph {
namespace {

constexpr std::uint32_t kNone = UINT32_MAX;

struct Node {
  std::uint32_t activation = 0;
  std::uint32_t module = 0;
  Stage stage = 0;
  std::uint32_t in_degree = 0;
  // Index of the first in-edge; the only one when in_degree == 1.
  std::uint32_t first_in = kNone;
  std::uint64_t close_seq = 0;
  bool closed = false;
  bool exempt = false;
  bool eliminated = false;
  std::vector<ResolvedEvent> events;
};

struct RawEdge {
  std::uint32_t source = 0;
  std::uint32_t target = 0;
  Cycles delay = 0;
  EdgeKind kind;
};

struct ReadBurst {
  std::uint32_t request = 0;
  std::uint32_t request_node = 0;
  std::uint64_t burst = 0;
  std::uint64_t remaining = 0;
};

struct ReadRequest {
  std::uint32_t first_read = kNone;
  std::uint32_t last_read = kNone;
};

// A read request issued by the activation itself, or a child activation
// whose requests are spliced in at this position.
struct RctlEntry {
  bool child = false;
  std::uint32_t id = 0;
};

struct ActivationState {
  std::uint32_t module = 0;
  std::map<Stage, std::uint32_t> open;
  Stage threshold = 0;
  std::uint32_t last_closed = kNone;
  Stage last_stage = 0;
  Stage max_static = 0;
  std::vector<std::uint32_t> children;
  std::uint32_t return_node = kNone;
  Stage return_stage = 0;
  bool returned = false;
  std::map<std::uint32_t, std::deque<ReadBurst>> reads;
  std::map<std::uint32_t, std::deque<std::uint64_t>> writes;
  std::map<std::uint32_t, std::deque<std::uint32_t>> completed_writes;
  std::vector<RctlEntry> rctl;
};

struct FifoState {
  std::vector<std::uint32_t> write_nodes;
  std::vector<std::uint32_t> read_nodes;
};

struct PendingFloating {
  std::uint32_t target = 0;
  FloatingEdge edge;
};

}  // namespace

std::string_view edge_tag_name(EdgeTag tag) {
  switch (tag) {
    case EdgeTag::kControlFlow:
      return "control";
    case EdgeTag::kFifoRaw:
      return "fifo_raw";
    case EdgeTag::kFifoWar:
      return "fifo_war";
    case EdgeTag::kAxiRead:
      return "axi_read";
    case EdgeTag::kAxiWriteResp:
      return "axi_write_resp";
    case EdgeTag::kAxiRctl:
      return "axi_rctl";
  }
  return "?";
}

class GraphCompiler::Impl {
 public:
  Impl(const ScheduleIndex& index, const CompilerConfig& config)
      : index_(index), config_(config), fifos_(index.fifo_count()) {}

  void consume(const ResolvedEvent& e) {
    ++consumed_;
    const std::uint32_t a = e.instance.value;
    if (acts_.empty()) {
      if (a != 0) fail(e, "first event must belong to the top activation");
      start_activation(e.module.value);
    }
    if (a >= acts_.size()) fail(e, "event for an activation that was not called");
    if (acts_[a].returned) fail(e, "event after the activation returned");
    if (e.static_stage > e.dyn_stage) fail(e, "static stage exceeds dynamic stage");
    if (acts_[a].last_closed != kNone && e.dyn_stage <= acts_[a].last_stage) {
      fail(e, "event lands on a committed stage");
    }
    acts_[a].max_static = std::max(acts_[a].max_static, e.static_stage);
    const Stage threshold = e.dyn_stage - e.static_stage;
    if (threshold > acts_[a].threshold) {
      acts_[a].threshold = threshold;
      close_below(a, threshold);
    }
    const std::uint32_t node = node_at(a, e.dyn_stage);
    nodes_[node].events.push_back(e);
    if (acts_[a].open.size() > acts_[a].max_static + 1) pending_ok_ = false;

    if (e.tag == EventTag::kCall) {
      if (e.callee.value != acts_.size()) fail(e, "callee activation out of order");
      const std::uint32_t child = start_activation(e.target);
      acts_[a].children.push_back(child);
      const std::uint32_t child_start = node_at(child, 1);
      add_edge(node, child_start, config_.subcall_start_delay, EdgeKind{});
    } else if (e.tag == EventTag::kReturn) {
      for (std::uint32_t child : acts_[a].children) {
        if (!acts_[child].returned) fail(e, "return before a child returned");
        add_edge(acts_[child].return_node, node, config_.subcall_return_delay,
                 EdgeKind{});
      }
      acts_[a].returned = true;
      acts_[a].return_node = node;
      acts_[a].return_stage = e.dyn_stage;
      if (a == 0) nodes_[node].exempt = true;
      close_below(a, kNoTime);
      if (a == 0) emit_rctl_edges();
    }
  }

  SimGraph finish() {
    if (acts_.empty() || !acts_[0].returned) {
      throw CompileError("event stream ends before the top activation returns");
    }
    for (std::size_t f = 0; f < fifos_.size(); ++f) {
      if (fifos_[f].read_nodes.size() > fifos_[f].write_nodes.size()) {
        throw CompileError("fifo '" +
                           index_.fifo_name(FifoId{static_cast<std::uint32_t>(f)}) +
                           "' has a read without a matching write");
      }
    }
    resolve_aliases();

    // Surviving edges with sources resolved through eliminated nodes.
    std::vector<RawEdge> edges;
    edges.reserve(edges_.size());
    for (const RawEdge& raw : edges_) {
      if (nodes_[raw.target].eliminated) continue;
      RawEdge edge = raw;
      edge.source = alias_source_[raw.source];
      edge.delay += alias_delay_[raw.source];
      if (edge.source == edge.target) {
        if (edge.delay == 0) continue;
        throw CompileError("stage depends on itself: " + describe(edge.target));
      }
      edges.push_back(edge);
    }

    const std::vector<std::uint32_t> order = topological_order(edges);
    std::vector<std::uint32_t> final_id(nodes_.size(), kNone);
    for (std::uint32_t i = 0; i < order.size(); ++i) final_id[order[i]] = i;

    SimGraph graph;
    graph.nodes.reserve(order.size());
    for (std::uint32_t internal : order) {
      const Node& n = nodes_[internal];
      graph.nodes.push_back(
          NodeInfo{ActivationId{n.activation}, FunctionId{n.module}, n.stage});
    }

    graph.in_edges.reserve(edges.size());
    for (const RawEdge& raw : edges) {
      graph.in_edges.push_back(Edge{NodeId{final_id[raw.source]},
                                    NodeId{final_id[raw.target]}, raw.delay,
                                    raw.kind});
    }
    std::stable_sort(graph.in_edges.begin(), graph.in_edges.end(),
                     [](const Edge& x, const Edge& y) {
                       return x.target < y.target;
                     });
    graph.in_offsets = offsets(graph.in_edges, order.size());

    graph.floating.reserve(floating_.size());
    for (const PendingFloating& pending : floating_) {
      FloatingEdge edge = pending.edge;
      edge.target = NodeId{final_id[pending.target]};
      graph.floating.push_back(edge);
    }
    std::stable_sort(graph.floating.begin(), graph.floating.end(),
                     [](const FloatingEdge& x, const FloatingEdge& y) {
                       return x.target < y.target;
                     });
    graph.floating_offsets = offsets(graph.floating, order.size());

    graph.fifo_reads.resize(fifos_.size());
    for (std::size_t f = 0; f < fifos_.size(); ++f) {
      for (std::uint32_t read : fifos_[f].read_nodes) {
        graph.fifo_reads[f].push_back(NodeId{final_id[read]});
      }
    }
    graph.end = NodeId{final_id[acts_[0].return_node]};
    graph.module_names = index_.function_names();
    graph.fifo_names = index_.fifo_names();
    graph.axi_names = index_.axi_names();

    GraphStats& stats = graph.stats;
    for (const ActivationState& act : acts_) {
      stats.nodes_before_elim += act.return_stage;
      stats.edges_before_elim += act.return_stage - 1;
    }
    stats.edges_before_elim += 2 * (acts_.size() - 1) + typed_edges_;
    stats.nodes_after_elim = graph.nodes.size();
    stats.edges_after_elim = graph.in_edges.size();
    stats.nodes_materialized = nodes_.size();
    stats.floating_edges = graph.floating.size();
    return graph;
  }

  std::uint64_t consumed() const { return consumed_; }
  bool pending_ok() const { return pending_ok_; }
  std::vector<Stage> pending(ActivationId a) const {
    std::vector<Stage> stages;
    if (a.index() < acts_.size()) {
      for (const auto& [stage, _] : acts_[a.index()].open) stages.push_back(stage);
    }
    return stages;
  }

 private:
  [[noreturn]] void fail(const ResolvedEvent& e, const std::string& msg) const {
    throw CompileError("event " + std::to_string(consumed_ - 1) + " (" +
                       std::string(event_keyword(e.tag)) + " in " +
                       index_.function_name(e.module) + ", stage " +
                       std::to_string(e.dyn_stage) + "): " + msg);
  }

  std::string describe(std::uint32_t node) const {
    const Node& n = nodes_[node];
    return index_.function_name(FunctionId{n.module}) + "#" +
           std::to_string(n.activation) + " stage " + std::to_string(n.stage);
  }

  std::uint32_t start_activation(std::uint32_t module) {
    acts_.emplace_back();
    acts_.back().module = module;
    const auto id = static_cast<std::uint32_t>(acts_.size() - 1);
    node_at(id, 1);
    return id;
  }

  std::uint32_t node_at(std::uint32_t a, Stage stage) {
    auto [it, inserted] = acts_[a].open.try_emplace(stage, 0);
    if (inserted) {
      it->second = static_cast<std::uint32_t>(nodes_.size());
      Node node;
      node.activation = a;
      node.module = acts_[a].module;
      node.stage = stage;
      nodes_.push_back(std::move(node));
    }
    return it->second;
  }

  void add_edge(std::uint32_t source, std::uint32_t target, Cycles delay,
                EdgeKind kind) {
    Node& t = nodes_[target];
    if (t.eliminated) {
      throw CompileError("internal: edge into an eliminated node " +
                         describe(target));
    }
    if (t.first_in == kNone) t.first_in = static_cast<std::uint32_t>(edges_.size());
    ++t.in_degree;
    if (kind.tag != EdgeTag::kControlFlow) ++typed_edges_;
    edges_.push_back(RawEdge{source, target, delay, kind});
  }

  void close_below(std::uint32_t a, Stage threshold) {
    auto& open = acts_[a].open;
    while (!open.empty() && open.begin()->first < threshold) {
      const std::uint32_t node = open.begin()->second;
      open.erase(open.begin());
      close(a, node);
    }
  }

  void close(std::uint32_t a, std::uint32_t n) {
    ActivationState& act = acts_[a];
    if (act.last_closed != kNone) {
      add_edge(act.last_closed, n, nodes_[n].stage - act.last_stage, EdgeKind{});
    }
    act.last_closed = n;
    act.last_stage = nodes_[n].stage;
    nodes_[n].closed = true;
    nodes_[n].close_seq = close_seq_++;
    const std::vector<ResolvedEvent> events = std::move(nodes_[n].events);
    nodes_[n].events = {};
    for (const ResolvedEvent& e : events) track(act, n, e);

    Node& node = nodes_[n];
    if (config_.eliminate && node.in_degree == 1 && !node.exempt) {
      node.eliminated = true;
    }
  }

  void track(ActivationState& act, std::uint32_t n, const ResolvedEvent& e) {
    switch (e.tag) {
      case EventTag::kFifoWrite: {
        FifoState& fifo = fifos_[e.target];
        fifo.write_nodes.push_back(n);
        const std::uint64_t seq = fifo.write_nodes.size();
        if (seq >= 2) {
          floating_.push_back(PendingFloating{
              n, FloatingEdge{NodeId{}, FifoId{e.target}, seq,
                              config_.fifo_war_delay}});
          nodes_[n].exempt = true;
        }
        if (fifo.read_nodes.size() >= seq) {
          add_edge(n, fifo.read_nodes[seq - 1], config_.fifo_raw_delay,
                   EdgeKind{EdgeTag::kFifoRaw, e.target, seq});
        }
        break;
      }
      case EventTag::kFifoRead: {
        FifoState& fifo = fifos_[e.target];
        fifo.read_nodes.push_back(n);
        const std::uint64_t seq = fifo.read_nodes.size();
        nodes_[n].exempt = true;
        if (fifo.write_nodes.size() >= seq) {
          add_edge(fifo.write_nodes[seq - 1], n, config_.fifo_raw_delay,
                   EdgeKind{EdgeTag::kFifoRaw, e.target, seq});
        }
        break;
      }
      case EventTag::kAxiReadReq: {
        const auto request = static_cast<std::uint32_t>(requests_.size());
        requests_.emplace_back();
        request_axi_.push_back(e.target);
        act.reads[e.target].push_back(ReadBurst{request, n, e.burst, e.burst});
        act.rctl.push_back(RctlEntry{false, request});
        break;
      }
      case EventTag::kAxiRead: {
        auto& open = act.reads[e.target];
        if (open.empty()) fail(e, "axi read transfer without an open request");
        ReadBurst& burst = open.front();
        if (burst.remaining == burst.burst) {
          const AxiParams& params = index_.axi_params(AxiId{e.target});
          add_edge(burst.request_node, n,
                   params.read_latency + params.request_overhead,
                   EdgeKind{EdgeTag::kAxiRead, e.target, 0});
          requests_[burst.request].first_read = n;
          nodes_[n].exempt = true;
        }
        if (--burst.remaining == 0) {
          requests_[burst.request].last_read = n;
          open.pop_front();
        }
        break;
      }
      case EventTag::kAxiWriteReq:
        act.writes[e.target].push_back(e.burst);
        break;
      case EventTag::kAxiWrite: {
        auto& open = act.writes[e.target];
        if (open.empty()) fail(e, "axi write transfer without an open request");
        if (--open.front() == 0) {
          open.pop_front();
          act.completed_writes[e.target].push_back(n);
        }
        break;
      }
      case EventTag::kAxiWriteResp: {
        auto& done = act.completed_writes[e.target];
        if (done.empty()) fail(e, "axi write response without a completed burst");
        add_edge(done.front(), n,
                 index_.axi_params(AxiId{e.target}).write_resp_latency,
                 EdgeKind{EdgeTag::kAxiWriteResp, e.target, 0});
        done.pop_front();
        break;
      }
      case EventTag::kCall:
        act.rctl.push_back(RctlEntry{true, e.callee.value});
        break;
      case EventTag::kReturn:
        break;
    }
  }

  void emit_rctl_edges() {
    std::vector<std::vector<std::uint32_t>> order(index_.axi_count());
    std::function<void(std::uint32_t)> splice = [&](std::uint32_t a) {
      for (const RctlEntry& entry : acts_[a].rctl) {
        if (entry.child) {
          splice(entry.id);
        } else {
          order[request_axi_[entry.id]].push_back(entry.id);
        }
      }
    };
    splice(0);
    for (std::uint32_t axi = 0; axi < order.size(); ++axi) {
      const std::size_t depth = index_.axi_params(AxiId{axi}).rctl_depth;
      const auto& seq = order[axi];
      for (std::size_t k = depth; k < seq.size(); ++k) {
        const ReadRequest& older = requests_[seq[k - depth]];
        const ReadRequest& newer = requests_[seq[k]];
        if (older.last_read == kNone || newer.first_read == kNone) {
          throw CompileError("axi '" + index_.axi_name(AxiId{axi}) +
                             "' read request without transfers");
        }
        add_edge(older.last_read, newer.first_read, config_.rctl_delay,
                 EdgeKind{EdgeTag::kAxiRctl, axi, 0});
      }
    }
  }

  // Maps every node to its nearest surviving ancestor along single in-edges
  // of eliminated nodes, with the accumulated delay.
  void resolve_aliases() {
    constexpr std::uint32_t kBusy = kNone - 1;
    alias_source_.assign(nodes_.size(), kNone);
    alias_delay_.assign(nodes_.size(), 0);
    std::vector<std::uint32_t> chain;
    for (std::uint32_t start = 0; start < nodes_.size(); ++start) {
      if (alias_source_[start] != kNone) continue;
      chain.clear();
      std::uint32_t u = start;
      while (nodes_[u].eliminated && alias_source_[u] == kNone) {
        alias_source_[u] = kBusy;
        chain.push_back(u);
        u = edges_[nodes_[u].first_in].source;
      }
      if (alias_source_[u] == kBusy) {
        throw CompileError("dependency cycle through " + describe(u));
      }
      if (!nodes_[u].eliminated) alias_source_[u] = u;
      const std::uint32_t root = alias_source_[u];
      Cycles delay = alias_delay_[u];
      for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        delay += edges_[nodes_[*it].first_in].delay;
        alias_source_[*it] = root;
        alias_delay_[*it] = delay;
      }
    }
  }

  std::vector<std::uint32_t> topological_order(
      const std::vector<RawEdge>& edges) const {
    std::vector<std::uint32_t> in_degree(nodes_.size(), 0);
    std::vector<std::uint32_t> out_offsets(nodes_.size() + 1, 0);
    for (const RawEdge& e : edges) {
      ++in_degree[e.target];
      ++out_offsets[e.source + 1];
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      out_offsets[i + 1] += out_offsets[i];
    }
    std::vector<std::uint32_t> out(edges.size());
    std::vector<std::uint32_t> fill(out_offsets.begin(), out_offsets.end() - 1);
    for (const RawEdge& e : edges) out[fill[e.source]++] = e.target;

    using Entry = std::pair<std::uint64_t, std::uint32_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> ready;
    std::size_t survivors = 0;
    for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
      if (nodes_[i].eliminated) continue;
      ++survivors;
      if (in_degree[i] == 0) ready.emplace(nodes_[i].close_seq, i);
    }
    std::vector<std::uint32_t> order;
    order.reserve(survivors);
    while (!ready.empty()) {
      const std::uint32_t u = ready.top().second;
      ready.pop();
      order.push_back(u);
      for (std::uint32_t k = out_offsets[u]; k < out_offsets[u + 1]; ++k) {
        if (--in_degree[out[k]] == 0) {
          ready.emplace(nodes_[out[k]].close_seq, out[k]);
        }
      }
    }
    if (order.size() != survivors) {
      for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
        if (!nodes_[i].eliminated && in_degree[i] != 0) {
          throw CompileError(
              "dependency cycle independent of FIFO depths through " +
              describe(i));
        }
      }
    }
    return order;
  }

  template <typename E>
  static std::vector<std::uint64_t> offsets(const std::vector<E>& edges,
                                            std::size_t node_count) {
    std::vector<std::uint64_t> out(node_count + 1, 0);
    for (const E& e : edges) ++out[e.target.index() + 1];
    for (std::size_t i = 0; i < node_count; ++i) out[i + 1] += out[i];
    return out;
  }

  const ScheduleIndex& index_;
  CompilerConfig config_;
  std::vector<Node> nodes_;
  std::vector<RawEdge> edges_;
  std::vector<ActivationState> acts_;
  std::vector<FifoState> fifos_;
  std::vector<ReadRequest> requests_;
  std::vector<std::uint32_t> request_axi_;
  std::vector<PendingFloating> floating_;
  std::vector<std::uint32_t> alias_source_;
  std::vector<Cycles> alias_delay_;
  std::uint64_t close_seq_ = 0;
  std::uint64_t consumed_ = 0;
  std::uint64_t typed_edges_ = 0;
  bool pending_ok_ = true;
};

GraphCompiler::GraphCompiler(const ScheduleIndex& index,
                             const CompilerConfig& config)
    : impl_(std::make_unique<Impl>(index, config)) {}

GraphCompiler::~GraphCompiler() = default;

void GraphCompiler::consume(const ResolvedEvent& event) { impl_->consume(event); }

SimGraph GraphCompiler::finish() { return impl_->finish(); }

std::uint64_t GraphCompiler::events_consumed() const { return impl_->consumed(); }

bool GraphCompiler::pending_bound_held() const { return impl_->pending_ok(); }

std::vector<Stage> GraphCompiler::pending_stages(ActivationId activation) const {
  return impl_->pending(activation);
}

SimGraph compile(const Trace& trace, const ScheduleIndex& index,
                 const CompilerConfig& config) {
  GraphCompiler compiler(index, config);
  resolve(trace, index,
          [&](const ResolvedEvent& event) { compiler.consume(event); });
  return compiler.finish();
}

SimGraph compile(const std::vector<ResolvedEvent>& events,
                 const ScheduleIndex& index, const CompilerConfig& config) {
  GraphCompiler compiler(index, config);
  for (const ResolvedEvent& event : events) compiler.consume(event);
  return compiler.finish();
}

}  // namespace stagegraph
