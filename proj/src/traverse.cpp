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

#include "stagegraph/traverse.hpp"

#include <algorithm>
#include <numeric>

namespace stagegraph {
namespace {

enum : std::uint8_t { kWhite = 0, kGray = 1, kBlack = 2 };

void check_depths(const SimGraph& graph, const DepthVector& depths) {
  if (depths.size() != graph.fifo_reads.size()) {
    throw SimError("depth vector has " + std::to_string(depths.size()) +
                   " entries, design has " +
                   std::to_string(graph.fifo_reads.size()) + " fifos");
  }
}

}  // namespace

DepthVector::DepthVector(std::vector<std::uint64_t> depths)
    : depths_(std::move(depths)) {
  for (std::size_t i = 0; i < depths_.size(); ++i) {
    if (depths_[i] == 0) {
      throw SimError("fifo depth must be at least 1 (fifo #" +
                     std::to_string(i) + ")");
    }
  }
}

DepthVector DepthVector::from_map(
    const std::vector<std::string>& fifo_names,
    const std::map<std::string, std::uint64_t>& depths) {
  std::vector<std::uint64_t> values;
  values.reserve(fifo_names.size());
  for (const std::string& name : fifo_names) {
    auto it = depths.find(name);
    if (it == depths.end()) throw SimError("no depth given for fifo '" + name + "'");
    if (it->second == 0) throw SimError("fifo '" + name + "' has depth 0");
    values.push_back(it->second);
  }
  for (const auto& [name, _] : depths) {
    if (std::find(fifo_names.begin(), fifo_names.end(), name) ==
        fifo_names.end()) {
      throw SimError("unknown fifo '" + name + "'");
    }
  }
  return DepthVector(std::move(values));
}

DepthVector DepthVector::uniform(std::size_t fifo_count, std::uint64_t depth) {
  return DepthVector(std::vector<std::uint64_t>(fifo_count, depth));
}

std::uint64_t DepthVector::total() const {
  return std::accumulate(depths_.begin(), depths_.end(), std::uint64_t{0});
}

std::string DepthVector::to_string(
    const std::vector<std::string>& fifo_names) const {
  std::string out;
  for (std::size_t i = 0; i < depths_.size(); ++i) {
    if (i > 0) out += ',';
    out += (i < fifo_names.size() ? fifo_names[i] : "#" + std::to_string(i)) +
           "=" + std::to_string(depths_[i]);
  }
  return out;
}

std::optional<NodeId> resolve_floating(const SimGraph& graph,
                                       const FloatingEdge& edge,
                                       const DepthVector& depths) {
  const std::uint64_t depth = depths[edge.fifo];
  if (edge.write_seq <= depth) return std::nullopt;
  const std::uint64_t read_seq = edge.write_seq - depth;
  const auto& reads = graph.fifo_reads[edge.fifo.index()];
  if (read_seq > reads.size()) {
    throw SimError("internal: write " + std::to_string(edge.write_seq) +
                   " of fifo #" + std::to_string(edge.fifo.value) +
                   " waits for read " + std::to_string(read_seq) +
                   ", but only " + std::to_string(reads.size()) +
                   " reads exist");
  }
  return reads[read_seq - 1];
}

Traversal::Traversal(const SimGraph& graph)
    : graph_(&graph),
      time_(graph.node_count(), 0),
      color_(graph.node_count(), kWhite) {
  stack_.reserve(graph.node_count());
}

SimResult Traversal::run(const DepthVector& depths) {
  const SimGraph& g = *graph_;
  check_depths(g, depths);
  std::fill(color_.begin(), color_.end(), kWhite);
  const std::uint64_t* depth = depths.values().data();
  // Committed edges always point to higher ids, so when the nodes are taken
  // in id order every committed source is already finished. Only a floating
  // edge to an unfinished read needs the search.
  for (std::uint32_t v = 0; v < g.node_count(); ++v) {
    if (color_[v] != kWhite) continue;
    Cycles t = 0;
    for (const Edge& e : g.in(NodeId{v})) {
      t = std::max(t, time_[e.source.index()] + e.delay);
    }
    const std::uint64_t committed = g.in_offsets[v + 1] - g.in_offsets[v];
    const auto floating = g.floating_in(NodeId{v});
    std::size_t j = 0;
    for (; j < floating.size(); ++j) {
      const FloatingEdge& f = floating[j];
      if (f.write_seq <= depth[f.fifo.index()]) continue;
      const NodeId u = resolve_floating(g, f, depths).value();
      if (color_[u.index()] != kBlack) break;
      t = std::max(t, time_[u.index()] + f.delay);
    }
    time_[v] = t;
    if (j == floating.size()) {
      color_[v] = kBlack;
      continue;
    }
    if (auto witness = visit(NodeId{v}, committed + j, depths)) {
      return SimResult::make_deadlock(std::move(*witness));
    }
  }
  return SimResult::make_cycles(time_[g.end.index()]);
}

std::optional<std::vector<NodeId>> Traversal::visit(NodeId root,
                                                    std::uint64_t cursor,
                                                    const DepthVector& depths) {
  const SimGraph& g = *graph_;
  const std::uint64_t* in_offsets = g.in_offsets.data();
  const Edge* in_edges = g.in_edges.data();
  const std::uint64_t* floating_offsets = g.floating_offsets.data();
  const FloatingEdge* floating = g.floating.data();
  const std::uint64_t* depth = depths.values().data();
  Cycles* time = time_.data();
  std::uint8_t* color = color_.data();

  stack_.clear();
  color[root.index()] = kGray;
  stack_.push_back(Frame{root, cursor, 0});
  while (!stack_.empty()) {
    const std::size_t v = stack_.back().node.index();
    const std::uint64_t committed = in_offsets[v + 1] - in_offsets[v];
    const std::uint64_t total =
        committed + floating_offsets[v + 1] - floating_offsets[v];
    std::uint64_t k = stack_.back().cursor;
    Cycles t = time[v];
    NodeId next;
    Cycles next_delay = 0;
    bool descend = false;
    for (; k < total; ++k) {
      NodeId source;
      Cycles delay;
      if (k < committed) {
        const Edge& e = in_edges[in_offsets[v] + k];
        source = e.source;
        delay = e.delay;
      } else {
        const FloatingEdge& f = floating[floating_offsets[v] + k - committed];
        if (f.write_seq <= depth[f.fifo.index()]) continue;
        source = resolve_floating(g, f, depths).value();
        delay = f.delay;
      }
      const std::size_t u = source.index();
      if (color[u] == kBlack) {
        t = std::max(t, time[u] + delay);
        continue;
      }
      if (color[u] == kGray) {
        auto it = std::find_if(stack_.begin(), stack_.end(),
                               [&](const Frame& f) { return f.node == source; });
        std::vector<NodeId> witness;
        for (auto w = stack_.rbegin(); w.base() != it; ++w) {
          witness.push_back(w->node);
        }
        return witness;
      }
      next = source;
      next_delay = delay;
      descend = true;
      ++k;
      break;
    }
    time[v] = t;
    if (descend) {
      stack_.back().cursor = k;
      color[next.index()] = kGray;
      time[next.index()] = 0;
      stack_.push_back(Frame{next, 0, next_delay});
      continue;
    }
    const Cycles delay_to_parent = stack_.back().delay_to_parent;
    stack_.pop_back();
    color[v] = kBlack;
    if (!stack_.empty()) {
      Cycles& parent = time[stack_.back().node.index()];
      parent = std::max(parent, t + delay_to_parent);
    }
  }
  return std::nullopt;
}

SimResult simulate(const SimGraph& graph, const DepthVector& depths) {
  return Traversal(graph).run(depths);
}

std::vector<NodeId> critical_path(const SimGraph& graph,
                                  const DepthVector& depths) {
  Traversal traversal(graph);
  SimResult result = traversal.run(depths);
  if (result.deadlock) throw SimError("no critical path: design deadlocks");
  const auto& time = traversal.times();
  std::vector<NodeId> path{graph.end};
  NodeId v = graph.end;
  while (true) {
    std::optional<NodeId> best;
    auto consider = [&](NodeId u, Cycles delay) {
      if (time[u.index()] + delay == time[v.index()] && (!best || u < *best)) {
        best = u;
      }
    };
    for (const Edge& e : graph.in(v)) consider(e.source, e.delay);
    for (const FloatingEdge& f : graph.floating_in(v)) {
      if (auto u = resolve_floating(graph, f, depths)) consider(*u, f.delay);
    }
    if (!best) break;
    v = *best;
    path.push_back(v);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace stagegraph
