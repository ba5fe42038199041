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

// Longest-path evaluation of a SimGraph under one FIFO depth assignment.

#ifndef STAGEGRAPH_TRAVERSE_HPP_
#define STAGEGRAPH_TRAVERSE_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stagegraph/common.hpp"
#include "stagegraph/graph.hpp"

namespace stagegraph {

/// One depth per fifo, indexed by FifoId. Depths are at least 1.
class DepthVector {
 public:
  DepthVector() = default;
  explicit DepthVector(std::vector<std::uint64_t> depths);

  /// Every fifo in `fifo_names` must be given exactly once; unknown names and
  /// zero depths are rejected with SimError.
  static DepthVector from_map(const std::vector<std::string>& fifo_names,
                              const std::map<std::string, std::uint64_t>& depths);
  static DepthVector uniform(std::size_t fifo_count, std::uint64_t depth);

  std::size_t size() const { return depths_.size(); }
  std::uint64_t operator[](FifoId fifo) const { return depths_[fifo.index()]; }
  const std::vector<std::uint64_t>& values() const { return depths_; }
  std::uint64_t total() const;

  /// `fifo=depth,...` in fifo order.
  std::string to_string(const std::vector<std::string>& fifo_names) const;

  auto operator<=>(const DepthVector&) const = default;

 private:
  std::vector<std::uint64_t> depths_;
};

struct SimResult {
  bool deadlock = false;
  Cycles cycles = 0;
  // On deadlock: nodes of a dependency cycle in happens-before order; each
  // node depends on its predecessor and the first on the last.
  std::vector<NodeId> witness;

  static SimResult make_cycles(Cycles total) { return {false, total, {}}; }
  static SimResult make_deadlock(std::vector<NodeId> witness) {
    return {true, 0, std::move(witness)};
  }
  bool operator==(const SimResult&) const = default;
};

/// Source of a floating edge under `depths`, or nullopt if the write never
/// waits for a read. Throws SimError if the graph has too few reads.
std::optional<NodeId> resolve_floating(const SimGraph& graph,
                                       const FloatingEdge& edge,
                                       const DepthVector& depths);

/// Reusable traversal state for one graph. Not thread-safe; give each
/// worker its own instance. The graph is only read.
class Traversal {
 public:
  explicit Traversal(const SimGraph& graph);

  SimResult run(const DepthVector& depths);

  /// Node times of the last run; meaningful only if it did not deadlock.
  const std::vector<Cycles>& times() const { return time_; }

 private:
  struct Frame {
    NodeId node;
    std::uint64_t cursor = 0;
    Cycles delay_to_parent = 0;
  };

  // Finishes `root`, whose in-edges before `cursor` are already folded into
  // its time, and every unfinished node it depends on. Returns a witness if
  // the search reaches a node still on the stack.
  std::optional<std::vector<NodeId>> visit(NodeId root, std::uint64_t cursor,
                                           const DepthVector& depths);

  const SimGraph* graph_;
  std::vector<Cycles> time_;
  std::vector<std::uint8_t> color_;
  std::vector<Frame> stack_;
};

SimResult simulate(const SimGraph& graph, const DepthVector& depths);

/// One maximal-time path from a node without in-edges to graph.end; ties go
/// to the smallest NodeId. Throws SimError if the configuration deadlocks.
std::vector<NodeId> critical_path(const SimGraph& graph,
                                  const DepthVector& depths);

}  // namespace stagegraph

#endif  // STAGEGRAPH_TRAVERSE_HPP_
