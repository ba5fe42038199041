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

// Fixtures and independent reference computations shared by the unit tests
// and the acceptance suite.

#ifndef STAGEGRAPH_TESTS_SUPPORT_HPP_
#define STAGEGRAPH_TESTS_SUPPORT_HPP_

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "stagegraph/generate.hpp"
#include "stagegraph/graph.hpp"
#include "stagegraph/resolve.hpp"
#include "stagegraph/schedule.hpp"
#include "stagegraph/trace.hpp"
#include "stagegraph/traverse.hpp"

namespace stagegraph::testing {

/// A schedule with its index and a trace. Movable; the index stays valid.
struct Fixture {
  std::unique_ptr<Schedule> schedule;
  std::unique_ptr<ScheduleIndex> index;
  Trace trace;

  static Fixture parse(const std::string& schedule_text,
                       const std::string& trace_text);
  static Fixture from(Design design);

  std::vector<ResolvedEvent> events() const;
  SimGraph graph(const CompilerConfig& config = {}) const;
};

/// Producer writes four tokens into `f` at one per stage and then works ten
/// more stages; consumer reads one token every three stages.
extern const char* const kProducerConsumerSchedule;
extern const char* const kProducerConsumerTrace;

/// Longest path to graph.end computed with Kahn's algorithm over the edge set
/// with every floating edge resolved for `depths`; nullopt on a cycle.
std::optional<Cycles> reference_cycles(const SimGraph& graph,
                                       const DepthVector& depths);

/// True if every witness node depends on the one before it (and the first on
/// the last) through a committed edge or a floating edge resolved for
/// `depths`.
bool is_dependency_cycle(const SimGraph& graph, const DepthVector& depths,
                         const std::vector<NodeId>& witness);

inline bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

/// Generator parameters sized for the equivalence corpus: up to 8 processes,
/// 12 fifos and 2 AXI interfaces.
GenParams corpus_params(std::uint64_t seed);

/// `count` depth vectors with every depth uniform in [lo, hi].
std::vector<DepthVector> random_depths(std::mt19937_64& rng, std::size_t fifos,
                                       std::uint64_t lo, std::uint64_t hi,
                                       std::size_t count);

}  // namespace stagegraph::testing

#endif  // STAGEGRAPH_TESTS_SUPPORT_HPP_
