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

// FIFO-depth design-space exploration over one shared, read-only SimGraph.

#ifndef STAGEGRAPH_DSE_HPP_
#define STAGEGRAPH_DSE_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stagegraph/graph.hpp"
#include "stagegraph/traverse.hpp"

namespace stagegraph {

struct DseSpec {
  enum class Mode { kExplicit, kRandom, kSweep };
  Mode mode = Mode::kExplicit;

  // kExplicit.
  std::vector<DepthVector> points;

  // kRandom: `count` vectors, every depth uniform in [lo, hi].
  std::size_t count = 0;
  std::uint64_t seed = 0;

  // kRandom and kSweep share the inclusive range.
  std::uint64_t lo = 1;
  std::uint64_t hi = 1;

  // kSweep: `base` with `fifo` set to each value in [lo, hi].
  FifoId fifo;
  DepthVector base;
};

/// Design points for `spec` over a design with `fifo_count` fifos. Random
/// mode is deterministic per seed. Throws SimError on empty ranges or depth
/// 0.
std::vector<DepthVector> sample(const DseSpec& spec, std::size_t fifo_count);

struct DsePoint {
  DepthVector depths;
  SimResult result;
  // Set when the traversal itself failed; `result` is then meaningless.
  std::optional<std::string> error;
  double micros = 0;
};

struct DseReport {
  std::vector<DsePoint> points;
  std::size_t parallelism = 1;
  std::optional<Cycles> min_cycles;
  // First point reaching min_cycles.
  std::optional<std::size_t> argmin;
  std::size_t deadlocks = 0;
  std::size_t errors = 0;
  std::uint64_t argmin_buffer_total = 0;
  double total_point_micros = 0;
  double mean_point_micros = 0;
  double wall_micros = 0;
  // total_point_micros / wall_micros: the speedup over evaluating the same
  // points one after another on one worker.
  double speedup = 0;
};

/// Evaluates every point with `parallelism` workers pulling from a shared
/// queue. Per-point results do not depend on parallelism or scheduling.
DseReport evaluate(const SimGraph& graph, const std::vector<DepthVector>& points,
                   std::size_t parallelism);

/// Index of the non-deadlocked point with the fewest cycles among those whose
/// total depth fits `budget`; ties go to the smaller total, then to the
/// lexicographically smaller depth vector.
std::optional<std::size_t> best_under_budget(const DseReport& report,
                                             std::uint64_t budget);

/// Machine-readable report. Timing fields are omitted when `timing` is false.
void write_report_json(const DseReport& report,
                       const std::vector<std::string>& fifo_names,
                       std::ostream& out, bool timing = true);
/// One row per point: depths, cycles or DEADLOCK, micros.
void write_report_csv(const DseReport& report,
                      const std::vector<std::string>& fifo_names,
                      std::ostream& out, bool timing = true);

}  // namespace stagegraph

#endif  // STAGEGRAPH_DSE_HPP_
