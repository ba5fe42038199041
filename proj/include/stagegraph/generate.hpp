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

// Synthetic dataflow designs: a top function calling producer/consumer
// processes that talk over FIFOs and AXI interfaces inside fixed-bound loops.

#ifndef STAGEGRAPH_GENERATE_HPP_
#define STAGEGRAPH_GENERATE_HPP_

#include <cstdint>
#include <optional>
#include <string_view>

#include "stagegraph/schedule.hpp"
#include "stagegraph/trace.hpp"

namespace stagegraph {

enum class Topology { kChain, kTree, kRandomDag };

std::string_view topology_name(Topology topology);
std::optional<Topology> topology_from_name(std::string_view name);

/// Ranges are inclusive. Modules count processes; the top function is extra.
struct GenParams {
  std::uint64_t seed = 1;
  std::uint32_t min_modules = 2;
  std::uint32_t max_modules = 4;
  std::uint32_t min_fifos = 1;
  std::uint32_t max_fifos = 4;
  std::uint64_t max_tripcount = 16;
  double pipelined_probability = 0.5;
  std::uint32_t min_axis = 0;
  std::uint32_t max_axis = 1;
  std::uint64_t min_tokens = 1;
  std::uint64_t max_tokens = 8;
  Topology topology = Topology::kChain;
};

struct Design {
  Schedule schedule;
  // Compressed: every repeated block sequence is a loop record.
  Trace trace;
};

/// Throws Error on empty ranges or out-of-range values.
void check_params(const GenParams& params);

/// Deterministic per params. FIFOs only flow from lower- to higher-numbered
/// processes, so the design completes once every depth covers its FIFO's
/// token count.
Design generate_design(const GenParams& params);

/// Two processes, each writing two tokens to the other and then reading two.
/// Deadlocks with both depths 1, completes with both depths 2.
Design cross_coupled_design();

/// One pipelined loop reading a single `tripcount`-beat AXI burst, then one
/// token passed over a FIFO to a second process.
Design burst_loop_design(std::uint64_t tripcount);

}  // namespace stagegraph

#endif  // STAGEGRAPH_GENERATE_HPP_
