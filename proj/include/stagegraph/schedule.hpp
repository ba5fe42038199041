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

// Static schedule model: per-function block lengths, the static stage of each
// event slot in a block, fixed-bound loop parameters, and the design's FIFOs
// and AXI interfaces.

#ifndef STAGEGRAPH_SCHEDULE_HPP_
#define STAGEGRAPH_SCHEDULE_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stagegraph/common.hpp"
#include "stagegraph/trace.hpp"

namespace stagegraph {

/// An event position inside a block. `target` names the callee (required for
/// calls) or pins the fifo/axi id; empty accepts any id from the trace.
struct SlotTemplate {
  Stage static_stage = 0;
  EventTag tag = EventTag::kFifoRead;
  std::string target;

  bool operator==(const SlotTemplate&) const = default;
};

struct BlockSchedule {
  Stage length = 1;
  // Ordered by static_stage; equal stages keep their declaration order.
  std::vector<SlotTemplate> slots;

  bool operator==(const BlockSchedule&) const = default;
};

struct LoopInfo {
  bool pipelined = false;
  std::uint32_t ii = 1;
  std::uint32_t overlap = 0;

  bool operator==(const LoopInfo&) const = default;
};

struct FunctionSchedule {
  std::map<std::string, BlockSchedule> blocks;
  // Keyed by the loop's block list; the first block is the loop header.
  std::map<std::vector<std::string>, LoopInfo> loops;

  bool operator==(const FunctionSchedule&) const = default;
};

struct AxiParams {
  Cycles read_latency = 64;
  Cycles write_resp_latency = 4;
  std::uint32_t rctl_depth = 16;
  Cycles request_overhead = 0;

  bool operator==(const AxiParams&) const = default;
};

struct Schedule {
  std::string top;
  std::map<std::string, FunctionSchedule> functions;
  std::set<std::string> fifos;
  std::map<std::string, AxiParams> axis;

  bool operator==(const Schedule&) const = default;
};

/// Parses and checks the schedule: dangling callees, duplicate ids, slot
/// stages, loop block membership and loop overlap lengths.
Schedule parse_schedule(std::istream& input);
Schedule parse_schedule(std::string_view text);

/// Throws ValidationError if `schedule` breaks a structural invariant.
/// parse_schedule runs this; builders that construct schedules in memory
/// should too.
void check_schedule(const Schedule& schedule);

void write_schedule(const Schedule& schedule, std::ostream& out);
std::string write_schedule(const Schedule& schedule);

/// Dynamic stage at which a fixed-bound loop hands control back to the code
/// after it:
///   pipelined:     start + overlap + ii * (tripcount - 1) + header_len
///   non-pipelined: start + overlap + (overlap + 1) * (tripcount - 1)
///                  + header_len
/// `header_len` accounts for the header block's extra execution.
Stage loop_end_stage(Stage start, const LoopInfo& info,
                     std::uint64_t tripcount, Stage header_len);

/// Dense ids and fast lookups over a Schedule. The schedule must outlive the
/// index.
class ScheduleIndex {
 public:
  struct LoopRef {
    const std::vector<std::string>* blocks = nullptr;
    LoopInfo info;
    Stage header_len = 0;
    // Stages of one iteration's direct blocks.
    Stage iteration_length = 0;
  };

  explicit ScheduleIndex(const Schedule& schedule);

  const Schedule& schedule() const { return *schedule_; }

  std::optional<FunctionId> function(std::string_view name) const;
  std::optional<FifoId> fifo(std::string_view name) const;
  std::optional<AxiId> axi(std::string_view name) const;

  const std::string& function_name(FunctionId id) const {
    return function_names_[id.index()];
  }
  const std::string& fifo_name(FifoId id) const {
    return fifo_names_[id.index()];
  }
  const std::string& axi_name(AxiId id) const { return axi_names_[id.index()]; }

  const std::vector<std::string>& function_names() const {
    return function_names_;
  }
  const std::vector<std::string>& fifo_names() const { return fifo_names_; }
  const std::vector<std::string>& axi_names() const { return axi_names_; }

  std::size_t function_count() const { return function_names_.size(); }
  std::size_t fifo_count() const { return fifo_names_.size(); }
  std::size_t axi_count() const { return axi_names_.size(); }

  FunctionId top() const { return top_; }
  const AxiParams& axi_params(AxiId id) const { return axi_params_[id.index()]; }

  const BlockSchedule* block(FunctionId fn, std::string_view name) const;
  /// Loop whose header (first block) is `header`.
  const LoopRef* loop_by_header(FunctionId fn, std::string_view header) const;
  /// Loop that lists `block` among its blocks.
  const LoopRef* loop_containing(FunctionId fn, std::string_view block) const;

 private:
  struct FunctionEntry {
    std::unordered_map<std::string, const BlockSchedule*> blocks;
    std::vector<LoopRef> loops;
    std::unordered_map<std::string, std::size_t> loop_of_header;
    std::unordered_map<std::string, std::size_t> loop_of_block;
  };

  const Schedule* schedule_;
  std::vector<std::string> function_names_;
  std::vector<std::string> fifo_names_;
  std::vector<std::string> axi_names_;
  std::unordered_map<std::string, std::uint32_t> function_ids_;
  std::unordered_map<std::string, std::uint32_t> fifo_ids_;
  std::unordered_map<std::string, std::uint32_t> axi_ids_;
  std::vector<AxiParams> axi_params_;
  std::vector<FunctionEntry> functions_;
  FunctionId top_;
};

}  // namespace stagegraph

#endif  // STAGEGRAPH_SCHEDULE_HPP_
