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

// Execution trace data model and its loop-compressed text format.
//
// A trace is the ordered list of basic blocks a design executed, interleaved
// with the timing-relevant events (calls, FIFO and AXI traffic) those blocks
// produced. Fixed-bound loops are stored once: a `loop` record names the
// blocks of one iteration and the tripcount, and the records up to the
// matching `end_loop` describe a single iteration that is replicated
// logically. An event record inside a loop may carry an iteration qualifier
// (`@k` or `@lo..hi`) when its payload differs between iterations, e.g. the
// `last` flag of the final AXI transfer.

#ifndef STAGEGRAPH_TRACE_HPP_
#define STAGEGRAPH_TRACE_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "stagegraph/common.hpp"

namespace stagegraph {

enum class EventTag : std::uint8_t {
  kCall,
  kReturn,
  kFifoRead,
  kFifoWrite,
  kAxiReadReq,
  kAxiRead,
  kAxiWriteReq,
  kAxiWrite,
  kAxiWriteResp,
};

/// Keyword used for `tag` in both the trace and the schedule formats.
std::string_view event_keyword(EventTag tag);
std::optional<EventTag> event_tag_from_keyword(std::string_view keyword);

constexpr bool is_fifo_event(EventTag tag) {
  return tag == EventTag::kFifoRead || tag == EventTag::kFifoWrite;
}
constexpr bool is_axi_event(EventTag tag) {
  return tag >= EventTag::kAxiReadReq;
}
constexpr bool is_axi_request(EventTag tag) {
  return tag == EventTag::kAxiReadReq || tag == EventTag::kAxiWriteReq;
}
constexpr bool is_axi_transfer(EventTag tag) {
  return tag == EventTag::kAxiRead || tag == EventTag::kAxiWrite;
}

struct EventKind {
  EventTag tag = EventTag::kReturn;
  // Callee for calls, fifo-id or axi-id otherwise. Empty for returns.
  std::string target;
  // Transfers per burst; request kinds only.
  std::uint32_t burst = 0;
  // Final transfer of a burst; AXI read/write transfers only.
  bool last = false;

  bool operator==(const EventKind&) const = default;
};

/// Inclusive range of 0-based loop iterations.
struct IterationRange {
  std::uint64_t first = 0;
  std::uint64_t last = 0;

  bool contains(std::uint64_t k) const { return first <= k && k <= last; }
  bool operator==(const IterationRange&) const = default;
};

struct BlockRecord {
  std::string block;
  bool operator==(const BlockRecord&) const = default;
};

struct LoopBegin {
  std::vector<std::string> blocks;
  std::uint64_t tripcount = 1;
  bool operator==(const LoopBegin&) const = default;
};

struct LoopEnd {
  bool operator==(const LoopEnd&) const = default;
};

struct EventRecord {
  EventKind kind;
  // Only meaningful inside a loop region; absent means every iteration.
  std::optional<IterationRange> iterations;
  bool operator==(const EventRecord&) const = default;
};

using TraceRecord = std::variant<BlockRecord, LoopBegin, LoopEnd, EventRecord>;

struct Trace {
  std::string version = "v1";
  std::vector<TraceRecord> records;

  bool operator==(const Trace&) const = default;
};

inline constexpr std::string_view kTraceVersion = "v1";

Trace parse_trace(std::istream& input);
Trace parse_trace(std::string_view text);

void write_trace(const Trace& trace, std::ostream& out);
std::string write_trace(const Trace& trace);

/// For each record index, the index of the matching `end_loop` when the
/// record is a `loop`, otherwise the record's own index. Throws
/// ValidationError on unbalanced loop records.
std::vector<std::size_t> match_loops(const Trace& trace);

/// Calls `visit(record, source_index)` for every record of the loop-expanded
/// trace in order, without materializing it. Loop markers are not visited
/// and records filtered out by their iteration qualifier are skipped; the
/// rest are passed as stored.
void for_each_expanded(
    const Trace& trace,
    const std::function<void(const TraceRecord&, std::size_t)>& visit);

/// Replaces every loop region with `tripcount` copies of its iteration.
Trace expand_loops(const Trace& trace);

/// Number of records expand_loops would produce.
std::uint64_t expanded_record_count(const Trace& trace);

}  // namespace stagegraph

#endif  // STAGEGRAPH_TRACE_HPP_
