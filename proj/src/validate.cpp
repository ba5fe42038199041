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

#include "stagegraph/validate.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>

#include "stagegraph/resolve.hpp"

namespace stagegraph {
namespace {

class Report {
 public:
  void add(std::size_t record, std::string message) {
    if (seen_.emplace(record, message).second) {
      violations_.push_back({record, std::move(message)});
    }
  }
  bool empty() const { return violations_.empty(); }
  std::vector<Violation> take() {
    std::stable_sort(violations_.begin(), violations_.end(),
                     [](const Violation& a, const Violation& b) {
                       return a.record < b.record;
                     });
    return std::move(violations_);
  }

 private:
  std::vector<Violation> violations_;
  std::set<std::pair<std::size_t, std::string>> seen_;
};

std::string quoted(std::string_view s) { return "'" + std::string(s) + "'"; }

// Checks on the stored (compressed) records: call nesting, loop regions,
// block membership, qualifiers and declared ids.
class StructureCheck {
 public:
  StructureCheck(const Trace& trace, const ScheduleIndex& index, Report& report)
      : trace_(trace), index_(index), report_(report) {
    compressed_ = std::any_of(trace.records.begin(), trace.records.end(),
                              [](const TraceRecord& r) {
                                return std::holds_alternative<LoopBegin>(r);
                              });
  }

  void run() {
    const auto& records = trace_.records;
    if (records.empty()) {
      report_.add(0, "empty trace");
      return;
    }
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (finished_) {
        report_.add(i, "record after the top function returned");
        break;
      }
      std::visit([&](const auto& r) { visit(r, i); }, records[i]);
    }
    if (!finished_) {
      report_.add(records.size() - 1, "trace ends with unreturned calls");
    }
  }

 private:
  struct Loop {
    const LoopBegin* begin = nullptr;
    std::vector<std::string> direct_blocks;
    bool needs_block = false;
  };
  struct Frame {
    std::optional<FunctionId> fn;
    std::vector<Loop> loops;
    bool block_open = false;
    // Header of a loop that closed immediately before the next record.
    std::optional<std::string> closed_header;
  };

  Frame* top() { return frames_.empty() ? nullptr : &frames_.back(); }

  bool check_in_activation(std::size_t i) {
    if (frames_.empty()) {
      report_.add(i, "record outside any activation");
      return false;
    }
    return true;
  }

  void visit(const BlockRecord& r, std::size_t i) {
    if (!check_in_activation(i)) return;
    Frame& frame = *top();
    if (frame.closed_header && *frame.closed_header == r.block) {
      report_.add(i, "block " + quoted(r.block) +
                         " directly follows its own loop region");
    }
    frame.closed_header.reset();
    frame.block_open = true;
    if (!frame.fn) return;
    if (index_.block(*frame.fn, r.block) == nullptr) {
      report_.add(i, "block " + quoted(r.block) + " not in function " +
                         quoted(index_.function_name(*frame.fn)));
      return;
    }
    if (frame.loops.empty()) {
      // Expanded traces carry no loop records; loops are recognized from
      // their header blocks instead.
      if (compressed_ &&
          index_.loop_containing(*frame.fn, r.block) != nullptr) {
        report_.add(i, "loop block " + quoted(r.block) +
                           " outside a loop region");
      }
    } else {
      frame.loops.back().direct_blocks.push_back(r.block);
      frame.loops.back().needs_block = false;
    }
  }

  void visit(const LoopBegin& r, std::size_t i) {
    if (!check_in_activation(i)) return;
    Frame& frame = *top();
    if (frame.closed_header && !r.blocks.empty() &&
        *frame.closed_header == r.blocks.front()) {
      report_.add(i, "loop directly follows a loop with the same header");
    }
    frame.closed_header.reset();
    frame.block_open = false;
    if (r.blocks.empty()) {
      report_.add(i, "loop without blocks");
    } else if (frame.fn) {
      const auto* ref = index_.loop_by_header(*frame.fn, r.blocks.front());
      if (ref == nullptr || *ref->blocks != r.blocks) {
        report_.add(i, "no loopinfo for loop blocks in function " +
                           quoted(index_.function_name(*frame.fn)));
      }
    }
    frame.loops.push_back(Loop{&r, {}, false});
  }

  void visit(const LoopEnd&, std::size_t i) {
    if (!check_in_activation(i)) return;
    Frame& frame = *top();
    if (frame.loops.empty()) {
      report_.add(i, "end_loop without loop");
      return;
    }
    Loop loop = std::move(frame.loops.back());
    frame.loops.pop_back();
    if (loop.direct_blocks != loop.begin->blocks) {
      report_.add(i, "loop region blocks do not match the loop's block list");
    }
    if (loop.needs_block) {
      report_.add(i, "nested loop must be followed by a block record");
    }
    if (!frame.loops.empty()) frame.loops.back().needs_block = true;
    frame.block_open = false;
    frame.closed_header =
        loop.begin->blocks.empty() ? std::string() : loop.begin->blocks.front();
  }

  void visit(const EventRecord& r, std::size_t i) {
    const EventKind& kind = r.kind;
    if (kind.tag == EventTag::kCall) {
      call(r, i);
      return;
    }
    if (kind.tag == EventTag::kReturn) {
      ret(r, i);
      return;
    }
    if (!check_in_activation(i)) return;
    Frame& frame = *top();
    frame.closed_header.reset();
    if (!frame.block_open) report_.add(i, "event outside a block");
    if (r.iterations) {
      if (frame.loops.empty()) {
        report_.add(i, "iteration qualifier outside a loop region");
      } else if (r.iterations->last >= frame.loops.back().begin->tripcount) {
        report_.add(i, "iteration qualifier beyond the loop's tripcount");
      }
    }
    if (is_fifo_event(kind.tag)) {
      if (!index_.fifo(kind.target)) {
        report_.add(i, "undeclared fifo " + quoted(kind.target));
      }
    } else if (!index_.axi(kind.target)) {
      report_.add(i, "undeclared axi interface " + quoted(kind.target));
    }
  }

  void call(const EventRecord& r, std::size_t i) {
    if (r.iterations) report_.add(i, "iteration qualifier on a call");
    auto callee = index_.function(r.kind.target);
    if (!callee) report_.add(i, "unknown function " + quoted(r.kind.target));
    if (frames_.empty()) {
      if (i != 0) {
        report_.add(i, "call outside any activation");
      } else if (r.kind.target != index_.schedule().top) {
        report_.add(i, "first record must call the top function " +
                           quoted(index_.schedule().top));
      }
    } else {
      Frame& frame = *top();
      frame.closed_header.reset();
      if (!frame.loops.empty()) report_.add(i, "call inside a loop region");
      if (!frame.block_open) report_.add(i, "event outside a block");
    }
    frames_.push_back(Frame{callee, {}, false, std::nullopt});
  }

  void ret(const EventRecord& r, std::size_t i) {
    if (r.iterations) report_.add(i, "iteration qualifier on a return");
    if (frames_.empty()) {
      report_.add(i, "return without call");
      return;
    }
    if (!top()->loops.empty()) report_.add(i, "return inside a loop region");
    frames_.pop_back();
    if (frames_.empty()) finished_ = true;
  }

  const Trace& trace_;
  const ScheduleIndex& index_;
  Report& report_;
  std::vector<Frame> frames_;
  bool compressed_ = false;
  bool finished_ = false;
};

// Checks on the logically expanded trace: slot binding, bursts and fifo
// ownership. Assumes StructureCheck passed.
class FlowCheck {
 public:
  FlowCheck(const Trace& trace, const ScheduleIndex& index, Report& report)
      : trace_(trace), index_(index), report_(report),
        fifos_(index.fifo_count()) {}

  void run() {
    for_each_expanded(trace_, [&](const TraceRecord& record, std::size_t i) {
      if (const auto* block = std::get_if<BlockRecord>(&record)) {
        Frame& frame = frames_.back();
        close_block(frame, i);
        frame.block = index_.block(frame.fn, block->block);
        frame.block_name = block->block;
        frame.slot = 0;
      } else if (const auto* event = std::get_if<EventRecord>(&record)) {
        on_event(event->kind, i);
      }
    });
    for (std::size_t f = 0; f < fifos_.size(); ++f) {
      const FifoState& state = fifos_[f];
      if (state.reads != state.writes) {
        report_.add(state.last_record,
                    "fifo " + quoted(index_.fifo_name(FifoId{static_cast<std::uint32_t>(f)})) +
                        " has " + std::to_string(state.writes) +
                        " write(s) but " + std::to_string(state.reads) +
                        " read(s)");
      }
    }
  }

 private:
  struct Frame {
    FunctionId fn;
    std::uint32_t activation = 0;
    const BlockSchedule* block = nullptr;
    std::string block_name{};
    std::size_t slot = 0;
    // Remaining transfers of open bursts, per interface, in issue order.
    std::map<std::string, std::deque<std::uint64_t>> reads{};
    std::map<std::string, std::deque<std::uint64_t>> writes{};
    std::map<std::string, std::uint64_t> unanswered{};
  };
  struct FifoState {
    std::optional<std::uint32_t> writer;
    std::optional<std::uint32_t> reader;
    std::uint64_t writes = 0;
    std::uint64_t reads = 0;
    std::size_t last_record = 0;
  };

  void close_block(Frame& frame, std::size_t i) {
    if (frame.block != nullptr && frame.slot < frame.block->slots.size()) {
      const SlotTemplate& slot = frame.block->slots[frame.slot];
      report_.add(i, "slot underrun in block " + quoted(frame.block_name) +
                         ": expected " + std::string(event_keyword(slot.tag)) +
                         " at stage " + std::to_string(slot.static_stage));
    }
    frame.block = nullptr;
  }

  void bind_slot(Frame& frame, const EventKind& kind, std::size_t i) {
    if (frame.block == nullptr) return;
    if (frame.slot >= frame.block->slots.size()) {
      report_.add(i, "slot overrun in block " + quoted(frame.block_name) +
                         ": unexpected " +
                         std::string(event_keyword(kind.tag)));
      return;
    }
    const SlotTemplate& slot = frame.block->slots[frame.slot++];
    if (slot.tag != kind.tag) {
      report_.add(i, "event " + std::string(event_keyword(kind.tag)) +
                         " does not match slot kind " +
                         std::string(event_keyword(slot.tag)) + " in block " +
                         quoted(frame.block_name));
    } else if (!slot.target.empty() && slot.target != kind.target) {
      report_.add(i, "event target " + quoted(kind.target) +
                         " does not match slot target " + quoted(slot.target));
    }
  }

  void on_event(const EventKind& kind, std::size_t i) {
    if (kind.tag == EventTag::kReturn) {
      Frame& frame = frames_.back();
      close_block(frame, i);
      for (const auto& [iface, open] : frame.reads) {
        if (!open.empty()) report_.add(i, "burst underrun on axi " + quoted(iface));
      }
      for (const auto& [iface, open] : frame.writes) {
        if (!open.empty()) report_.add(i, "burst underrun on axi " + quoted(iface));
      }
      for (const auto& [iface, count] : frame.unanswered) {
        if (count != 0) {
          report_.add(i, "write burst without response on axi " + quoted(iface));
        }
      }
      frames_.pop_back();
      return;
    }
    if (kind.tag == EventTag::kCall) {
      if (!frames_.empty()) bind_slot(frames_.back(), kind, i);
      frames_.push_back(Frame{.fn = *index_.function(kind.target), .activation = next_activation_++});
      return;
    }
    Frame& frame = frames_.back();
    bind_slot(frame, kind, i);
    if (is_fifo_event(kind.tag)) {
      on_fifo(frame, kind, i);
    } else {
      on_axi(frame, kind, i);
    }
  }

  void on_fifo(const Frame& frame, const EventKind& kind, std::size_t i) {
    FifoState& state = fifos_[index_.fifo(kind.target)->index()];
    state.last_record = i;
    const bool write = kind.tag == EventTag::kFifoWrite;
    auto& owner = write ? state.writer : state.reader;
    const auto& other = write ? state.reader : state.writer;
    if (!owner) owner = frame.activation;
    if (*owner != frame.activation) {
      report_.add(i, "fifo " + quoted(kind.target) + std::string(" ") +
                         (write ? "written" : "read") +
                         " by more than one activation");
    }
    if (other && *other == frame.activation) {
      report_.add(i, "fifo " + quoted(kind.target) +
                         " read and written by the same activation");
    }
    // Readers may run ahead of the writer in trace order, so counts are only
    // compared once the whole trace has been seen.
    ++(write ? state.writes : state.reads);
  }

  void on_axi(Frame& frame, const EventKind& kind, std::size_t i) {
    const std::string& iface = kind.target;
    switch (kind.tag) {
      case EventTag::kAxiReadReq:
        frame.reads[iface].push_back(kind.burst);
        break;
      case EventTag::kAxiWriteReq:
        frame.writes[iface].push_back(kind.burst);
        break;
      case EventTag::kAxiRead:
      case EventTag::kAxiWrite: {
        const bool read = kind.tag == EventTag::kAxiRead;
        auto& open = (read ? frame.reads : frame.writes)[iface];
        if (open.empty()) {
          report_.add(i, std::string(read ? "read" : "write") +
                             " transfer without an open request on axi " +
                             quoted(iface));
          break;
        }
        const bool final_transfer = --open.front() == 0;
        if (final_transfer && !kind.last) {
          report_.add(i, "final transfer of a burst lacks the last flag");
        } else if (!final_transfer && kind.last) {
          report_.add(i, "last flag before the final transfer of a burst");
        }
        if (final_transfer) {
          open.pop_front();
          if (!read) ++frame.unanswered[iface];
        }
        break;
      }
      case EventTag::kAxiWriteResp: {
        auto& count = frame.unanswered[iface];
        if (count == 0) {
          report_.add(i, "write response without a completed burst on axi " +
                             quoted(iface));
        } else {
          --count;
        }
        break;
      }
      default:
        break;
    }
  }

  const Trace& trace_;
  const ScheduleIndex& index_;
  Report& report_;
  std::vector<Frame> frames_;
  std::vector<FifoState> fifos_;
  std::uint32_t next_activation_ = 0;
};

}  // namespace

std::vector<Violation> validate_trace(const Trace& trace,
                                      const Schedule& schedule) {
  Report report;
  try {
    match_loops(trace);
  } catch (const ValidationError& e) {
    report.add(0, e.what());
    return report.take();
  }
  ScheduleIndex index(schedule);
  StructureCheck(trace, index, report).run();
  if (report.empty()) FlowCheck(trace, index, report).run();
  if (report.empty()) {
    try {
      resolve(trace, index, [](const ResolvedEvent&) {});
    } catch (const ResolveError& e) {
      report.add(e.record(), e.what());
    }
  }
  return report.take();
}

void require_valid(const Trace& trace, const Schedule& schedule) {
  auto violations = validate_trace(trace, schedule);
  if (violations.empty()) return;
  std::string message = "trace does not match schedule:";
  const std::size_t shown = std::min<std::size_t>(violations.size(), 5);
  for (std::size_t i = 0; i < shown; ++i) {
    message += "\n  record " + std::to_string(violations[i].record) + ": " +
               violations[i].message;
  }
  if (violations.size() > shown) {
    message += "\n  (" + std::to_string(violations.size() - shown) + " more)";
  }
  throw ValidationError(message);
}

}  // namespace stagegraph
