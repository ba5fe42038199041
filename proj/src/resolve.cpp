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

#include "stagegraph/resolve.hpp"

#include <algorithm>
#include <optional>

namespace stagegraph {
namespace {

Stage iteration_step(const LoopInfo& info) {
  return info.pipelined ? Stage{info.ii} : Stage{info.overlap} + 1;
}

class Resolver {
 public:
  Resolver(const Trace& trace, const ScheduleIndex& index,
           const EventSink& sink)
      : trace_(trace), index_(index), sink_(sink), match_(match_loops(trace)) {
    flat_ = std::none_of(trace.records.begin(), trace.records.end(),
                         [](const TraceRecord& r) {
                           return std::holds_alternative<LoopBegin>(r);
                         });
  }

  std::vector<Activation> run() {
    walk(0, trace_.records.size(), std::nullopt);
    if (!frames_.empty() || activations_.empty()) {
      fail(trace_.records.size(), "trace ends with unreturned calls");
    }
    return std::move(activations_);
  }

 private:
  // A loop recognized from its header block in an expanded trace.
  struct FlatLoop {
    const ScheduleIndex::LoopRef* ref = nullptr;
    Stage start = 0;
    std::uint64_t iteration = 0;
    // Index in the loop's block list of the next expected block.
    std::size_t next = 0;
  };

  struct Frame {
    ActivationId id;
    FunctionId fn;
    Stage cursor = 1;
    Stage bound = 0;
    Stage last_stage = 0;
    const BlockSchedule* block = nullptr;
    Stage block_start = 0;
    std::size_t slot = 0;
    // Start of the innermost loop iteration, when inside one.
    std::optional<Stage> iteration_start{};
    std::vector<FlatLoop> flat_loops{};
    std::uint32_t calls = 0;
  };

  [[noreturn]] static void fail(std::size_t record, const std::string& msg) {
    throw ResolveError(record, msg);
  }

  Frame& top(std::size_t record) {
    if (frames_.empty()) fail(record, "record outside any activation");
    return frames_.back();
  }

  void walk(std::size_t begin, std::size_t end,
            std::optional<std::uint64_t> iteration) {
    for (std::size_t i = begin; i < end; ++i) {
      const TraceRecord& record = trace_.records[i];
      if (const auto* block = std::get_if<BlockRecord>(&record)) {
        on_block(top(i), block->block, i);
      } else if (const auto* loop = std::get_if<LoopBegin>(&record)) {
        run_loop(*loop, i);
        i = match_[i];
      } else if (const auto* event = std::get_if<EventRecord>(&record)) {
        if (iteration && event->iterations &&
            !event->iterations->contains(*iteration)) {
          continue;
        }
        on_event(event->kind, i);
      }
    }
  }

  void run_loop(const LoopBegin& loop, std::size_t i) {
    Frame& frame = top(i);
    const auto* ref = loop.blocks.empty()
                          ? nullptr
                          : index_.loop_by_header(frame.fn, loop.blocks.front());
    if (ref == nullptr || *ref->blocks != loop.blocks) {
      fail(i, "no loopinfo for loop blocks");
    }
    const Stage start = frame.cursor;
    const Stage step = iteration_step(ref->info);
    const auto saved = frame.iteration_start;
    const std::size_t depth = frames_.size();
    for (std::uint64_t k = 0; k < loop.tripcount; ++k) {
      frames_.back().cursor = start + k * step;
      frames_.back().iteration_start = start + k * step;
      frames_.back().block = nullptr;
      walk(i + 1, match_[i], k);
      if (frames_.size() != depth) fail(i, "call or return inside a loop");
    }
    Frame& after = frames_.back();
    after.cursor =
        loop_end_stage(start, ref->info, loop.tripcount, ref->header_len);
    after.iteration_start = saved;
    after.block = nullptr;
  }

  void place_block(Frame& frame, const BlockSchedule* block) {
    frame.block = block;
    frame.block_start = frame.cursor;
    frame.slot = 0;
    frame.cursor += block->length;
  }

  void close_flat_loop(Frame& frame, std::size_t i) {
    const FlatLoop& loop = frame.flat_loops.back();
    if (loop.next != loop.ref->blocks->size()) {
      fail(i, "incomplete loop iteration");
    }
    frame.cursor = loop_end_stage(loop.start, loop.ref->info,
                                  loop.iteration + 1, loop.ref->header_len);
    frame.flat_loops.pop_back();
    frame.iteration_start =
        frame.flat_loops.empty()
            ? std::nullopt
            : std::optional<Stage>(frame.flat_loops.back().start +
                                   frame.flat_loops.back().iteration *
                                       iteration_step(
                                           frame.flat_loops.back().ref->info));
  }

  void on_block(Frame& frame, const std::string& name, std::size_t i) {
    const BlockSchedule* block = index_.block(frame.fn, name);
    if (block == nullptr) fail(i, "unknown block '" + name + "'");
    if (!flat_) {
      place_block(frame, block);
      return;
    }
    while (!frame.flat_loops.empty()) {
      FlatLoop& loop = frame.flat_loops.back();
      const auto& blocks = *loop.ref->blocks;
      if (loop.next > 0 && loop.next < blocks.size() &&
          blocks[loop.next] == name) {
        ++loop.next;
        place_block(frame, block);
        return;
      }
      if (loop.next == blocks.size() && blocks.front() == name) {
        ++loop.iteration;
        loop.next = 1;
        frame.cursor =
            loop.start + loop.iteration * iteration_step(loop.ref->info);
        frame.iteration_start = frame.cursor;
        place_block(frame, block);
        return;
      }
      if (loop.next < blocks.size()) {
        if (index_.loop_by_header(frame.fn, name) != nullptr) break;
        fail(i, "block '" + name + "' interrupts a loop iteration");
      }
      close_flat_loop(frame, i);
    }
    if (const auto* ref = index_.loop_by_header(frame.fn, name)) {
      frame.flat_loops.push_back(FlatLoop{ref, frame.cursor, 0, 1});
      frame.iteration_start = frame.cursor;
      place_block(frame, block);
      return;
    }
    if (index_.loop_containing(frame.fn, name) != nullptr) {
      fail(i, "loop block '" + name + "' outside its loop");
    }
    place_block(frame, block);
  }

  void emit(Frame& frame, ResolvedEvent event, std::size_t i) {
    if (event.dyn_stage < frame.bound) {
      fail(i, "event at stage " + std::to_string(event.dyn_stage) +
                  " precedes the commit bound " + std::to_string(frame.bound));
    }
    frame.bound = std::max(frame.bound, event.dyn_stage - event.static_stage);
    frame.last_stage = std::max(frame.last_stage, event.dyn_stage);
    sink_(event);
  }

  std::uint32_t target_of(const EventKind& kind, std::size_t i) const {
    std::optional<std::uint32_t> id;
    if (kind.tag == EventTag::kCall) {
      if (auto f = index_.function(kind.target)) id = f->value;
    } else if (is_fifo_event(kind.tag)) {
      if (auto f = index_.fifo(kind.target)) id = f->value;
    } else if (auto a = index_.axi(kind.target)) {
      id = a->value;
    }
    if (!id) fail(i, "unknown id '" + kind.target + "'");
    return *id;
  }

  void on_event(const EventKind& kind, std::size_t i) {
    if (kind.tag == EventTag::kReturn) {
      on_return(i);
      return;
    }
    const std::uint32_t target = target_of(kind, i);
    if (kind.tag == EventTag::kCall && frames_.empty()) {
      if (!activations_.empty()) fail(i, "call after the top function returned");
      if (FunctionId{target} != index_.top()) {
        fail(i, "first call must be to the top function");
      }
      activations_.push_back(Activation{FunctionId{target}, ActivationId{0}, {}, 1});
      frames_.push_back(Frame{.id = ActivationId{0}, .fn = FunctionId{target}});
      return;
    }
    Frame& frame = top(i);
    if (frame.block == nullptr) fail(i, "event outside a block");
    if (frame.slot >= frame.block->slots.size()) fail(i, "slot overrun");
    const SlotTemplate& slot = frame.block->slots[frame.slot++];
    if (slot.tag != kind.tag) fail(i, "event does not match its slot");
    ResolvedEvent event;
    event.instance = frame.id;
    event.module = frame.fn;
    event.dyn_stage = frame.block_start + slot.static_stage;
    event.static_stage =
        event.dyn_stage - frame.iteration_start.value_or(frame.block_start);
    event.tag = kind.tag;
    event.target = target;
    event.burst = kind.burst;
    event.last = kind.last;
    if (kind.tag != EventTag::kCall) {
      emit(frame, event, i);
      return;
    }
    const ActivationId child{static_cast<std::uint32_t>(activations_.size())};
    Activation activation{FunctionId{target}, frame.id,
                          activations_[frame.id.index()].call_path, 1};
    activation.call_path.push_back(frame.calls++);
    activations_.push_back(std::move(activation));
    event.callee = child;
    emit(frame, event, i);
    frames_.push_back(Frame{.id = child, .fn = FunctionId{target}});
  }

  void on_return(std::size_t i) {
    Frame& frame = top(i);
    while (!frame.flat_loops.empty()) close_flat_loop(frame, i);
    if (frame.iteration_start) fail(i, "return inside a loop");
    if (frame.cursor < frame.last_stage) {
      fail(i, "return precedes the activation's last event");
    }
    ResolvedEvent event;
    event.instance = frame.id;
    event.module = frame.fn;
    event.dyn_stage = frame.cursor;
    event.tag = EventTag::kReturn;
    emit(frame, event, i);
    activations_[frame.id.index()].return_stage = frame.cursor;
    frames_.pop_back();
  }

  const Trace& trace_;
  const ScheduleIndex& index_;
  const EventSink& sink_;
  std::vector<std::size_t> match_;
  bool flat_ = false;
  std::vector<Frame> frames_;
  std::vector<Activation> activations_;
};

}  // namespace

std::vector<Activation> resolve(const Trace& trace, const ScheduleIndex& index,
                                const EventSink& sink) {
  return Resolver(trace, index, sink).run();
}

Resolution resolve(const Trace& trace, const ScheduleIndex& index) {
  Resolution out;
  out.activations = resolve(trace, index, [&](const ResolvedEvent& event) {
    out.events.push_back(event);
  });
  return out;
}

}  // namespace stagegraph
