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

// Schedule resolution: binds every trace event to a dynamic stage of its
// function activation.

#ifndef STAGEGRAPH_RESOLVE_HPP_
#define STAGEGRAPH_RESOLVE_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "stagegraph/common.hpp"
#include "stagegraph/schedule.hpp"
#include "stagegraph/trace.hpp"

namespace stagegraph {

inline constexpr std::uint32_t kNoTarget = UINT32_MAX;

/// One function activation. Activation 0 is the top function; ids are
/// assigned in call order.
struct Activation {
  FunctionId function;
  // Parent activation; equal to the activation's own id for the root.
  ActivationId parent;
  // Call-site ordinals from the top, one per nesting level.
  std::vector<std::uint32_t> call_path;
  // Dynamic stage of the Return event.
  Stage return_stage = 1;

  bool operator==(const Activation&) const = default;
};

struct ResolvedEvent {
  ActivationId instance;
  FunctionId module;
  Stage dyn_stage = 1;
  // Offset from the commit bound: no later event of the same activation can
  // land at a stage below dyn_stage - static_stage.
  Stage static_stage = 0;
  EventTag tag = EventTag::kReturn;
  // FunctionId, FifoId or AxiId index depending on `tag`; kNoTarget for
  // returns.
  std::uint32_t target = kNoTarget;
  std::uint32_t burst = 0;
  bool last = false;
  // Activation started by a Call event.
  ActivationId callee;

  bool operator==(const ResolvedEvent&) const = default;
};

using EventSink = std::function<void(const ResolvedEvent&)>;

/// Resolution failure at a given trace record.
class ResolveError : public CompileError {
 public:
  ResolveError(std::size_t record, const std::string& message)
      : CompileError("record " + std::to_string(record) + ": " + message),
        record_(record) {}

  std::size_t record() const { return record_; }

 private:
  std::size_t record_;
};

/// Streams resolved events in trace order into `sink`; the Call event of an
/// activation precedes all of its events. Loop regions are replicated per
/// iteration; an already-expanded trace is recognized by its loop header
/// blocks. Returns the activation table. Throws ResolveError if the stage
/// bound is violated or if the trace does not fit the schedule; callers
/// should run validate_trace first for precise diagnostics.
std::vector<Activation> resolve(const Trace& trace, const ScheduleIndex& index,
                                const EventSink& sink);

struct Resolution {
  std::vector<Activation> activations;
  std::vector<ResolvedEvent> events;

  bool operator==(const Resolution&) const = default;
};

Resolution resolve(const Trace& trace, const ScheduleIndex& index);

}  // namespace stagegraph

#endif  // STAGEGRAPH_RESOLVE_HPP_
