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

#include "stagegraph/oracle.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <queue>

namespace stagegraph {
namespace {

struct Group {
  Stage stage = 0;
  std::vector<const ResolvedEvent*> events;
};

struct ReadBurst {
  std::size_t request = 0;  // position in the interface's rctl order
  std::uint64_t remaining = 0;
  std::uint64_t burst = 0;
  Cycles issued = 0;
};

// Per-interface AXI state of one activation.
struct Port {
  std::deque<ReadBurst> reads;
  std::uint32_t requests_issued = 0;
  std::deque<std::uint64_t> writes;
  std::deque<Cycles> completed_writes;
};

struct Module {
  FunctionId fn;
  std::vector<Group> groups;
  std::size_t next = 0;
  bool spawned = false;
  bool done = false;
  Cycles ready = 0;
  Cycles done_time = 0;
  std::vector<std::uint32_t> children;
  std::vector<Port> ports;
  // Position in its interface's rctl order of each read request this
  // activation issues, by interface and local issue number.
  std::vector<std::vector<std::size_t>> request_slots;
};

struct FifoHw {
  std::vector<Cycles> write_times;
  std::vector<Cycles> read_times;
};

// Number of entries x in the sorted `times` with x + delay <= t.
std::size_t count_ready(const std::vector<Cycles>& times, Cycles delay,
                        Cycles t) {
  if (t < delay) return 0;
  return std::upper_bound(times.begin(), times.end(), t - delay) -
         times.begin();
}

class Simulator {
 public:
  Simulator(const std::vector<ResolvedEvent>& events, const ScheduleIndex& index,
            const DepthVector& depths, const CompilerConfig& config)
      : index_(index), depths_(depths), config_(config),
        fifos_(index.fifo_count()), last_read_(index.axi_count()) {
    if (depths.size() != index.fifo_count()) {
      throw SimError("depth vector does not match the design's fifos");
    }
    build(events);
  }

  OracleResult run() {
    OracleResult out;
    if (modules_.empty()) throw SimError("empty event stream");
    modules_[0].spawned = true;
    modules_[0].ready = 0;
    Cycles t = 0;
    while (true) {
      bool fired = true;
      while (fired) {
        fired = false;
        for (std::uint32_t m = 0; m < modules_.size(); ++m) {
          if (try_fire(m, t)) fired = true;
        }
      }
      if (modules_[0].done) {
        out.result = SimResult::make_cycles(modules_[0].done_time);
        return out;
      }
      while (!wakeups_.empty() && wakeups_.top() <= t) wakeups_.pop();
      if (wakeups_.empty()) break;
      t = wakeups_.top();
    }
    out.result = SimResult::make_deadlock({});
    for (std::uint32_t m = 0; m < modules_.size(); ++m) {
      const Module& mod = modules_[m];
      if (!mod.spawned || mod.done) continue;
      out.stalled.push_back(index_.function_name(mod.fn) + "#" +
                            std::to_string(m) + " stalled at stage " +
                            std::to_string(mod.groups[mod.next].stage));
    }
    return out;
  }

 private:
  void build(const std::vector<ResolvedEvent>& events) {
    std::vector<std::map<Stage, std::vector<const ResolvedEvent*>>> staged;
    struct OrderEntry {
      Stage stage;
      std::size_t trace_index;
      const ResolvedEvent* event;
    };
    std::vector<std::vector<OrderEntry>> order_entries;
    for (std::size_t i = 0; i < events.size(); ++i) {
      const ResolvedEvent& e = events[i];
      const std::uint32_t a = e.instance.value;
      if (a >= modules_.size()) {
        modules_.resize(a + 1);
        staged.resize(a + 1);
        order_entries.resize(a + 1);
      }
      modules_[a].fn = e.module;
      staged[a][e.dyn_stage].push_back(&e);
      if (e.tag == EventTag::kCall || e.tag == EventTag::kAxiReadReq) {
        order_entries[a].push_back(OrderEntry{e.dyn_stage, i, &e});
      }
      if (e.tag == EventTag::kCall) {
        const std::uint32_t child = e.callee.value;
        if (child >= modules_.size()) {
          modules_.resize(child + 1);
          staged.resize(child + 1);
          order_entries.resize(child + 1);
        }
        modules_[a].children.push_back(child);
      }
    }
    for (std::size_t a = 0; a < modules_.size(); ++a) {
      staged[a].try_emplace(1);
      for (auto& [stage, list] : staged[a]) {
        modules_[a].groups.push_back(Group{stage, std::move(list)});
      }
      modules_[a].ports.resize(index_.axi_count());
      modules_[a].request_slots.resize(index_.axi_count());
      std::stable_sort(order_entries[a].begin(), order_entries[a].end(),
                       [](const OrderEntry& x, const OrderEntry& y) {
                         return x.stage != y.stage ? x.stage < y.stage
                                                   : x.trace_index < y.trace_index;
                       });
    }
    // Global read-request order per interface: an activation's requests in
    // stage order, with each callee's requests in place of its call.
    std::vector<std::size_t> issued(index_.axi_count(), 0);
    std::function<void(std::uint32_t)> splice = [&](std::uint32_t a) {
      for (const OrderEntry& entry : order_entries[a]) {
        if (entry.event->tag == EventTag::kCall) {
          splice(entry.event->callee.value);
        } else {
          const std::uint32_t axi = entry.event->target;
          modules_[a].request_slots[axi].push_back(issued[axi]++);
        }
      }
    };
    splice(0);
    for (std::size_t axi = 0; axi < issued.size(); ++axi) {
      last_read_[axi].assign(issued[axi], std::nullopt);
    }
  }

  void wake(Cycles at) { wakeups_.push(at); }

  // Fires the next stage group of module `m` at time `t` if all of its
  // events are unstalled.
  bool try_fire(std::uint32_t m, Cycles t) {
    Module& mod = modules_[m];
    if (!mod.spawned || mod.done || t < mod.ready) return false;
    const Group& group = mod.groups[mod.next];

    std::vector<Port> ports = mod.ports;
    std::map<std::uint32_t, std::uint64_t> reads_here;
    std::map<std::uint32_t, std::uint64_t> writes_here;
    std::vector<std::pair<std::uint32_t, std::size_t>> retired_here;
    bool returns = false;
    for (const ResolvedEvent* e : group.events) {
      switch (e->tag) {
        case EventTag::kFifoRead: {
          const FifoHw& fifo = fifos_[e->target];
          const std::uint64_t want = fifo.read_times.size() + ++reads_here[e->target];
          if (count_ready(fifo.write_times, config_.fifo_raw_delay, t) < want) {
            return false;
          }
          break;
        }
        case EventTag::kFifoWrite: {
          const FifoHw& fifo = fifos_[e->target];
          const std::uint64_t occupancy =
              fifo.write_times.size() -
              count_ready(fifo.read_times, config_.fifo_war_delay, t);
          if (occupancy + ++writes_here[e->target] > depths_[FifoId{e->target}]) {
            return false;
          }
          break;
        }
        case EventTag::kAxiReadReq: {
          Port& port = ports[e->target];
          const std::size_t slot =
              mod.request_slots[e->target].at(port.requests_issued++);
          port.reads.push_back(ReadBurst{slot, e->burst, e->burst, t});
          break;
        }
        case EventTag::kAxiRead: {
          Port& port = ports[e->target];
          if (port.reads.empty()) {
            throw SimError("axi read transfer without an open request");
          }
          ReadBurst& burst = port.reads.front();
          if (burst.remaining == burst.burst) {
            const AxiParams& params = index_.axi_params(AxiId{e->target});
            if (burst.issued + params.read_latency + params.request_overhead > t) {
              return false;
            }
            if (burst.request >= params.rctl_depth &&
                !rctl_slot_free(e->target, burst.request - params.rctl_depth,
                                retired_here, t)) {
              return false;
            }
          }
          if (--burst.remaining == 0) {
            retired_here.emplace_back(e->target, burst.request);
            port.reads.pop_front();
          }
          break;
        }
        case EventTag::kAxiWriteReq:
          ports[e->target].writes.push_back(e->burst);
          break;
        case EventTag::kAxiWrite: {
          Port& port = ports[e->target];
          if (port.writes.empty()) {
            throw SimError("axi write transfer without an open request");
          }
          if (--port.writes.front() == 0) {
            port.writes.pop_front();
            port.completed_writes.push_back(t);
          }
          break;
        }
        case EventTag::kAxiWriteResp: {
          Port& port = ports[e->target];
          if (port.completed_writes.empty()) {
            throw SimError("axi write response without a completed burst");
          }
          const Cycles latency =
              index_.axi_params(AxiId{e->target}).write_resp_latency;
          if (port.completed_writes.front() + latency > t) return false;
          port.completed_writes.pop_front();
          break;
        }
        case EventTag::kCall:
          break;
        case EventTag::kReturn:
          returns = true;
          for (std::uint32_t child : mod.children) {
            const Module& c = modules_[child];
            if (!c.done || c.done_time + config_.subcall_return_delay > t) {
              return false;
            }
          }
          break;
      }
    }

    // Unstalled: commit.
    for (const ResolvedEvent* e : group.events) {
      switch (e->tag) {
        case EventTag::kFifoRead:
          fifos_[e->target].read_times.push_back(t);
          wake(t + config_.fifo_war_delay);
          break;
        case EventTag::kFifoWrite:
          fifos_[e->target].write_times.push_back(t);
          wake(t + config_.fifo_raw_delay);
          break;
        case EventTag::kAxiReadReq: {
          const AxiParams& params = index_.axi_params(AxiId{e->target});
          wake(t + params.read_latency + params.request_overhead);
          break;
        }
        case EventTag::kAxiWrite:
          wake(t + index_.axi_params(AxiId{e->target}).write_resp_latency);
          break;
        case EventTag::kCall: {
          Module& child = modules_[e->callee.value];
          child.spawned = true;
          child.ready = t + config_.subcall_start_delay;
          wake(child.ready);
          break;
        }
        default:
          break;
      }
    }
    for (const auto& [axi, request] : retired_here) {
      last_read_[axi][request] = t;
      wake(t + config_.rctl_delay);
    }
    Module& self = modules_[m];
    self.ports = std::move(ports);
    if (returns) {
      self.done = true;
      self.done_time = t;
      wake(t + config_.subcall_return_delay);
      return true;
    }
    const Stage stage = self.groups[self.next].stage;
    ++self.next;
    if (self.next >= self.groups.size()) {
      throw SimError("activation ends without a return");
    }
    self.ready = t + (self.groups[self.next].stage - stage);
    wake(self.ready);
    return true;
  }

  bool rctl_slot_free(
      std::uint32_t axi, std::size_t request,
      const std::vector<std::pair<std::uint32_t, std::size_t>>& retired_here,
      Cycles t) const {
    std::optional<Cycles> retired = last_read_[axi][request];
    for (const auto& [a, r] : retired_here) {
      if (a == axi && r == request) retired = t;
    }
    return retired && *retired + config_.rctl_delay <= t;
  }

  const ScheduleIndex& index_;
  const DepthVector& depths_;
  CompilerConfig config_;
  std::vector<Module> modules_;
  std::vector<FifoHw> fifos_;
  // Time of the last transfer of each read request, by interface and
  // position in the rctl order.
  std::vector<std::vector<std::optional<Cycles>>> last_read_;
  std::priority_queue<Cycles, std::vector<Cycles>, std::greater<>> wakeups_;
};

}  // namespace

OracleResult simulate_events(const std::vector<ResolvedEvent>& events,
                             const ScheduleIndex& index,
                             const DepthVector& depths,
                             const CompilerConfig& config) {
  return Simulator(events, index, depths, config).run();
}

}  // namespace stagegraph
