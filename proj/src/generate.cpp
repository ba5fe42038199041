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

#include "stagegraph/generate.hpp"

#include <algorithm>
#include <random>
#include <utility>

namespace stagegraph {
namespace {

using Rng = std::mt19937_64;

template <typename T>
T draw(Rng& rng, T lo, T hi) {
  return std::uniform_int_distribution<T>(lo, hi)(rng);
}

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

struct Port {
  enum class Kind { kFifoWrite, kFifoRead, kAxiRead, kAxiWrite };
  Kind kind;
  std::string target;
  // Tokens for fifo ports, beats per burst for AXI ports.
  std::uint64_t count = 1;
  std::uint32_t requests = 1;

  bool is_fifo() const {
    return kind == Kind::kFifoWrite || kind == Kind::kFifoRead;
  }
};

struct SlotEvent {
  EventKind kind;
  // AXI transfers: `last` is set in the final iteration only.
  bool last_on_final = false;
};

struct LoopShape {
  Stage body_len = 1;
  std::vector<Stage> stages;
  bool pipelined = false;
  std::uint32_t ii = 1;
  std::uint32_t extra_overlap = 0;
};

// A null rng gives single-stage bodies and fixed loop parameters.
struct ShapePolicy {
  Rng* rng = nullptr;
  double pipelined_probability = 0;

  LoopShape draw_shape(std::size_t events) const {
    LoopShape shape;
    if (rng == nullptr) {
      shape.stages.assign(events, 0);
      shape.pipelined = pipelined_probability >= 1;
      return shape;
    }
    shape.body_len = draw<Stage>(*rng, 1, events + 2);
    for (std::size_t i = 0; i < events; ++i) {
      shape.stages.push_back(draw<Stage>(*rng, 0, shape.body_len - 1));
    }
    std::sort(shape.stages.begin(), shape.stages.end());
    shape.pipelined = coin(*rng, pipelined_probability);
    shape.ii = draw<std::uint32_t>(*rng, 1, 2);
    if (!shape.pipelined) shape.ii = 1;
    shape.extra_overlap = draw<std::uint32_t>(*rng, 0, 1);
    return shape;
  }

  Stage draw_len(Stage hi) const {
    return rng == nullptr ? 1 : draw<Stage>(*rng, 1, hi);
  }
};

class FunctionWriter {
 public:
  FunctionWriter(FunctionSchedule& fn, std::vector<TraceRecord>& out)
      : fn_(fn), out_(out) {}

  void block(const std::string& name, Stage length,
             const std::vector<std::pair<Stage, EventKind>>& events) {
    BlockSchedule schedule{.length = length, .slots = {}};
    for (const auto& [stage, kind] : events) {
      schedule.slots.push_back(
          SlotTemplate{.static_stage = stage, .tag = kind.tag, .target = kind.target});
    }
    auto [it, inserted] = fn_.blocks.emplace(name, schedule);
    if (!inserted && it->second != schedule) {
      throw Error("internal: block '" + name + "' emitted with two shapes");
    }
    out_.push_back(BlockRecord{name});
    for (const auto& [_, kind] : events) {
      out_.push_back(EventRecord{kind, std::nullopt});
    }
  }

  void loop(const std::string& tag, std::uint64_t trips, const LoopShape& shape,
            const std::vector<SlotEvent>& events) {
    const std::string header = "h" + tag;
    const std::string body = "b" + tag;
    fn_.blocks[header] = BlockSchedule{.length = 1, .slots = {}};
    BlockSchedule& b = fn_.blocks[body];
    b.length = shape.body_len;
    for (std::size_t i = 0; i < events.size(); ++i) {
      b.slots.push_back(SlotTemplate{.static_stage = shape.stages[i],
                                     .tag = events[i].kind.tag,
                                     .target = events[i].kind.target});
    }
    fn_.loops[{header, body}] =
        LoopInfo{.pipelined = shape.pipelined,
                 .ii = shape.ii,
                 .overlap = static_cast<std::uint32_t>(shape.body_len) +
                            shape.extra_overlap};

    out_.push_back(LoopBegin{{header, body}, trips});
    out_.push_back(BlockRecord{header});
    out_.push_back(BlockRecord{body});
    for (const SlotEvent& e : events) {
      if (!e.last_on_final) {
        out_.push_back(EventRecord{e.kind, std::nullopt});
        continue;
      }
      EventKind last = e.kind;
      last.last = true;
      if (trips == 1) {
        out_.push_back(EventRecord{last, std::nullopt});
      } else {
        out_.push_back(EventRecord{e.kind, IterationRange{0, trips - 2}});
        out_.push_back(EventRecord{last, IterationRange{trips - 1, trips - 1}});
      }
    }
    out_.push_back(LoopEnd{});
  }

 private:
  FunctionSchedule& fn_;
  std::vector<TraceRecord>& out_;
};

EventKind fifo_event(const Port& port) {
  return EventKind{.tag = port.kind == Port::Kind::kFifoWrite
                              ? EventTag::kFifoWrite
                              : EventTag::kFifoRead,
                   .target = port.target,
                   .burst = 0,
                   .last = false};
}

EventKind axi_event(EventTag tag, const std::string& target,
                    std::uint32_t burst = 0) {
  return EventKind{.tag = tag, .target = target, .burst = burst, .last = false};
}

// Consecutive fifo ports with equal token counts may share one loop.
std::vector<std::vector<Port>> group_phases(const std::vector<Port>& ports,
                                            const ShapePolicy& policy) {
  std::vector<std::vector<Port>> phases;
  for (const Port& port : ports) {
    if (port.is_fifo() && !phases.empty() && phases.back().front().is_fifo() &&
        phases.back().front().count == port.count && policy.rng != nullptr &&
        coin(*policy.rng, 0.5)) {
      phases.back().push_back(port);
    } else {
      phases.push_back({port});
    }
  }
  return phases;
}

void emit_process(const std::vector<Port>& ports, const ShapePolicy& policy,
                  FunctionSchedule& fn, std::vector<TraceRecord>& out) {
  FunctionWriter writer(fn, out);
  writer.block("entry", policy.draw_len(2), {});
  const auto phases = group_phases(ports, policy);
  for (std::size_t j = 0; j < phases.size(); ++j) {
    const std::string tag = std::to_string(j);
    const Port& port = phases[j].front();
    if (port.is_fifo()) {
      std::vector<SlotEvent> events;
      for (const Port& p : phases[j]) events.push_back({fifo_event(p), false});
      writer.loop(tag, port.count, policy.draw_shape(events.size()), events);
      continue;
    }
    const bool read = port.kind == Port::Kind::kAxiRead;
    const auto burst = static_cast<std::uint32_t>(port.count);
    const EventTag request = read ? EventTag::kAxiReadReq : EventTag::kAxiWriteReq;
    const EventTag transfer = read ? EventTag::kAxiRead : EventTag::kAxiWrite;
    writer.block((read ? "rq" : "wq") + tag, 1,
                 {{0, axi_event(request, port.target, burst)}});
    for (std::uint32_t r = 1; r < port.requests; ++r) {
      writer.block((read ? "rq" : "wq") + tag, 1,
                   {{0, axi_event(request, port.target, burst)}});
    }
    for (std::uint32_t r = 0; r < port.requests; ++r) {
      writer.loop(tag + "_" + std::to_string(r), port.count, policy.draw_shape(1),
                  {{axi_event(transfer, port.target), true}});
    }
    if (!read) {
      const Stage len = policy.draw_len(3);
      for (std::uint32_t r = 0; r < port.requests; ++r) {
        writer.block("wr" + tag, len,
                     {{0, axi_event(EventTag::kAxiWriteResp, port.target)}});
      }
    }
  }
  writer.block("exit", 1, {});
}

std::string process_name(std::size_t i) { return "p" + std::to_string(i); }

// Assembles top plus processes. `ports[i]` belongs to process i.
Design assemble(const std::vector<std::vector<Port>>& ports,
                const std::vector<std::string>& fifos,
                const std::map<std::string, AxiParams>& axis,
                const ShapePolicy& policy) {
  Design design;
  Schedule& s = design.schedule;
  s.top = "top";
  s.fifos.insert(fifos.begin(), fifos.end());
  s.axis = axis;

  auto& records = design.trace.records;
  records.push_back(EventRecord{EventKind{.tag = EventTag::kCall, .target = "top",
                                          .burst = 0, .last = false},
                                std::nullopt});
  records.push_back(BlockRecord{"entry"});
  BlockSchedule entry{.length = 1, .slots = {}};
  for (std::size_t i = 0; i < ports.size(); ++i) {
    const std::string name = process_name(i);
    entry.slots.push_back(
        SlotTemplate{.static_stage = 0, .tag = EventTag::kCall, .target = name});
    records.push_back(EventRecord{
        EventKind{.tag = EventTag::kCall, .target = name, .burst = 0, .last = false},
        std::nullopt});
    emit_process(ports[i], policy, s.functions[name], records);
    records.push_back(EventRecord{EventKind{}, std::nullopt});
  }
  s.functions["top"].blocks.emplace("entry", std::move(entry));
  records.push_back(EventRecord{EventKind{}, std::nullopt});
  check_schedule(s);
  return design;
}

std::vector<std::pair<std::size_t, std::size_t>> draw_edges(
    Rng& rng, Topology topology, std::size_t modules, std::size_t fifos) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  if (modules < 2) return edges;
  std::vector<std::size_t> parent(modules, 0);
  for (std::size_t i = 1; i < modules; ++i) {
    parent[i] = draw<std::size_t>(rng, 0, i - 1);
  }
  for (std::size_t f = 0; f < fifos; ++f) {
    const std::size_t k = f % (modules - 1);
    switch (topology) {
      case Topology::kChain:
        edges.emplace_back(k, k + 1);
        break;
      case Topology::kTree:
        edges.emplace_back(parent[k + 1], k + 1);
        break;
      case Topology::kRandomDag: {
        const std::size_t a = draw<std::size_t>(rng, 0, modules - 2);
        edges.emplace_back(a, draw<std::size_t>(rng, a + 1, modules - 1));
        break;
      }
    }
  }
  return edges;
}

}  // namespace

std::string_view topology_name(Topology topology) {
  switch (topology) {
    case Topology::kChain:
      return "chain";
    case Topology::kTree:
      return "tree";
    case Topology::kRandomDag:
      return "random-dag";
  }
  return "chain";
}

std::optional<Topology> topology_from_name(std::string_view name) {
  for (Topology t : {Topology::kChain, Topology::kTree, Topology::kRandomDag}) {
    if (topology_name(t) == name) return t;
  }
  return std::nullopt;
}

void check_params(const GenParams& p) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw Error("bad generator parameters: " + what);
  };
  require(p.min_modules >= 1, "need at least one module");
  require(p.min_modules <= p.max_modules, "empty module range");
  require(p.min_fifos <= p.max_fifos, "empty fifo range");
  require(p.min_axis <= p.max_axis, "empty axi range");
  require(p.min_tokens >= 1, "tokens must be at least 1");
  require(p.min_tokens <= p.max_tokens, "empty token range");
  require(p.max_tripcount >= 1, "max tripcount must be at least 1");
  require(p.max_tokens <= p.max_tripcount, "tokens exceed max tripcount");
  require(p.pipelined_probability >= 0 && p.pipelined_probability <= 1,
          "pipelined probability outside [0, 1]");
}

Design generate_design(const GenParams& params) {
  check_params(params);
  Rng rng(params.seed);
  const auto modules = draw<std::size_t>(rng, params.min_modules, params.max_modules);
  const auto fifo_count = modules < 2 ? 0 : draw<std::size_t>(rng, params.min_fifos, params.max_fifos);
  const auto axi_count = draw<std::size_t>(rng, params.min_axis, params.max_axis);

  std::vector<std::vector<Port>> ports(modules);
  std::vector<std::string> fifos;
  const auto edges = draw_edges(rng, params.topology, modules, fifo_count);
  for (std::size_t f = 0; f < edges.size(); ++f) {
    const std::string name = "f" + std::to_string(f);
    const auto tokens = draw<std::uint64_t>(rng, params.min_tokens, params.max_tokens);
    fifos.push_back(name);
    ports[edges[f].first].push_back({Port::Kind::kFifoWrite, name, tokens, 1});
    ports[edges[f].second].push_back({Port::Kind::kFifoRead, name, tokens, 1});
  }

  std::map<std::string, AxiParams> axis;
  for (std::size_t a = 0; a < axi_count; ++a) {
    const std::string name = "gmem" + std::to_string(a);
    axis[name] = AxiParams{.read_latency = draw<Cycles>(rng, 1, 20),
                           .write_resp_latency = draw<Cycles>(rng, 1, 5),
                           .rctl_depth = draw<std::uint32_t>(rng, 1, 4),
                           .request_overhead = draw<Cycles>(rng, 0, 2)};
    const auto users = draw<std::size_t>(rng, 1, 2);
    for (std::size_t u = 0; u < users; ++u) {
      const auto process = draw<std::size_t>(rng, 0, modules - 1);
      const auto kind = coin(rng, 0.5) ? Port::Kind::kAxiRead : Port::Kind::kAxiWrite;
      ports[process].push_back({kind, name, draw<std::uint64_t>(rng, 1, params.max_tripcount),
                                draw<std::uint32_t>(rng, 1, 2)});
    }
  }
  for (auto& list : ports) std::shuffle(list.begin(), list.end(), rng);

  return assemble(ports, fifos, axis,
                  ShapePolicy{.rng = &rng,
                              .pipelined_probability = params.pipelined_probability});
}

Design cross_coupled_design() {
  using K = Port::Kind;
  std::vector<std::vector<Port>> ports = {
      {{K::kFifoWrite, "f0", 2, 1}, {K::kFifoRead, "f1", 2, 1}},
      {{K::kFifoWrite, "f1", 2, 1}, {K::kFifoRead, "f0", 2, 1}},
  };
  return assemble(ports, {"f0", "f1"}, {}, ShapePolicy{});
}

Design burst_loop_design(std::uint64_t tripcount) {
  if (tripcount == 0 || tripcount > UINT32_MAX) {
    throw Error("burst tripcount must be in [1, 2^32)");
  }
  using K = Port::Kind;
  std::vector<std::vector<Port>> ports = {
      {{K::kAxiRead, "gmem0", tripcount, 1}, {K::kFifoWrite, "f0", 1, 1}},
      {{K::kFifoRead, "f0", 1, 1}},
  };
  return assemble(ports, {"f0"}, {{"gmem0", AxiParams{}}},
                  ShapePolicy{.rng = nullptr, .pipelined_probability = 1});
}

}  // namespace stagegraph
