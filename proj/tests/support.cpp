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

#include "support.hpp"

#include <algorithm>
#include <deque>

namespace stagegraph::testing {

const char* const kProducerConsumerSchedule = R"(top top
fifo f
fn top
  block entry len=1 slot 0 call producer slot 0 call consumer
end_fn
fn producer
  block ph len=1
  block pb len=1 slot 0 fifo_write f
  block tail len=10
  loopinfo ph pb pipelined=1 ii=1 overlap=1
end_fn
fn consumer
  block ch len=1
  block cb len=1 slot 0 fifo_read f
  block exit len=1
  loopinfo ch cb pipelined=0 ii=1 overlap=2
end_fn
)";

const char* const kProducerConsumerTrace = R"(v1
call top
bb entry
call producer
loop 4 ph pb
  bb ph
  bb pb
  fifo_write f
end_loop
bb tail
return
call consumer
loop 4 ch cb
  bb ch
  bb cb
  fifo_read f
end_loop
bb exit
return
return
)";

Fixture Fixture::parse(const std::string& schedule_text,
                       const std::string& trace_text) {
  Fixture f;
  f.schedule = std::make_unique<Schedule>(parse_schedule(schedule_text));
  f.index = std::make_unique<ScheduleIndex>(*f.schedule);
  f.trace = parse_trace(std::string_view(trace_text));
  return f;
}

Fixture Fixture::from(Design design) {
  Fixture f;
  f.schedule = std::make_unique<Schedule>(std::move(design.schedule));
  f.index = std::make_unique<ScheduleIndex>(*f.schedule);
  f.trace = std::move(design.trace);
  return f;
}

std::vector<ResolvedEvent> Fixture::events() const {
  return resolve(trace, *index).events;
}

SimGraph Fixture::graph(const CompilerConfig& config) const {
  return compile(events(), *index, config);
}

namespace {

struct PlainEdge {
  std::size_t source;
  Cycles delay;
};

// In-edges of every node with floating edges resolved.
std::vector<std::vector<PlainEdge>> resolved_in_edges(const SimGraph& graph,
                                                      const DepthVector& depths) {
  std::vector<std::vector<PlainEdge>> in(graph.node_count());
  for (std::size_t v = 0; v < graph.node_count(); ++v) {
    for (std::uint64_t k = graph.in_offsets[v]; k < graph.in_offsets[v + 1]; ++k) {
      const Edge& e = graph.in_edges[k];
      in[v].push_back({e.source.index(), e.delay});
    }
    for (std::uint64_t k = graph.floating_offsets[v]; k < graph.floating_offsets[v + 1];
         ++k) {
      const FloatingEdge& f = graph.floating[k];
      const std::uint64_t d = depths.values()[f.fifo.index()];
      if (f.write_seq > d) {
        in[v].push_back({graph.fifo_reads[f.fifo.index()][f.write_seq - d - 1].index(),
                         f.delay});
      }
    }
  }
  return in;
}

}  // namespace

std::optional<Cycles> reference_cycles(const SimGraph& graph,
                                       const DepthVector& depths) {
  const auto in = resolved_in_edges(graph, depths);
  const std::size_t n = graph.node_count();
  std::vector<std::vector<PlainEdge>> out(n);
  std::vector<std::size_t> pending(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    for (const PlainEdge& e : in[v]) {
      out[e.source].push_back({v, e.delay});
      ++pending[v];
    }
  }
  std::vector<Cycles> time(n, 0);
  std::deque<std::size_t> ready;
  for (std::size_t v = 0; v < n; ++v) {
    if (pending[v] == 0) ready.push_back(v);
  }
  std::size_t done = 0;
  while (!ready.empty()) {
    const std::size_t u = ready.front();
    ready.pop_front();
    ++done;
    for (const PlainEdge& e : out[u]) {
      time[e.source] = std::max(time[e.source], time[u] + e.delay);
      if (--pending[e.source] == 0) ready.push_back(e.source);
    }
  }
  if (done != n) return std::nullopt;
  return time[graph.end.index()];
}

bool is_dependency_cycle(const SimGraph& graph, const DepthVector& depths,
                         const std::vector<NodeId>& witness) {
  if (witness.empty()) return false;
  const auto in = resolved_in_edges(graph, depths);
  for (std::size_t i = 0; i < witness.size(); ++i) {
    const std::size_t v = witness[i].index();
    const std::size_t u = witness[(i + witness.size() - 1) % witness.size()].index();
    if (std::none_of(in[v].begin(), in[v].end(),
                     [&](const PlainEdge& e) { return e.source == u; })) {
      return false;
    }
  }
  return true;
}

GenParams corpus_params(std::uint64_t seed) {
  GenParams p;
  p.seed = seed;
  p.min_modules = 1;
  p.max_modules = 8;
  p.min_fifos = 0;
  p.max_fifos = 12;
  p.min_axis = 0;
  p.max_axis = 2;
  p.max_tripcount = 12;
  p.min_tokens = 1;
  p.max_tokens = 12;
  p.pipelined_probability = 0.5;
  p.topology = static_cast<Topology>(seed % 3);
  return p;
}

std::vector<DepthVector> random_depths(std::mt19937_64& rng, std::size_t fifos,
                                       std::uint64_t lo, std::uint64_t hi,
                                       std::size_t count) {
  std::uniform_int_distribution<std::uint64_t> draw(lo, hi);
  std::vector<DepthVector> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<std::uint64_t> d(fifos);
    for (auto& x : d) x = draw(rng);
    out.emplace_back(std::move(d));
  }
  return out;
}

}  // namespace stagegraph::testing
