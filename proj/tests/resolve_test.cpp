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

#include <gtest/gtest.h>

#include <map>
#include <string>

#include "stagegraph/generate.hpp"
#include "support.hpp"

namespace stagegraph {
namespace {

std::vector<Stage> stages_of(const std::vector<ResolvedEvent>& events,
                             EventTag tag) {
  std::vector<Stage> out;
  for (const auto& e : events) {
    if (e.tag == tag) out.push_back(e.dyn_stage);
  }
  return out;
}

TEST(Resolve, SlotOffsetWithinBlock) {
  const auto f = testing::Fixture::parse(
      "top top\nfifo f\nfn top\n  block b len=3 slot 2 fifo_write f\nend_fn\n",
      "v1\ncall top\nbb b\nfifo_write f\nreturn\n");
  const auto events = f.events();
  EXPECT_EQ(stages_of(events, EventTag::kFifoWrite), (std::vector<Stage>{3}));
  EXPECT_EQ(stages_of(events, EventTag::kReturn), (std::vector<Stage>{4}));
}

TEST(Resolve, PipelinedLoopAdvancesByIi) {
  const auto f = testing::Fixture::parse(
      "top top\nfifo f\nfn top\n  block b len=2 slot 0 fifo_write f\n"
      "  loopinfo b pipelined=1 ii=1 overlap=1\nend_fn\n",
      "v1\ncall top\nloop 3 b\nbb b\nfifo_write f\nend_loop\nreturn\n");
  const auto events = f.events();
  EXPECT_EQ(stages_of(events, EventTag::kFifoWrite), (std::vector<Stage>{1, 2, 3}));
  // 1 + overlap 1 + ii * 2 + header 2.
  EXPECT_EQ(stages_of(events, EventTag::kReturn), (std::vector<Stage>{6}));
}

TEST(Resolve, TwoStageProducerConsumer) {
  const auto f = testing::Fixture::parse(testing::kProducerConsumerSchedule, testing::kProducerConsumerTrace);
  const Resolution r = resolve(f.trace, *f.index);
  EXPECT_EQ(stages_of(r.events, EventTag::kFifoWrite), (std::vector<Stage>{2, 3, 4, 5}));
  EXPECT_EQ(stages_of(r.events, EventTag::kFifoRead), (std::vector<Stage>{2, 5, 8, 11}));
  EXPECT_EQ(stages_of(r.events, EventTag::kCall), (std::vector<Stage>{1, 1}));
  ASSERT_EQ(r.activations.size(), 3u);
  EXPECT_EQ(r.activations[0].return_stage, 2u);
  EXPECT_EQ(r.activations[1].return_stage, 16u);
  EXPECT_EQ(r.activations[2].return_stage, 14u);
  EXPECT_EQ(r.activations[1].parent, ActivationId{0});
  EXPECT_EQ(r.activations[2].call_path, (std::vector<std::uint32_t>{1}));
  EXPECT_EQ(f.index->function_name(r.activations[2].function), "consumer");
}

TEST(Resolve, CallPrecedesCalleeEvents) {
  const auto f = testing::Fixture::parse(testing::kProducerConsumerSchedule, testing::kProducerConsumerTrace);
  std::vector<bool> started(3, false);
  started[0] = true;
  for (const auto& e : f.events()) {
    EXPECT_TRUE(started[e.instance.index()]);
    if (e.tag == EventTag::kCall) started[e.callee.index()] = true;
  }
}

TEST(Resolve, MismatchedTraceThrows) {
  const auto f = testing::Fixture::parse(
      "top top\nfifo f\nfn top\n  block b len=3 slot 2 fifo_write f\nend_fn\n",
      "v1\ncall top\nbb b\nfifo_read f\nreturn\n");
  try {
    f.events();
    FAIL() << "expected ResolveError";
  } catch (const ResolveError& e) {
    EXPECT_EQ(e.record(), 2u);
  }
}

TEST(Resolve, CompressedMatchesExpanded) {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    const Design d = generate_design(testing::corpus_params(seed));
    const ScheduleIndex index(d.schedule);
    const Resolution compressed = resolve(d.trace, index);
    const Resolution expanded = resolve(expand_loops(d.trace), index);
    ASSERT_EQ(compressed, expanded) << "seed " << seed;
  }
}

TEST(Resolve, StageBoundHolds) {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    const Design d = generate_design(testing::corpus_params(seed));
    const ScheduleIndex index(d.schedule);
    std::map<std::uint32_t, Stage> bound;
    for (const auto& e : resolve(d.trace, index).events) {
      Stage& b = bound[e.instance.value];
      ASSERT_GE(e.dyn_stage, b) << "seed " << seed;
      ASSERT_GE(e.dyn_stage, e.static_stage) << "seed " << seed;
      b = std::max(b, e.dyn_stage - e.static_stage);
    }
  }
}

TEST(Resolve, StreamingMatchesCollected) {
  const Design d = generate_design(testing::corpus_params(11));
  const ScheduleIndex index(d.schedule);
  std::vector<ResolvedEvent> streamed;
  const auto acts =
      resolve(d.trace, index, [&](const ResolvedEvent& e) { streamed.push_back(e); });
  const Resolution r = resolve(d.trace, index);
  EXPECT_EQ(streamed, r.events);
  EXPECT_EQ(acts, r.activations);
}

}  // namespace
}  // namespace stagegraph
