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


#include "stagegraph/schedule.hpp"

#include <gtest/gtest.h>

#include <string>

#include "stagegraph/generate.hpp"
#include "support.hpp"

namespace stagegraph {
namespace {

std::string error_of(const std::string& text) {
  try {
    parse_schedule(text);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

TEST(ScheduleParse, SingleFunction) {
  const Schedule s = parse_schedule(
      "top top\nfifo f0\nfn top\n  block b0 len=2 slot 1 fifo_write f0\nend_fn\n");
  ASSERT_EQ(s.functions.size(), 1u);
  const BlockSchedule& b = s.functions.at("top").blocks.at("b0");
  EXPECT_EQ(b.length, 2u);
  ASSERT_EQ(b.slots.size(), 1u);
  EXPECT_EQ(b.slots[0], (SlotTemplate{1, EventTag::kFifoWrite, "f0"}));
}

TEST(ScheduleParse, AxiParameters) {
  const Schedule s = parse_schedule(
      "top top\naxi gmem0 read_latency=20 rctl_depth=2\n"
      "fn top\n  block b len=1\nend_fn\n");
  const AxiParams& p = s.axis.at("gmem0");
  EXPECT_EQ(p.read_latency, 20u);
  EXPECT_EQ(p.write_resp_latency, 4u);
  EXPECT_EQ(p.rctl_depth, 2u);
  EXPECT_EQ(p.request_overhead, 0u);
}

TEST(ScheduleParse, SlotsKeepStageOrder) {
  const Schedule s = parse_schedule(
      "top top\nfifo a\nfifo b\nfn top\n"
      "  block x len=3 slot 0 fifo_write b slot 2 fifo_read a slot 2 fifo_write a\n"
      "end_fn\n");
  const auto& slots = s.functions.at("top").blocks.at("x").slots;
  ASSERT_EQ(slots.size(), 3u);
  EXPECT_EQ(slots[0].target, "b");
  EXPECT_EQ(slots[1].tag, EventTag::kFifoRead);
  EXPECT_EQ(slots[2].tag, EventTag::kFifoWrite);
  EXPECT_PRED2(testing::contains,
               error_of("top top\nfifo a\nfn top\n"
                        "  block x len=3 slot 2 fifo_read a slot 0 fifo_write a\n"
                        "end_fn\n"),
               "not ordered by stage");
}

TEST(ScheduleParse, DanglingCallee) {
  EXPECT_PRED2(testing::contains, error_of("top top\nfn top\n  block b len=1 slot 0 call producer\n"
                       "end_fn\n"), "dangling callee");
}

TEST(ScheduleParse, DuplicateIds) {
  EXPECT_PRED2(testing::contains, error_of("top top\nfifo f\nfifo f\nfn top\n  block b len=1\nend_fn\n"), "duplicate fifo");
  EXPECT_PRED2(testing::contains, error_of("top top\nfn top\n  block b len=1\n  block b len=2\nend_fn\n"), "duplicate block");
  EXPECT_PRED2(testing::contains, error_of("top top\nfn top\nend_fn\nfn top\nend_fn\n"), "duplicate function");
}

TEST(ScheduleParse, StructuralErrors) {
  EXPECT_PRED2(testing::contains, error_of("fn top\nend_fn\n"), "missing 'top'");
  EXPECT_PRED2(testing::contains, error_of("top main\nfn top\nend_fn\n"), "not defined");
  EXPECT_PRED2(testing::contains, error_of("top top\nfn top\n  block b len=2 slot 2 fifo_read f\n"
                       "end_fn\nfifo f\n"), "slot stage");
  EXPECT_PRED2(testing::contains, error_of("top top\nfn top\n  block b len=1 slot 0 fifo_read g\nend_fn\n"), "undeclared");
  EXPECT_PRED2(testing::contains, error_of("top top\nfn top\n  block h len=1\n  block b len=3\n"
                       "  loopinfo h b pipelined=1 ii=1 overlap=2\nend_fn\n"), "shorter than iteration length");
  EXPECT_PRED2(testing::contains, error_of("top top\nfn top\n  block b len=1\n"), "missing end_fn");
  EXPECT_PRED2(testing::contains, error_of("top top\nfn top\n  block b len=1\n  loopinfo b pipelined=1\n"
                       "end_fn\n"), "requires ii");
}

TEST(ScheduleParse, SyntaxErrorCarriesLine) {
  try {
    parse_schedule("top top\nfn top\n  block b len=x\nend_fn\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(ScheduleParse, RoundTripsGeneratedDesigns) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Design d = generate_design(testing::corpus_params(seed));
    const std::string text = write_schedule(d.schedule);
    const Schedule back = parse_schedule(text);
    EXPECT_EQ(back, d.schedule) << "seed " << seed;
    EXPECT_EQ(write_schedule(back), text) << "seed " << seed;
  }
}

TEST(LoopEndStage, Pipelined) {
  EXPECT_EQ(loop_end_stage(5, LoopInfo{true, 1, 3}, 4, 0), 11u);
}

TEST(LoopEndStage, NonPipelined) {
  EXPECT_EQ(loop_end_stage(5, LoopInfo{false, 1, 3}, 4, 0), 20u);
}

TEST(LoopEndStage, SingleTripIgnoresStep) {
  for (std::uint32_t ii : {1u, 2u, 7u}) {
    for (std::uint32_t overlap : {0u, 3u, 9u}) {
      for (bool pipelined : {false, true}) {
        EXPECT_EQ(loop_end_stage(4, LoopInfo{pipelined, ii, overlap}, 1, 2),
                  4u + overlap + 2u);
      }
    }
  }
}

TEST(LoopEndStage, StrictlyIncreasingInTripcount) {
  for (bool pipelined : {false, true}) {
    const LoopInfo info{pipelined, 2, 0};
    for (std::uint64_t t = 1; t < 50; ++t) {
      EXPECT_LT(loop_end_stage(1, info, t, 1), loop_end_stage(1, info, t + 1, 1));
    }
  }
}

TEST(ScheduleIndex, Lookups) {
  const Schedule s = parse_schedule(testing::kProducerConsumerSchedule);
  const ScheduleIndex index(s);
  EXPECT_EQ(index.function_count(), 3u);
  EXPECT_EQ(index.fifo_count(), 1u);
  EXPECT_EQ(index.function_name(index.top()), "top");
  const FunctionId producer = *index.function("producer");
  EXPECT_FALSE(index.function("missing").has_value());
  EXPECT_EQ(index.block(producer, "tail")->length, 10u);
  EXPECT_EQ(index.block(producer, "nope"), nullptr);
  const auto* loop = index.loop_by_header(producer, "ph");
  ASSERT_NE(loop, nullptr);
  EXPECT_EQ(loop, index.loop_containing(producer, "pb"));
  EXPECT_EQ(loop->header_len, 1u);
  EXPECT_EQ(loop->iteration_length, 2u);
  EXPECT_TRUE(loop->info.pipelined);
  EXPECT_EQ(index.loop_by_header(producer, "pb"), nullptr);
}

}  // namespace
}  // namespace stagegraph
