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

#include <gtest/gtest.h>

#include <string>

#include "stagegraph/generate.hpp"
#include "support.hpp"

namespace stagegraph {
namespace {

const char* const kAxiSchedule = R"(top top
axi g
fifo f
fn top
  block e len=3 slot 0 axi_rreq g slot 1 axi_r g slot 2 axi_r g
  block r len=1 slot 0 fifo_read
  block w len=1 slot 0 fifo_write f
  block c len=1 slot 0 call child
end_fn
fn child
  block w len=1 slot 0 fifo_write f
  block r len=1 slot 0 fifo_read f
  block h len=1
  block b len=1 slot 0 fifo_write f
  loopinfo h b pipelined=1 ii=1 overlap=1
end_fn
)";

std::vector<Violation> check(const std::string& trace_text,
                             const std::string& schedule_text = kAxiSchedule) {
  return validate_trace(parse_trace(std::string_view(trace_text)),
                        parse_schedule(schedule_text));
}

bool mentions(const std::vector<Violation>& vs, const std::string& text) {
  for (const auto& v : vs) {
    if (testing::contains(v.message, text)) return true;
  }
  return false;
}

std::string describe(const std::vector<Violation>& vs) {
  std::string out;
  for (const auto& v : vs) out += std::to_string(v.record) + ": " + v.message + "\n";
  return out;
}

TEST(Validate, CompleteBurstIsClean) {
  const auto vs = check("v1\ncall top\nbb e\naxi_rreq g 2\naxi_r g\naxi_r g last\nreturn\n");
  EXPECT_TRUE(vs.empty()) << describe(vs);
}

TEST(Validate, BurstUnderrun) {
  const auto vs = check("v1\ncall top\nbb e\naxi_rreq g 2\naxi_r g last\nreturn\n");
  EXPECT_TRUE(mentions(vs, "burst underrun")) << describe(vs);
}

TEST(Validate, LastFlagPlacement) {
  EXPECT_TRUE(mentions(
      check("v1\ncall top\nbb e\naxi_rreq g 2\naxi_r g\naxi_r g\nreturn\n"),
      "lacks the last flag"));
}

TEST(Validate, UndeclaredFifo) {
  const auto vs = check("v1\ncall top\nbb r\nfifo_read nope\nreturn\n");
  ASSERT_FALSE(vs.empty());
  EXPECT_TRUE(mentions(vs, "undeclared fifo")) << describe(vs);
  EXPECT_EQ(vs.front().record, 2u);
}

TEST(Validate, CallStructure) {
  EXPECT_TRUE(mentions(check("v1\ncall top\nbb e\n"), "unreturned"));
  EXPECT_TRUE(mentions(check("v1\ncall child\nreturn\n"), "top function"));
  EXPECT_TRUE(mentions(check("v1\ncall top\nreturn\nreturn\n"),
                       "after the top function returned"));
}

TEST(Validate, BlockMembership) {
  EXPECT_TRUE(mentions(check("v1\ncall top\nbb zz\nreturn\n"), "not in function"));
}

TEST(Validate, SlotBinding) {
  const auto vs = check("v1\ncall top\nbb w\nfifo_read f\nreturn\n");
  EXPECT_FALSE(vs.empty());
  EXPECT_TRUE(mentions(check("v1\ncall top\nbb e\nreturn\n"), "slot underrun"));
}

TEST(Validate, FifoEndpoints) {
  // Written by top and child.
  const auto two_writers = check(
      "v1\ncall top\nbb w\nfifo_write f\nbb c\ncall child\nbb w\nfifo_write f\n"
      "bb r\nfifo_read f\nbb r\nfifo_read f\nreturn\nreturn\n");
  EXPECT_TRUE(mentions(two_writers, "more than one activation")) << describe(two_writers);
  const auto same = check(
      "v1\ncall top\nbb c\ncall child\nbb w\nfifo_write f\nbb r\nfifo_read f\n"
      "return\nreturn\n");
  EXPECT_TRUE(mentions(same, "same activation")) << describe(same);
  const auto unbalanced = check(
      "v1\ncall top\nbb c\ncall child\nbb w\nfifo_write f\nreturn\nreturn\n");
  EXPECT_TRUE(mentions(unbalanced, "1 write(s) but 0 read(s)")) << describe(unbalanced);
}

TEST(Validate, LoopRegions) {
  const std::string head = "v1\ncall top\nbb c\ncall child\n";
  const std::string tail = "return\nbb r\nfifo_read f\nbb r\nfifo_read f\nreturn\n";
  const auto ok = check(head + "loop 2 h b\nbb h\nbb b\nfifo_write f\nend_loop\n" + tail);
  EXPECT_TRUE(ok.empty()) << describe(ok);
  EXPECT_TRUE(mentions(
      check(head + "loop 2 h b\nbb h\nbb b\nfifo_write f @2\nend_loop\n" + tail),
      "beyond the loop's tripcount"));
  EXPECT_FALSE(check(head + "loop 2 h\nbb h\nend_loop\n" + tail).empty());
  EXPECT_FALSE(check(head + "bb h\nbb b\nfifo_write f\n" + tail).empty());
}

TEST(Validate, UnbalancedLoopMarkers) {
  const auto vs = check("v1\ncall top\nend_loop\nreturn\n");
  ASSERT_FALSE(vs.empty());
}

TEST(Validate, GeneratedDesignsAreClean) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const Design d = generate_design(testing::corpus_params(seed));
    const auto vs = validate_trace(d.trace, d.schedule);
    EXPECT_TRUE(vs.empty()) << "seed " << seed << "\n" << describe(vs);
    const auto expanded = validate_trace(expand_loops(d.trace), d.schedule);
    EXPECT_TRUE(expanded.empty()) << "seed " << seed << "\n" << describe(expanded);
  }
}

TEST(Validate, RequireValidListsViolations) {
  const Schedule s = parse_schedule(kAxiSchedule);
  const Trace bad = parse_trace("v1\ncall top\nbb zz\nbb yy\nreturn\n");
  try {
    require_valid(bad, s);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_TRUE(testing::contains(e.what(), "record 2"));
    EXPECT_TRUE(testing::contains(e.what(), "record 1"));
  }
  EXPECT_NO_THROW(require_valid(
      parse_trace("v1\ncall top\nbb e\naxi_rreq g 2\naxi_r g\naxi_r g last\nreturn\n"),
      s));
}

}  // namespace
}  // namespace stagegraph
