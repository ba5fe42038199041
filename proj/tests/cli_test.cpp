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


#include "stagegraph/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include <unistd.h>

#include "support.hpp"

namespace stagegraph {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;

  std::string first_line() const { return out.substr(0, out.find('\n')); }
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Outcome r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           ("stagegraph_cli_" + std::string(info->name()) + "_" +
            std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Generates into `name`/ and returns {schedule, trace}.
  std::pair<std::string, std::string> gen(const std::string& name,
                                          std::vector<std::string> flags) {
    std::vector<std::string> args = {"gen", "-o", path(name)};
    args.insert(args.end(), flags.begin(), flags.end());
    const Outcome r = run(args);
    EXPECT_EQ(r.code, kExitOk) << r.err;
    return {path(name + "/design.schedule"), path(name + "/design.trace")};
  }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
  }

  fs::path dir_;
};

TEST_F(CliTest, GenIsDeterministic) {
  const auto [s1, t1] = gen("a", {"--seed", "5", "--modules", "3..6", "--axis", "1..2"});
  const auto [s2, t2] = gen("b", {"--seed", "5", "--modules", "3..6", "--axis", "1..2"});
  EXPECT_EQ(slurp(s1), slurp(s2));
  EXPECT_EQ(slurp(t1), slurp(t2));
  EXPECT_FALSE(slurp(t1).empty());
  const Outcome v = run({"validate", "--schedule", s1, "--trace", t1});
  EXPECT_EQ(v.code, kExitOk);
  EXPECT_EQ(v.out, "valid\n");
}

TEST_F(CliTest, GenRejectsEmptyRanges) {
  const Outcome r = run({"gen", "-o", path("x"), "--modules", "4..2"});
  EXPECT_EQ(r.code, kExitError);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, SimulateAgreesWithOracle) {
  const auto [s, t] = gen("d", {"--seed", "1", "--topology", "chain", "--modules", "2..2",
                                "--fifos", "1..1", "--tokens", "4..4"});
  for (const std::string depth : {"1", "2", "3", "4"}) {
    const Outcome sim = run({"simulate", "--schedule", s, "--trace", t, "--depths", "f0=" + depth});
    const Outcome orc = run({"oracle", "--schedule", s, "--trace", t, "--depths", "f0=" + depth});
    EXPECT_EQ(sim.code, kExitOk) << sim.err;
    EXPECT_EQ(orc.code, kExitOk) << orc.err;
    EXPECT_EQ(sim.first_line(), orc.first_line());
    EXPECT_EQ(sim.first_line().rfind("cycles ", 0), 0u);
    EXPECT_TRUE(testing::contains(sim.out, "critical path"));
  }
}

TEST_F(CliTest, MissingFileNamesThePath) {
  const std::string missing = path("nowhere.schedule");
  const Outcome r = run({"simulate", "--schedule", missing, "--trace", path("t"),
                     "--depths", "f0=1"});
  EXPECT_EQ(r.code, kExitError);
  EXPECT_TRUE(testing::contains(r.err, missing));
  EXPECT_TRUE(r.out.empty());
}

TEST_F(CliTest, DeadlockExitsWithTwo) {
  const auto [s, t] = gen("x", {"--shape", "cross-coupled"});
  const Outcome sim = run({"simulate", "--schedule", s, "--trace", t, "--depths", "f0=1,f1=1"});
  EXPECT_EQ(sim.code, kExitDeadlock);
  const auto lines = lines_of(sim.out);
  ASSERT_EQ(lines.size(), 6u);
  EXPECT_EQ(lines[0], "DEADLOCK");
  EXPECT_TRUE(testing::contains(lines[1], "witness (4 nodes"));
  for (std::size_t i = 2; i < lines.size(); ++i) {
    EXPECT_TRUE(testing::contains(lines[i], " stage ")) << lines[i];
    EXPECT_TRUE(testing::contains(lines[i], "#")) << lines[i];
  }
  const Outcome orc = run({"oracle", "--schedule", s, "--trace", t, "--depths", "f0=1,f1=1"});
  EXPECT_EQ(orc.code, kExitDeadlock);
  EXPECT_EQ(orc.first_line(), "DEADLOCK");

  const Outcome json = run({"simulate", "--schedule", s, "--trace", t, "--depths",
                        "f0=1,f1=1", "--format", "json"});
  EXPECT_EQ(json.code, kExitDeadlock);
  const auto j = nlohmann::json::parse(json.out);
  EXPECT_EQ(j["outcome"], "deadlock");
  EXPECT_EQ(j["witness"].size(), 4u);
}

TEST_F(CliTest, DepthFile) {
  const auto [s, t] = gen("x", {"--shape", "cross-coupled"});
  write("depths.txt", "# two each\nf0 2\nf1 2  # trailing\n");
  const Outcome file = run({"simulate", "--schedule", s, "--trace", t, "--depths",
                        "@" + path("depths.txt")});
  const Outcome inline_ = run({"simulate", "--schedule", s, "--trace", t, "--depths", "f0=2,f1=2"});
  EXPECT_EQ(file.code, kExitOk) << file.err;
  EXPECT_EQ(file.out, inline_.out);
  EXPECT_EQ(file.first_line(), "cycles 12");
  EXPECT_EQ(run({"simulate", "--schedule", s, "--trace", t, "--depths", "f0=0,f1=2"}).code,
            kExitError);
  EXPECT_EQ(run({"simulate", "--schedule", s, "--trace", t, "--depths", "f0=1"}).code,
            kExitError);
  EXPECT_EQ(run({"simulate", "--schedule", s, "--trace", t, "--depths", "f0=1,f1=1,zz=3"}).code,
            kExitError);
}

TEST_F(CliTest, CompileReportsReductionAndIsDeterministic) {
  const auto [s, t] = gen("b", {"--shape", "burst-loop", "--tripcount", "10000"});
  const Outcome a = run({"compile", "--schedule", s, "--trace", t, "-o", path("g1.json"),
                     "--format", "json"});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  const auto stats = nlohmann::json::parse(a.out);
  const double before = stats["nodes_before_elim"].get<double>();
  const double after = stats["nodes_after_elim"].get<double>();
  EXPECT_GE(1.0 - after / before, 0.9);
  const Outcome b = run({"compile", "--schedule", s, "--trace", t, "-o", path("g2.json")});
  ASSERT_EQ(b.code, kExitOk);
  EXPECT_EQ(slurp(path("g1.json")), slurp(path("g2.json")));
  EXPECT_EQ(b.first_line().rfind("nodes  before ", 0), 0u);

  const Outcome direct = run({"simulate", "--schedule", s, "--trace", t, "--depths", "f0=1"});
  const Outcome loaded = run({"simulate", "--graph", path("g1.json"), "--depths", "f0=1"});
  EXPECT_EQ(loaded.code, kExitOk) << loaded.err;
  EXPECT_EQ(direct.out, loaded.out);
}

TEST_F(CliTest, CompileWithoutEliminationKeepsNodes) {
  const auto [s, t] = gen("d", {"--seed", "3"});
  const Outcome r = run({"compile", "--schedule", s, "--trace", t, "--no-eliminate", "-o",
                     path("g.json"), "--format", "json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto stats = nlohmann::json::parse(r.out);
  EXPECT_LE(stats["nodes_after_elim"], stats["nodes_before_elim"]);
  EXPECT_EQ(run({"compile", "--schedule", s, "--trace", t}).code, kExitError);
}

TEST_F(CliTest, DseSweepIsNonIncreasing) {
  const auto [s, t] = gen("d", {"--seed", "1", "--topology", "chain", "--modules", "2..2",
                                "--fifos", "1..1", "--tokens", "8..8"});
  const Outcome r = run({"dse", "--schedule", s, "--trace", t, "--sweep", "f0:1..8",
                     "--format", "csv", "--no-timing"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = lines_of(r.out);
  ASSERT_EQ(rows.size(), 9u);
  EXPECT_EQ(rows[0], "f0,cycles");
  std::uint64_t previous = UINT64_MAX;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto comma = rows[i].find(',');
    EXPECT_EQ(rows[i].substr(0, comma), std::to_string(i));
    const std::uint64_t cycles = std::stoull(rows[i].substr(comma + 1));
    EXPECT_LE(cycles, previous);
    previous = cycles;
  }
}

TEST_F(CliTest, DseRandomIsReproducible) {
  const auto [s, t] = gen("d", {"--seed", "9", "--fifos", "2..4"});
  ASSERT_EQ(run({"compile", "--schedule", s, "--trace", t, "-o", path("g.json")}).code,
            kExitOk);
  auto dse = [&](const std::string& parallelism) {
    return run({"dse", "--graph", path("g.json"), "--random", "128", "--seed", "7",
                "--range", "1..8", "--parallelism", parallelism, "--format", "json",
                "--no-timing"});
  };
  const Outcome a = dse("1");
  const Outcome b = dse("1");
  const Outcome c = dse("8");
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);
  EXPECT_EQ(nlohmann::json::parse(a.out)["points"].size(), 128u);
  const Outcome timed = run({"dse", "--graph", path("g.json"), "--random", "4", "--seed", "7",
                         "--range", "1..8", "--format", "json"});
  EXPECT_TRUE(nlohmann::json::parse(timed.out)["summary"].contains("wall_micros"));
}

TEST_F(CliTest, DseWritesReportFile) {
  const auto [s, t] = gen("x", {"--shape", "cross-coupled"});
  const Outcome r = run({"dse", "--schedule", s, "--trace", t, "--depths", "f0=1,f1=1",
                     "--depths", "f0=2,f1=2", "--budget", "4", "--no-timing", "-o",
                     path("report.txt")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::string report = slurp(path("report.txt"));
  EXPECT_TRUE(testing::contains(report, "DEADLOCK"));
  EXPECT_TRUE(testing::contains(report, "best under budget 4: #1"));
  EXPECT_FALSE(testing::contains(report, "speedup"));
}

TEST_F(CliTest, DseOptionConflicts) {
  const auto [s, t] = gen("x", {"--shape", "cross-coupled"});
  EXPECT_EQ(run({"dse", "--schedule", s, "--trace", t}).code, kExitError);
  EXPECT_EQ(run({"dse", "--schedule", s, "--trace", t, "--random", "3"}).code, kExitError);
  EXPECT_EQ(run({"dse", "--schedule", s, "--trace", t, "--random", "3", "--range", "1..2",
                 "--sweep", "f0:1..2"})
                .code,
            kExitError);
  EXPECT_EQ(run({"dse", "--schedule", s, "--trace", t, "--graph", path("g"), "--depths",
                 "f0=1,f1=1"})
                .code,
            kExitError);
  EXPECT_EQ(run({"dse", "--schedule", s, "--trace", t, "--sweep", "zz:1..2"}).code,
            kExitError);
}

TEST_F(CliTest, ExpandAndValidate) {
  const auto [s, t] = gen("b", {"--shape", "burst-loop", "--tripcount", "5"});
  const Outcome e = run({"expand", "--trace", t, "-o", path("flat.trace")});
  ASSERT_EQ(e.code, kExitOk) << e.err;
  const std::string flat = slurp(path("flat.trace"));
  EXPECT_FALSE(testing::contains(flat, "loop"));
  EXPECT_EQ(run({"validate", "--schedule", s, "--trace", path("flat.trace")}).out, "valid\n");
  const Outcome sim = run({"simulate", "--schedule", s, "--trace", t, "--depths", "f0=1"});
  const Outcome sim_flat =
      run({"simulate", "--schedule", s, "--trace", path("flat.trace"), "--depths", "f0=1"});
  EXPECT_EQ(sim.out, sim_flat.out);

  write("bad.trace", "v1\ncall top\nbb nowhere\nreturn\n");
  const Outcome bad = run({"validate", "--schedule", s, "--trace", path("bad.trace")});
  EXPECT_EQ(bad.code, kExitError);
  EXPECT_TRUE(testing::contains(bad.out, "record 1:"));
  const Outcome sim_bad =
      run({"simulate", "--schedule", s, "--trace", path("bad.trace"), "--depths", "f0=1"});
  EXPECT_EQ(sim_bad.code, kExitError);

  write("broken.trace", "v1\ncall top\nfifo_read\n");
  const Outcome parse = run({"validate", "--schedule", s, "--trace", path("broken.trace")});
  EXPECT_EQ(parse.code, kExitError);
  EXPECT_TRUE(testing::contains(parse.err, "broken.trace"));
  EXPECT_TRUE(testing::contains(parse.err, "line 3"));
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, kExitError);
  EXPECT_EQ(run({"frobnicate"}).code, kExitError);
  EXPECT_EQ(run({"simulate", "--bogus"}).code, kExitError);
  const Outcome help = run({"--help"});
  EXPECT_EQ(help.code, kExitOk);
  EXPECT_TRUE(testing::contains(help.out, "simulate"));
}

TEST_F(CliTest, FormatsAgree) {
  const auto [s, t] = gen("x", {"--shape", "cross-coupled"});
  const std::vector<std::string> base = {"simulate", "--schedule", s, "--trace", t,
                                         "--depths", "f0=2,f1=2"};
  auto with = [&](std::vector<std::string> extra) {
    auto args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return run(args);
  };
  const auto j = nlohmann::json::parse(with({"--format", "json"}).out);
  EXPECT_EQ(j["cycles"], 12);
  const Outcome csv = with({"--format", "csv"});
  EXPECT_EQ(csv.code, kExitOk);
  EXPECT_TRUE(testing::contains(csv.out, "12"));
  EXPECT_EQ(with({"--format", "yaml"}).code, kExitError);
  ASSERT_EQ(with({"-o", path("r.txt")}).code, kExitOk);
  EXPECT_EQ(slurp(path("r.txt")), with({}).out);
}

}  // namespace
}  // namespace stagegraph
