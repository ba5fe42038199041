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

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "stagegraph/dse.hpp"
#include "stagegraph/generate.hpp"
#include "stagegraph/graph.hpp"
#include "stagegraph/graph_io.hpp"
#include "stagegraph/oracle.hpp"
#include "stagegraph/resolve.hpp"
#include "stagegraph/schedule.hpp"
#include "stagegraph/trace.hpp"
#include "stagegraph/traverse.hpp"
#include "stagegraph/validate.hpp"

namespace stagegraph {
namespace {

using Json = nlohmann::ordered_json;

enum class Format { kText, kJson, kCsv };

struct Options {
  std::string schedule_path;
  std::string trace_path;
  std::string graph_path;
  std::vector<std::string> depths;
  std::string sweep;
  std::size_t random = 0;
  std::uint64_t seed = 0;
  std::string range;
  std::size_t parallelism = 0;
  std::optional<std::uint64_t> budget;
  bool no_eliminate = false;
  bool no_timing = false;
  Format format = Format::kText;
  std::string output;

  // gen
  std::string shape = "random";
  std::string modules = "2..4";
  std::string fifos = "1..4";
  std::string axis = "0..1";
  std::string tokens = "1..8";
  std::uint64_t max_tripcount = 16;
  double pipelined_probability = 0.5;
  std::string topology = "chain";
  std::uint64_t tripcount = 10000;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out.flush()) throw Error("cannot write '" + path + "'");
}

// Writes to `path`, or to `out` when no path was given.
void emit(const Options& opts, const std::string& text, std::ostream& out) {
  if (opts.output.empty()) {
    out << text;
  } else {
    write_file(opts.output, text);
  }
}

template <typename F>
auto with_path(const std::string& path, F&& parse) {
  try {
    return parse(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(0, path + ": " + e.what());
  }
}

std::uint64_t parse_uint(std::string_view text, std::string_view what) {
  std::uint64_t value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw Error("bad " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

std::pair<std::uint64_t, std::uint64_t> parse_range(std::string_view text,
                                                    std::string_view what) {
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) {
    const std::uint64_t v = parse_uint(text, what);
    return {v, v};
  }
  const auto lo = parse_uint(text.substr(0, dots), what);
  const auto hi = parse_uint(text.substr(dots + 2), what);
  if (lo > hi) throw Error("empty " + std::string(what) + " '" + std::string(text) + "'");
  return {lo, hi};
}

// `name=depth,...` or `@file` with one `name depth` pair per line.
std::map<std::string, std::uint64_t> parse_depth_map(const std::string& text) {
  std::map<std::string, std::uint64_t> depths;
  auto add = [&](const std::string& name, std::string_view value) {
    if (!depths.emplace(name, parse_uint(value, "depth")).second) {
      throw Error("fifo '" + name + "' given twice");
    }
  };
  if (!text.empty() && text.front() == '@') {
    std::istringstream in(read_file(text.substr(1)));
    std::string line;
    while (std::getline(in, line)) {
      if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      std::istringstream fields(line);
      std::string name, value, extra;
      if (!(fields >> name)) continue;
      if (!(fields >> value) || (fields >> extra)) {
        throw Error(text.substr(1) + ": expected '<fifo> <depth>', got '" + line + "'");
      }
      add(name, value);
    }
  } else if (!text.empty()) {
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw Error("expected fifo=depth, got '" + item + "'");
      add(item.substr(0, eq), std::string_view(item).substr(eq + 1));
    }
  }
  return depths;
}

DepthVector parse_depths(const std::string& text,
                         const std::vector<std::string>& fifo_names) {
  return DepthVector::from_map(fifo_names, parse_depth_map(text));
}

// Schedule, trace and index, validated.
struct LoadedDesign {
  std::unique_ptr<Schedule> schedule;
  std::unique_ptr<ScheduleIndex> index;
  Trace trace;
};

LoadedDesign load_design(const Options& opts) {
  if (opts.schedule_path.empty() || opts.trace_path.empty()) {
    throw Error("--schedule and --trace are required");
  }
  LoadedDesign d;
  d.schedule = std::make_unique<Schedule>(with_path(
      opts.schedule_path, [](const std::string& t) { return parse_schedule(t); }));
  d.trace = with_path(opts.trace_path,
                      [](const std::string& t) { return parse_trace(std::string_view(t)); });
  require_valid(d.trace, *d.schedule);
  d.index = std::make_unique<ScheduleIndex>(*d.schedule);
  return d;
}

CompilerConfig compiler_config(const Options& opts) {
  CompilerConfig config;
  config.eliminate = !opts.no_eliminate;
  return config;
}

SimGraph load_graph(const Options& opts) {
  if (!opts.graph_path.empty()) {
    if (!opts.schedule_path.empty() || !opts.trace_path.empty()) {
      throw Error("--graph cannot be combined with --schedule/--trace");
    }
    if (opts.no_eliminate) throw Error("--no-eliminate needs --schedule/--trace");
    return with_path(opts.graph_path, [](const std::string& t) { return read_graph(t); });
  }
  LoadedDesign d = load_design(opts);
  return compile(d.trace, *d.index, compiler_config(opts));
}

std::string node_label(const SimGraph& graph, NodeId id) {
  const NodeInfo& info = graph.nodes[id.index()];
  return graph.module_names[info.module.index()] + "#" +
         std::to_string(info.activation.value) + " stage " +
         std::to_string(info.stage);
}

Json node_json(const SimGraph& graph, NodeId id) {
  const NodeInfo& info = graph.nodes[id.index()];
  Json j;
  j["node"] = id.value;
  j["module"] = graph.module_names[info.module.index()];
  j["activation"] = info.activation.value;
  j["stage"] = info.stage;
  return j;
}

std::string percent_reduced(std::uint64_t before, std::uint64_t after) {
  if (before == 0) return "0.00%";
  std::ostringstream s;
  s << std::fixed << std::setprecision(2)
    << 100.0 * (1.0 - static_cast<double>(after) / static_cast<double>(before))
    << '%';
  return s.str();
}

std::string outcome_line(const SimResult& result) {
  return result.deadlock ? "DEADLOCK\n" : "cycles " + std::to_string(result.cycles) + "\n";
}

int cmd_simulate(const Options& opts, std::ostream& out) {
  const SimGraph graph = load_graph(opts);
  const DepthVector depths = parse_depths(
      opts.depths.empty() ? "" : opts.depths.front(), graph.fifo_names);
  Traversal traversal(graph);
  const SimResult result = traversal.run(depths);
  std::vector<NodeId> path;
  if (!result.deadlock) path = critical_path(graph, depths);

  std::ostringstream s;
  switch (opts.format) {
    case Format::kText:
      s << outcome_line(result);
      if (result.deadlock) {
        s << "witness (" << result.witness.size()
          << " nodes, each waiting on the one before, the first on the last):\n";
        for (NodeId id : result.witness) {
          s << "  node " << id.value << "  " << node_label(graph, id) << '\n';
        }
      } else {
        s << "critical path (" << path.size() << " nodes):\n";
        for (NodeId id : path) {
          s << "  t=" << traversal.times()[id.index()] << "  node " << id.value
            << "  " << node_label(graph, id) << '\n';
        }
      }
      break;
    case Format::kJson: {
      Json j;
      j["depths"] = depths.values();
      j["outcome"] = result.deadlock ? "deadlock" : "cycles";
      if (result.deadlock) {
        Json witness = Json::array();
        for (NodeId id : result.witness) witness.push_back(node_json(graph, id));
        j["witness"] = std::move(witness);
      } else {
        j["cycles"] = result.cycles;
        Json critical = Json::array();
        for (NodeId id : path) {
          Json n = node_json(graph, id);
          n["time"] = traversal.times()[id.index()];
          critical.push_back(std::move(n));
        }
        j["critical_path"] = std::move(critical);
      }
      s << j.dump(2) << '\n';
      break;
    }
    case Format::kCsv:
      s << "outcome,cycles\n"
        << (result.deadlock ? "deadlock," : "cycles," + std::to_string(result.cycles))
        << '\n';
      break;
  }
  emit(opts, s.str(), out);
  return result.deadlock ? kExitDeadlock : kExitOk;
}

int cmd_oracle(const Options& opts, std::ostream& out) {
  if (!opts.graph_path.empty()) throw Error("oracle needs --schedule and --trace");
  LoadedDesign d = load_design(opts);
  const DepthVector depths = parse_depths(
      opts.depths.empty() ? "" : opts.depths.front(), d.index->fifo_names());
  const auto events = resolve(d.trace, *d.index).events;
  const OracleResult oracle =
      simulate_events(events, *d.index, depths, compiler_config(opts));
  const SimResult& result = oracle.result;

  std::ostringstream s;
  switch (opts.format) {
    case Format::kText:
      s << outcome_line(result);
      if (result.deadlock) {
        s << "stalled:\n";
        for (const std::string& line : oracle.stalled) s << "  " << line << '\n';
      }
      break;
    case Format::kJson: {
      Json j;
      j["depths"] = depths.values();
      j["outcome"] = result.deadlock ? "deadlock" : "cycles";
      if (result.deadlock) {
        j["stalled"] = oracle.stalled;
      } else {
        j["cycles"] = result.cycles;
      }
      s << j.dump(2) << '\n';
      break;
    }
    case Format::kCsv:
      s << "outcome,cycles\n"
        << (result.deadlock ? "deadlock," : "cycles," + std::to_string(result.cycles))
        << '\n';
      break;
  }
  emit(opts, s.str(), out);
  return result.deadlock ? kExitDeadlock : kExitOk;
}

int cmd_compile(const Options& opts, std::ostream& out) {
  if (opts.output.empty()) throw Error("compile needs -o <graph file>");
  if (!opts.graph_path.empty()) throw Error("compile needs --schedule and --trace");
  LoadedDesign d = load_design(opts);
  const SimGraph graph = compile(d.trace, *d.index, compiler_config(opts));
  write_file(opts.output, write_graph(graph));

  const GraphStats& st = graph.stats;
  if (opts.format == Format::kJson) {
    Json j;
    j["nodes_before_elim"] = st.nodes_before_elim;
    j["nodes_after_elim"] = st.nodes_after_elim;
    j["edges_before_elim"] = st.edges_before_elim;
    j["edges_after_elim"] = st.edges_after_elim;
    j["nodes_materialized"] = st.nodes_materialized;
    j["floating_edges"] = st.floating_edges;
    out << j.dump(2) << '\n';
  } else if (opts.format == Format::kCsv) {
    out << "nodes_before,nodes_after,edges_before,edges_after,"
           "nodes_materialized,floating_edges\n"
        << st.nodes_before_elim << ',' << st.nodes_after_elim << ','
        << st.edges_before_elim << ',' << st.edges_after_elim << ','
        << st.nodes_materialized << ',' << st.floating_edges << '\n';
  } else {
    out << "nodes  before " << st.nodes_before_elim << "  after "
        << st.nodes_after_elim << "  ("
        << percent_reduced(st.nodes_before_elim, st.nodes_after_elim)
        << " reduced)\n"
        << "edges  before " << st.edges_before_elim << "  after "
        << st.edges_after_elim << "  ("
        << percent_reduced(st.edges_before_elim, st.edges_after_elim)
        << " reduced)\n"
        << "materialized nodes " << st.nodes_materialized << '\n'
        << "floating edges " << st.floating_edges << '\n';
  }
  return kExitOk;
}

int cmd_dse(const Options& opts, std::ostream& out) {
  const SimGraph graph = load_graph(opts);
  const auto& names = graph.fifo_names;
  DseSpec spec;
  if (!opts.sweep.empty()) {
    const auto colon = opts.sweep.rfind(':');
    if (colon == std::string::npos) throw Error("expected --sweep <fifo>:<lo>..<hi>");
    const std::string fifo = opts.sweep.substr(0, colon);
    const auto it = std::find(names.begin(), names.end(), fifo);
    if (it == names.end()) throw Error("unknown fifo '" + fifo + "'");
    spec.mode = DseSpec::Mode::kSweep;
    std::tie(spec.lo, spec.hi) = parse_range(opts.sweep.substr(colon + 1), "sweep range");
    spec.fifo = FifoId{static_cast<std::uint32_t>(it - names.begin())};
    if (opts.depths.size() > 1) throw Error("--sweep takes at most one base --depths");
    if (opts.depths.empty()) {
      spec.base = DepthVector::uniform(names.size(), spec.hi);
    } else {
      auto base = parse_depth_map(opts.depths.front());
      base.try_emplace(fifo, spec.lo);
      spec.base = DepthVector::from_map(names, base);
    }
  } else if (opts.random > 0) {
    if (opts.range.empty()) throw Error("--random needs --range <lo>..<hi>");
    if (!opts.depths.empty()) throw Error("--random cannot be combined with --depths");
    spec.mode = DseSpec::Mode::kRandom;
    spec.count = opts.random;
    spec.seed = opts.seed;
    std::tie(spec.lo, spec.hi) = parse_range(opts.range, "depth range");
  } else {
    if (opts.depths.empty()) throw Error("dse needs --sweep, --random or --depths");
    spec.mode = DseSpec::Mode::kExplicit;
    for (const std::string& d : opts.depths) spec.points.push_back(parse_depths(d, names));
  }

  const auto points = sample(spec, names.size());
  const std::size_t parallelism =
      opts.parallelism > 0 ? opts.parallelism
                           : std::max(1u, std::thread::hardware_concurrency());
  const DseReport report = evaluate(graph, points, parallelism);
  const auto best = opts.budget ? best_under_budget(report, *opts.budget) : std::nullopt;
  const bool timing = !opts.no_timing;

  std::ostringstream s;
  switch (opts.format) {
    case Format::kJson:
      if (opts.budget) {
        std::ostringstream body;
        write_report_json(report, names, body, timing);
        Json j = Json::parse(body.str());
        j["budget"] = *opts.budget;
        j["best_under_budget"] = best ? Json(*best) : Json();
        s << j.dump(2) << '\n';
      } else {
        write_report_json(report, names, s, timing);
      }
      break;
    case Format::kCsv:
      write_report_csv(report, names, s, timing);
      break;
    case Format::kText:
      for (std::size_t i = 0; i < report.points.size(); ++i) {
        const DsePoint& p = report.points[i];
        s << '#' << i << "  " << p.depths.to_string(names) << "  ";
        if (p.error) {
          s << "ERROR " << *p.error;
        } else if (p.result.deadlock) {
          s << "DEADLOCK";
        } else {
          s << "cycles " << p.result.cycles;
        }
        s << '\n';
      }
      s << "points " << report.points.size() << "  deadlocks " << report.deadlocks
        << "  errors " << report.errors << '\n';
      if (report.argmin) {
        s << "min cycles " << *report.min_cycles << " at #" << *report.argmin
          << " (total depth " << report.argmin_buffer_total << ")\n";
      }
      if (opts.budget) {
        s << "best under budget " << *opts.budget << ": ";
        if (best) {
          const DsePoint& p = report.points[*best];
          s << '#' << *best << "  " << p.depths.to_string(names) << "  cycles "
            << p.result.cycles << '\n';
        } else {
          s << "none\n";
        }
      }
      if (timing) {
        s << std::fixed << std::setprecision(3) << "wall " << report.wall_micros / 1000
          << " ms  mean point " << report.mean_point_micros / 1000 << " ms  speedup "
          << std::setprecision(2) << report.speedup << "x on " << report.parallelism
          << " worker(s)\n";
      }
      break;
  }
  emit(opts, s.str(), out);
  return kExitOk;
}

int cmd_gen(const Options& opts, std::ostream& out) {
  if (opts.output.empty()) throw Error("gen needs -o <directory>");
  Design design;
  if (opts.shape == "random") {
    GenParams p;
    p.seed = opts.seed;
    std::tie(p.min_modules, p.max_modules) = [&] {
      auto [lo, hi] = parse_range(opts.modules, "module range");
      return std::pair<std::uint32_t, std::uint32_t>(lo, hi);
    }();
    std::tie(p.min_fifos, p.max_fifos) = [&] {
      auto [lo, hi] = parse_range(opts.fifos, "fifo range");
      return std::pair<std::uint32_t, std::uint32_t>(lo, hi);
    }();
    std::tie(p.min_axis, p.max_axis) = [&] {
      auto [lo, hi] = parse_range(opts.axis, "axi range");
      return std::pair<std::uint32_t, std::uint32_t>(lo, hi);
    }();
    std::tie(p.min_tokens, p.max_tokens) = parse_range(opts.tokens, "token range");
    p.max_tripcount = std::max(opts.max_tripcount, p.max_tokens);
    p.pipelined_probability = opts.pipelined_probability;
    const auto topology = topology_from_name(opts.topology);
    if (!topology) throw Error("unknown topology '" + opts.topology + "'");
    p.topology = *topology;
    design = generate_design(p);
  } else if (opts.shape == "cross-coupled") {
    design = cross_coupled_design();
  } else if (opts.shape == "burst-loop") {
    design = burst_loop_design(opts.tripcount);
  } else {
    throw Error("unknown shape '" + opts.shape + "'");
  }
  std::filesystem::create_directories(opts.output);
  const std::string schedule_path = opts.output + "/design.schedule";
  const std::string trace_path = opts.output + "/design.trace";
  write_file(schedule_path, write_schedule(design.schedule));
  write_file(trace_path, write_trace(design.trace));
  out << schedule_path << '\n' << trace_path << '\n';
  return kExitOk;
}

int cmd_expand(const Options& opts, std::ostream& out) {
  if (opts.trace_path.empty()) throw Error("expand needs --trace");
  const Trace trace = with_path(
      opts.trace_path, [](const std::string& t) { return parse_trace(std::string_view(t)); });
  emit(opts, write_trace(expand_loops(trace)), out);
  return kExitOk;
}

int cmd_validate(const Options& opts, std::ostream& out) {
  if (opts.schedule_path.empty() || opts.trace_path.empty()) {
    throw Error("--schedule and --trace are required");
  }
  const Schedule schedule = with_path(
      opts.schedule_path, [](const std::string& t) { return parse_schedule(t); });
  const Trace trace = with_path(
      opts.trace_path, [](const std::string& t) { return parse_trace(std::string_view(t)); });
  const auto violations = validate_trace(trace, schedule);
  std::ostringstream s;
  if (violations.empty()) s << "valid\n";
  for (const Violation& v : violations) {
    s << "record " << v.record << ": " << v.message << '\n';
  }
  emit(opts, s.str(), out);
  return violations.empty() ? kExitOk : kExitError;
}

void add_format(CLI::App* cmd, Options& opts) {
  cmd->add_option("--format", opts.format, "Report format")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Format>{{"text", Format::kText},
                                        {"json", Format::kJson},
                                        {"csv", Format::kCsv}}))
      ->option_text("text|json|csv");
}

void add_inputs(CLI::App* cmd, Options& opts, bool graph, bool compiles = true) {
  cmd->add_option("--schedule", opts.schedule_path, "Schedule file");
  cmd->add_option("--trace", opts.trace_path, "Trace file");
  if (graph) cmd->add_option("--graph", opts.graph_path, "Compiled graph file");
  if (compiles) {
    cmd->add_flag("--no-eliminate", opts.no_eliminate,
                  "Keep single-predecessor nodes");
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  Options opts;
  CLI::App app("Stage-graph simulator for dataflow designs", "stagegraph");
  app.require_subcommand(1);

  auto* simulate = app.add_subcommand("simulate", "Compile and evaluate one depth vector");
  add_inputs(simulate, opts, true);
  simulate->add_option("--depths", opts.depths, "fifo=depth,... or @file")->expected(1);
  add_format(simulate, opts);
  simulate->add_option("-o", opts.output, "Report file");

  auto* oracle = app.add_subcommand("oracle", "Evaluate with the reference simulator");
  add_inputs(oracle, opts, false, false);
  oracle->add_option("--depths", opts.depths, "fifo=depth,... or @file")->expected(1);
  add_format(oracle, opts);
  oracle->add_option("-o", opts.output, "Report file");

  auto* compile_cmd = app.add_subcommand("compile", "Write the compiled graph");
  add_inputs(compile_cmd, opts, false);
  add_format(compile_cmd, opts);
  compile_cmd->add_option("-o", opts.output, "Graph file")->required();

  auto* dse = app.add_subcommand("dse", "Explore fifo depths");
  add_inputs(dse, opts, true);
  dse->add_option("--depths", opts.depths,
                  "Explicit point (repeatable), or sweep base");
  auto* sweep = dse->add_option("--sweep", opts.sweep, "<fifo>:<lo>..<hi>");
  auto* random = dse->add_option("--random", opts.random, "Number of random points");
  random->excludes(sweep);
  dse->add_option("--seed", opts.seed, "Random seed");
  dse->add_option("--range", opts.range, "Random depth range <lo>..<hi>");
  dse->add_option("--parallelism", opts.parallelism,
                  "Worker threads (default: hardware threads)");
  dse->add_option("--budget", opts.budget, "Report the best point within this total depth");
  dse->add_flag("--no-timing", opts.no_timing, "Omit timing fields");
  add_format(dse, opts);
  dse->add_option("-o", opts.output, "Report file");

  auto* gen = app.add_subcommand("gen", "Generate a synthetic design");
  gen->add_option("--shape", opts.shape, "random, cross-coupled or burst-loop");
  gen->add_option("--seed", opts.seed, "Random seed");
  gen->add_option("--modules", opts.modules, "Process count range");
  gen->add_option("--fifos", opts.fifos, "Fifo count range");
  gen->add_option("--axis", opts.axis, "AXI interface count range");
  gen->add_option("--tokens", opts.tokens, "Tokens per fifo range");
  gen->add_option("--max-tripcount", opts.max_tripcount, "Largest loop tripcount");
  gen->add_option("--pipelined", opts.pipelined_probability,
                  "Probability that a loop is pipelined");
  gen->add_option("--topology", opts.topology, "chain, tree or random-dag");
  gen->add_option("--tripcount", opts.tripcount, "Burst length for burst-loop");
  gen->add_option("-o", opts.output, "Output directory")->required();

  auto* expand = app.add_subcommand("expand", "Write the trace with loops unrolled");
  expand->add_option("--trace", opts.trace_path, "Trace file")->required();
  expand->add_option("-o", opts.output, "Output file");

  auto* validate = app.add_subcommand("validate", "Check a trace against a schedule");
  validate->add_option("--schedule", opts.schedule_path, "Schedule file")->required();
  validate->add_option("--trace", opts.trace_path, "Trace file")->required();
  validate->add_option("-o", opts.output, "Report file");

  std::vector<const char*> argv{"stagegraph"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*simulate) return cmd_simulate(opts, out);
    if (*oracle) return cmd_oracle(opts, out);
    if (*compile_cmd) return cmd_compile(opts, out);
    if (*dse) return cmd_dse(opts, out);
    if (*gen) return cmd_gen(opts, out);
    if (*expand) return cmd_expand(opts, out);
    if (*validate) return cmd_validate(opts, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitError;
}

}  // namespace stagegraph
