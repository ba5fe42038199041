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

#include "stagegraph/dse.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ostream>
#include <random>
#include <thread>

#include <json.hpp>

namespace stagegraph {
namespace {

using Clock = std::chrono::steady_clock;

double micros_since(Clock::time_point start) {
  return std::chrono::duration<double, std::micro>(Clock::now() - start).count();
}

void check_range(std::uint64_t lo, std::uint64_t hi) {
  if (lo == 0) throw SimError("depth range must not contain 0");
  if (lo > hi) throw SimError("empty depth range");
}

void evaluate_range(const SimGraph& graph, const std::vector<DepthVector>& points,
                    std::vector<DsePoint>& out, std::atomic<std::size_t>& next) {
  Traversal traversal(graph);
  while (true) {
    const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
    if (i >= points.size()) return;
    DsePoint& point = out[i];
    const auto start = Clock::now();
    try {
      point.result = traversal.run(points[i]);
    } catch (const Error& e) {
      point.error = e.what();
    }
    point.micros = micros_since(start);
  }
}

}  // namespace

std::vector<DepthVector> sample(const DseSpec& spec, std::size_t fifo_count) {
  std::vector<DepthVector> out;
  switch (spec.mode) {
    case DseSpec::Mode::kExplicit:
      for (const DepthVector& p : spec.points) {
        if (p.size() != fifo_count) {
          throw SimError("design point does not cover every fifo");
        }
      }
      return spec.points;
    case DseSpec::Mode::kRandom: {
      check_range(spec.lo, spec.hi);
      std::mt19937_64 rng(spec.seed);
      std::uniform_int_distribution<std::uint64_t> draw(spec.lo, spec.hi);
      out.reserve(spec.count);
      for (std::size_t i = 0; i < spec.count; ++i) {
        std::vector<std::uint64_t> depths(fifo_count);
        for (auto& d : depths) d = draw(rng);
        out.emplace_back(std::move(depths));
      }
      return out;
    }
    case DseSpec::Mode::kSweep: {
      check_range(spec.lo, spec.hi);
      if (spec.base.size() != fifo_count) {
        throw SimError("sweep base does not cover every fifo");
      }
      if (spec.fifo.index() >= fifo_count) throw SimError("sweep fifo out of range");
      for (std::uint64_t d = spec.lo; d <= spec.hi; ++d) {
        std::vector<std::uint64_t> depths = spec.base.values();
        depths[spec.fifo.index()] = d;
        out.emplace_back(std::move(depths));
      }
      return out;
    }
  }
  return out;
}

DseReport evaluate(const SimGraph& graph, const std::vector<DepthVector>& points,
                   std::size_t parallelism) {
  DseReport report;
  report.parallelism = std::max<std::size_t>(1, parallelism);
  report.points.resize(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    report.points[i].depths = points[i];
  }

  const auto start = Clock::now();
  std::atomic<std::size_t> next{0};
  if (report.parallelism == 1) {
    evaluate_range(graph, points, report.points, next);
  } else {
    std::vector<std::jthread> workers;
    workers.reserve(report.parallelism);
    for (std::size_t w = 0; w < report.parallelism; ++w) {
      workers.emplace_back([&] { evaluate_range(graph, points, report.points, next); });
    }
  }
  report.wall_micros = micros_since(start);

  for (std::size_t i = 0; i < report.points.size(); ++i) {
    const DsePoint& p = report.points[i];
    report.total_point_micros += p.micros;
    if (p.error) {
      ++report.errors;
    } else if (p.result.deadlock) {
      ++report.deadlocks;
    } else if (!report.min_cycles || p.result.cycles < *report.min_cycles) {
      report.min_cycles = p.result.cycles;
      report.argmin = i;
    }
  }
  if (report.argmin) {
    report.argmin_buffer_total = report.points[*report.argmin].depths.total();
  }
  if (!report.points.empty()) {
    report.mean_point_micros = report.total_point_micros / report.points.size();
  }
  if (report.wall_micros > 0) {
    report.speedup = report.total_point_micros / report.wall_micros;
  }
  return report;
}

std::optional<std::size_t> best_under_budget(const DseReport& report,
                                             std::uint64_t budget) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    const DsePoint& p = report.points[i];
    if (p.error || p.result.deadlock || p.depths.total() > budget) continue;
    if (!best) {
      best = i;
      continue;
    }
    const DsePoint& b = report.points[*best];
    const auto key = [](const DsePoint& x) {
      return std::make_tuple(x.result.cycles, x.depths.total(),
                             std::cref(x.depths.values()));
    };
    if (key(p) < key(b)) best = i;
  }
  return best;
}

void write_report_json(const DseReport& report,
                       const std::vector<std::string>& fifo_names,
                       std::ostream& out, bool timing) {
  using Json = nlohmann::ordered_json;
  Json j;
  j["fifos"] = fifo_names;
  Json points = Json::array();
  for (const DsePoint& p : report.points) {
    Json point;
    point["depths"] = p.depths.values();
    if (p.error) {
      point["outcome"] = "error";
      point["error"] = *p.error;
    } else if (p.result.deadlock) {
      point["outcome"] = "deadlock";
      Json witness = Json::array();
      for (NodeId id : p.result.witness) witness.push_back(id.value);
      point["witness"] = std::move(witness);
    } else {
      point["outcome"] = "cycles";
      point["cycles"] = p.result.cycles;
    }
    if (timing) point["micros"] = p.micros;
    points.push_back(std::move(point));
  }
  j["points"] = std::move(points);
  Json summary;
  summary["count"] = report.points.size();
  summary["deadlocks"] = report.deadlocks;
  summary["errors"] = report.errors;
  summary["min_cycles"] = report.min_cycles ? Json(*report.min_cycles) : Json();
  summary["argmin"] = report.argmin ? Json(*report.argmin) : Json();
  summary["argmin_depths"] =
      report.argmin ? Json(report.points[*report.argmin].depths.values()) : Json();
  summary["argmin_buffer_total"] = report.argmin_buffer_total;
  if (timing) {
    summary["parallelism"] = report.parallelism;
    summary["total_point_micros"] = report.total_point_micros;
    summary["mean_point_micros"] = report.mean_point_micros;
    summary["wall_micros"] = report.wall_micros;
    summary["speedup"] = report.speedup;
  }
  j["summary"] = std::move(summary);
  out << j.dump(2) << '\n';
}

void write_report_csv(const DseReport& report,
                      const std::vector<std::string>& fifo_names,
                      std::ostream& out, bool timing) {
  for (const std::string& name : fifo_names) out << name << ',';
  out << "cycles";
  if (timing) out << ",micros";
  out << '\n';
  for (const DsePoint& p : report.points) {
    for (std::uint64_t d : p.depths.values()) out << d << ',';
    if (p.error) {
      out << "ERROR";
    } else if (p.result.deadlock) {
      out << "DEADLOCK";
    } else {
      out << p.result.cycles;
    }
    if (timing) out << ',' << static_cast<std::uint64_t>(p.micros);
    out << '\n';
  }
}

}  // namespace stagegraph
