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

#include "stagegraph/trace.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <ostream>
#include <sstream>

#include "text_util.hpp"

namespace stagegraph {
namespace {

constexpr std::array<std::pair<EventTag, std::string_view>, 9> kKeywords = {{
    {EventTag::kCall, "call"},
    {EventTag::kReturn, "return"},
    {EventTag::kFifoRead, "fifo_read"},
    {EventTag::kFifoWrite, "fifo_write"},
    {EventTag::kAxiReadReq, "axi_rreq"},
    {EventTag::kAxiRead, "axi_r"},
    {EventTag::kAxiWriteReq, "axi_wreq"},
    {EventTag::kAxiWrite, "axi_w"},
    {EventTag::kAxiWriteResp, "axi_b"},
}};

std::optional<IterationRange> parse_qualifier(std::string_view token,
                                              std::size_t line) {
  token.remove_prefix(1);  // '@'
  if (auto range = text::parse_range(token)) {
    if (range->first > range->second) {
      throw ParseError(line, "empty iteration range");
    }
    return IterationRange{range->first, range->second};
  }
  if (auto k = text::parse_uint(token)) return IterationRange{*k, *k};
  throw ParseError(line, "bad iteration qualifier '@" + std::string(token) +
                             "'");
}

EventRecord parse_event(EventTag tag, std::vector<std::string_view> args,
                        std::size_t line) {
  EventRecord record;
  if (!args.empty() && args.back().starts_with('@')) {
    record.iterations = parse_qualifier(args.back(), line);
    args.pop_back();
  }
  EventKind& kind = record.kind;
  kind.tag = tag;
  auto keyword = std::string(event_keyword(tag));
  auto expect_args = [&](std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi) {
      throw ParseError(line, "'" + keyword + "' expects " +
                                 (lo == hi ? std::to_string(lo)
                                           : std::to_string(lo) + "-" +
                                                 std::to_string(hi)) +
                                 " argument(s), got " +
                                 std::to_string(args.size()));
    }
  };
  switch (tag) {
    case EventTag::kReturn:
      expect_args(0, 0);
      break;
    case EventTag::kCall:
    case EventTag::kFifoRead:
    case EventTag::kFifoWrite:
    case EventTag::kAxiWriteResp:
      expect_args(1, 1);
      kind.target = args[0];
      break;
    case EventTag::kAxiReadReq:
    case EventTag::kAxiWriteReq: {
      expect_args(2, 2);
      kind.target = args[0];
      auto burst = text::expect_uint(args[1], line, "burst");
      if (burst == 0 || burst > UINT32_MAX) {
        throw ParseError(line, "burst must be in 1..2^32-1");
      }
      kind.burst = static_cast<std::uint32_t>(burst);
      break;
    }
    case EventTag::kAxiRead:
    case EventTag::kAxiWrite:
      expect_args(1, 2);
      kind.target = args[0];
      if (args.size() == 2) {
        if (args[1] != "last") {
          throw ParseError(line, "expected 'last', got '" +
                                     std::string(args[1]) + "'");
        }
        kind.last = true;
      }
      break;
  }
  return record;
}

void write_event(const EventRecord& record, std::ostream& out) {
  const EventKind& kind = record.kind;
  out << event_keyword(kind.tag);
  if (!kind.target.empty()) out << ' ' << kind.target;
  if (is_axi_request(kind.tag)) out << ' ' << kind.burst;
  if (kind.last) out << " last";
  if (record.iterations) {
    out << " @" << record.iterations->first;
    if (record.iterations->last != record.iterations->first) {
      out << ".." << record.iterations->last;
    }
  }
}

struct Expander {
  const Trace& trace;
  const std::vector<std::size_t>& match;
  const std::function<void(const TraceRecord&, std::size_t)>& visit;

  void run(std::size_t begin, std::size_t end,
           std::optional<std::uint64_t> iteration) const {
    for (std::size_t i = begin; i < end; ++i) {
      const TraceRecord& record = trace.records[i];
      if (const auto* loop = std::get_if<LoopBegin>(&record)) {
        std::size_t close = match[i];
        for (std::uint64_t k = 0; k < loop->tripcount; ++k) {
          run(i + 1, close, k);
        }
        i = close;
        continue;
      }
      if (const auto* event = std::get_if<EventRecord>(&record)) {
        if (iteration && event->iterations &&
            !event->iterations->contains(*iteration)) {
          continue;
        }
      }
      visit(record, i);
    }
  }
};

// Records produced by one execution of the loop opened at `index`.
std::uint64_t loop_record_count(const Trace& trace,
                                const std::vector<std::size_t>& match,
                                std::size_t index) {
  const auto& loop = std::get<LoopBegin>(trace.records[index]);
  const std::uint64_t trips = loop.tripcount;
  std::uint64_t total = 0;
  for (std::size_t i = index + 1; i < match[index]; ++i) {
    const TraceRecord& record = trace.records[i];
    if (std::holds_alternative<LoopBegin>(record)) {
      total += trips * loop_record_count(trace, match, i);
      i = match[i];
    } else if (const auto* event = std::get_if<EventRecord>(&record);
               event != nullptr && event->iterations) {
      const auto& range = *event->iterations;
      if (trips > 0 && range.first < trips) {
        total += std::min(range.last, trips - 1) - range.first + 1;
      }
    } else {
      total += trips;
    }
  }
  return total;
}

}  // namespace

std::string_view event_keyword(EventTag tag) {
  for (const auto& [t, keyword] : kKeywords) {
    if (t == tag) return keyword;
  }
  return "?";
}

std::optional<EventTag> event_tag_from_keyword(std::string_view keyword) {
  for (const auto& [tag, k] : kKeywords) {
    if (k == keyword) return tag;
  }
  return std::nullopt;
}

Trace parse_trace(std::string_view text) {
  Trace trace;
  bool have_version = false;
  text::for_each_line(text, [&](std::size_t line, std::string_view content) {
    auto tokens = text::tokenize(content);
    if (tokens.empty()) return;
    if (!have_version) {
      if (tokens.size() != 1 || tokens[0] != kTraceVersion) {
        throw ParseError(line, "version mismatch: expected '" +
                                   std::string(kTraceVersion) + "', got '" +
                                   std::string(content) + "'");
      }
      trace.version = std::string(tokens[0]);
      have_version = true;
      return;
    }
    std::string_view head = tokens[0];
    std::vector<std::string_view> args(tokens.begin() + 1, tokens.end());
    if (head == "bb") {
      if (args.size() != 1) throw ParseError(line, "'bb' expects a block id");
      trace.records.emplace_back(BlockRecord{std::string(args[0])});
    } else if (head == "loop") {
      if (args.size() < 2) {
        throw ParseError(line, "'loop' expects a tripcount and blocks");
      }
      LoopBegin loop;
      loop.tripcount = text::expect_uint(args[0], line, "tripcount");
      if (loop.tripcount == 0) throw ParseError(line, "tripcount must be >= 1");
      for (std::size_t i = 1; i < args.size(); ++i) {
        loop.blocks.emplace_back(args[i]);
      }
      trace.records.emplace_back(std::move(loop));
    } else if (head == "end_loop") {
      if (!args.empty()) throw ParseError(line, "'end_loop' takes no arguments");
      trace.records.emplace_back(LoopEnd{});
    } else if (auto tag = event_tag_from_keyword(head)) {
      trace.records.emplace_back(parse_event(*tag, std::move(args), line));
    } else {
      throw ParseError(line, "unknown record tag '" + std::string(head) + "'");
    }
  });
  if (!have_version) throw ParseError(0, "missing version header");
  return trace;
}

Trace parse_trace(std::istream& input) {
  return parse_trace(text::slurp(input));
}

void write_trace(const Trace& trace, std::ostream& out) {
  out << trace.version << '\n';
  std::size_t depth = 0;
  for (const TraceRecord& record : trace.records) {
    if (std::holds_alternative<LoopEnd>(record) && depth > 0) --depth;
    for (std::size_t i = 0; i < depth; ++i) out << "  ";
    std::visit(
        [&](const auto& r) {
          using R = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<R, BlockRecord>) {
            out << "bb " << r.block;
          } else if constexpr (std::is_same_v<R, LoopBegin>) {
            out << "loop " << r.tripcount;
            for (const auto& block : r.blocks) out << ' ' << block;
            ++depth;
          } else if constexpr (std::is_same_v<R, LoopEnd>) {
            out << "end_loop";
          } else {
            write_event(r, out);
          }
        },
        record);
    out << '\n';
  }
}

std::string write_trace(const Trace& trace) {
  std::ostringstream out;
  write_trace(trace, out);
  return out.str();
}

std::vector<std::size_t> match_loops(const Trace& trace) {
  std::vector<std::size_t> match(trace.records.size());
  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    match[i] = i;
    if (std::holds_alternative<LoopBegin>(trace.records[i])) {
      open.push_back(i);
    } else if (std::holds_alternative<LoopEnd>(trace.records[i])) {
      if (open.empty()) {
        throw ValidationError("record " + std::to_string(i) +
                              ": end_loop without matching loop");
      }
      match[open.back()] = i;
      open.pop_back();
    }
  }
  if (!open.empty()) {
    throw ValidationError("record " + std::to_string(open.back()) +
                          ": loop without matching end_loop");
  }
  return match;
}

void for_each_expanded(
    const Trace& trace,
    const std::function<void(const TraceRecord&, std::size_t)>& visit) {
  auto match = match_loops(trace);
  Expander{trace, match, visit}.run(0, trace.records.size(), std::nullopt);
}

Trace expand_loops(const Trace& trace) {
  Trace out;
  out.version = trace.version;
  out.records.reserve(trace.records.size());
  for_each_expanded(trace, [&](const TraceRecord& record, std::size_t) {
    if (const auto* event = std::get_if<EventRecord>(&record);
        event != nullptr && event->iterations) {
      out.records.emplace_back(EventRecord{event->kind, std::nullopt});
    } else {
      out.records.push_back(record);
    }
  });
  return out;
}

std::uint64_t expanded_record_count(const Trace& trace) {
  auto match = match_loops(trace);
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    if (std::holds_alternative<LoopBegin>(trace.records[i])) {
      total += loop_record_count(trace, match, i);
      i = match[i];
    } else {
      ++total;
    }
  }
  return total;
}

}  // namespace stagegraph
