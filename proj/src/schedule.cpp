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

#include <istream>
#include <ostream>
#include <sstream>

#include "text_util.hpp"

namespace stagegraph {
namespace {

// Splits `key=value`; nullopt when the token has no '='.
std::optional<std::pair<std::string_view, std::string_view>> split_key_value(
    std::string_view token) {
  auto eq = token.find('=');
  if (eq == std::string_view::npos) return std::nullopt;
  return std::make_pair(token.substr(0, eq), token.substr(eq + 1));
}

class ScheduleParser {
 public:
  Schedule run(std::string_view text) {
    text::for_each_line(text, [&](std::size_t line, std::string_view content) {
      line_ = line;
      auto tokens = text::tokenize(content);
      if (!tokens.empty()) handle(tokens);
    });
    if (current_ != nullptr) {
      throw ParseError(0, "function '" + current_name_ + "' missing end_fn");
    }
    if (schedule_.top.empty()) throw ParseError(0, "missing 'top' line");
    try {
      check_schedule(schedule_);
    } catch (const ValidationError& e) {
      throw ParseError(0, e.what());
    }
    return std::move(schedule_);
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(line_, message);
  }

  void handle(const std::vector<std::string_view>& tokens) {
    std::string_view head = tokens[0];
    if (head == "top") {
      if (tokens.size() != 2) fail("'top' expects a function name");
      if (!schedule_.top.empty()) fail("duplicate 'top'");
      schedule_.top = tokens[1];
    } else if (head == "fifo") {
      if (tokens.size() != 2) fail("'fifo' expects an id");
      if (!schedule_.fifos.emplace(tokens[1]).second) {
        fail("duplicate fifo '" + std::string(tokens[1]) + "'");
      }
    } else if (head == "axi") {
      parse_axi(tokens);
    } else if (head == "fn") {
      if (tokens.size() != 2) fail("'fn' expects a name");
      if (current_ != nullptr) fail("nested 'fn'");
      current_name_ = tokens[1];
      auto [it, inserted] = schedule_.functions.try_emplace(current_name_);
      if (!inserted) fail("duplicate function '" + current_name_ + "'");
      current_ = &it->second;
    } else if (head == "end_fn") {
      if (current_ == nullptr) fail("'end_fn' outside a function");
      current_ = nullptr;
    } else if (head == "block") {
      if (current_ == nullptr) fail("'block' outside a function");
      parse_block(tokens);
    } else if (head == "loopinfo") {
      if (current_ == nullptr) fail("'loopinfo' outside a function");
      parse_loopinfo(tokens);
    } else {
      fail("unknown schedule line '" + std::string(head) + "'");
    }
  }

  std::uint64_t number(std::string_view key, std::string_view value) const {
    return text::expect_uint(value, line_, key);
  }

  void parse_axi(const std::vector<std::string_view>& tokens) {
    if (tokens.size() < 2) fail("'axi' expects an id");
    AxiParams params;
    for (std::size_t i = 2; i < tokens.size(); ++i) {
      auto kv = split_key_value(tokens[i]);
      if (!kv) fail("expected key=value, got '" + std::string(tokens[i]) + "'");
      auto [key, value] = *kv;
      if (key == "read_latency") {
        params.read_latency = number(key, value);
      } else if (key == "write_resp_latency") {
        params.write_resp_latency = number(key, value);
      } else if (key == "rctl_depth") {
        auto depth = number(key, value);
        if (depth == 0 || depth > UINT32_MAX) fail("rctl_depth must be >= 1");
        params.rctl_depth = static_cast<std::uint32_t>(depth);
      } else if (key == "request_overhead") {
        params.request_overhead = number(key, value);
      } else {
        fail("unknown axi parameter '" + std::string(key) + "'");
      }
    }
    if (!schedule_.axis.try_emplace(std::string(tokens[1]), params).second) {
      fail("duplicate axi '" + std::string(tokens[1]) + "'");
    }
  }

  void parse_block(const std::vector<std::string_view>& tokens) {
    if (tokens.size() < 3) fail("'block' expects an id and len=<n>");
    auto len = split_key_value(tokens[2]);
    if (!len || len->first != "len") fail("expected len=<n>");
    BlockSchedule block;
    block.length = number("len", len->second);
    std::size_t i = 3;
    while (i < tokens.size()) {
      if (tokens[i] != "slot") {
        fail("expected 'slot', got '" + std::string(tokens[i]) + "'");
      }
      if (i + 2 >= tokens.size()) fail("'slot' expects a stage and a kind");
      SlotTemplate slot;
      slot.static_stage = number("slot stage", tokens[i + 1]);
      auto tag = event_tag_from_keyword(tokens[i + 2]);
      if (!tag || *tag == EventTag::kReturn) {
        fail("bad slot kind '" + std::string(tokens[i + 2]) + "'");
      }
      slot.tag = *tag;
      i += 3;
      if (i < tokens.size() && tokens[i] != "slot") {
        slot.target = tokens[i];
        ++i;
      }
      block.slots.push_back(std::move(slot));
    }
    if (!current_->blocks.try_emplace(std::string(tokens[1]), block).second) {
      fail("duplicate block '" + std::string(tokens[1]) + "'");
    }
  }

  void parse_loopinfo(const std::vector<std::string_view>& tokens) {
    std::vector<std::string> blocks;
    LoopInfo info;
    bool have_ii = false;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      auto kv = split_key_value(tokens[i]);
      if (!kv) {
        blocks.emplace_back(tokens[i]);
        continue;
      }
      auto [key, value] = *kv;
      if (key == "pipelined") {
        auto flag = number(key, value);
        if (flag > 1) fail("pipelined must be 0 or 1");
        info.pipelined = flag == 1;
      } else if (key == "ii") {
        auto ii = number(key, value);
        if (ii > UINT32_MAX) fail("ii out of range");
        info.ii = static_cast<std::uint32_t>(ii);
        have_ii = true;
      } else if (key == "overlap") {
        auto overlap = number(key, value);
        if (overlap > UINT32_MAX) fail("overlap out of range");
        info.overlap = static_cast<std::uint32_t>(overlap);
      } else {
        fail("unknown loopinfo parameter '" + std::string(key) + "'");
      }
    }
    if (blocks.empty()) fail("'loopinfo' expects blocks");
    if (info.pipelined && !have_ii) fail("pipelined loop requires ii");
    if (!info.pipelined) info.ii = 1;
    if (!current_->loops.try_emplace(std::move(blocks), info).second) {
      fail("duplicate loopinfo");
    }
  }

  Schedule schedule_;
  FunctionSchedule* current_ = nullptr;
  std::string current_name_;
  std::size_t line_ = 0;
};

}  // namespace

void check_schedule(const Schedule& schedule) {
  auto fail = [](const std::string& message) {
    throw ValidationError(message);
  };
  if (!schedule.functions.contains(schedule.top)) {
    fail("top function '" + schedule.top + "' is not defined");
  }
  for (const auto& [fn_name, fn] : schedule.functions) {
    std::map<std::string, const std::vector<std::string>*> loop_of_block;
    for (const auto& [blocks, info] : fn.loops) {
      if (info.pipelined && info.ii == 0) {
        fail(fn_name + ": pipelined loop requires ii >= 1");
      }
      Stage iteration_length = 0;
      for (const auto& block : blocks) {
        auto it = fn.blocks.find(block);
        if (it == fn.blocks.end()) {
          fail(fn_name + ": loopinfo names unknown block '" + block + "'");
        }
        if (!loop_of_block.emplace(block, &blocks).second) {
          fail(fn_name + ": block '" + block + "' belongs to two loops");
        }
        for (const auto& slot : it->second.slots) {
          if (slot.tag == EventTag::kCall) {
            fail(fn_name + ": loop block '" + block + "' contains a call");
          }
        }
        iteration_length += it->second.length;
      }
      if (info.overlap + 1 < iteration_length) {
        fail(fn_name + ": loop overlap " + std::to_string(info.overlap) +
             " shorter than iteration length " +
             std::to_string(iteration_length) + " - 1");
      }
    }
    for (const auto& [block_name, block] : fn.blocks) {
      if (block.length == 0) {
        fail(fn_name + ": block '" + block_name + "' has length 0");
      }
      Stage previous = 0;
      for (const auto& slot : block.slots) {
        if (slot.static_stage >= block.length) {
          fail(fn_name + ": block '" + block_name + "' slot stage " +
               std::to_string(slot.static_stage) + " >= len");
        }
        if (slot.static_stage < previous) {
          fail(fn_name + ": block '" + block_name +
               "' slots not ordered by stage");
        }
        previous = slot.static_stage;
        if (slot.tag == EventTag::kReturn) {
          fail(fn_name + ": return cannot be a slot");
        }
        if (slot.tag == EventTag::kCall) {
          if (!schedule.functions.contains(slot.target)) {
            fail(fn_name + ": dangling callee '" + slot.target + "'");
          }
        } else if (!slot.target.empty()) {
          bool known = is_fifo_event(slot.tag)
                           ? schedule.fifos.contains(slot.target)
                           : schedule.axis.contains(slot.target);
          if (!known) {
            fail(fn_name + ": slot references undeclared id '" + slot.target +
                 "'");
          }
        }
      }
    }
  }
  for (const auto& [name, params] : schedule.axis) {
    if (params.rctl_depth == 0) fail("axi '" + name + "': rctl_depth must be >= 1");
  }
}

Schedule parse_schedule(std::string_view text) {
  return ScheduleParser{}.run(text);
}

Schedule parse_schedule(std::istream& input) {
  return parse_schedule(text::slurp(input));
}

void write_schedule(const Schedule& schedule, std::ostream& out) {
  out << "top " << schedule.top << '\n';
  for (const auto& fifo : schedule.fifos) out << "fifo " << fifo << '\n';
  for (const auto& [name, p] : schedule.axis) {
    out << "axi " << name << " read_latency=" << p.read_latency
        << " write_resp_latency=" << p.write_resp_latency
        << " rctl_depth=" << p.rctl_depth
        << " request_overhead=" << p.request_overhead << '\n';
  }
  for (const auto& [fn_name, fn] : schedule.functions) {
    out << "fn " << fn_name << '\n';
    for (const auto& [block_name, block] : fn.blocks) {
      out << "  block " << block_name << " len=" << block.length;
      for (const auto& slot : block.slots) {
        out << " slot " << slot.static_stage << ' ' << event_keyword(slot.tag);
        if (!slot.target.empty()) out << ' ' << slot.target;
      }
      out << '\n';
    }
    for (const auto& [blocks, info] : fn.loops) {
      out << "  loopinfo";
      for (const auto& block : blocks) out << ' ' << block;
      out << " pipelined=" << (info.pipelined ? 1 : 0) << " ii=" << info.ii
          << " overlap=" << info.overlap << '\n';
    }
    out << "end_fn\n";
  }
}

std::string write_schedule(const Schedule& schedule) {
  std::ostringstream out;
  write_schedule(schedule, out);
  return out.str();
}

Stage loop_end_stage(Stage start, const LoopInfo& info,
                     std::uint64_t tripcount, Stage header_len) {
  const Stage step = info.pipelined ? info.ii : Stage{info.overlap} + 1;
  return start + info.overlap + step * (tripcount - 1) + header_len;
}

ScheduleIndex::ScheduleIndex(const Schedule& schedule) : schedule_(&schedule) {
  for (const auto& [name, fn] : schedule.functions) {
    function_ids_.emplace(name, static_cast<std::uint32_t>(function_names_.size()));
    function_names_.push_back(name);
    FunctionEntry entry;
    for (const auto& [block_name, block] : fn.blocks) {
      entry.blocks.emplace(block_name, &block);
    }
    for (const auto& [blocks, info] : fn.loops) {
      LoopRef ref;
      ref.blocks = &blocks;
      ref.info = info;
      for (const auto& block : blocks) {
        auto it = fn.blocks.find(block);
        if (it != fn.blocks.end()) ref.iteration_length += it->second.length;
      }
      if (auto it = fn.blocks.find(blocks.front()); it != fn.blocks.end()) {
        ref.header_len = it->second.length;
      }
      entry.loop_of_header.emplace(blocks.front(), entry.loops.size());
      for (const auto& block : blocks) {
        entry.loop_of_block.emplace(block, entry.loops.size());
      }
      entry.loops.push_back(ref);
    }
    functions_.push_back(std::move(entry));
  }
  for (const auto& fifo : schedule.fifos) {
    fifo_ids_.emplace(fifo, static_cast<std::uint32_t>(fifo_names_.size()));
    fifo_names_.push_back(fifo);
  }
  for (const auto& [name, params] : schedule.axis) {
    axi_ids_.emplace(name, static_cast<std::uint32_t>(axi_names_.size()));
    axi_names_.push_back(name);
    axi_params_.push_back(params);
  }
  if (auto top = function(schedule.top)) top_ = *top;
}

std::optional<FunctionId> ScheduleIndex::function(std::string_view name) const {
  auto it = function_ids_.find(std::string(name));
  if (it == function_ids_.end()) return std::nullopt;
  return FunctionId{it->second};
}

std::optional<FifoId> ScheduleIndex::fifo(std::string_view name) const {
  auto it = fifo_ids_.find(std::string(name));
  if (it == fifo_ids_.end()) return std::nullopt;
  return FifoId{it->second};
}

std::optional<AxiId> ScheduleIndex::axi(std::string_view name) const {
  auto it = axi_ids_.find(std::string(name));
  if (it == axi_ids_.end()) return std::nullopt;
  return AxiId{it->second};
}

const BlockSchedule* ScheduleIndex::block(FunctionId fn,
                                          std::string_view name) const {
  const auto& blocks = functions_[fn.index()].blocks;
  auto it = blocks.find(std::string(name));
  return it == blocks.end() ? nullptr : it->second;
}

const ScheduleIndex::LoopRef* ScheduleIndex::loop_by_header(
    FunctionId fn, std::string_view header) const {
  const auto& entry = functions_[fn.index()];
  auto it = entry.loop_of_header.find(std::string(header));
  return it == entry.loop_of_header.end() ? nullptr : &entry.loops[it->second];
}

const ScheduleIndex::LoopRef* ScheduleIndex::loop_containing(
    FunctionId fn, std::string_view block) const {
  const auto& entry = functions_[fn.index()];
  auto it = entry.loop_of_block.find(std::string(block));
  return it == entry.loop_of_block.end() ? nullptr : &entry.loops[it->second];
}

}  // namespace stagegraph
