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

#ifndef STAGEGRAPH_COMMON_HPP_
#define STAGEGRAPH_COMMON_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace stagegraph {

/// Clock cycles. Also used for edge delays.
using Cycles = std::uint64_t;
/// Dynamic or static stage number.
using Stage = std::uint64_t;

inline constexpr Cycles kNoTime = std::numeric_limits<Cycles>::max();

/// Dense index with a tag so that ids of different domains do not mix.
template <typename Tag>
struct StrongId {
  std::uint32_t value = 0;

  constexpr std::size_t index() const { return value; }
  constexpr auto operator<=>(const StrongId&) const = default;
};

using NodeId = StrongId<struct NodeIdTag>;
using FifoId = StrongId<struct FifoIdTag>;
using AxiId = StrongId<struct AxiIdTag>;
using FunctionId = StrongId<struct FunctionIdTag>;
using ActivationId = StrongId<struct ActivationIdTag>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed trace, schedule, depth or graph text. `line` is 1-based, 0 when
/// not applicable.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(line == 0 ? message
                        : "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Inputs that parse but are structurally inconsistent.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Inconsistency detected while resolving or compiling the event stream.
class CompileError : public Error {
 public:
  using Error::Error;
};

/// Bad simulation inputs (e.g. a depth vector not matching the design).
class SimError : public Error {
 public:
  using Error::Error;
};

}  // namespace stagegraph

#endif  // STAGEGRAPH_COMMON_HPP_
