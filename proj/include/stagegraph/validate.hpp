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

// Joint consistency check of a trace against its schedule.

#ifndef STAGEGRAPH_VALIDATE_HPP_
#define STAGEGRAPH_VALIDATE_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "stagegraph/schedule.hpp"
#include "stagegraph/trace.hpp"

namespace stagegraph {

struct Violation {
  // Index into Trace::records of the offending record.
  std::size_t record = 0;
  std::string message;

  bool operator==(const Violation&) const = default;
};

/// Returns every violation found, ordered by record index; empty means the
/// pair can be resolved and compiled. Checks that:
///  - calls balance, the top function is called first and returns last, and
///    no call or return sits inside a loop region;
///  - each block belongs to the active function, and each event binds, in
///    order, to a slot of the current block with a matching kind and target;
///  - loop regions list exactly their loopinfo's blocks, loop blocks never
///    appear outside their region, and iteration qualifiers are in range;
///  - fifo and axi ids are declared;
///  - each AXI request is followed in its activation by exactly `burst`
///    transfers with `last` on the final one, and every write burst gets a
///    response;
///  - each fifo has a single writer activation, a single different reader
///    activation, and equal read and write counts.
std::vector<Violation> validate_trace(const Trace& trace,
                                      const Schedule& schedule);

/// Throws ValidationError listing the first few violations, if any.
void require_valid(const Trace& trace, const Schedule& schedule);

}  // namespace stagegraph

#endif  // STAGEGRAPH_VALIDATE_HPP_
