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

// Event-driven reference simulator. Every activation walks its events stage
// by stage; at each clock value all active activations are rechecked until
// none can advance, then the clock jumps to the next time at which some
// hardware state changes. Used to cross-check graph traversal.

#ifndef STAGEGRAPH_ORACLE_HPP_
#define STAGEGRAPH_ORACLE_HPP_

#include <string>
#include <vector>

#include "stagegraph/graph.hpp"
#include "stagegraph/resolve.hpp"
#include "stagegraph/schedule.hpp"
#include "stagegraph/traverse.hpp"

namespace stagegraph {

struct OracleResult {
  // Deadlocks carry no witness.
  SimResult result;
  // On deadlock, one line per activation that could not finish.
  std::vector<std::string> stalled;
};

/// `events` must be a complete resolution in trace order. Uses the delay
/// constants of `config`; `config.eliminate` is ignored.
OracleResult simulate_events(const std::vector<ResolvedEvent>& events,
                             const ScheduleIndex& index,
                             const DepthVector& depths,
                             const CompilerConfig& config = {});

}  // namespace stagegraph

#endif  // STAGEGRAPH_ORACLE_HPP_
