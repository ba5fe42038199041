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

// Versioned JSON dump of a SimGraph. Identical graphs produce byte-identical
// dumps.

#ifndef STAGEGRAPH_GRAPH_IO_HPP_
#define STAGEGRAPH_GRAPH_IO_HPP_

#include <iosfwd>
#include <string>

#include "stagegraph/graph.hpp"

namespace stagegraph {

inline constexpr int kGraphFormatVersion = 1;

void write_graph(const SimGraph& graph, std::ostream& out);
std::string write_graph(const SimGraph& graph);

/// Throws ParseError on malformed input or a graph whose CSR arrays are
/// inconsistent.
SimGraph read_graph(std::istream& in);
SimGraph read_graph(const std::string& text);

/// Throws Error if the structural invariants of `graph` do not hold: CSR
/// offsets, edge endpoints in range with source < target, floating and read
/// registries consistent.
void check_graph(const SimGraph& graph);

}  // namespace stagegraph

#endif  // STAGEGRAPH_GRAPH_IO_HPP_
