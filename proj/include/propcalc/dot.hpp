#pragma once

#include <string>
#include <vector>

#include "propcalc/coa.hpp"
#include "propcalc/graph.hpp"

namespace propcalc {

// DOT rendering: nodes as circles, graph ports as anchored stubs, edges
// flowing top to bottom.
std::string graph_to_dot(const Graph& g, const std::string& name = "g");

// Numbered nodes (node order), edge labels, ports laid out left to right.
// Marks, when given, choose node shapes: A = down triangle, B = right
// triangle, O = diamond.
std::string coa_to_dot(const CoaGraph& g, const std::string& name = "g",
                       const std::vector<std::string>& marks = {});

}  // namespace propcalc
