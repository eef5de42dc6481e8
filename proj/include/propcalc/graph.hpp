#pragma once

#include <optional>
#include <vector>

namespace propcalc {

struct Valence {
    int inputs = 0;
    int outputs = 0;
    bool operator==(const Valence&) const = default;
};

// Directed open graph. Edges and nodes are 0-based indices; each edge
// records the node it enters (whose inport it is) and the node it exits
// (whose export it is), either of which may be absent. This encodes the
// injectivity of the attachment maps structurally: an edge is the inport
// of at most one node and the export of at most one node.
struct Graph {
    int edge_count = 0;
    int node_count = 0;
    std::vector<std::optional<int>> enters;  // edge -> node it enters
    std::vector<std::optional<int>> exits;   // edge -> node it exits

    bool operator==(const Graph&) const = default;
};

void validate_graph(const Graph& g);

// One node with n entering edges (0..n-1) and m exiting edges (n..n+m-1).
Graph corolla(const Valence& v);

struct Residue {
    Valence valence;
    std::vector<int> inports;  // edges exiting no node, ascending
    std::vector<int> exports;  // edges entering no node, ascending
};

Residue residue(const Graph& g);

Valence node_valence(const Graph& g, int node);

std::vector<int> node_inports(const Graph& g, int node);   // ascending edge ids
std::vector<int> node_exports(const Graph& g, int node);

// Edges with both incidences defined.
std::vector<int> inner_edges(const Graph& g);
// Edges with neither incidence defined (both a graph inport and export).
std::vector<int> free_edges(const Graph& g);

// True iff the induced node digraph (u -> v when some edge exits u and
// enters v) has no directed cycle; self-loop edges count as cycles.
bool is_acyclic(const Graph& g);

struct Components {
    std::vector<Graph> graphs;
    std::vector<int> node_component;        // node -> component index
    std::vector<int> edge_component;        // edge -> component index
    std::vector<std::vector<int>> nodes;    // component -> original node ids
    std::vector<std::vector<int>> edges;    // component -> original edge ids
};

// Finest decomposition of g as a disjoint union. An edge attached to no
// node forms its own component.
Components connected_components(const Graph& g);

bool is_connected(const Graph& g);

// Common inner edges: edges exiting u and entering v (u != v).
std::vector<int> cie(const Graph& g, int u, int v);

enum class Dominance { Disconnected, FirstDominates, SecondDominates };

struct DominanceResult {
    Dominance kind;
    // longest directed node path between the pair in the dominating
    // direction; 0 when disconnected
    int max_path_length;
};

// Classifies two distinct nodes of an acyclic graph by the existence of
// monotone dead-ends paths between them.
DominanceResult dominance(const Graph& g, int x, int y);

// Longest directed node path from x to y; nullopt when there is none.
std::optional<int> max_path_length(const Graph& g, int x, int y);

// Connected, exactly one export, and every edge reaches the root along a
// unique monotone open path.
bool is_tree(const Graph& g);

}  // namespace propcalc
