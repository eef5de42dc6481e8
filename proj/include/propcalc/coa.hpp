#pragma once

#include <optional>
#include <string>
#include <vector>

#include "propcalc/graph.hpp"
#include "propcalc/perm.hpp"

namespace propcalc {

using Colour = std::string;

// A pair of colour words: the inputs and outputs a hom-set is indexed by.
struct CValence {
    std::vector<Colour> ins;
    std::vector<Colour> outs;
    bool operator==(const CValence&) const = default;
    bool operator<(const CValence& o) const {
        return std::tie(ins, outs) < std::tie(o.ins, o.outs);
    }
};

std::string encode_cvalence(const CValence& v);
CValence decode_cvalence(const std::string& s);

// Completely ordered acyclic coloured graph: a labelled open acyclic graph
// together with per-node port orders (the covering order), a port order on
// the graph's dangling edges and a node order.
struct CoaGraph {
    Graph graph;
    std::vector<Colour> labels;               // per edge
    std::vector<std::vector<int>> node_in;    // per node: entering edges, ordered
    std::vector<std::vector<int>> node_out;   // per node: exiting edges, ordered
    std::vector<int> port_in;                 // graph inports, ordered
    std::vector<int> port_out;                // graph exports, ordered
    std::vector<int> node_order;              // node at each position

    int nodes() const { return graph.node_count; }
    int edges() const { return graph.edge_count; }

    bool operator==(const CoaGraph&) const = default;
};

// Checks every structural invariant (acyclicity, orders enumerate exactly
// the incident/dangling edges, node order bijective).
void validate_coa(const CoaGraph& g);

struct Arity {
    std::vector<CValence> node_valences;  // in node order
    CValence residue;
    bool operator==(const Arity&) const = default;
};

CValence c_valence_of_node(const CoaGraph& g, int node);
CValence residue_cvalence(const CoaGraph& g);
Arity arity(const CoaGraph& g);

CoaGraph untwisted_corolla(const CValence& v);

// Twist between two nodes on their common inner edges: compares the order
// inherited from u's exports with the order inherited from v's imports.
Perm node_twist(const CoaGraph& g, int u, int v);

// Input- and output-twist of the graph in a node: compares the graph port
// orders with the node's covering order on the shared edges.
std::pair<Perm, Perm> io_twist(const CoaGraph& g, int v);

bool is_untwisted(const CoaGraph& g);

// Only the node order changes, composed with gamma.
CoaGraph permute_node_order(const Perm& gamma, const CoaGraph& g);

struct CanonicalForm {
    CoaGraph graph;              // node order = identity, edges renumbered
    std::vector<int> node_map;   // old node -> new node
    std::vector<int> edge_map;   // old edge -> new edge
};

// Renumber nodes by node order and edges by the canonical traversal
// (inports, then unseen exports, then inner edges by exiting node).
CanonicalForm canonical_form(const CoaGraph& g);

// Deterministic byte string; equal iff the graphs are isomorphic as
// completely ordered coloured graphs.
std::string canonical_encode(const CoaGraph& g);

CoaGraph canonical_decode(const std::string& enc);

struct CoaIso {
    std::vector<int> node_map;
    std::vector<int> edge_map;
};

// The unique order-preserving isomorphism, if one exists.
std::optional<CoaIso> coa_iso(const CoaGraph& g, const CoaGraph& h);

// Automorphisms of the underlying ordered graph (node order forgotten):
// node/edge bijections preserving labels, covering orders and port orders.
std::vector<CoaIso> ordered_automorphisms(const CoaGraph& g);

// Least canonical encoding over all node orders: the isomorphism class of
// the underlying ordered graph.
std::string min_encode_ordered(const CoaGraph& g);

// All isomorphism classes of completely ordered acyclic coloured graphs
// with the given arity, as canonical representatives in a deterministic
// order. Empty when the attachment-slot balance cannot be met.
std::vector<CoaGraph> enumerate_coa(const Arity& a);

}  // namespace propcalc
