#pragma once

#include "propcalc/coa.hpp"

namespace propcalc {

// Function {1..n} -> {1..m} whose fibre sizes equal the node counts of the
// graphs being inserted.
struct InsertionPermutation {
    std::vector<int> map;  // one-based values in {1..m}
    int blocks = 0;

    OrderedPartition fibre_partition() const;
};

// Replace node v of g by h along the residue identification: v's k-th
// entering edge is glued to h's k-th inport and likewise for exports.
// Requires matching coloured valences.
CoaGraph insert(const CoaGraph& g, int v, const CoaGraph& h);

struct InsertResult {
    CoaGraph graph;
    std::vector<int> g_nodes;  // surviving g node -> result node (-1 at v)
    std::vector<int> h_nodes;  // h node -> result node
};
InsertResult insert_with_maps(const CoaGraph& g, int v, const CoaGraph& h);

// Iterated insertion of ks[i] at the node in position i+1 of g's node
// order, with the node order of the result twisted by the unshuffling of
// alpha.
CoaGraph multi_insert(const CoaGraph& g, const InsertionPermutation& alpha,
                      const std::vector<CoaGraph>& ks);

struct Decomposition {
    CoaGraph h;  // g with x, y and their common inner edges shrunk into one node
    CoaGraph k;  // the two-node composition graph carrying x and y
    InsertionPermutation alpha;
    int merged_node = 0;        // the collapsed node of h (last in its node order)
    std::vector<int> node_map;  // g node -> h node (x and y both to the merged node)
};

// Requires x != y, position of x before y in the node order, no monotone
// dead-ends path of length > 1 between them, and x dominating y or the
// two being disconnected. Reassembling with multi_insert recovers g.
Decomposition decompose(const CoaGraph& g, int x, int y);

bool decompose_eligible(const CoaGraph& g, int x, int y);

// multi_insert(h, alpha, [corollas..., k]) — the round trip of decompose.
CoaGraph reassemble(const Decomposition& d);

}  // namespace propcalc
