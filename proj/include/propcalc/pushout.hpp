#pragma once

#include <json.hpp>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "propcalc/prop.hpp"

namespace propcalc {

// Node marks index the corners of a push-out square: O below both A and B,
// A and B incomparable.
bool mark_leq(const std::string& a, const std::string& b);

struct MarkedCoaGraph {
    CoaGraph graph;
    std::vector<std::string> marks;  // one of "A", "O", "B" per node id
};

void validate_marked(const MarkedCoaGraph& g);

// Insertion inherits the marking; requires every mark of k to sit below
// the mark of the replaced node.
MarkedCoaGraph marked_insert(const MarkedCoaGraph& g, int v, const MarkedCoaGraph& k);

MarkedCoaGraph marked_multi_insert(const MarkedCoaGraph& g, const InsertionPermutation& alpha,
                                   const std::vector<MarkedCoaGraph>& ks);

// A morphism of marked graphs into `target`: its source is
// marked_multi_insert(target, alpha, inserts).
struct MarkedMorphism {
    MarkedCoaGraph target;
    std::vector<MarkedCoaGraph> inserts;
    InsertionPermutation alpha;
};

MarkedCoaGraph morphism_source(const MarkedMorphism& m);

// True iff only marks change: every insert is a one-node graph, alpha a
// bijection, and the underlying completely ordered graphs agree.
bool is_graph_preserving(const MarkedMorphism& m);

// Push-out problem: V with its full suboperad on the S colours, a PROP P,
// and a morphism from the free PROP on the suboperad into P given by an
// injective colour map and an element map.
struct PushoutProblem {
    SetOperad v;                        // the bigger operad
    std::vector<Colour> v_colours;      // its colour set
    std::vector<Colour> s_colours;      // S: the full-suboperad colours
    SetProp p;                          // the PROP being pushed out
    std::vector<Colour> c_colours;      // colours of P
    std::map<Colour, Colour> f_colour;  // S -> C, injective
    std::function<ElValue(const ElValue&)> f_el;  // free-PROP elements -> P elements
    int p_level = 6;                    // level for graded hom queries on P
    int max_node_in = 4;                // enumeration cap on per-node inputs
    int max_node_out = 4;               // enumeration cap on per-node outputs

    std::vector<Colour> pushout_colours() const;  // C followed by V minus S
};

// Structural validation plus sampled checks that f respects compositions,
// actions and units.
struct ProblemReport {
    bool ok = true;
    std::vector<std::string> violations;
};
ProblemReport validate_problem(const PushoutProblem& prob,
                               const std::vector<CValence>& sample_valences);

// Decoration sets of the push-out diagram at a node valence over the
// push-out colours, per mark.
std::vector<ElValue> decoration_set(const PushoutProblem& prob, const CValence& valence,
                                    const std::string& mark);

// One decorated marked graph evaluated to a single element of the diagram
// value at its residue: a P element for target mark B, an operad operation
// with its signature for A or O. Decorations are indexed by node-order
// position and aligned with the covering orders.
ElValue evaluate_to_prop(const PushoutProblem& prob, const MarkedCoaGraph& g,
                         const std::vector<ElValue>& decorations);
ElValue evaluate_to_operad(const PushoutProblem& prob, const MarkedCoaGraph& g,
                           const std::vector<ElValue>& decorations);

struct TruncatedColimit {
    int level = 0;
    long long object_count = 0;            // decorated objects enumerated
    std::map<std::string, int> class_of;   // decorated object key -> class
    int class_count = 0;
    std::vector<std::string> representatives;  // least key per class
    bool stabilized = false;               // same classes and merges as level-1
};

// Key of a decorated marked graph in the colimit index.
std::string colimit_cell_key(const MarkedCoaGraph& g, const std::vector<ElValue>& decorations);

// Enumerates every decorated marked graph with the given residue and at
// most max_nodes nodes satisfying the push-out constraints (single export
// on A and O nodes, P-colours on every port of O and B nodes), then glues
// the set colimit by union-find over mark flips, node reorderings and
// single insertions.
TruncatedColimit pushout_component(const PushoutProblem& prob, const CValence& v, int max_nodes);

struct FaithfulnessEntry {
    CValence valence;
    int level;
    bool stabilized;
    bool injective;
    bool bijective;
    long long p_elements;
    int classes;
};

struct FaithfulnessReport {
    bool all_injective = true;
    bool all_bijective_when_stable = true;
    std::vector<FaithfulnessEntry> entries;
};

// Checks that mapping each P element to the class of its B-marked corolla
// is injective, and bijective once the colimit stabilizes.
FaithfulnessReport verify_fully_faithful(const PushoutProblem& prob,
                                         const std::vector<CValence>& valences, int min_nodes,
                                         int max_nodes);

// ---- normalization diagnostic ----

struct NormalizeStep {
    std::string kind;  // flip | unflip | permute | contract | final
    std::string detail;
};

struct NormalizeResult {
    bool success = false;
    std::vector<NormalizeStep> steps;
    ElValue result;          // P element of the final all-B corolla
    std::string blocked_on;  // failure description
};

// Drives a decorated marked graph to the B-marked corolla through mark
// flips (O->A forwards, A->O formally inverted), contractions of inner
// edges joining single-export nodes, node reorderings and the final
// insertion into the corolla. Fails on configurations the push-out
// theorem's hypotheses exclude, exposing the blocking data.
NormalizeResult normalize_to_corolla(const PushoutProblem& prob, const MarkedCoaGraph& g,
                                     const std::vector<ElValue>& decorations);

// JSON interface used by the CLI: operad and PROP tables plus the
// morphism data.
PushoutProblem pushout_problem_from_json(const nlohmann::json& j);

}  // namespace propcalc
