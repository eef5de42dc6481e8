#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "propcalc/operad.hpp"

namespace propcalc {

// Elements of a PROP are opaque strings with a per-PROP interpretation.
using ElValue = std::string;

// Finite slice of a possibly infinite hom-set: everything expressible with
// at most `level` generator nodes. Finite PROPs ignore the level and
// always report saturation.
struct GradedHomSet {
    std::vector<ElValue> elements;
    int level = 0;
    bool saturated = false;
};

// Coloured PROP in Set: bicollection, vertical and horizontal composition,
// the two permutation actions and identities. Hom queries are memoized per
// (valence, level) behind a mutex.
class SetProp {
public:
    std::vector<Colour> colour_set;
    std::function<GradedHomSet(const CValence&, int)> hom_fn;
    std::function<ElValue(const ElValue&, const ElValue&)> vcomp_fn;  // second after first arg
    std::function<ElValue(const ElValue&, const ElValue&)> hcomp_fn;
    std::function<ElValue(const Perm&, const ElValue&)> in_act_fn;    // sigma^*
    std::function<ElValue(const Perm&, const ElValue&)> out_act_fn;   // sigma_*
    std::function<ElValue(const std::vector<Colour>&)> unit_fn;
    std::function<CValence(const ElValue&)> valence_fn;

    SetProp() : cache_(std::make_shared<Cache>()) {}

    GradedHomSet hom(const CValence& v, int level) const;
    // g vertically after f: f feeds g
    ElValue vcomp(const ElValue& g, const ElValue& f) const { return vcomp_fn(g, f); }
    ElValue hcomp(const ElValue& f, const ElValue& g) const { return hcomp_fn(f, g); }
    ElValue in_act(const Perm& s, const ElValue& f) const { return in_act_fn(s, f); }
    ElValue out_act(const Perm& s, const ElValue& f) const { return out_act_fn(s, f); }
    ElValue unit(const std::vector<Colour>& word) const { return unit_fn(word); }
    CValence valence_of(const ElValue& f) const { return valence_fn(f); }

private:
    struct Cache {
        std::mutex mutex;
        std::map<std::pair<CValence, int>, GradedHomSet> homs;
    };
    std::shared_ptr<Cache> cache_;
};

// ---- free constructions ----

// Free PROP on an operad: elements are pairs (f : {1..n} -> {1..m}, one
// operad operation per output); composition follows the unshuffle formula.
// Hom-sets are finite whenever the operad's are.
SetProp free_prop_on_operad(const SetOperad& o, const std::vector<Colour>& operad_colours);

struct WOp {
    std::vector<Colour> ins, outs;
    std::vector<int> map;  // one-based values in {1..m}
    std::vector<OpValue> ops;
};
ElValue encode_w_op(const WOp& w);
WOp decode_w_op(const ElValue& v);

// Operad with only unary operations: the arrows of a finite category.
SetOperad operad_from_category(const FinCategory& c);

// Free symmetric monoidal category on a finite category: hom(c;d) is
// nonempty only for equal lengths, a bijection together with one arrow per
// output.
SetProp free_symmetric_monoidal(const FinCategory& c);

struct Bicollection {
    std::vector<Colour> colour_set;
    std::map<CValence, std::vector<ElValue>> support;  // exact support
};

// Decorated graph element of a graded free PROP: the graph together with
// one generator name per node, aligned with the node order.
struct DecoratedGraph {
    CoaGraph graph;
    std::vector<ElValue> decorations;
};
ElValue encode_decorated(const DecoratedGraph& d);
DecoratedGraph decode_decorated(const ElValue& v);

// Free PROP on a bicollection: level-k elements are classes of ordered
// acyclic coloured graphs with at most k nodes decorated by generators,
// composed by graph gluing.
SetProp free_prop_on_bicollection(const Bicollection& a);

struct SymBicollection {
    Bicollection base;
    // action of (sigma, tau) : (ins; outs) -> (ins.sigma; outs.tau^{-1})
    std::function<ElValue(const Perm&, const Perm&, const CValence&, const ElValue&)> act;
};

// Free symmetric bicollection on a plain one: elements are triples
// (sigma, tau, x) recording how the valence was permuted.
SymBicollection free_symmetric_bicollection(const Bicollection& a);

// Free PROP on a symmetric bicollection: like the plain free PROP but node
// decorations are quotiented against covering-order twists through the
// symmetric action.
SetProp free_prop_on_sym_bicollection(const SymBicollection& a);

// ---- axiom checking ----

struct PropReport {
    bool ok = true;
    long long checks = 0;
    std::vector<std::string> violations;

    void fail(const std::string& what);
};

// Verifies the PROP axioms on elements drawn from the probe valences at
// the given level: both associativities and units, the interchange law,
// the action laws, the compatibilities of actions with both compositions,
// and the coincidence of the two monoid structures on hom([];[]).
PropReport check_prop_axioms(const SetProp& p, const std::vector<CValence>& probes, int level,
                             long long max_checks = 20000, std::uint64_t seed = 1);

// Terminal PROP over a colour set: every hom-set a singleton.
SetProp make_terminal_prop(const std::vector<Colour>& colour_set);

}  // namespace propcalc
