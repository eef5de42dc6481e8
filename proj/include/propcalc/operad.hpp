#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "propcalc/coa.hpp"
#include "propcalc/insertion.hpp"

namespace propcalc {

// Operation values and colours are opaque strings; each operad supplies
// the interpretation.
using OpValue = std::string;

struct Signature {
    std::vector<Colour> inputs;
    Colour output;
    bool operator==(const Signature&) const = default;
    bool operator<(const Signature& o) const {
        return std::tie(inputs, output) < std::tie(o.inputs, o.output);
    }
    int arity() const { return static_cast<int>(inputs.size()); }
};

// Coloured symmetric operad in Set with lazily enumerable finite hom-sets.
// Hom queries are memoized behind a mutex; operations are pure.
class SetOperad {
public:
    std::function<std::vector<OpValue>(const Signature&)> hom_fn;
    std::function<OpValue(const OpValue&, int, const OpValue&)> compose_fn;  // o .i p, one-based slot
    std::function<OpValue(const Perm&, const OpValue&)> act_fn;
    std::function<OpValue(const Colour&)> unit_fn;
    std::optional<std::vector<Colour>> colours;  // explicit list when finite

    SetOperad() : cache_(std::make_shared<Cache>()) {}

    std::vector<OpValue> hom(const Signature& s) const;
    OpValue compose_at(const OpValue& o, int slot, const OpValue& p) const {
        return compose_fn(o, slot, p);
    }
    OpValue act(const Perm& g, const OpValue& o) const { return act_fn(g, o); }
    OpValue unit(const Colour& c) const { return unit_fn(c); }

private:
    struct Cache {
        std::mutex mutex;
        std::map<Signature, std::vector<OpValue>> homs;
    };
    std::shared_ptr<Cache> cache_;
};

struct OperadMorphism {
    std::function<Colour(const Colour&)> colour_map;
    std::function<OpValue(const Signature&, const OpValue&)> op_map;
};

// ---- operads of completely ordered acyclic coloured graphs ----

// Colours are coloured valences over the given colour set; operations are
// canonical encodings of coa graphs; partial composition is insertion at
// the node in the slot's node-order position.
SetOperad prop_operad(const std::vector<Colour>& colour_set);

Signature coa_signature(const CoaGraph& g);

// Full suboperad on the colours satisfying the predicate.
SetOperad full_suboperad_if(const SetOperad& o, std::function<bool(const Colour&)> pred);
// Full suboperad on an explicit colour subset.
SetOperad full_suboperad(const SetOperad& o, const std::vector<Colour>& subset);

SetOperad cf_prop_operad(const std::vector<Colour>& colour_set);   // nonempty inputs
SetOperad af_prop_operad(const std::vector<Colour>& colour_set);   // nonempty outputs
SetOperad oper_suboperad(const std::vector<Colour>& colour_set);   // exactly one output
SetOperad cat_suboperad(const std::vector<Colour>& colour_set);    // one input, one output

// Change of colours: the morphism prop_operad(C) -> prop_operad(D)
// relabelling every graph through f.
OperadMorphism relabel_operad(const std::function<Colour(const Colour&)>& f);

// Terminal operad on one colour: every hom-set is a singleton.
SetOperad make_com_operad(const Colour& colour = "*");

// Finite operad from explicit tables. Operation names must be globally
// unique across signatures.
struct TableOperad {
    std::vector<Colour> colours;
    std::map<Signature, std::vector<OpValue>> homs;
    std::map<std::tuple<OpValue, int, OpValue>, OpValue> compositions;
    std::map<std::pair<std::vector<int>, OpValue>, OpValue> actions;  // perm images, op
    std::map<Colour, OpValue> units;
};
SetOperad make_table_operad(const TableOperad& t);

// ---- axiom checking ----

struct OperadReport {
    bool ok = true;
    long long checks = 0;
    std::vector<std::string> violations;  // capped

    void fail(const std::string& what);
};

// Verifies unit laws, membership of composites, both associativity shapes
// and the equivariance of partial composition on operations drawn from the
// probe signatures. Exhaustive below the cap, seeded sampling beyond it.
OperadReport check_operad_axioms(const SetOperad& o, const std::vector<Signature>& probes,
                                 long long max_pair_checks = 20000,
                                 long long max_triple_checks = 20000,
                                 std::uint64_t seed = 1);

struct SigmaFreeWitness {
    Signature signature;
    Perm perm;
    OpValue op;
};

struct SigmaFreeReport {
    bool free = true;
    std::optional<SigmaFreeWitness> witness;
};

// Stabilizer of the input colour tuple acting on the hom-set; reports the
// first fixed point of a non-identity element.
SigmaFreeReport is_sigma_free(const SetOperad& o, const std::vector<Signature>& signatures);

// ---- finite categories, families, Grothendieck construction ----

struct FinCategory {
    std::vector<std::string> objects;
    struct Arrow {
        std::string id, src, dst;
    };
    std::vector<Arrow> arrows;                                      // includes identities
    std::map<std::string, std::string> identities;                  // object -> arrow id
    std::map<std::pair<std::string, std::string>, std::string> comp;  // (g, f) -> g.f

    const Arrow& arrow(const std::string& id) const;
    std::string compose(const std::string& g, const std::string& f) const;
    std::vector<std::string> arrows_between(const std::string& src, const std::string& dst) const;
    void validate() const;  // identity and associativity laws
};

struct OperadicFamily {
    FinCategory index;
    std::map<std::string, SetOperad> fibre;           // object -> operad
    std::map<std::string, OperadMorphism> transport;  // arrow -> morphism
};

// Pair-colour helpers shared by the Grothendieck construction and the
// poset tensor: colours of the constructed operads are encoded pairs.
Colour encode_pair_colour(const std::string& first, const std::string& second);
std::pair<std::string, std::string> decode_pair_colour(const Colour& c);

// Operations of the constructed operads: the signature they live at, one
// index morphism per input (empty for the poset tensor) and the fibre
// operation.
struct TaggedOp {
    Signature sig;
    std::vector<std::string> fs;
    OpValue op;
};
OpValue encode_tagged_op(const TaggedOp& t);
TaggedOp decode_tagged_op(const OpValue& v);

// Operad gluing the family: colours are pairs (object, fibre colour),
// operations carry one index morphism per input next to a fibre operation,
// and partial composition splices the morphism lists.
SetOperad grothendieck(const OperadicFamily& f);

struct Poset {
    std::vector<std::string> elements;
    std::set<std::pair<std::string, std::string>> strictly_below;  // (a, b) meaning a < b

    bool leq(const std::string& a, const std::string& b) const {
        return a == b || strictly_below.count({a, b}) > 0;
    }
    void validate() const;
};

// hom((o1,a1)..;(o,a)) = hom(o1..;o) when every a_i <= a, empty otherwise.
SetOperad bv_tensor_poset(const SetOperad& o, const Poset& p);

// The three-element poset with O below both A and B used for push-outs.
Poset pushout_poset();

// ---- helpers used by the CLI and tests ----

// All coloured valences over the colour set with bounded port counts, in a
// deterministic order.
std::vector<CValence> bounded_valences(const std::vector<Colour>& colour_set, int max_in,
                                       int max_out);

// All operad signatures over the valences with the given number of inputs.
std::vector<Signature> signatures_with_inputs(const std::vector<CValence>& valences, int inputs);

}  // namespace propcalc
