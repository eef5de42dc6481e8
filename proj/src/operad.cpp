#include "propcalc/operad.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace propcalc {

using nlohmann::json;

std::vector<OpValue> SetOperad::hom(const Signature& s) const {
    {
        std::lock_guard<std::mutex> lock(cache_->mutex);
        auto it = cache_->homs.find(s);
        if (it != cache_->homs.end()) return it->second;
    }
    std::vector<OpValue> result = hom_fn(s);
    std::sort(result.begin(), result.end());
    std::lock_guard<std::mutex> lock(cache_->mutex);
    return cache_->homs.emplace(s, std::move(result)).first->second;
}

Signature coa_signature(const CoaGraph& g) {
    Signature s;
    Arity a = arity(g);
    for (const auto& v : a.node_valences) s.inputs.push_back(encode_cvalence(v));
    s.output = encode_cvalence(a.residue);
    return s;
}

namespace {

bool decode_prop_signature(const Signature& s, Arity& a) {
    try {
        for (const auto& c : s.inputs) a.node_valences.push_back(decode_cvalence(c));
        a.residue = decode_cvalence(s.output);
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

bool valence_over(const CValence& v, const std::set<Colour>& cs) {
    for (const auto& c : v.ins)
        if (!cs.count(c)) return false;
    for (const auto& c : v.outs)
        if (!cs.count(c)) return false;
    return true;
}

}  // namespace

SetOperad prop_operad(const std::vector<Colour>& colour_set) {
    auto cs = std::make_shared<std::set<Colour>>(colour_set.begin(), colour_set.end());
    SetOperad o;
    o.hom_fn = [cs](const Signature& s) -> std::vector<OpValue> {
        Arity a;
        if (!decode_prop_signature(s, a)) return {};
        if (!valence_over(a.residue, *cs)) return {};
        for (const auto& v : a.node_valences)
            if (!valence_over(v, *cs)) return {};
        std::vector<OpValue> out;
        for (const auto& g : enumerate_coa(a)) out.push_back(canonical_encode(g));
        return out;
    };
    o.compose_fn = [](const OpValue& ge, int i, const OpValue& he) {
        CoaGraph g = canonical_decode(ge);
        if (i < 1 || i > g.nodes()) throw std::invalid_argument("compose_at: slot out of range");
        CoaGraph h = canonical_decode(he);
        return canonical_encode(insert(g, g.node_order[i - 1], h));
    };
    o.act_fn = [](const Perm& gamma, const OpValue& ge) {
        return canonical_encode(permute_node_order(gamma, canonical_decode(ge)));
    };
    o.unit_fn = [](const Colour& c) {
        return canonical_encode(untwisted_corolla(decode_cvalence(c)));
    };
    return o;
}

SetOperad full_suboperad_if(const SetOperad& o, std::function<bool(const Colour&)> pred) {
    SetOperad sub;
    sub.hom_fn = [o, pred](const Signature& s) -> std::vector<OpValue> {
        if (!pred(s.output)) return {};
        for (const auto& c : s.inputs)
            if (!pred(c)) return {};
        return o.hom(s);
    };
    sub.compose_fn = o.compose_fn;
    sub.act_fn = o.act_fn;
    sub.unit_fn = o.unit_fn;
    if (o.colours) {
        sub.colours = std::vector<Colour>{};
        for (const auto& c : *o.colours)
            if (pred(c)) sub.colours->push_back(c);
    }
    return sub;
}

SetOperad full_suboperad(const SetOperad& o, const std::vector<Colour>& subset) {
    if (o.colours)
        for (const auto& c : subset)
            if (std::find(o.colours->begin(), o.colours->end(), c) == o.colours->end())
                throw std::invalid_argument("full_suboperad: colour not in the operad");
    auto set = std::make_shared<std::set<Colour>>(subset.begin(), subset.end());
    SetOperad sub = full_suboperad_if(o, [set](const Colour& c) { return set->count(c) > 0; });
    sub.colours = subset;
    return sub;
}

SetOperad cf_prop_operad(const std::vector<Colour>& colour_set) {
    return full_suboperad_if(prop_operad(colour_set), [](const Colour& c) {
        return !decode_cvalence(c).ins.empty();
    });
}

SetOperad af_prop_operad(const std::vector<Colour>& colour_set) {
    return full_suboperad_if(prop_operad(colour_set), [](const Colour& c) {
        return !decode_cvalence(c).outs.empty();
    });
}

SetOperad oper_suboperad(const std::vector<Colour>& colour_set) {
    return full_suboperad_if(prop_operad(colour_set), [](const Colour& c) {
        return decode_cvalence(c).outs.size() == 1;
    });
}

SetOperad cat_suboperad(const std::vector<Colour>& colour_set) {
    return full_suboperad_if(prop_operad(colour_set), [](const Colour& c) {
        CValence v = decode_cvalence(c);
        return v.ins.size() == 1 && v.outs.size() == 1;
    });
}

OperadMorphism relabel_operad(const std::function<Colour(const Colour&)>& f) {
    OperadMorphism m;
    m.colour_map = [f](const Colour& c) {
        CValence v = decode_cvalence(c);
        for (auto& x : v.ins) x = f(x);
        for (auto& x : v.outs) x = f(x);
        return encode_cvalence(v);
    };
    m.op_map = [f](const Signature&, const OpValue& op) {
        CoaGraph g = canonical_decode(op);
        for (auto& l : g.labels) l = f(l);
        return canonical_encode(g);
    };
    return m;
}

SetOperad make_com_operad(const Colour& colour) {
    SetOperad o;
    o.colours = {colour};
    o.hom_fn = [colour](const Signature& s) -> std::vector<OpValue> {
        if (s.output != colour) return {};
        for (const auto& c : s.inputs)
            if (c != colour) return {};
        return {"*"};
    };
    o.compose_fn = [](const OpValue&, int, const OpValue&) { return OpValue("*"); };
    o.act_fn = [](const Perm&, const OpValue&) { return OpValue("*"); };
    o.unit_fn = [](const Colour&) { return OpValue("*"); };
    return o;
}

SetOperad make_table_operad(const TableOperad& t) {
    auto data = std::make_shared<TableOperad>(t);
    {
        std::set<OpValue> seen;
        for (const auto& [sig, ops] : data->homs)
            for (const auto& op : ops)
                if (!seen.insert(op).second)
                    throw std::invalid_argument("table operad: operation names must be unique");
    }
    SetOperad o;
    o.colours = t.colours;
    o.hom_fn = [data](const Signature& s) -> std::vector<OpValue> {
        auto it = data->homs.find(s);
        return it == data->homs.end() ? std::vector<OpValue>{} : it->second;
    };
    o.compose_fn = [data](const OpValue& a, int i, const OpValue& b) {
        auto it = data->compositions.find({a, i, b});
        if (it == data->compositions.end())
            throw std::invalid_argument("table operad: missing composition entry");
        return it->second;
    };
    o.act_fn = [data](const Perm& g, const OpValue& a) {
        if (g.is_identity()) return a;
        auto it = data->actions.find({g.images(), a});
        if (it == data->actions.end())
            throw std::invalid_argument("table operad: missing action entry");
        return it->second;
    };
    o.unit_fn = [data](const Colour& c) {
        auto it = data->units.find(c);
        if (it == data->units.end())
            throw std::invalid_argument("table operad: missing unit");
        return it->second;
    };
    return o;
}

// ---- axiom checking ----

void OperadReport::fail(const std::string& what) {
    ok = false;
    if (violations.size() < 20) violations.push_back(what);
}

namespace {

Signature splice_signature(const Signature& outer, int slot, const Signature& inner) {
    Signature s;
    s.output = outer.output;
    for (int k = 0; k < outer.arity(); ++k) {
        if (k == slot - 1)
            s.inputs.insert(s.inputs.end(), inner.inputs.begin(), inner.inputs.end());
        else
            s.inputs.push_back(outer.inputs[k]);
    }
    return s;
}

std::string brief(const OpValue& v) {
    return v.size() <= 80 ? v : v.substr(0, 77) + "...";
}

// the permutation pairing compose(act(g, o), slot, p) with
// act(., compose(o, g(slot), p)); m is the arity of p
Perm equivariance_perm(const Perm& g, int slot, int n, int m) {
    const int j = g(slot);
    auto shift = [&](int x) { return x < j ? x : x + m - 1; };
    std::vector<int> img(n + m - 1);
    for (int r = 1; r <= n + m - 1; ++r) {
        if (r < slot)
            img[r - 1] = shift(g(r));
        else if (r < slot + m)
            img[r - 1] = j + (r - slot);
        else
            img[r - 1] = shift(g(r - m + 1));
    }
    return Perm(std::move(img));
}

template <class T>
void cap_sample(std::vector<T>& v, long long cap, std::mt19937_64& rng) {
    if (static_cast<long long>(v.size()) <= cap) return;
    std::shuffle(v.begin(), v.end(), rng);
    v.resize(cap);
}

}  // namespace

OperadReport check_operad_axioms(const SetOperad& o, const std::vector<Signature>& probes,
                                 long long max_pair_checks, long long max_triple_checks,
                                 std::uint64_t seed) {
    OperadReport rep;
    std::mt19937_64 rng(seed);
    // a malformed operad may throw instead of returning wrong values;
    // either way it is a violation, not a crash of the checker
    auto guarded = [&rep](const std::string& context, auto&& body) {
        try {
            body();
        } catch (const std::exception& e) {
            rep.fail(context + " raised: " + e.what());
        }
    };

    struct Elem {
        Signature sig;
        OpValue op;
    };
    std::vector<Elem> pool;
    std::map<Colour, std::vector<int>> by_output;
    {
        std::set<Signature> seen;
        for (const auto& s : probes) {
            if (!seen.insert(s).second) continue;
            for (const auto& op : o.hom(s)) {
                by_output[s.output].push_back(static_cast<int>(pool.size()));
                pool.push_back({s, op});
            }
        }
    }

    // unit laws and unit membership
    std::set<Colour> unit_colours;
    for (const auto& e : pool) {
        unit_colours.insert(e.sig.output);
        for (const auto& c : e.sig.inputs) unit_colours.insert(c);
    }
    for (const auto& c : unit_colours) {
        guarded("unit at " + c, [&] {
            OpValue u = o.unit(c);
            auto h = o.hom(Signature{{c}, c});
            ++rep.checks;
            if (std::find(h.begin(), h.end(), u) == h.end())
                rep.fail("unit not in its hom-set at colour " + c);
        });
    }
    for (const auto& e : pool) {
        guarded("unit laws on " + brief(e.op), [&] {
            ++rep.checks;
            if (o.compose_at(o.unit(e.sig.output), 1, e.op) != e.op)
                rep.fail("left unit law fails on " + brief(e.op));
            for (int i = 1; i <= e.sig.arity(); ++i) {
                ++rep.checks;
                if (o.compose_at(e.op, i, o.unit(e.sig.inputs[i - 1])) != e.op)
                    rep.fail("right unit law fails on " + brief(e.op));
            }
        });
    }

    // composable pairs: membership and equivariance
    struct Pair {
        int oi, slot, pi;
    };
    std::vector<Pair> pairs;
    for (int oi = 0; oi < static_cast<int>(pool.size()); ++oi)
        for (int slot = 1; slot <= pool[oi].sig.arity(); ++slot) {
            auto it = by_output.find(pool[oi].sig.inputs[slot - 1]);
            if (it == by_output.end()) continue;
            for (int pi : it->second) pairs.push_back({oi, slot, pi});
        }
    cap_sample(pairs, max_pair_checks, rng);
    for (const auto& pr : pairs) {
        const Elem& eo = pool[pr.oi];
        const Elem& ep = pool[pr.pi];
        guarded("composition of " + brief(eo.op) + " with " + brief(ep.op), [&] {
            OpValue comp = o.compose_at(eo.op, pr.slot, ep.op);
            Signature spliced = splice_signature(eo.sig, pr.slot, ep.sig);
            auto h = o.hom(spliced);
            ++rep.checks;
            if (std::find(h.begin(), h.end(), comp) == h.end())
                rep.fail("composite not in the spliced hom-set: " + brief(comp));
            const int n = eo.sig.arity(), m = ep.sig.arity();
            if (n <= 4) {
                for (const Perm& g : all_perms(n)) {
                    // act(g, o) has the colour of slot r equal to input g(r);
                    // compose there with p when the colours agree
                    int slot_after = 0;
                    for (int r = 1; r <= n; ++r)
                        if (g(r) == pr.slot) slot_after = r;
                    OpValue lhs = o.compose_at(o.act(g, eo.op), slot_after, ep.op);
                    OpValue rhs = o.act(equivariance_perm(g, slot_after, n, m),
                                        o.compose_at(eo.op, pr.slot, ep.op));
                    ++rep.checks;
                    if (lhs != rhs)
                        rep.fail("equivariance fails on " + brief(eo.op) + " slot " +
                                 std::to_string(pr.slot));
                }
            }
        });
    }

    // right action law on sampled operations
    for (const auto& e : pool) {
        const int n = e.sig.arity();
        if (n > 4) continue;
        guarded("action laws on " + brief(e.op), [&] {
            for (const Perm& g : all_perms(n))
                for (const Perm& t : all_perms(n)) {
                    ++rep.checks;
                    if (o.act(t, o.act(g, e.op)) != o.act(compose(g, t), e.op)) {
                        rep.fail("action composition fails on " + brief(e.op));
                        return;
                    }
                }
        });
    }

    // associativity: nested and disjoint shapes
    struct Triple {
        int oi, slot1, pi, slot2, qi;
        bool nested;
    };
    std::vector<Triple> triples;
    for (const auto& pr : pairs) {
        const Elem& ep = pool[pr.pi];
        for (int j = 1; j <= ep.sig.arity(); ++j) {
            auto it = by_output.find(ep.sig.inputs[j - 1]);
            if (it == by_output.end()) continue;
            for (int qi : it->second) triples.push_back({pr.oi, pr.slot, pr.pi, j, qi, true});
        }
        const Elem& eo = pool[pr.oi];
        for (int j = pr.slot + 1; j <= eo.sig.arity(); ++j) {
            auto it = by_output.find(eo.sig.inputs[j - 1]);
            if (it == by_output.end()) continue;
            for (int qi : it->second) triples.push_back({pr.oi, pr.slot, pr.pi, j, qi, false});
        }
    }
    cap_sample(triples, max_triple_checks, rng);
    for (const auto& tr : triples) {
        const Elem& eo = pool[tr.oi];
        const Elem& ep = pool[tr.pi];
        const Elem& eq = pool[tr.qi];
        ++rep.checks;
        guarded("associativity on " + brief(eo.op), [&] {
        if (tr.nested) {
            OpValue lhs = o.compose_at(o.compose_at(eo.op, tr.slot1, ep.op),
                                       tr.slot1 + tr.slot2 - 1, eq.op);
            OpValue rhs = o.compose_at(eo.op, tr.slot1, o.compose_at(ep.op, tr.slot2, eq.op));
            if (lhs != rhs) rep.fail("nested associativity fails on " + brief(eo.op));
        } else {
            const int m = ep.sig.arity();
            OpValue lhs =
                o.compose_at(o.compose_at(eo.op, tr.slot1, ep.op), tr.slot2 + m - 1, eq.op);
            OpValue rhs = o.compose_at(o.compose_at(eo.op, tr.slot2, eq.op), tr.slot1, ep.op);
            if (lhs != rhs) rep.fail("disjoint associativity fails on " + brief(eo.op));
        }
        });
    }
    return rep;
}

SigmaFreeReport is_sigma_free(const SetOperad& o, const std::vector<Signature>& signatures) {
    for (const auto& s : signatures) {
        const int n = s.arity();
        std::vector<Perm> stab;
        for (const Perm& g : all_perms(n)) {
            if (g.is_identity()) continue;
            bool fixes = true;
            for (int i = 1; i <= n && fixes; ++i)
                if (s.inputs[g(i) - 1] != s.inputs[i - 1]) fixes = false;
            if (fixes) stab.push_back(g);
        }
        if (stab.empty()) continue;
        for (const auto& op : o.hom(s))
            for (const Perm& g : stab)
                if (o.act(g, op) == op)
                    return {false, SigmaFreeWitness{s, g, op}};
    }
    return {true, std::nullopt};
}

// ---- finite categories and the Grothendieck construction ----

const FinCategory::Arrow& FinCategory::arrow(const std::string& id) const {
    for (const auto& a : arrows)
        if (a.id == id) return a;
    throw std::invalid_argument("category: unknown arrow " + id);
}

std::string FinCategory::compose(const std::string& g, const std::string& f) const {
    const Arrow& af = arrow(f);
    const Arrow& ag = arrow(g);
    if (af.dst != ag.src) throw std::invalid_argument("category: arrows not composable");
    if (identities.count(af.src) && identities.at(af.src) == f) return g;
    if (identities.count(ag.src) && identities.at(ag.src) == g) return f;
    auto it = comp.find({g, f});
    if (it == comp.end()) throw std::invalid_argument("category: missing composite");
    return it->second;
}

std::vector<std::string> FinCategory::arrows_between(const std::string& src,
                                                     const std::string& dst) const {
    std::vector<std::string> out;
    for (const auto& a : arrows)
        if (a.src == src && a.dst == dst) out.push_back(a.id);
    return out;
}

void FinCategory::validate() const {
    std::set<std::string> objs(objects.begin(), objects.end());
    std::set<std::string> ids;
    for (const auto& a : arrows) {
        if (!objs.count(a.src) || !objs.count(a.dst))
            throw std::invalid_argument("category: arrow endpoint not an object");
        if (!ids.insert(a.id).second)
            throw std::invalid_argument("category: duplicate arrow id");
    }
    for (const auto& obj : objects) {
        auto it = identities.find(obj);
        if (it == identities.end()) throw std::invalid_argument("category: missing identity");
        const Arrow& a = arrow(it->second);
        if (a.src != obj || a.dst != obj)
            throw std::invalid_argument("category: identity with wrong endpoints");
    }
    for (const auto& f : arrows)
        for (const auto& g : arrows) {
            if (f.dst != g.src) continue;
            std::string gf = compose(g.id, f.id);
            const Arrow& c = arrow(gf);
            if (c.src != f.src || c.dst != g.dst)
                throw std::invalid_argument("category: composite with wrong endpoints");
            for (const auto& h : arrows) {
                if (g.dst != h.src) continue;
                if (compose(h.id, gf) != compose(compose(h.id, g.id), f.id))
                    throw std::invalid_argument("category: composition not associative");
            }
        }
}

Colour encode_pair_colour(const std::string& first, const std::string& second) {
    return "P" + std::to_string(first.size()) + ":" + first + std::to_string(second.size()) +
           ":" + second;
}

std::pair<std::string, std::string> decode_pair_colour(const Colour& c) {
    if (c.empty() || c[0] != 'P') throw std::invalid_argument("decode_pair_colour: malformed");
    std::size_t pos = 1;
    auto read = [&]() {
        std::size_t colon = c.find(':', pos);
        if (colon == std::string::npos) throw std::invalid_argument("decode_pair_colour: malformed");
        std::size_t len = std::stoul(c.substr(pos, colon - pos));
        std::string s = c.substr(colon + 1, len);
        pos = colon + 1 + len;
        return s;
    };
    std::string a = read();
    std::string b = read();
    return {a, b};
}

OpValue encode_tagged_op(const TaggedOp& t) {
    json j;
    j["s"] = json::array();
    for (const auto& c : t.sig.inputs) j["s"].push_back(c);
    j["t"] = t.sig.output;
    j["f"] = t.fs;
    j["o"] = t.op;
    return j.dump();
}

TaggedOp decode_tagged_op(const OpValue& v) {
    json j = json::parse(v);
    TaggedOp t;
    for (const auto& c : j.at("s")) t.sig.inputs.push_back(c.get<std::string>());
    t.sig.output = j.at("t").get<std::string>();
    t.fs = j.at("f").get<std::vector<std::string>>();
    t.op = j.at("o").get<std::string>();
    return t;
}

SetOperad grothendieck(const OperadicFamily& f) {
    auto fam = std::make_shared<OperadicFamily>(f);
    fam->index.validate();
    for (const auto& obj : fam->index.objects)
        if (!fam->fibre.count(obj))
            throw std::invalid_argument("grothendieck: missing fibre at " + obj);
    for (const auto& a : fam->index.arrows)
        if (!fam->transport.count(a.id))
            throw std::invalid_argument("grothendieck: missing transport at " + a.id);

    // fibre signature of a tagged operation: input colours pushed through
    // the transports of its morphisms
    auto fibre_signature = [fam](const TaggedOp& t) {
        Signature fs;
        for (int i = 0; i < t.sig.arity(); ++i) {
            auto [ci, xi] = decode_pair_colour(t.sig.inputs[i]);
            fs.inputs.push_back(fam->transport.at(t.fs[i]).colour_map(xi));
        }
        fs.output = decode_pair_colour(t.sig.output).second;
        return fs;
    };

    SetOperad o;
    if (std::all_of(fam->index.objects.begin(), fam->index.objects.end(),
                    [&](const std::string& obj) { return fam->fibre.at(obj).colours.has_value(); })) {
        o.colours = std::vector<Colour>{};
        for (const auto& obj : fam->index.objects)
            for (const auto& x : *fam->fibre.at(obj).colours)
                o.colours->push_back(encode_pair_colour(obj, x));
    }
    o.hom_fn = [fam, fibre_signature](const Signature& s) -> std::vector<OpValue> {
        std::vector<std::pair<std::string, std::string>> ins;
        std::pair<std::string, std::string> out;
        try {
            for (const auto& c : s.inputs) ins.push_back(decode_pair_colour(c));
            out = decode_pair_colour(s.output);
        } catch (const std::exception&) {
            return {};
        }
        std::vector<std::vector<std::string>> choices;
        for (const auto& [ci, xi] : ins) {
            choices.push_back(fam->index.arrows_between(ci, out.first));
            if (choices.back().empty()) return {};
        }
        std::vector<OpValue> result;
        std::vector<int> pick(ins.size(), 0);
        for (;;) {
            TaggedOp t;
            t.sig = s;
            for (std::size_t i = 0; i < ins.size(); ++i) t.fs.push_back(choices[i][pick[i]]);
            Signature fsig = fibre_signature(t);
            for (const auto& op : fam->fibre.at(out.first).hom(fsig)) {
                t.op = op;
                result.push_back(encode_tagged_op(t));
            }
            std::size_t i = 0;
            while (i < pick.size() && pick[i] + 1 == static_cast<int>(choices[i].size()))
                pick[i++] = 0;
            if (i == pick.size()) break;
            ++pick[i];
        }
        return result;
    };
    o.compose_fn = [fam, fibre_signature](const OpValue& oe, int l, const OpValue& pe) {
        TaggedOp to = decode_tagged_op(oe);
        TaggedOp tp = decode_tagged_op(pe);
        const int n = to.sig.arity(), m = tp.sig.arity();
        if (l < 1 || l > n) throw std::invalid_argument("compose_at: slot out of range");
        const std::string fl = to.fs[l - 1];
        const std::string c = decode_pair_colour(to.sig.output).first;
        TaggedOp r;
        r.sig = splice_signature(to.sig, l, tp.sig);
        r.fs.resize(n + m - 1);
        for (int k = 1; k <= n + m - 1; ++k) {
            if (k < l)
                r.fs[k - 1] = to.fs[k - 1];
            else if (k <= l + m - 1)
                r.fs[k - 1] = fam->index.compose(fl, tp.fs[k - l]);
            else
                r.fs[k - 1] = to.fs[k - m];
        }
        OpValue moved = fam->transport.at(fl).op_map(fibre_signature(tp), tp.op);
        r.op = fam->fibre.at(c).compose_at(to.op, l, moved);
        return encode_tagged_op(r);
    };
    o.act_fn = [fam](const Perm& g, const OpValue& oe) {
        TaggedOp t = decode_tagged_op(oe);
        TaggedOp r;
        r.sig.output = t.sig.output;
        r.sig.inputs = apply_perm_to_positions(g, t.sig.inputs);
        r.fs = apply_perm_to_positions(g, t.fs);
        r.op = fam->fibre.at(decode_pair_colour(t.sig.output).first).act(g, t.op);
        return encode_tagged_op(r);
    };
    o.unit_fn = [fam](const Colour& c) {
        auto [obj, x] = decode_pair_colour(c);
        TaggedOp t;
        t.sig = Signature{{c}, c};
        t.fs = {fam->index.identities.at(obj)};
        t.op = fam->fibre.at(obj).unit(x);
        return encode_tagged_op(t);
    };
    return o;
}

void Poset::validate() const {
    std::set<std::string> elems(elements.begin(), elements.end());
    if (elems.size() != elements.size()) throw std::invalid_argument("poset: duplicate elements");
    for (const auto& [a, b] : strictly_below) {
        if (!elems.count(a) || !elems.count(b))
            throw std::invalid_argument("poset: relation on unknown element");
        if (a == b || strictly_below.count({b, a}))
            throw std::invalid_argument("poset: relation not antisymmetric");
    }
    for (const auto& [a, b] : strictly_below)
        for (const auto& [c, d] : strictly_below)
            if (b == c && !leq(a, d)) throw std::invalid_argument("poset: relation not transitive");
}

SetOperad bv_tensor_poset(const SetOperad& base, const Poset& p) {
    auto poset = std::make_shared<Poset>(p);
    poset->validate();
    auto inner = std::make_shared<SetOperad>(base);
    SetOperad o;
    if (base.colours) {
        o.colours = std::vector<Colour>{};
        for (const auto& c : *base.colours)
            for (const auto& a : poset->elements) o.colours->push_back(encode_pair_colour(c, a));
    }
    o.hom_fn = [inner, poset](const Signature& s) -> std::vector<OpValue> {
        Signature fs;
        std::string out_elem;
        try {
            auto [oc, oa] = decode_pair_colour(s.output);
            fs.output = oc;
            out_elem = oa;
            for (const auto& c : s.inputs) {
                auto [ic, ia] = decode_pair_colour(c);
                if (!poset->leq(ia, out_elem)) return {};
                fs.inputs.push_back(ic);
            }
        } catch (const std::exception&) {
            return {};
        }
        std::vector<OpValue> result;
        for (const auto& op : inner->hom(fs)) {
            TaggedOp t;
            t.sig = s;
            t.op = op;
            result.push_back(encode_tagged_op(t));
        }
        return result;
    };
    o.compose_fn = [inner](const OpValue& oe, int l, const OpValue& pe) {
        TaggedOp to = decode_tagged_op(oe);
        TaggedOp tp = decode_tagged_op(pe);
        TaggedOp r;
        r.sig = splice_signature(to.sig, l, tp.sig);
        r.op = inner->compose_at(to.op, l, tp.op);
        return encode_tagged_op(r);
    };
    o.act_fn = [inner](const Perm& g, const OpValue& oe) {
        TaggedOp t = decode_tagged_op(oe);
        TaggedOp r;
        r.sig.output = t.sig.output;
        r.sig.inputs = apply_perm_to_positions(g, t.sig.inputs);
        r.op = inner->act(g, t.op);
        return encode_tagged_op(r);
    };
    o.unit_fn = [inner](const Colour& c) {
        TaggedOp t;
        t.sig = Signature{{c}, c};
        t.op = inner->unit(decode_pair_colour(c).first);
        return encode_tagged_op(t);
    };
    return o;
}

Poset pushout_poset() {
    Poset p;
    p.elements = {"O", "A", "B"};
    p.strictly_below = {{"O", "A"}, {"O", "B"}};
    return p;
}

std::vector<CValence> bounded_valences(const std::vector<Colour>& colour_set, int max_in,
                                       int max_out) {
    std::vector<std::vector<Colour>> words_in, words_out;
    auto words_up_to = [&](int max_len) {
        std::vector<std::vector<Colour>> words{{}};
        std::vector<std::vector<Colour>> frontier{{}};
        for (int len = 1; len <= max_len; ++len) {
            std::vector<std::vector<Colour>> next;
            for (const auto& w : frontier)
                for (const auto& c : colour_set) {
                    auto w2 = w;
                    w2.push_back(c);
                    next.push_back(w2);
                }
            words.insert(words.end(), next.begin(), next.end());
            frontier = std::move(next);
        }
        return words;
    };
    words_in = words_up_to(max_in);
    words_out = words_up_to(max_out);
    std::vector<CValence> out;
    for (const auto& wi : words_in)
        for (const auto& wo : words_out) out.push_back(CValence{wi, wo});
    return out;
}

std::vector<Signature> signatures_with_inputs(const std::vector<CValence>& valences, int inputs) {
    std::vector<Signature> out;
    std::vector<int> pick(inputs, 0);
    const int n = static_cast<int>(valences.size());
    if (n == 0) return out;
    for (;;) {
        for (const auto& res : valences) {
            Signature s;
            for (int i = 0; i < inputs; ++i) s.inputs.push_back(encode_cvalence(valences[pick[i]]));
            s.output = encode_cvalence(res);
            out.push_back(std::move(s));
        }
        int i = 0;
        while (i < inputs && pick[i] + 1 == n) pick[i++] = 0;
        if (i == inputs) break;
        ++pick[i];
    }
    return out;
}

}  // namespace propcalc
