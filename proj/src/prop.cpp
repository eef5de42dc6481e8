#include "propcalc/prop.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace propcalc {

using nlohmann::json;

GradedHomSet SetProp::hom(const CValence& v, int level) const {
    auto key = std::make_pair(v, level);
    {
        std::lock_guard<std::mutex> lock(cache_->mutex);
        auto it = cache_->homs.find(key);
        if (it != cache_->homs.end()) return it->second;
    }
    GradedHomSet result = hom_fn(v, level);
    std::sort(result.elements.begin(), result.elements.end());
    std::lock_guard<std::mutex> lock(cache_->mutex);
    return cache_->homs.emplace(key, std::move(result)).first->second;
}

// ---- free PROP on an operad ----

ElValue encode_w_op(const WOp& w) {
    json j;
    j["c"] = w.ins;
    j["d"] = w.outs;
    j["f"] = w.map;
    j["o"] = w.ops;
    return j.dump();
}

WOp decode_w_op(const ElValue& v) {
    json j = json::parse(v);
    WOp w;
    w.ins = j.at("c").get<std::vector<Colour>>();
    w.outs = j.at("d").get<std::vector<Colour>>();
    w.map = j.at("f").get<std::vector<int>>();
    w.ops = j.at("o").get<std::vector<OpValue>>();
    return w;
}

namespace {

// ascending one-based fibre of a map
std::vector<int> fibre_of(const std::vector<int>& map, int value) {
    std::vector<int> out;
    for (int j = 0; j < static_cast<int>(map.size()); ++j)
        if (map[j] == value) out.push_back(j + 1);
    return out;
}

}  // namespace

SetProp free_prop_on_operad(const SetOperad& o, const std::vector<Colour>& operad_colours) {
    auto op = std::make_shared<SetOperad>(o);
    SetProp p;
    p.colour_set = operad_colours;
    p.valence_fn = [](const ElValue& e) {
        WOp w = decode_w_op(e);
        return CValence{w.ins, w.outs};
    };
    p.hom_fn = [op](const CValence& v, int) -> GradedHomSet {
        GradedHomSet hs;
        hs.saturated = true;
        const int n = static_cast<int>(v.ins.size());
        const int m = static_cast<int>(v.outs.size());
        if (m == 0 && n > 0) return hs;
        std::vector<int> f(n, 1);
        for (;;) {
            // operations per output over this map
            std::vector<std::vector<OpValue>> choices(m);
            bool feasible = true;
            for (int i = 1; i <= m && feasible; ++i) {
                Signature s;
                for (int j : fibre_of(f, i)) s.inputs.push_back(v.ins[j - 1]);
                s.output = v.outs[i - 1];
                choices[i - 1] = op->hom(s);
                if (choices[i - 1].empty()) feasible = false;
            }
            if (feasible) {
                std::vector<int> pick(m, 0);
                for (;;) {
                    WOp w;
                    w.ins = v.ins;
                    w.outs = v.outs;
                    w.map = f;
                    for (int i = 0; i < m; ++i) w.ops.push_back(choices[i][pick[i]]);
                    hs.elements.push_back(encode_w_op(w));
                    int i = 0;
                    while (i < m && pick[i] + 1 == static_cast<int>(choices[i].size()))
                        pick[i++] = 0;
                    if (i == m) break;
                    ++pick[i];
                }
            }
            if (n == 0 || m == 0) break;
            int j = 0;
            while (j < n && f[j] == m) f[j++] = 1;
            if (j == n) break;
            ++f[j];
        }
        return hs;
    };
    p.vcomp_fn = [op](const ElValue& ge, const ElValue& fe) {
        WOp wf = decode_w_op(fe);
        WOp wg = decode_w_op(ge);
        if (wf.outs != wg.ins) throw std::invalid_argument("vcomp: middle words differ");
        const int mid = static_cast<int>(wf.outs.size());
        WOp r;
        r.ins = wf.ins;
        r.outs = wg.outs;
        for (int j : wf.map) r.map.push_back(wg.map[j - 1]);
        for (int i = 1; i <= static_cast<int>(wg.outs.size()); ++i) {
            OpValue cur = wg.ops[i - 1];
            auto gf_fibre = fibre_of(wg.map, i);
            for (int rr = static_cast<int>(gf_fibre.size()); rr >= 1; --rr)
                cur = op->compose_at(cur, rr, wf.ops[gf_fibre[rr - 1] - 1]);
            // the unshuffling of f restricted to the composite fibre puts
            // the composite's inputs back in ascending original order
            std::vector<int> restricted;
            for (int x : fibre_of(r.map, i)) restricted.push_back(wf.map[x - 1]);
            Perm w = unshuffle(restricted, mid == 0 ? 1 : mid);
            if (!w.is_identity()) cur = op->act(w, cur);
            r.ops.push_back(cur);
        }
        return encode_w_op(r);
    };
    p.hcomp_fn = [](const ElValue& fe, const ElValue& ge) {
        WOp wf = decode_w_op(fe);
        WOp wg = decode_w_op(ge);
        const int mf = static_cast<int>(wf.outs.size());
        WOp r;
        r.ins = wf.ins;
        r.ins.insert(r.ins.end(), wg.ins.begin(), wg.ins.end());
        r.outs = wf.outs;
        r.outs.insert(r.outs.end(), wg.outs.begin(), wg.outs.end());
        r.map = wf.map;
        for (int j : wg.map) r.map.push_back(j + mf);
        r.ops = wf.ops;
        r.ops.insert(r.ops.end(), wg.ops.begin(), wg.ops.end());
        return encode_w_op(r);
    };
    p.in_act_fn = [op](const Perm& s, const ElValue& fe) {
        WOp w = decode_w_op(fe);
        WOp r;
        r.outs = w.outs;
        r.ins = apply_perm_to_positions(s, w.ins);
        r.map = apply_perm_to_positions(s, w.map);
        for (int i = 1; i <= static_cast<int>(w.outs.size()); ++i) {
            auto new_fibre = fibre_of(r.map, i);
            auto old_fibre = fibre_of(w.map, i);
            std::vector<int> img;
            for (int jp : new_fibre) {
                int orig = s(jp);
                int rank = 1;
                for (int x : old_fibre)
                    if (x < orig) ++rank;
                img.push_back(rank);
            }
            Perm tau{img};
            r.ops.push_back(tau.is_identity() ? w.ops[i - 1] : op->act(tau, w.ops[i - 1]));
        }
        return encode_w_op(r);
    };
    p.out_act_fn = [](const Perm& s, const ElValue& fe) {
        WOp w = decode_w_op(fe);
        Perm inv = s.inverse();
        WOp r;
        r.ins = w.ins;
        r.outs = apply_perm_to_positions(inv, w.outs);
        r.ops = apply_perm_to_positions(inv, w.ops);
        for (int j : w.map) r.map.push_back(s(j));
        return encode_w_op(r);
    };
    p.unit_fn = [op](const std::vector<Colour>& word) {
        WOp w;
        w.ins = w.outs = word;
        for (int i = 1; i <= static_cast<int>(word.size()); ++i) {
            w.map.push_back(i);
            w.ops.push_back(op->unit(word[i - 1]));
        }
        return encode_w_op(w);
    };
    return p;
}

SetOperad operad_from_category(const FinCategory& c) {
    auto cat = std::make_shared<FinCategory>(c);
    cat->validate();
    SetOperad o;
    o.colours = c.objects;
    o.hom_fn = [cat](const Signature& s) -> std::vector<OpValue> {
        if (s.arity() != 1) return {};
        return cat->arrows_between(s.inputs[0], s.output);
    };
    o.compose_fn = [cat](const OpValue& g, int slot, const OpValue& f) {
        if (slot != 1) throw std::invalid_argument("unary operad: slot out of range");
        return cat->compose(g, f);
    };
    o.act_fn = [](const Perm&, const OpValue& a) { return a; };
    o.unit_fn = [cat](const Colour& c) { return cat->identities.at(c); };
    return o;
}

SetProp free_symmetric_monoidal(const FinCategory& c) {
    auto cat = std::make_shared<FinCategory>(c);
    cat->validate();
    SetProp p;
    p.colour_set = c.objects;
    p.valence_fn = [](const ElValue& e) {
        WOp w = decode_w_op(e);
        return CValence{w.ins, w.outs};
    };
    p.hom_fn = [cat](const CValence& v, int) -> GradedHomSet {
        GradedHomSet hs;
        hs.saturated = true;
        const int n = static_cast<int>(v.ins.size());
        if (n != static_cast<int>(v.outs.size())) return hs;
        for (const Perm& f : all_perms(n)) {
            // f as a map sends input j to output f(j); factor i is an arrow
            // from the unique input in the fibre of i to output i
            std::vector<std::vector<OpValue>> choices(n);
            bool feasible = true;
            for (int i = 1; i <= n && feasible; ++i) {
                int j = f.inverse()(i);
                choices[i - 1] = cat->arrows_between(v.ins[j - 1], v.outs[i - 1]);
                if (choices[i - 1].empty()) feasible = false;
            }
            if (!feasible) continue;
            std::vector<int> pick(n, 0);
            for (;;) {
                WOp w;
                w.ins = v.ins;
                w.outs = v.outs;
                w.map = f.images();
                for (int i = 0; i < n; ++i) w.ops.push_back(choices[i][pick[i]]);
                hs.elements.push_back(encode_w_op(w));
                int i = 0;
                while (i < n && pick[i] + 1 == static_cast<int>(choices[i].size())) pick[i++] = 0;
                if (i == n) break;
                ++pick[i];
            }
        }
        return hs;
    };
    p.vcomp_fn = [cat](const ElValue& ge, const ElValue& fe) {
        WOp wf = decode_w_op(fe);
        WOp wg = decode_w_op(ge);
        if (wf.outs != wg.ins) throw std::invalid_argument("vcomp: middle words differ");
        WOp r;
        r.ins = wf.ins;
        r.outs = wg.outs;
        for (int j : wf.map) r.map.push_back(wg.map[j - 1]);
        for (int i = 1; i <= static_cast<int>(wg.outs.size()); ++i) {
            int mid = fibre_of(wg.map, i)[0];
            r.ops.push_back(cat->compose(wg.ops[i - 1], wf.ops[mid - 1]));
        }
        return encode_w_op(r);
    };
    p.hcomp_fn = [](const ElValue& fe, const ElValue& ge) {
        WOp wf = decode_w_op(fe);
        WOp wg = decode_w_op(ge);
        const int mf = static_cast<int>(wf.outs.size());
        WOp r;
        r.ins = wf.ins;
        r.ins.insert(r.ins.end(), wg.ins.begin(), wg.ins.end());
        r.outs = wf.outs;
        r.outs.insert(r.outs.end(), wg.outs.begin(), wg.outs.end());
        r.map = wf.map;
        for (int j : wg.map) r.map.push_back(j + mf);
        r.ops = wf.ops;
        r.ops.insert(r.ops.end(), wg.ops.begin(), wg.ops.end());
        return encode_w_op(r);
    };
    p.in_act_fn = [](const Perm& s, const ElValue& fe) {
        WOp w = decode_w_op(fe);
        WOp r = w;
        r.ins = apply_perm_to_positions(s, w.ins);
        r.map = apply_perm_to_positions(s, w.map);
        return encode_w_op(r);
    };
    p.out_act_fn = [](const Perm& s, const ElValue& fe) {
        WOp w = decode_w_op(fe);
        Perm inv = s.inverse();
        WOp r = w;
        r.outs = apply_perm_to_positions(inv, w.outs);
        r.ops = apply_perm_to_positions(inv, w.ops);
        r.map.clear();
        for (int j : w.map) r.map.push_back(s(j));
        return encode_w_op(r);
    };
    p.unit_fn = [cat](const std::vector<Colour>& word) {
        WOp w;
        w.ins = w.outs = word;
        for (int i = 1; i <= static_cast<int>(word.size()); ++i) {
            w.map.push_back(i);
            w.ops.push_back(cat->identities.at(word[i - 1]));
        }
        return encode_w_op(w);
    };
    return p;
}

// ---- graded free PROPs on (symmetric) bicollections ----

ElValue encode_decorated(const DecoratedGraph& d) {
    json j;
    j["g"] = canonical_encode(d.graph);
    j["d"] = d.decorations;
    return j.dump();
}

DecoratedGraph decode_decorated(const ElValue& v) {
    json j = json::parse(v);
    DecoratedGraph d;
    d.graph = canonical_decode(j.at("g").get<std::string>());
    d.decorations = j.at("d").get<std::vector<ElValue>>();
    return d;
}

namespace {

// class label of a decorated graph under ordered isomorphism: least
// encoding over all node orders (decorations travel with the order)
ElValue canonical_decorated(const DecoratedGraph& d) {
    if (d.graph.nodes() == 0) return encode_decorated(d);
    ElValue best;
    bool first = true;
    for (const Perm& g : all_perms(d.graph.nodes())) {
        DecoratedGraph cand{permute_node_order(g, d.graph),
                            apply_perm_to_positions(g, d.decorations)};
        ElValue enc = encode_decorated(cand);
        if (first || enc < best) {
            best = enc;
            first = false;
        }
    }
    return best;
}

// two-node frame for vertical composition: top node (a;b) feeding bottom
// node (b;c) through straight inner edges
CoaGraph vertical_frame(const CValence& top, const CValence& bottom) {
    if (top.outs != bottom.ins) throw std::invalid_argument("vcomp: middle words differ");
    const int na = static_cast<int>(top.ins.size());
    const int nb = static_cast<int>(top.outs.size());
    const int nc = static_cast<int>(bottom.outs.size());
    CoaGraph v;
    v.graph.node_count = 2;
    v.graph.edge_count = na + nb + nc;
    v.graph.enters.assign(v.graph.edge_count, std::nullopt);
    v.graph.exits.assign(v.graph.edge_count, std::nullopt);
    v.node_in.resize(2);
    v.node_out.resize(2);
    for (int e = 0; e < na; ++e) {
        v.graph.enters[e] = 0;
        v.node_in[0].push_back(e);
        v.port_in.push_back(e);
        v.labels.push_back(top.ins[e]);
    }
    for (int e = na; e < na + nb; ++e) {
        v.graph.exits[e] = 0;
        v.graph.enters[e] = 1;
        v.node_out[0].push_back(e);
        v.node_in[1].push_back(e);
        v.labels.push_back(top.outs[e - na]);
    }
    for (int e = na + nb; e < na + nb + nc; ++e) {
        v.graph.exits[e] = 1;
        v.node_out[1].push_back(e);
        v.port_out.push_back(e);
        v.labels.push_back(bottom.outs[e - na - nb]);
    }
    v.node_order = {0, 1};
    return v;
}

CoaGraph horizontal_frame(const CValence& left, const CValence& right) {
    CoaGraph v;
    v.graph.node_count = 2;
    v.node_in.resize(2);
    v.node_out.resize(2);
    int e = 0;
    auto add = [&](std::optional<int> enters, std::optional<int> exits, const Colour& c) {
        v.graph.enters.push_back(enters);
        v.graph.exits.push_back(exits);
        v.labels.push_back(c);
        return e++;
    };
    for (const auto& c : left.ins) {
        int id = add(0, std::nullopt, c);
        v.node_in[0].push_back(id);
        v.port_in.push_back(id);
    }
    for (const auto& c : right.ins) {
        int id = add(1, std::nullopt, c);
        v.node_in[1].push_back(id);
        v.port_in.push_back(id);
    }
    for (const auto& c : left.outs) {
        int id = add(std::nullopt, 0, c);
        v.node_out[0].push_back(id);
        v.port_out.push_back(id);
    }
    for (const auto& c : right.outs) {
        int id = add(std::nullopt, 1, c);
        v.node_out[1].push_back(id);
        v.port_out.push_back(id);
    }
    v.graph.edge_count = e;
    v.node_order = {0, 1};
    return v;
}

DecoratedGraph glue(const CoaGraph& frame, const DecoratedGraph& first,
                    const DecoratedGraph& second) {
    InsertionPermutation alpha;
    alpha.blocks = 2;
    for (int i = 0; i < first.graph.nodes(); ++i) alpha.map.push_back(1);
    for (int i = 0; i < second.graph.nodes(); ++i) alpha.map.push_back(2);
    DecoratedGraph out;
    out.graph = multi_insert(frame, alpha, {first.graph, second.graph});
    out.decorations = first.decorations;
    out.decorations.insert(out.decorations.end(), second.decorations.begin(),
                           second.decorations.end());
    return out;
}

DecoratedGraph identity_decorated(const std::vector<Colour>& word) {
    DecoratedGraph d;
    d.graph.graph.edge_count = static_cast<int>(word.size());
    d.graph.graph.enters.assign(word.size(), std::nullopt);
    d.graph.graph.exits.assign(word.size(), std::nullopt);
    d.graph.labels = word;
    for (int e = 0; e < static_cast<int>(word.size()); ++e) {
        d.graph.port_in.push_back(e);
        d.graph.port_out.push_back(e);
    }
    return d;
}

using Canonicalizer = std::function<ElValue(const DecoratedGraph&)>;

// shared structure of the graded free PROPs: only the class labelling
// differs between the plain and the symmetric case
SetProp graded_free_prop(const Bicollection& a, Canonicalizer canon) {
    auto gens = std::make_shared<Bicollection>(a);
    auto canonical = std::make_shared<Canonicalizer>(std::move(canon));
    SetProp p;
    p.colour_set = a.colour_set;
    p.valence_fn = [](const ElValue& e) {
        return residue_cvalence(decode_decorated(e).graph);
    };
    auto enumerate_level = [gens, canonical](const CValence& v, int level) {
        std::set<ElValue> out;
        std::vector<CValence> sup;
        for (const auto& [val, els] : gens->support)
            if (!els.empty()) sup.push_back(val);
        // non-decreasing valence sequences of each length; every ordered
        // class has a representative with sorted node valences
        std::function<void(std::vector<CValence>&, std::size_t, int)> rec =
            [&](std::vector<CValence>& seq, std::size_t min_idx, int remaining) {
                for (const auto& g : enumerate_coa(Arity{seq, v})) {
                    std::vector<std::vector<ElValue>> choices;
                    for (const auto& nv : seq) choices.push_back(gens->support.at(nv));
                    std::vector<int> pick(seq.size(), 0);
                    for (;;) {
                        DecoratedGraph d;
                        d.graph = g;
                        for (std::size_t i = 0; i < seq.size(); ++i)
                            d.decorations.push_back(choices[i][pick[i]]);
                        out.insert((*canonical)(d));
                        std::size_t i = 0;
                        while (i < pick.size() &&
                               pick[i] + 1 == static_cast<int>(choices[i].size()))
                            pick[i++] = 0;
                        if (i == pick.size()) break;
                        ++pick[i];
                    }
                }
                if (remaining == 0) return;
                for (std::size_t k = min_idx; k < sup.size(); ++k) {
                    seq.push_back(sup[k]);
                    rec(seq, k, remaining - 1);
                    seq.pop_back();
                }
            };
        std::vector<CValence> seq;
        rec(seq, 0, level);
        return out;
    };
    p.hom_fn = [enumerate_level](const CValence& v, int level) -> GradedHomSet {
        GradedHomSet hs;
        hs.level = level;
        auto now = enumerate_level(v, level);
        hs.elements.assign(now.begin(), now.end());
        auto next = enumerate_level(v, level + 1);
        bool zero_nodes = true;
        for (const auto& e : now)
            if (decode_decorated(e).graph.nodes() > 0) zero_nodes = false;
        hs.saturated = (next == now) && zero_nodes;
        return hs;
    };
    p.vcomp_fn = [canonical](const ElValue& ge, const ElValue& fe) {
        DecoratedGraph df = decode_decorated(fe);
        DecoratedGraph dg = decode_decorated(ge);
        CoaGraph frame = vertical_frame(residue_cvalence(df.graph), residue_cvalence(dg.graph));
        return (*canonical)(glue(frame, df, dg));
    };
    p.hcomp_fn = [canonical](const ElValue& fe, const ElValue& ge) {
        DecoratedGraph df = decode_decorated(fe);
        DecoratedGraph dg = decode_decorated(ge);
        CoaGraph frame = horizontal_frame(residue_cvalence(df.graph), residue_cvalence(dg.graph));
        return (*canonical)(glue(frame, df, dg));
    };
    p.in_act_fn = [canonical](const Perm& s, const ElValue& fe) {
        DecoratedGraph d = decode_decorated(fe);
        d.graph.port_in = apply_perm_to_positions(s, d.graph.port_in);
        return (*canonical)(d);
    };
    p.out_act_fn = [canonical](const Perm& s, const ElValue& fe) {
        DecoratedGraph d = decode_decorated(fe);
        d.graph.port_out = apply_perm_to_positions(s.inverse(), d.graph.port_out);
        return (*canonical)(d);
    };
    p.unit_fn = [canonical](const std::vector<Colour>& word) {
        return (*canonical)(identity_decorated(word));
    };
    return p;
}

}  // namespace

SetProp free_prop_on_bicollection(const Bicollection& a) {
    return graded_free_prop(a, canonical_decorated);
}

SymBicollection free_symmetric_bicollection(const Bicollection& a) {
    SymBicollection s;
    s.base.colour_set = a.colour_set;
    // elements (sigma, tau, u, x) at the valence (u.ins sigma; u.outs tau^{-1})
    for (const auto& [u, els] : a.support) {
        const int n = static_cast<int>(u.ins.size());
        const int m = static_cast<int>(u.outs.size());
        for (const Perm& sigma : all_perms(n))
            for (const Perm& tau : all_perms(m)) {
                CValence v{apply_perm_to_positions(sigma, u.ins),
                           apply_perm_to_positions(tau.inverse(), u.outs)};
                for (const auto& x : els) {
                    json j;
                    j["s"] = sigma.images();
                    j["t"] = tau.images();
                    j["u"] = encode_cvalence(u);
                    j["x"] = x;
                    s.base.support[v].push_back(j.dump());
                }
            }
    }
    for (auto& [v, els] : s.base.support) std::sort(els.begin(), els.end());
    s.act = [](const Perm& sigma2, const Perm& tau2, const CValence&, const ElValue& e) {
        json j = json::parse(e);
        Perm sigma{j.at("s").get<std::vector<int>>()};
        Perm tau{j.at("t").get<std::vector<int>>()};
        j["s"] = compose(sigma, sigma2).images();
        j["t"] = compose(tau2, tau).images();
        return j.dump();
    };
    return s;
}

SetProp free_prop_on_sym_bicollection(const SymBicollection& a) {
    auto sym = std::make_shared<SymBicollection>(a);
    // the class label additionally minimizes over covering-order twists,
    // transporting decorations through the symmetric action
    Canonicalizer canon = [sym](const DecoratedGraph& d) -> ElValue {
        ElValue best;
        bool first = true;
        const int n = d.graph.nodes();
        std::vector<Perm> node_orders = all_perms(n);
        std::function<void(DecoratedGraph&, int)> twist_rec = [&](DecoratedGraph& cur, int x) {
            if (x == n) {
                for (const Perm& g : node_orders) {
                    DecoratedGraph cand{permute_node_order(g, cur.graph),
                                        apply_perm_to_positions(g, cur.decorations)};
                    ElValue enc = encode_decorated(cand);
                    if (first || enc < best) {
                        best = enc;
                        first = false;
                    }
                }
                return;
            }
            CValence u = c_valence_of_node(cur.graph, x);
            auto in_orig = cur.graph.node_in[x];
            auto out_orig = cur.graph.node_out[x];
            // decorations are indexed by node-order position
            int pos = 0;
            for (int i = 0; i < n; ++i)
                if (cur.graph.node_order[i] == x) pos = i;
            ElValue deco_orig = cur.decorations[pos];
            for (const Perm& s : all_perms(static_cast<int>(u.ins.size())))
                for (const Perm& r : all_perms(static_cast<int>(u.outs.size()))) {
                    cur.graph.node_in[x] = apply_perm_to_positions(s, in_orig);
                    cur.graph.node_out[x] = apply_perm_to_positions(r, out_orig);
                    cur.decorations[pos] = sym->act(s, r.inverse(), u, deco_orig);
                    twist_rec(cur, x + 1);
                }
            cur.graph.node_in[x] = in_orig;
            cur.graph.node_out[x] = out_orig;
            cur.decorations[pos] = deco_orig;
        };
        DecoratedGraph work = d;
        if (n == 0) return encode_decorated(d);
        twist_rec(work, 0);
        return best;
    };
    return graded_free_prop(a.base, canon);
}

// ---- axiom checking ----

void PropReport::fail(const std::string& what) {
    ok = false;
    if (violations.size() < 20) violations.push_back(what);
}

namespace {

Perm block_sum(const Perm& p, const Perm& q) {
    std::vector<int> img;
    for (int i = 1; i <= p.size(); ++i) img.push_back(p(i));
    for (int i = 1; i <= q.size(); ++i) img.push_back(q(i) + p.size());
    return Perm(std::move(img));
}

// the permutation with (a * c) . bs = c * a for |a| = first, |c| = second
Perm block_swap(int first, int second) {
    std::vector<int> img;
    for (int i = 1; i <= second; ++i) img.push_back(first + i);
    for (int i = 1; i <= first; ++i) img.push_back(i);
    return Perm(std::move(img));
}

std::string brief_el(const ElValue& v) {
    return v.size() <= 60 ? v : v.substr(0, 57) + "...";
}

}  // namespace

PropReport check_prop_axioms(const SetProp& p, const std::vector<CValence>& probes, int level,
                             long long max_checks, std::uint64_t seed) {
    PropReport rep;
    std::mt19937_64 rng(seed);
    auto guarded = [&rep](const std::string& context, auto&& body) {
        try {
            body();
        } catch (const std::exception& e) {
            rep.fail(context + " raised: " + e.what());
        }
    };

    std::map<CValence, std::vector<ElValue>> pool;
    {
        std::set<CValence> seen;
        for (const auto& v : probes) {
            if (!seen.insert(v).second) continue;
            pool[v] = p.hom(v, level).elements;
        }
    }
    std::vector<std::pair<CValence, ElValue>> flat;
    for (const auto& [v, els] : pool)
        for (const auto& e : els) flat.push_back({v, e});

    auto cap = [&](auto& v, long long m) {
        if (static_cast<long long>(v.size()) > m) {
            std::shuffle(v.begin(), v.end(), rng);
            v.resize(m);
        }
    };

    // vertical and horizontal units
    for (const auto& [v, e] : flat) {
        guarded("units on " + brief_el(e), [&, v = v, e = e] {
            ++rep.checks;
            if (p.vcomp(p.unit(v.outs), e) != e) rep.fail("left unit fails on " + brief_el(e));
            ++rep.checks;
            if (p.vcomp(e, p.unit(v.ins)) != e) rep.fail("right unit fails on " + brief_el(e));
            ElValue u0 = p.unit({});
            ++rep.checks;
            if (p.hcomp(e, u0) != e || p.hcomp(u0, e) != e)
                rep.fail("horizontal unit fails on " + brief_el(e));
        });
    }

    // vertical associativity over composable triples
    struct VTriple {
        ElValue f, g, h;
    };
    std::vector<VTriple> vtriples;
    for (const auto& [vf, f] : flat)
        for (const auto& [vg, g] : flat) {
            if (vg.ins != vf.outs) continue;
            for (const auto& [vh, h] : flat)
                if (vh.ins == vg.outs) vtriples.push_back({f, g, h});
        }
    cap(vtriples, max_checks);
    for (const auto& t : vtriples) {
        guarded("vertical associativity", [&] {
            ++rep.checks;
            if (p.vcomp(p.vcomp(t.h, t.g), t.f) != p.vcomp(t.h, p.vcomp(t.g, t.f)))
                rep.fail("vertical associativity fails on " + brief_el(t.f));
        });
    }

    // horizontal associativity on arbitrary triples
    std::vector<VTriple> htriples;
    for (const auto& [vf, f] : flat)
        for (const auto& [vg, g] : flat)
            for (const auto& [vh, h] : flat) htriples.push_back({f, g, h});
    cap(htriples, max_checks);
    for (const auto& t : htriples) {
        guarded("horizontal associativity", [&] {
            ++rep.checks;
            if (p.hcomp(p.hcomp(t.f, t.g), t.h) != p.hcomp(t.f, p.hcomp(t.g, t.h)))
                rep.fail("horizontal associativity fails on " + brief_el(t.f));
        });
    }

    // interchange law on composable quadruples
    struct Quad {
        ElValue f2, f1, g2, g1;  // f2 after f1, g2 after g1
    };
    std::vector<Quad> quads;
    for (const auto& [vf1, f1] : flat)
        for (const auto& [vf2, f2] : flat) {
            if (vf2.ins != vf1.outs) continue;
            for (const auto& [vg1, g1] : flat)
                for (const auto& [vg2, g2] : flat) {
                    if (vg2.ins != vg1.outs) continue;
                    quads.push_back({f2, f1, g2, g1});
                }
        }
    cap(quads, max_checks);
    for (const auto& q : quads) {
        guarded("interchange", [&] {
            ++rep.checks;
            ElValue lhs = p.vcomp(p.hcomp(q.f2, q.g2), p.hcomp(q.f1, q.g1));
            ElValue rhs = p.hcomp(p.vcomp(q.f2, q.f1), p.vcomp(q.g2, q.g1));
            if (lhs != rhs) rep.fail("interchange fails on " + brief_el(q.f1));
        });
    }
    // units interchange: u_a x u_b = u_{a*b}
    for (const auto& [va, ea] : pool) {
        for (const auto& [vb, eb] : pool) {
            guarded("unit interchange", [&, va = va, vb = vb] {
                ++rep.checks;
                std::vector<Colour> ab = va.ins;
                ab.insert(ab.end(), vb.ins.begin(), vb.ins.end());
                if (p.hcomp(p.unit(va.ins), p.unit(vb.ins)) != p.unit(ab))
                    rep.fail("unit interchange fails");
            });
        }
    }

    // action laws
    for (const auto& [v, e] : flat) {
        const int n = static_cast<int>(v.ins.size());
        const int m = static_cast<int>(v.outs.size());
        if (n > 3 || m > 3) continue;
        guarded("action laws on " + brief_el(e), [&, v = v, e = e] {
            for (const Perm& s : all_perms(n))
                for (const Perm& t : all_perms(n)) {
                    ++rep.checks;
                    if (p.in_act(t, p.in_act(s, e)) != p.in_act(compose(s, t), e)) {
                        rep.fail("input action composition fails on " + brief_el(e));
                        return;
                    }
                }
            for (const Perm& s : all_perms(m))
                for (const Perm& t : all_perms(m)) {
                    ++rep.checks;
                    if (p.out_act(t, p.out_act(s, e)) != p.out_act(compose(t, s), e)) {
                        rep.fail("output action composition fails on " + brief_el(e));
                        return;
                    }
                }
            for (const Perm& s : all_perms(n))
                for (const Perm& t : all_perms(m)) {
                    ++rep.checks;
                    if (p.in_act(s, p.out_act(t, e)) != p.out_act(t, p.in_act(s, e))) {
                        rep.fail("mixed action commutation fails on " + brief_el(e));
                        return;
                    }
                }
            ++rep.checks;
            if (p.in_act(Perm::identity(n), e) != e || p.out_act(Perm::identity(m), e) != e)
                rep.fail("identity action fails on " + brief_el(e));
        });
    }

    // actions against vertical composition
    struct VPair {
        CValence vf, vg;
        ElValue f, g;
    };
    std::vector<VPair> vpairs;
    for (const auto& [vf, f] : flat)
        for (const auto& [vg, g] : flat)
            if (vg.ins == vf.outs) vpairs.push_back({vf, vg, f, g});
    cap(vpairs, max_checks);
    for (const auto& pr : vpairs) {
        const int n = static_cast<int>(pr.vf.ins.size());
        const int m = static_cast<int>(pr.vg.outs.size());
        const int mid = static_cast<int>(pr.vf.outs.size());
        if (n > 3 || m > 3 || mid > 3) continue;
        guarded("actions vs vertical composition", [&] {
            for (const Perm& s : all_perms(n)) {
                ++rep.checks;
                if (p.in_act(s, p.vcomp(pr.g, pr.f)) != p.vcomp(pr.g, p.in_act(s, pr.f)))
                    rep.fail("input action vs vertical composition fails");
            }
            for (const Perm& s : all_perms(m)) {
                ++rep.checks;
                if (p.out_act(s, p.vcomp(pr.g, pr.f)) != p.vcomp(p.out_act(s, pr.g), pr.f))
                    rep.fail("output action vs vertical composition fails");
            }
            // middle exchange: in_act(s, g) . f' == g . out_act(s, f') where
            // f' has output word vf.outs permuted by s
            for (const Perm& s : all_perms(mid)) {
                CValence shifted{pr.vf.ins, apply_perm_to_positions(s, pr.vf.outs)};
                auto it = pool.find(shifted);
                if (it == pool.end()) continue;
                for (const auto& fprime : it->second) {
                    ++rep.checks;
                    if (p.vcomp(p.in_act(s, pr.g), fprime) != p.vcomp(pr.g, p.out_act(s, fprime)))
                        rep.fail("middle action exchange fails");
                }
            }
        });
    }

    // actions against horizontal composition, plus the symmetry square
    struct HPair {
        CValence vf, vg;
        ElValue f, g;
    };
    std::vector<HPair> hpairs;
    for (const auto& [vf, f] : flat)
        for (const auto& [vg, g] : flat) hpairs.push_back({vf, vg, f, g});
    cap(hpairs, max_checks);
    for (const auto& pr : hpairs) {
        const int a = static_cast<int>(pr.vf.ins.size());
        const int b = static_cast<int>(pr.vf.outs.size());
        const int c = static_cast<int>(pr.vg.ins.size());
        const int d = static_cast<int>(pr.vg.outs.size());
        if (a > 2 || b > 2 || c > 2 || d > 2) continue;
        guarded("actions vs horizontal composition", [&] {
            for (const Perm& al : all_perms(a))
                for (const Perm& be : all_perms(b))
                    for (const Perm& ga : all_perms(c))
                        for (const Perm& de : all_perms(d)) {
                            ++rep.checks;
                            ElValue lhs = p.hcomp(p.in_act(al, p.out_act(be, pr.f)),
                                                  p.in_act(ga, p.out_act(de, pr.g)));
                            ElValue rhs = p.in_act(block_sum(al, ga),
                                                   p.out_act(block_sum(be, de),
                                                             p.hcomp(pr.f, pr.g)));
                            if (lhs != rhs) {
                                rep.fail("block action vs horizontal composition fails");
                                return;
                            }
                        }
            ++rep.checks;
            ElValue swapped = p.hcomp(pr.g, pr.f);
            ElValue via_action =
                p.in_act(block_swap(a, c), p.out_act(block_swap(d, b), p.hcomp(pr.f, pr.g)));
            if (swapped != via_action) rep.fail("symmetry square fails");
        });
    }

    // the two monoid structures on hom([];[]) coincide and commute
    guarded("scalar monoid", [&] {
        auto scalars = p.hom(CValence{}, level).elements;
        for (const auto& x : scalars)
            for (const auto& y : scalars) {
                ++rep.checks;
                if (p.vcomp(x, y) != p.hcomp(x, y) || p.vcomp(x, y) != p.vcomp(y, x))
                    rep.fail("scalar monoid structures disagree");
            }
    });

    return rep;
}

SetProp make_terminal_prop(const std::vector<Colour>& colour_set) {
    SetProp p;
    p.colour_set = colour_set;
    auto cs = std::make_shared<std::set<Colour>>(colour_set.begin(), colour_set.end());
    auto make = [](const CValence& v) {
        json j;
        j["v"] = encode_cvalence(v);
        return j.dump();
    };
    p.valence_fn = [](const ElValue& e) {
        return decode_cvalence(json::parse(e).at("v").get<std::string>());
    };
    p.hom_fn = [cs, make](const CValence& v, int) -> GradedHomSet {
        GradedHomSet hs;
        hs.saturated = true;
        for (const auto& c : v.ins)
            if (!cs->count(c)) return hs;
        for (const auto& c : v.outs)
            if (!cs->count(c)) return hs;
        hs.elements = {make(v)};
        return hs;
    };
    auto val = p.valence_fn;
    p.vcomp_fn = [make, val](const ElValue& g, const ElValue& f) {
        CValence vg = val(g), vf = val(f);
        if (vg.ins != vf.outs) throw std::invalid_argument("vcomp: middle words differ");
        return make(CValence{vf.ins, vg.outs});
    };
    p.hcomp_fn = [make, val](const ElValue& f, const ElValue& g) {
        CValence vf = val(f), vg = val(g);
        CValence r;
        r.ins = vf.ins;
        r.ins.insert(r.ins.end(), vg.ins.begin(), vg.ins.end());
        r.outs = vf.outs;
        r.outs.insert(r.outs.end(), vg.outs.begin(), vg.outs.end());
        return make(r);
    };
    p.in_act_fn = [make, val](const Perm& s, const ElValue& f) {
        CValence v = val(f);
        return make(CValence{apply_perm_to_positions(s, v.ins), v.outs});
    };
    p.out_act_fn = [make, val](const Perm& s, const ElValue& f) {
        CValence v = val(f);
        return make(CValence{v.ins, apply_perm_to_positions(s.inverse(), v.outs)});
    };
    p.unit_fn = [make](const std::vector<Colour>& word) {
        return make(CValence{word, word});
    };
    return p;
}

}  // namespace propcalc
