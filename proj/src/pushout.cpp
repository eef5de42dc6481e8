#include "propcalc/pushout.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

#include "propcalc/json_io.hpp"

namespace propcalc {

using nlohmann::json;

bool mark_leq(const std::string& a, const std::string& b) {
    if (a == b) return true;
    return a == "O" && (b == "A" || b == "B");
}

void validate_marked(const MarkedCoaGraph& g) {
    validate_coa(g.graph);
    if (static_cast<int>(g.marks.size()) != g.graph.nodes())
        throw std::invalid_argument("marked graph: one mark per node required");
    for (const auto& m : g.marks)
        if (m != "A" && m != "O" && m != "B")
            throw std::invalid_argument("marked graph: unknown mark " + m);
}

MarkedCoaGraph marked_insert(const MarkedCoaGraph& g, int v, const MarkedCoaGraph& k) {
    for (const auto& m : k.marks)
        if (!mark_leq(m, g.marks[v]))
            throw std::invalid_argument("marked_insert: mark " + m + " not below " + g.marks[v]);
    InsertResult res = insert_with_maps(g.graph, v, k.graph);
    MarkedCoaGraph out;
    out.graph = std::move(res.graph);
    out.marks.assign(out.graph.nodes(), "");
    for (int x = 0; x < g.graph.nodes(); ++x)
        if (x != v) out.marks[res.g_nodes[x]] = g.marks[x];
    for (int y = 0; y < k.graph.nodes(); ++y) out.marks[res.h_nodes[y]] = k.marks[y];
    return out;
}

MarkedCoaGraph marked_multi_insert(const MarkedCoaGraph& g, const InsertionPermutation& alpha,
                                   const std::vector<MarkedCoaGraph>& ks) {
    const int m = g.graph.nodes();
    if (static_cast<int>(ks.size()) != m)
        throw std::invalid_argument("marked_multi_insert: one graph per node required");
    MarkedCoaGraph cur = g;
    for (int i = m; i >= 1; --i) cur = marked_insert(cur, cur.graph.node_order[i - 1], ks[i - 1]);
    // marks are keyed by node id, which the final reordering preserves
    std::vector<CoaGraph> plain;
    for (const auto& k : ks) plain.push_back(k.graph);
    CoaGraph reordered = multi_insert(g.graph, alpha, plain);
    MarkedCoaGraph out;
    out.graph = std::move(reordered);
    out.marks = cur.marks;
    return out;
}

MarkedCoaGraph morphism_source(const MarkedMorphism& m) {
    return marked_multi_insert(m.target, m.alpha, m.inserts);
}

bool is_graph_preserving(const MarkedMorphism& m) {
    for (const auto& k : m.inserts)
        if (k.graph.nodes() != 1) return false;
    std::vector<int> sorted = m.alpha.map;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < static_cast<int>(sorted.size()); ++i)
        if (sorted[i] != i + 1) return false;
    MarkedCoaGraph src = morphism_source(m);
    return canonical_encode(src.graph) == canonical_encode(m.target.graph);
}

// ---- problems ----

std::vector<Colour> PushoutProblem::pushout_colours() const {
    std::vector<Colour> d = c_colours;
    std::set<Colour> s(s_colours.begin(), s_colours.end());
    for (const auto& c : v_colours)
        if (!s.count(c)) d.push_back(c);
    return d;
}

namespace {

// decoration payload of A- and O-marked nodes: an operad signature with
// one operation
json operad_deco(const Signature& sig, const OpValue& op) {
    json j;
    j["s"] = sig.inputs;
    j["t"] = sig.output;
    j["o"] = op;
    return j;
}

std::pair<Signature, OpValue> decode_operad_deco(const ElValue& e) {
    json j = json::parse(e);
    Signature s;
    s.inputs = j.at("s").get<std::vector<Colour>>();
    s.output = j.at("t").get<Colour>();
    return {s, j.at("o").get<OpValue>()};
}

struct ColourMaps {
    std::set<Colour> c_set, s_set, v_set;
    std::map<Colour, Colour> to_c;    // g restricted to S
    std::map<Colour, Colour> from_c;  // inverse of f on its image

    explicit ColourMaps(const PushoutProblem& prob) {
        c_set.insert(prob.c_colours.begin(), prob.c_colours.end());
        s_set.insert(prob.s_colours.begin(), prob.s_colours.end());
        v_set.insert(prob.v_colours.begin(), prob.v_colours.end());
        for (const auto& [a, b] : prob.f_colour) {
            to_c[a] = b;
            if (!from_c.emplace(b, a).second)
                throw std::invalid_argument("push-out problem: colour map not injective");
        }
    }

    bool in_c(const Colour& d) const { return c_set.count(d) > 0; }

    // preimage of a push-out colour under the gluing map, if any
    std::optional<Colour> preimage(const Colour& d) const {
        if (!in_c(d)) {
            if (v_set.count(d) && !s_set.count(d)) return d;
            return std::nullopt;
        }
        auto it = from_c.find(d);
        if (it == from_c.end()) return std::nullopt;
        return it->second;
    }
};

std::optional<Signature> preimage_signature(const ColourMaps& cm, const CValence& u) {
    if (u.outs.size() != 1) return std::nullopt;
    Signature s;
    for (const auto& d : u.ins) {
        auto a = cm.preimage(d);
        if (!a) return std::nullopt;
        s.inputs.push_back(*a);
    }
    auto out = cm.preimage(u.outs[0]);
    if (!out) return std::nullopt;
    s.output = *out;
    return s;
}

ElValue single_op_as_w_element(const Signature& sig, const OpValue& op) {
    WOp w;
    w.ins = sig.inputs;
    w.outs = {sig.output};
    w.map.assign(sig.inputs.size(), 1);
    w.ops = {op};
    return encode_w_op(w);
}

}  // namespace

std::vector<ElValue> decoration_set(const PushoutProblem& prob, const CValence& u,
                                    const std::string& mark) {
    ColourMaps cm(prob);
    std::vector<ElValue> out;
    if (mark == "B") {
        for (const auto& d : u.ins)
            if (!cm.in_c(d)) return out;
        for (const auto& d : u.outs)
            if (!cm.in_c(d)) return out;
        return prob.p.hom(u, prob.p_level).elements;
    }
    if (mark == "A" || mark == "O") {
        if (u.outs.size() != 1) return out;
        if (mark == "O") {
            for (const auto& d : u.ins)
                if (!cm.in_c(d)) return out;
            if (!cm.in_c(u.outs[0])) return out;
        }
        auto sig = preimage_signature(cm, u);
        if (!sig) return out;
        if (mark == "O") {
            // the suboperad only sees S-coloured signatures
            for (const auto& a : sig->inputs)
                if (!cm.s_set.count(a)) return out;
            if (!cm.s_set.count(sig->output)) return out;
        }
        for (const auto& op : prob.v.hom(*sig)) out.push_back(operad_deco(*sig, op).dump());
        std::sort(out.begin(), out.end());
        return out;
    }
    throw std::invalid_argument("decoration_set: unknown mark " + mark);
}

// ---- evaluation of decorated marked graphs ----

namespace {

// position of each entry of `wanted` inside `within`, as a permutation
Perm alignment(const std::vector<int>& wanted, const std::vector<int>& within) {
    if (wanted.size() != within.size())
        throw std::logic_error("alignment: size mismatch");
    std::vector<int> img;
    for (int e : wanted) {
        auto it = std::find(within.begin(), within.end(), e);
        if (it == within.end()) throw std::logic_error("alignment: edge missing");
        img.push_back(static_cast<int>(it - within.begin()) + 1);
    }
    return Perm(std::move(img));
}

std::vector<Colour> labels_of(const CoaGraph& g, const std::vector<int>& edges) {
    std::vector<Colour> out;
    for (int e : edges) out.push_back(g.labels[e]);
    return out;
}

// generic evaluator over the PROP interface
struct PropEvaluator {
    const SetProp& p;

    // decorations by node-order position, aligned with covering orders
    ElValue eval(const CoaGraph& g, const std::vector<ElValue>& decos) const {
        const int n = g.nodes();
        if (n == 0) return eval_wiring(g);
        if (n == 1) return eval_corolla(g, decos[0]);
        if (n == 2 && is_plain_two_node(g)) return eval_two_node(g, decos[0], decos[1]);
        // reduce: find an eligible ordered pair, reordering first if the
        // node order obstructs
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                if (x == y || !decompose_eligible(g, x, y)) continue;
                auto d = decompose(g, x, y);
                // two-node piece evaluated, others carried along
                int posx = 0, posy = 0;
                for (int i = 0; i < n; ++i) {
                    if (g.node_order[i] == x) posx = i;
                    if (g.node_order[i] == y) posy = i;
                }
                ElValue merged = eval_two_node(d.k, decos[posx], decos[posy]);
                std::vector<ElValue> rest(d.h.nodes());
                std::vector<int> pos_of(d.h.nodes());
                for (int i = 0; i < d.h.nodes(); ++i) pos_of[d.h.node_order[i]] = i;
                for (int i = 0; i < n; ++i) {
                    int z = g.node_order[i];
                    if (z == x || z == y) continue;
                    rest[pos_of[d.node_map[z]]] = decos[i];
                }
                rest[pos_of[d.merged_node]] = merged;
                return eval(d.h, rest);
            }
        // only the node order obstructs: move the blocked pair together
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                if (x == y) continue;
                if (max_path_length(g.graph, y, x)) continue;
                auto xy = max_path_length(g.graph, x, y);
                if (xy && *xy > 1) continue;
                // eligible except for the order: swap their positions
                int posx = 0, posy = 0;
                for (int i = 0; i < n; ++i) {
                    if (g.node_order[i] == x) posx = i;
                    if (g.node_order[i] == y) posy = i;
                }
                std::vector<int> img(n);
                std::iota(img.begin(), img.end(), 1);
                std::swap(img[posx], img[posy]);
                Perm swap{img};
                return eval(permute_node_order(swap, g), apply_perm_to_positions(swap, decos));
            }
        throw std::logic_error("eval: no reducible node pair");
    }

    bool is_plain_two_node(const CoaGraph& g) const {
        int first = g.node_order[0], second = g.node_order[1];
        if (max_path_length(g.graph, second, first)) return false;
        auto xy = max_path_length(g.graph, first, second);
        return !xy || *xy == 1;
    }

    // no nodes: a pure wiring of free edges
    ElValue eval_wiring(const CoaGraph& g) const {
        // output position j carries the edge at input position pi(j)
        Perm pi = alignment(g.port_out, g.port_in);
        ElValue u = p.unit(labels_of(g, g.port_out));
        return pi.is_identity() ? u : p.in_act(pi.inverse(), u);
    }

    ElValue eval_corolla(const CoaGraph& g, const ElValue& d) const {
        int x = g.node_order[0];
        auto frees = free_edges(g.graph);
        ElValue cur = d;
        std::vector<int> mid_in = g.node_in[x], mid_out = g.node_out[x];
        if (!frees.empty()) {
            cur = p.hcomp(cur, p.unit(labels_of(g, frees)));
            mid_in.insert(mid_in.end(), frees.begin(), frees.end());
            mid_out.insert(mid_out.end(), frees.begin(), frees.end());
        }
        Perm q = alignment(g.port_in, mid_in);
        if (!q.is_identity()) cur = p.in_act(q, cur);
        Perm r = alignment(g.port_out, mid_out);
        if (!r.is_identity()) cur = p.out_act(r.inverse(), cur);
        return cur;
    }

    // two nodes, first dominating or disconnected, decorations in
    // node-order positions
    ElValue eval_two_node(const CoaGraph& g, const ElValue& dx, const ElValue& dy) const {
        const int x = g.node_order[0], y = g.node_order[1];
        auto shared = cie(g.graph, x, y);
        std::set<int> shared_set(shared.begin(), shared.end());
        std::vector<int> m_edges, l_edges;
        for (int e : g.node_in[y])
            if (!shared_set.count(e)) m_edges.push_back(e);
        for (int e : g.node_out[x])
            if (!shared_set.count(e)) l_edges.push_back(e);

        ElValue z1 = p.hcomp(dx, p.unit(labels_of(g, m_edges)));
        ElValue z3 = p.hcomp(p.unit(labels_of(g, l_edges)), dy);
        // the middle interface in two orders: outputs of z1, inputs of z3
        std::vector<int> z1_out = g.node_out[x];
        z1_out.insert(z1_out.end(), m_edges.begin(), m_edges.end());
        std::vector<int> z3_in = l_edges;
        z3_in.insert(z3_in.end(), g.node_in[y].begin(), g.node_in[y].end());
        Perm nu = alignment(z1_out, z3_in);
        ElValue mid = p.vcomp(nu.is_identity() ? z3 : p.in_act(nu, z3), z1);

        std::vector<int> mid_in = g.node_in[x];
        mid_in.insert(mid_in.end(), m_edges.begin(), m_edges.end());
        std::vector<int> mid_out = l_edges;
        mid_out.insert(mid_out.end(), g.node_out[y].begin(), g.node_out[y].end());
        auto frees = free_edges(g.graph);
        if (!frees.empty()) {
            mid = p.hcomp(mid, p.unit(labels_of(g, frees)));
            mid_in.insert(mid_in.end(), frees.begin(), frees.end());
            mid_out.insert(mid_out.end(), frees.begin(), frees.end());
        }
        Perm q = alignment(g.port_in, mid_in);
        if (!q.is_identity()) mid = p.in_act(q, mid);
        Perm r = alignment(g.port_out, mid_out);
        if (!r.is_identity()) mid = p.out_act(r.inverse(), mid);
        return mid;
    }
};

// evaluator over the operad interface; every node and the residue have a
// single export, elements are (signature, operation) payloads
struct OperadEvaluator {
    const SetOperad& v;
    const ColourMaps& cm;

    ElValue eval(const CoaGraph& g, const std::vector<ElValue>& decos) const {
        const int n = g.nodes();
        if (n == 0) {
            auto sig = preimage_signature(cm, residue_cvalence(g));
            if (!sig || sig->inputs.size() != 1)
                throw std::logic_error("operad eval: malformed wiring");
            return operad_deco(*sig, v.unit(sig->output)).dump();
        }
        if (n == 1) return eval_corolla(g, decos[0]);
        if (n == 2) {
            int x = g.node_order[0], y = g.node_order[1];
            if (!max_path_length(g.graph, y, x) &&
                max_path_length(g.graph, x, y).value_or(1) == 1)
                return eval_two_node(g, decos[0], decos[1]);
        }
        // reduce through decomposition exactly as the prop evaluator does,
        // but with operad payloads
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                if (x == y || !decompose_eligible(g, x, y)) continue;
                auto d = decompose(g, x, y);
                int posx = 0, posy = 0;
                for (int i = 0; i < n; ++i) {
                    if (g.node_order[i] == x) posx = i;
                    if (g.node_order[i] == y) posy = i;
                }
                ElValue merged = eval_two_node(d.k, decos[posx], decos[posy]);
                std::vector<ElValue> rest(d.h.nodes());
                std::vector<int> pos_of(d.h.nodes());
                for (int i = 0; i < d.h.nodes(); ++i) pos_of[d.h.node_order[i]] = i;
                for (int i = 0; i < n; ++i) {
                    int z = g.node_order[i];
                    if (z == x || z == y) continue;
                    rest[pos_of[d.node_map[z]]] = decos[i];
                }
                rest[pos_of[d.merged_node]] = merged;
                return eval(d.h, rest);
            }
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                if (x == y) continue;
                if (max_path_length(g.graph, y, x)) continue;
                auto xy = max_path_length(g.graph, x, y);
                if (xy && *xy > 1) continue;
                int posx = 0, posy = 0;
                for (int i = 0; i < n; ++i) {
                    if (g.node_order[i] == x) posx = i;
                    if (g.node_order[i] == y) posy = i;
                }
                std::vector<int> img(n);
                std::iota(img.begin(), img.end(), 1);
                std::swap(img[posx], img[posy]);
                Perm swap{img};
                return eval(permute_node_order(swap, g), apply_perm_to_positions(swap, decos));
            }
        throw std::logic_error("operad eval: no reducible node pair");
    }

    ElValue eval_corolla(const CoaGraph& g, const ElValue& d) const {
        auto [sig, op] = decode_operad_deco(d);
        int x = g.node_order[0];
        Perm q = alignment(g.port_in, g.node_in[x]);
        if (!q.is_identity()) {
            op = v.act(q, op);
            sig.inputs = apply_perm_to_positions(q, sig.inputs);
        }
        return operad_deco(sig, op).dump();
    }

    ElValue eval_two_node(const CoaGraph& g, const ElValue& dx, const ElValue& dy) const {
        const int x = g.node_order[0], y = g.node_order[1];
        auto shared = cie(g.graph, x, y);
        if (shared.size() != 1)
            throw std::logic_error("operad eval: single-export nodes share one edge");
        auto [sx, ox] = decode_operad_deco(dx);
        auto [sy, oy] = decode_operad_deco(dy);
        int slot = 0;
        for (std::size_t k = 0; k < g.node_in[y].size(); ++k)
            if (g.node_in[y][k] == shared[0]) slot = static_cast<int>(k) + 1;
        OpValue comp = v.compose_at(oy, slot, ox);
        Signature sig;
        sig.output = sy.output;
        std::vector<int> comp_edges;
        for (int k = 1; k <= static_cast<int>(g.node_in[y].size()); ++k) {
            if (k == slot) {
                for (int e : g.node_in[x]) comp_edges.push_back(e);
                sig.inputs.insert(sig.inputs.end(), sx.inputs.begin(), sx.inputs.end());
            } else {
                comp_edges.push_back(g.node_in[y][k - 1]);
                sig.inputs.push_back(sy.inputs[k - 1]);
            }
        }
        Perm rho = alignment(g.port_in, comp_edges);
        if (!rho.is_identity()) {
            comp = v.act(rho, comp);
            sig.inputs = apply_perm_to_positions(rho, sig.inputs);
        }
        return operad_deco(sig, comp).dump();
    }
};

}  // namespace

ElValue evaluate_to_operad(const PushoutProblem& prob, const MarkedCoaGraph& g,
                           const std::vector<ElValue>& decorations) {
    ColourMaps cm(prob);
    OperadEvaluator ev{prob.v, cm};
    return ev.eval(g.graph, decorations);
}

ElValue evaluate_to_prop(const PushoutProblem& prob, const MarkedCoaGraph& g,
                         const std::vector<ElValue>& decorations) {
    // transport suboperad decorations into P first
    std::vector<ElValue> decos = decorations;
    for (int i = 0; i < g.graph.nodes(); ++i) {
        int node = g.graph.node_order[i];
        if (g.marks[node] == "A")
            throw std::invalid_argument("evaluate_to_prop: A-marked node cannot map below B");
        if (g.marks[node] == "O") {
            auto [sig, op] = decode_operad_deco(decos[i]);
            decos[i] = prob.f_el(single_op_as_w_element(sig, op));
        }
    }
    PropEvaluator ev{prob.p};
    return ev.eval(g.graph, decos);
}

// ---- the truncated colimit ----

namespace {

std::string raw_cell_key(const MarkedCoaGraph& g, const std::vector<ElValue>& decorations) {
    json j;
    j["g"] = canonical_encode(g.graph);
    auto cf = canonical_form(g.graph);
    std::vector<std::string> marks(g.marks.size());
    for (int x = 0; x < g.graph.nodes(); ++x) marks[cf.node_map[x]] = g.marks[x];
    j["m"] = marks;
    // decorations are by node-order position, which the canonical form
    // preserves
    j["d"] = decorations;
    return j.dump();
}

}  // namespace

std::string colimit_cell_key(const MarkedCoaGraph& g, const std::vector<ElValue>& decorations) {
    // node reorderings are isomorphisms of the colimit index whose value
    // maps permute decorations; quotient them into the key
    const int n = g.graph.nodes();
    if (n <= 1) return raw_cell_key(g, decorations);
    std::string best;
    bool first = true;
    for (const Perm& gamma : all_perms(n)) {
        MarkedCoaGraph moved;
        moved.graph = permute_node_order(gamma, g.graph);
        moved.marks = g.marks;
        std::string key = raw_cell_key(moved, apply_perm_to_positions(gamma, decorations));
        if (first || key < best) {
            best = key;
            first = false;
        }
    }
    return best;
}

namespace {

struct MarkedObject {
    MarkedCoaGraph graph;                        // canonical, node order = identity
    std::vector<std::vector<ElValue>> choices;   // decoration choices per node position
};

struct Uf {
    std::vector<int> parent;
    int find(int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
    int make() {
        parent.push_back(static_cast<int>(parent.size()));
        return parent.back();
    }
};

struct ColimitBuilder {
    const PushoutProblem& prob;
    ColourMaps cm;
    std::map<std::pair<CValence, std::string>, std::vector<ElValue>> deco_cache;

    explicit ColimitBuilder(const PushoutProblem& p) : prob(p), cm(p) {}

    const std::vector<ElValue>& decorations(const CValence& u, const std::string& mark) {
        auto key = std::make_pair(u, mark);
        auto it = deco_cache.find(key);
        if (it != deco_cache.end()) return it->second;
        return deco_cache.emplace(key, decoration_set(prob, u, mark)).first->second;
    }

    // candidate node valences with a nonempty decoration set for some mark
    std::vector<std::pair<CValence, std::string>> candidates() {
        std::vector<Colour> d = prob.pushout_colours();
        std::vector<std::pair<CValence, std::string>> out;
        for (const auto& v : bounded_valences(d, prob.max_node_in, prob.max_node_out))
            for (const std::string mark : {"A", "O", "B"}) {
                if ((mark == "A" || mark == "O") && v.outs.size() != 1) continue;
                if (!decorations(v, mark).empty()) out.push_back({v, mark});
            }
        if (std::getenv("PROPCALC_DEBUG"))
            for (const auto& [cv, mk] : out)
                fprintf(stderr, "cand: %s %s\n", encode_cvalence(cv).c_str(), mk.c_str());
        return out;
    }

    // all marked graphs with the residue and at most max_nodes nodes;
    // node reorderings being quotiented into the cell keys, only
    // non-decreasing candidate sequences are explored
    std::vector<MarkedCoaGraph> enumerate_marked(const CValence& residue, int max_nodes,
                                                 const std::vector<std::pair<CValence, std::string>>& cands) {
        std::vector<MarkedCoaGraph> out;
        // per-colour slot surplus of the residue and per candidate
        auto surplus = [](const CValence& v) {
            std::map<Colour, int> s;
            for (const auto& c : v.outs) ++s[c];
            for (const auto& c : v.ins) --s[c];
            return s;
        };
        // per-colour: residue inports + node exports must equal node
        // imports + residue exports, i.e. the node surpluses sum to the
        // residue surplus
        std::map<Colour, int> need = surplus(residue);
        std::vector<std::map<Colour, int>> csur;
        for (const auto& [cv, mark] : cands) csur.push_back(surplus(cv));
        std::vector<int> seq;
        std::map<Colour, int> acc;
        std::function<void(int, int)> rec = [&](int min_idx, int remaining) {
            bool balanced = true;
            for (const auto& [c, k] : need)
                if ((acc.count(c) ? acc[c] : 0) != k) balanced = false;
            for (const auto& [c, k] : acc)
                if (k != (need.count(c) ? need[c] : 0)) balanced = false;
            if (balanced) {
                Arity a;
                for (int i : seq) a.node_valences.push_back(cands[i].first);
                a.residue = residue;
                if (std::getenv("PROPCALC_DEBUG") && !seq.empty()) {
                    std::string line = "seq:";
                    for (int i : seq)
                        line += " " + encode_cvalence(cands[i].first) + cands[i].second;
                    fprintf(stderr, "%s -> %zu\n", line.c_str(), enumerate_coa(a).size());
                }
                for (const auto& g : enumerate_coa(a)) {
                    MarkedCoaGraph mg;
                    mg.graph = g;
                    mg.marks.resize(g.nodes());
                    for (int i = 0; i < g.nodes(); ++i)
                        mg.marks[g.node_order[i]] = cands[seq[i]].second;
                    out.push_back(std::move(mg));
                }
            }
            if (remaining == 0) return;
            for (int i = min_idx; i < static_cast<int>(cands.size()); ++i) {
                seq.push_back(i);
                for (const auto& [c, k] : csur[i]) acc[c] += k;
                rec(i, remaining - 1);
                for (const auto& [c, k] : csur[i]) acc[c] -= k;
                seq.pop_back();
            }
        };
        rec(0, max_nodes);
        return out;
    }

    // value of a one- or zero- or many-node decorated piece inside the
    // diagram slot of the given mark
    ElValue evaluate(const MarkedCoaGraph& piece, const std::vector<ElValue>& decos,
                     const std::string& target_mark) {
        if (target_mark == "B") return evaluate_to_prop(prob, piece, decos);
        ElValue res = evaluate_to_operad(prob, piece, decos);
        if (target_mark == "O") {
            auto [sig, op] = decode_operad_deco(res);
            for (const auto& a : sig.inputs)
                if (!cm.s_set.count(a)) throw std::logic_error("evaluate: left the suboperad");
        }
        return res;
    }

    struct Level {
        std::vector<MarkedObject> objects;
        std::map<std::string, int> cell_of;  // cell key -> uf index
        Uf uf;
        std::vector<std::string> cell_keys;

        int cell(const std::string& key) {
            auto it = cell_of.find(key);
            if (it != cell_of.end()) return it->second;
            int id = uf.make();
            cell_of[key] = id;
            cell_keys.push_back(key);
            return id;
        }
    };

    // decoration tuples of an object, deterministic order
    static void for_each_tuple(const MarkedObject& obj,
                               const std::function<void(const std::vector<ElValue>&)>& fn) {
        const int n = obj.graph.graph.nodes();
        std::vector<int> pick(n, 0);
        for (;;) {
            std::vector<ElValue> decos(n);
            for (int i = 0; i < n; ++i) decos[i] = obj.choices[i][pick[i]];
            fn(decos);
            int i = 0;
            while (i < n && pick[i] + 1 == static_cast<int>(obj.choices[i].size())) pick[i++] = 0;
            if (i == n) return;
            ++pick[i];
        }
    }

    Level build(const CValence& v, int max_nodes) {
        Level lvl;
        const auto& cands = candidates_cache;
        for (auto& mg : enumerate_marked(v, max_nodes, cands)) {
            MarkedObject obj;
            obj.graph = std::move(mg);
            const int n = obj.graph.graph.nodes();
            obj.choices.resize(n);
            bool feasible = true;
            for (int i = 0; i < n && feasible; ++i) {
                int node = obj.graph.graph.node_order[i];
                CValence u = c_valence_of_node(obj.graph.graph, node);
                obj.choices[i] = decorations(u, obj.graph.marks[node]);
                if (obj.choices[i].empty()) feasible = false;
            }
            if (!feasible) continue;
            for_each_tuple(obj, [&](const std::vector<ElValue>& decos) {
                lvl.cell(colimit_cell_key(obj.graph, decos));
            });
            if (std::getenv("PROPCALC_DEBUG"))
                fprintf(stderr, "object: %s marks=%s%s\n",
                        canonical_encode(obj.graph.graph).c_str(), obj.graph.marks[0].c_str(),
                        obj.graph.marks.size() > 1 ? obj.graph.marks[1].c_str() : "");
            lvl.objects.push_back(std::move(obj));
        }

        // morphism generators
        for (const auto& target : lvl.objects) {
            const MarkedCoaGraph& h = target.graph;
            const int n = h.graph.nodes();
            // single insertions of zero- and one-node pieces at each slot
            for (int pos = 0; pos < n; ++pos) {
                int node = h.graph.node_order[pos];
                CValence u = c_valence_of_node(h.graph, node);
                const std::string& mark = h.marks[node];
                std::vector<std::pair<MarkedCoaGraph, std::string>> pieces;
                // zero nodes: pure wirings
                for (const auto& w : enumerate_coa(Arity{{}, u})) {
                    MarkedCoaGraph k;
                    k.graph = w;
                    pieces.push_back({k, ""});
                }
                // one node: any candidate valence with a mark below
                for (const auto& cand : candidates_cache) {
                    if (!mark_leq(cand.second, mark)) continue;
                    for (const auto& w : enumerate_coa(Arity{{cand.first}, u})) {
                        MarkedCoaGraph k;
                        k.graph = w;
                        k.marks = {cand.second};
                        pieces.push_back({k, cand.second});
                    }
                }
                for (const auto& [piece, piece_mark] : pieces) {
                    MarkedCoaGraph source = marked_insert(h, node, piece);
                    if (source.graph.nodes() > max_nodes) continue;
                    // the inserted block occupies positions pos..pos+k-1
                    const int kn = piece.graph.nodes();
                    for_each_tuple(target, [&](const std::vector<ElValue>& hdecos) {
                        // choose decorations of the inserted piece freely
                        MarkedObject pobj;
                        pobj.graph = piece;
                        pobj.choices.resize(kn);
                        bool ok = true;
                        for (int i = 0; i < kn && ok; ++i) {
                            int pn = piece.graph.node_order[i];
                            pobj.choices[i] = decorations(
                                c_valence_of_node(piece.graph, pn), piece.marks[pn]);
                            if (pobj.choices[i].empty()) ok = false;
                        }
                        if (kn > 0 && !ok) return;
                        for_each_tuple(pobj, [&](const std::vector<ElValue>& kdecos) {
                            std::vector<ElValue> src_decos;
                            for (int i = 0; i < pos; ++i) src_decos.push_back(hdecos[i]);
                            for (int i = 0; i < kn; ++i) src_decos.push_back(kdecos[i]);
                            for (int i = pos + 1; i < n; ++i) src_decos.push_back(hdecos[i]);
                            std::vector<ElValue> tgt_decos = hdecos;
                            tgt_decos[pos] = evaluate(piece, kdecos, mark);
                            lvl.uf.unite(lvl.cell(colimit_cell_key(source, src_decos)),
                                         lvl.cell(colimit_cell_key(h, tgt_decos)));
                        });
                    });
                }
            }
            // contractions: eligible pairs collapse into a bigger node
            for (int x = 0; x < n; ++x)
                for (int y = 0; y < n; ++y) {
                    if (x == y || !decompose_eligible(h.graph, x, y)) continue;
                    auto d = decompose(h.graph, x, y);
                    CValence mu = c_valence_of_node(d.h, d.merged_node);
                    if (static_cast<int>(mu.ins.size()) > prob.max_node_in ||
                        static_cast<int>(mu.outs.size()) > prob.max_node_out)
                        continue;
                    for (const std::string m : {"A", "O", "B"}) {
                        if (!mark_leq(h.marks[x], m) || !mark_leq(h.marks[y], m)) continue;
                        if ((m == "A" || m == "O") && mu.outs.size() != 1) continue;
                        if (decorations(mu, m).empty()) continue;
                        MarkedCoaGraph tgt;
                        tgt.graph = d.h;
                        tgt.marks.resize(d.h.nodes());
                        for (int z = 0; z < h.graph.nodes(); ++z) {
                            if (z == x || z == y) continue;
                            tgt.marks[d.node_map[z]] = h.marks[z];
                        }
                        tgt.marks[d.merged_node] = m;
                        MarkedCoaGraph piece;
                        piece.graph = d.k;
                        piece.marks = {h.marks[x], h.marks[y]};
                        int posx = 0, posy = 0;
                        std::vector<int> hpos(d.h.nodes());
                        for (int i = 0; i < d.h.nodes(); ++i) hpos[d.h.node_order[i]] = i;
                        for (int i = 0; i < n; ++i) {
                            if (h.graph.node_order[i] == x) posx = i;
                            if (h.graph.node_order[i] == y) posy = i;
                        }
                        if (std::getenv("PROPCALC_DEBUG"))
                            fprintf(stderr, "contract target nodes=%d mark=%s\n",
                                    h.graph.nodes(), m.c_str());
                        for_each_tuple(target, [&](const std::vector<ElValue>& gdecos) {
                            ElValue merged =
                                evaluate(piece, {gdecos[posx], gdecos[posy]}, m);

                            std::vector<ElValue> tdecos(d.h.nodes());
                            for (int i = 0; i < n; ++i) {
                                int z = h.graph.node_order[i];
                                if (z == x || z == y) continue;
                                tdecos[hpos[d.node_map[z]]] = gdecos[i];
                            }
                            tdecos[hpos[d.merged_node]] = merged;
                            if (std::getenv("PROPCALC_DEBUG"))
                                fprintf(stderr, "  unite\n    src=%s\n    tgt=%s\n",
                                        colimit_cell_key(h, gdecos).c_str(),
                                        colimit_cell_key(tgt, tdecos).c_str());
                            lvl.uf.unite(lvl.cell(colimit_cell_key(h, gdecos)),
                                         lvl.cell(colimit_cell_key(tgt, tdecos)));
                        });
                    }
                }
        }
        return lvl;
    }

    std::vector<std::pair<CValence, std::string>> candidates_cache;
};

TruncatedColimit summarize(ColimitBuilder::Level& lvl, int level) {
    TruncatedColimit out;
    out.level = level;
    out.object_count = static_cast<long long>(lvl.cell_keys.size());
    std::map<int, int> root_to_class;
    std::map<int, std::string> rep;
    for (std::size_t i = 0; i < lvl.cell_keys.size(); ++i) {
        int root = lvl.uf.find(static_cast<int>(i));
        auto it = rep.find(root);
        if (it == rep.end() || lvl.cell_keys[i] < it->second) rep[root] = lvl.cell_keys[i];
    }
    for (const auto& [root, key] : rep) {
        root_to_class[root] = out.class_count++;
        out.representatives.push_back(key);
    }
    for (std::size_t i = 0; i < lvl.cell_keys.size(); ++i)
        out.class_of[lvl.cell_keys[i]] = root_to_class[lvl.uf.find(static_cast<int>(i))];
    return out;
}

}  // namespace

TruncatedColimit pushout_component(const PushoutProblem& prob, const CValence& v, int max_nodes) {
    ColimitBuilder builder(prob);
    builder.candidates_cache = builder.candidates();
    auto lvl = builder.build(v, max_nodes);
    TruncatedColimit out = summarize(lvl, max_nodes);
    if (max_nodes >= 1) {
        ColimitBuilder prev_builder(prob);
        prev_builder.candidates_cache = prev_builder.candidates();
        auto prev_lvl = prev_builder.build(v, max_nodes - 1);
        TruncatedColimit prev = summarize(prev_lvl, max_nodes - 1);
        // stabilized: same classes, and the previous level's cells are
        // partitioned the same way inside the new colimit
        bool same = prev.class_count == out.class_count;
        if (same) {
            std::map<int, int> match;
            for (const auto& [key, cls] : prev.class_of) {
                int now = out.class_of.at(key);
                auto it = match.find(cls);
                if (it == match.end())
                    match[cls] = now;
                else if (it->second != now)
                    same = false;
            }
            std::set<int> hit;
            for (const auto& [cls, now] : match)
                if (!hit.insert(now).second) same = false;
        }
        out.stabilized = same;
    }
    return out;
}

FaithfulnessReport verify_fully_faithful(const PushoutProblem& prob,
                                         const std::vector<CValence>& valences, int min_nodes,
                                         int max_nodes) {
    FaithfulnessReport rep;
    for (const auto& v : valences) {
        for (int level = min_nodes; level <= max_nodes; ++level) {
            auto colim = pushout_component(prob, v, level);
            FaithfulnessEntry entry;
            entry.valence = v;
            entry.level = level;
            entry.stabilized = colim.stabilized;
            entry.classes = colim.class_count;
            auto p_els = prob.p.hom(v, prob.p_level).elements;
            entry.p_elements = static_cast<long long>(p_els.size());
            std::set<int> images;
            entry.injective = true;
            for (const auto& el : p_els) {
                MarkedCoaGraph corolla;
                corolla.graph = untwisted_corolla(v);
                corolla.marks = {"B"};
                auto key = colimit_cell_key(corolla, {el});
                auto it = colim.class_of.find(key);
                if (it == colim.class_of.end()) {
                    entry.injective = false;
                    continue;
                }
                if (!images.insert(it->second).second) entry.injective = false;
            }
            entry.bijective =
                entry.injective && static_cast<int>(images.size()) == colim.class_count;
            if (!entry.injective) rep.all_injective = false;
            if (entry.stabilized && !entry.bijective) rep.all_bijective_when_stable = false;
            rep.entries.push_back(entry);
        }
    }
    return rep;
}

// ---- normalization ----

NormalizeResult normalize_to_corolla(const PushoutProblem& prob, const MarkedCoaGraph& start,
                                     const std::vector<ElValue>& decorations) {
    NormalizeResult res;
    ColourMaps cm(prob);
    MarkedCoaGraph g = start;
    std::vector<ElValue> decos = decorations;

    auto record = [&](const std::string& kind, const std::string& detail) {
        res.steps.push_back({kind, detail});
    };

    // flips O -> A
    for (int x = 0; x < g.graph.nodes(); ++x)
        if (g.marks[x] == "O") {
            g.marks[x] = "A";
            record("flip", "node " + std::to_string(x + 1) + " from O to A");
        }

    // contract inner edges not coloured by P-colours; both endpoints must
    // be single-export A-marked nodes
    for (;;) {
        int edge = -1;
        for (int e = 0; e < g.graph.edges(); ++e) {
            if (!g.graph.graph.enters[e] || !g.graph.graph.exits[e]) continue;
            if (cm.in_c(g.graph.labels[e])) continue;
            edge = e;
            break;
        }
        if (edge == -1) break;
        int x = *g.graph.graph.exits[edge];
        int y = *g.graph.graph.enters[edge];
        if (g.marks[x] != "A" || g.marks[y] != "A") {
            res.blocked_on = "edge " + std::to_string(edge + 1) +
                             " outside the base colours joins marks " + g.marks[x] + " and " +
                             g.marks[y];
            return res;
        }
        if (g.graph.node_out[x].size() != 1) {
            res.blocked_on = "node " + std::to_string(x + 1) +
                             " has several exports, one outside the base colours";
            return res;
        }
        // normalize the node order so x comes first
        int posx = 0, posy = 0;
        for (int i = 0; i < g.graph.nodes(); ++i) {
            if (g.graph.node_order[i] == x) posx = i;
            if (g.graph.node_order[i] == y) posy = i;
        }
        if (posx > posy) {
            std::vector<int> img(g.graph.nodes());
            std::iota(img.begin(), img.end(), 1);
            std::swap(img[posx], img[posy]);
            Perm swap{img};
            g.graph = permute_node_order(swap, g.graph);
            decos = apply_perm_to_positions(swap, decos);
            record("permute", "move node " + std::to_string(x + 1) + " before node " +
                                  std::to_string(y + 1));
            std::swap(posx, posy);
        }
        if (!decompose_eligible(g.graph, x, y)) {
            res.blocked_on = "nodes " + std::to_string(x + 1) + " and " + std::to_string(y + 1) +
                             " admit no contraction";
            return res;
        }
        auto d = decompose(g.graph, x, y);
        MarkedCoaGraph piece;
        piece.graph = d.k;
        piece.marks = {"A", "A"};
        ElValue merged;
        try {
            merged = evaluate_to_operad(prob, piece, {decos[posx], decos[posy]});
        } catch (const std::exception& e) {
            res.blocked_on = std::string("contraction failed: ") + e.what();
            return res;
        }
        std::vector<ElValue> new_decos(d.h.nodes());
        std::vector<std::string> new_marks(d.h.nodes());
        std::vector<int> hpos(d.h.nodes());
        for (int i = 0; i < d.h.nodes(); ++i) hpos[d.h.node_order[i]] = i;
        for (int i = 0; i < g.graph.nodes(); ++i) {
            int z = g.graph.node_order[i];
            if (z == x || z == y) continue;
            new_decos[hpos[d.node_map[z]]] = decos[i];
        }
        for (int z = 0; z < g.graph.nodes(); ++z)
            if (z != x && z != y) new_marks[d.node_map[z]] = g.marks[z];
        new_marks[d.merged_node] = "A";
        new_decos[hpos[d.merged_node]] = merged;
        record("contract", "nodes " + std::to_string(x + 1) + " and " + std::to_string(y + 1));
        g.graph = d.h;
        g.marks = new_marks;
        decos = new_decos;
    }

    // every port must now be P-coloured for the flips through O to B
    for (int e = 0; e < g.graph.edges(); ++e)
        if (!cm.in_c(g.graph.labels[e])) {
            res.blocked_on = "port edge " + std::to_string(e + 1) + " outside the base colours";
            return res;
        }
    for (int x = 0; x < g.graph.nodes(); ++x) {
        if (g.marks[x] == "A") {
            record("unflip", "node " + std::to_string(x + 1) + " from A back to O");
            g.marks[x] = "O";
            record("flip", "node " + std::to_string(x + 1) + " from O to B");
            g.marks[x] = "B";
            int pos = 0;
            for (int i = 0; i < g.graph.nodes(); ++i)
                if (g.graph.node_order[i] == x) pos = i;
            auto [sig, op] = decode_operad_deco(decos[pos]);
            decos[pos] = prob.f_el(single_op_as_w_element(sig, op));
        }
    }

    // final map: the whole graph collapses into the B-marked corolla
    try {
        res.result = evaluate_to_prop(prob, g, decos);
    } catch (const std::exception& e) {
        res.blocked_on = std::string("final evaluation failed: ") + e.what();
        return res;
    }
    record("final", "insert into the corolla");
    res.success = true;
    return res;
}

// ---- problem validation and JSON ----

ProblemReport validate_problem(const PushoutProblem& prob,
                               const std::vector<CValence>& sample_valences) {
    ProblemReport rep;
    auto fail = [&](const std::string& s) {
        rep.ok = false;
        if (rep.violations.size() < 20) rep.violations.push_back(s);
    };
    ColourMaps cm(prob);
    for (const auto& s : prob.s_colours)
        if (!cm.v_set.count(s)) fail("suboperad colour " + s + " not a colour of the operad");
    for (const auto& [a, b] : prob.f_colour) {
        if (!cm.s_set.count(a)) fail("colour map defined outside the suboperad");
        if (!cm.c_set.count(b)) fail("colour map lands outside the PROP colours");
    }
    for (const auto& s : prob.s_colours)
        if (!prob.f_colour.count(s)) fail("colour map misses " + s);
    for (const auto& c : prob.c_colours)
        if (cm.v_set.count(c) && !cm.s_set.count(c))
            fail("PROP colour " + c + " collides with an operad colour outside the suboperad");

    // f respects composition, actions and units on samples drawn from the
    // free PROP on the suboperad
    auto u_operad = full_suboperad(prob.v, prob.s_colours);
    auto w = free_prop_on_operad(u_operad, prob.s_colours);
    auto map_el = [&](const ElValue& e) { return prob.f_el(e); };
    auto map_word = [&](const std::vector<Colour>& word) {
        std::vector<Colour> out;
        for (const auto& c : word) out.push_back(prob.f_colour.at(c));
        return out;
    };
    for (const auto& v : sample_valences) {
        auto els = w.hom(v, 0).elements;
        ElValue unit_w = w.unit(v.ins);
        if (map_el(unit_w) != prob.p.unit(map_word(v.ins)))
            fail("morphism does not preserve the unit at a sampled word");
        for (const auto& f : els) {
            for (const auto& g : els) {
                if (w.valence_of(g).ins != w.valence_of(f).outs) continue;
                if (map_el(w.vcomp(g, f)) != prob.p.vcomp(map_el(g), map_el(f)))
                    fail("morphism does not respect vertical composition");
            }
            for (const auto& g : els)
                if (map_el(w.hcomp(f, g)) != prob.p.hcomp(map_el(f), map_el(g)))
                    fail("morphism does not respect horizontal composition");
            const int n = static_cast<int>(v.ins.size());
            for (const Perm& s : all_perms(std::min(n, 3)))
                if (s.size() == n && map_el(w.in_act(s, f)) != prob.p.in_act(s, map_el(f)))
                    fail("morphism does not respect the input action");
        }
    }
    return rep;
}

PushoutProblem pushout_problem_from_json(const json& j) {
    PushoutProblem prob;
    const auto& vj = j.at("v");
    if (vj.at("kind") == "table") {
        TableOperad t = table_operad_from_json(vj);
        prob.v = make_table_operad(t);
        prob.v_colours = t.colours;
    } else if (vj.at("kind") == "terminal_cf") {
        prob.v_colours = vj.at("colours").get<std::vector<Colour>>();
        auto colours = prob.v_colours;
        SetOperad v;
        v.colours = colours;
        auto cs = std::make_shared<std::set<Colour>>(colours.begin(), colours.end());
        v.hom_fn = [cs](const Signature& s) -> std::vector<OpValue> {
            if (s.arity() == 0) return {};
            if (!cs->count(s.output)) return {};
            for (const auto& c : s.inputs)
                if (!cs->count(c)) return {};
            return {"*"};
        };
        v.compose_fn = [](const OpValue&, int, const OpValue&) { return OpValue("*"); };
        v.act_fn = [](const Perm&, const OpValue&) { return OpValue("*"); };
        v.unit_fn = [](const Colour&) { return OpValue("*"); };
        prob.v = v;
    } else {
        throw std::invalid_argument("push-out problem: unknown operad kind");
    }
    prob.s_colours = j.at("s_colours").get<std::vector<Colour>>();
    for (const auto& [a, b] : j.at("f_colour").items()) prob.f_colour[a] = b;
    prob.c_colours = j.at("c_colours").get<std::vector<Colour>>();

    const auto& pj = j.at("p");
    if (pj.at("kind") == "free_on_suboperad") {
        // identity problem: P is the free PROP on the suboperad with the
        // colours renamed along f
        auto u = full_suboperad(prob.v, prob.s_colours);
        auto fc = prob.f_colour;
        auto w = free_prop_on_operad(u, prob.s_colours);
        std::map<Colour, Colour> back;
        for (const auto& [a, b] : fc) back[b] = a;
        SetProp p = w;
        p.colour_set = prob.c_colours;
        auto rename = [fc](WOp wop) {
            for (auto& c : wop.ins) c = fc.at(c);
            for (auto& c : wop.outs) c = fc.at(c);
            return encode_w_op(wop);
        };
        auto unrename = [back](const CValence& v) {
            CValence out;
            for (const auto& c : v.ins) out.ins.push_back(back.at(c));
            for (const auto& c : v.outs) out.outs.push_back(back.at(c));
            return out;
        };
        p.hom_fn = [w, rename, unrename, back](const CValence& v, int level) -> GradedHomSet {
            for (const auto& c : v.ins)
                if (!back.count(c)) return GradedHomSet{{}, level, true};
            for (const auto& c : v.outs)
                if (!back.count(c)) return GradedHomSet{{}, level, true};
            GradedHomSet hs = w.hom(unrename(v), level);
            for (auto& e : hs.elements) e = rename(decode_w_op(e));
            return hs;
        };
        auto relabel1 = [rename](const ElValue& e) { return rename(decode_w_op(e)); };
        auto unlabel = [back](const ElValue& e) {
            WOp wop = decode_w_op(e);
            for (auto& c : wop.ins) c = back.at(c);
            for (auto& c : wop.outs) c = back.at(c);
            return encode_w_op(wop);
        };
        p.vcomp_fn = [w, relabel1, unlabel](const ElValue& g, const ElValue& f) {
            return relabel1(w.vcomp(unlabel(g), unlabel(f)));
        };
        p.hcomp_fn = [w, relabel1, unlabel](const ElValue& f, const ElValue& g) {
            return relabel1(w.hcomp(unlabel(f), unlabel(g)));
        };
        p.in_act_fn = [w, relabel1, unlabel](const Perm& s, const ElValue& f) {
            return relabel1(w.in_act(s, unlabel(f)));
        };
        p.out_act_fn = [w, relabel1, unlabel](const Perm& s, const ElValue& f) {
            return relabel1(w.out_act(s, unlabel(f)));
        };
        p.unit_fn = [w, relabel1, back](const std::vector<Colour>& word) {
            std::vector<Colour> s_word;
            for (const auto& c : word) s_word.push_back(back.at(c));
            return relabel1(w.unit(s_word));
        };
        p.valence_fn = [fc](const ElValue& e) {
            WOp wop = decode_w_op(e);
            return CValence{wop.ins, wop.outs};
        };
        prob.p = p;
        prob.f_el = relabel1;
    } else {
        throw std::invalid_argument("push-out problem: unknown PROP kind");
    }
    if (j.contains("p_level")) prob.p_level = j.at("p_level").get<int>();
    if (j.contains("max_node_in")) prob.max_node_in = j.at("max_node_in").get<int>();
    if (j.contains("max_node_out")) prob.max_node_out = j.at("max_node_out").get<int>();
    return prob;
}

}  // namespace propcalc
