#include "propcalc/coa.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace propcalc {

namespace {

void append_word(std::string& out, const std::vector<Colour>& word) {
    bool first = true;
    for (const auto& c : word) {
        if (!first) out += ',';
        out += std::to_string(c.size());
        out += ':';
        out += c;
        first = false;
    }
}

// parses a length-prefixed colour word up to the stop character
std::vector<Colour> parse_word(const std::string& s, std::size_t& pos, char stop) {
    std::vector<Colour> out;
    while (pos < s.size() && s[pos] != stop) {
        if (s[pos] == ',') ++pos;
        std::size_t colon = s.find(':', pos);
        if (colon == std::string::npos) throw std::invalid_argument("decode: malformed colour word");
        std::size_t len = std::stoul(s.substr(pos, colon - pos));
        out.push_back(s.substr(colon + 1, len));
        pos = colon + 1 + len;
    }
    return out;
}

void append_ints(std::string& out, const std::vector<int>& v) {
    bool first = true;
    for (int x : v) {
        if (!first) out += ',';
        out += std::to_string(x);
        first = false;
    }
}

std::vector<int> parse_ints(const std::string& s, std::size_t& pos, const std::string& stops) {
    std::vector<int> out;
    std::string cur;
    while (pos < s.size() && stops.find(s[pos]) == std::string::npos) {
        if (s[pos] == ',') {
            out.push_back(std::stoi(cur));
            cur.clear();
        } else {
            cur += s[pos];
        }
        ++pos;
    }
    if (!cur.empty()) out.push_back(std::stoi(cur));
    return out;
}

}  // namespace

std::string encode_cvalence(const CValence& v) {
    std::string out = "(";
    append_word(out, v.ins);
    out += ';';
    append_word(out, v.outs);
    out += ')';
    return out;
}

CValence decode_cvalence(const std::string& s) {
    if (s.empty() || s.front() != '(' || s.back() != ')')
        throw std::invalid_argument("decode_cvalence: malformed");
    CValence v;
    std::size_t pos = 1;
    v.ins = parse_word(s, pos, ';');
    ++pos;
    v.outs = parse_word(s, pos, ')');
    return v;
}

void validate_coa(const CoaGraph& g) {
    validate_graph(g.graph);
    if (static_cast<int>(g.labels.size()) != g.edges())
        throw std::invalid_argument("coa: one label per edge required");
    if (static_cast<int>(g.node_in.size()) != g.nodes() ||
        static_cast<int>(g.node_out.size()) != g.nodes())
        throw std::invalid_argument("coa: covering order must cover every node");
    if (!is_acyclic(g.graph)) throw std::invalid_argument("coa: graph is cyclic");
    for (int x = 0; x < g.nodes(); ++x) {
        auto want_in = node_inports(g.graph, x);
        auto got_in = g.node_in[x];
        std::sort(got_in.begin(), got_in.end());
        if (got_in != want_in)
            throw std::invalid_argument("coa: node_in is not an order on the entering edges");
        auto want_out = node_exports(g.graph, x);
        auto got_out = g.node_out[x];
        std::sort(got_out.begin(), got_out.end());
        if (got_out != want_out)
            throw std::invalid_argument("coa: node_out is not an order on the exiting edges");
    }
    auto r = residue(g.graph);
    auto pi = g.port_in;
    std::sort(pi.begin(), pi.end());
    if (pi != r.inports) throw std::invalid_argument("coa: port_in is not an order on the inports");
    auto po = g.port_out;
    std::sort(po.begin(), po.end());
    if (po != r.exports) throw std::invalid_argument("coa: port_out is not an order on the exports");
    auto ord = g.node_order;
    std::sort(ord.begin(), ord.end());
    std::vector<int> want(g.nodes());
    std::iota(want.begin(), want.end(), 0);
    if (ord != want) throw std::invalid_argument("coa: node_order is not a bijection");
}

CValence c_valence_of_node(const CoaGraph& g, int node) {
    CValence v;
    for (int e : g.node_in[node]) v.ins.push_back(g.labels[e]);
    for (int e : g.node_out[node]) v.outs.push_back(g.labels[e]);
    return v;
}

CValence residue_cvalence(const CoaGraph& g) {
    CValence v;
    for (int e : g.port_in) v.ins.push_back(g.labels[e]);
    for (int e : g.port_out) v.outs.push_back(g.labels[e]);
    return v;
}

Arity arity(const CoaGraph& g) {
    Arity a;
    for (int i = 0; i < g.nodes(); ++i)
        a.node_valences.push_back(c_valence_of_node(g, g.node_order[i]));
    a.residue = residue_cvalence(g);
    return a;
}

CoaGraph untwisted_corolla(const CValence& v) {
    CoaGraph g;
    g.graph = corolla({static_cast<int>(v.ins.size()), static_cast<int>(v.outs.size())});
    g.labels = v.ins;
    g.labels.insert(g.labels.end(), v.outs.begin(), v.outs.end());
    const int n = static_cast<int>(v.ins.size());
    const int m = static_cast<int>(v.outs.size());
    g.node_in.resize(1);
    g.node_out.resize(1);
    for (int e = 0; e < n; ++e) g.node_in[0].push_back(e);
    for (int e = n; e < n + m; ++e) g.node_out[0].push_back(e);
    g.port_in = g.node_in[0];
    g.port_out = g.node_out[0];
    g.node_order = {0};
    return g;
}

Perm node_twist(const CoaGraph& g, int u, int v) {
    auto shared = cie(g.graph, u, v);
    if (shared.empty()) throw std::invalid_argument("node_twist: no common inner edges");
    auto from_u = restrict_order(g.node_out[u], shared);
    auto from_v = restrict_order(g.node_in[v], shared);
    return twist(from_u, from_v);
}

std::pair<Perm, Perm> io_twist(const CoaGraph& g, int v) {
    std::vector<int> shared_in;
    for (int e : g.node_in[v])
        if (!g.graph.exits[e]) shared_in.push_back(e);
    auto iota_node = restrict_order(g.node_in[v], shared_in);
    auto iota_port = restrict_order(g.port_in, shared_in);
    std::vector<int> shared_out;
    for (int e : g.node_out[v])
        if (!g.graph.enters[e]) shared_out.push_back(e);
    auto omega_node = restrict_order(g.node_out[v], shared_out);
    auto omega_port = restrict_order(g.port_out, shared_out);
    return {twist(iota_node, iota_port), twist(omega_node, omega_port)};
}

bool is_untwisted(const CoaGraph& g) {
    for (int u = 0; u < g.nodes(); ++u) {
        auto [tin, tout] = io_twist(g, u);
        if (!tin.is_identity() || !tout.is_identity()) return false;
        for (int v = 0; v < g.nodes(); ++v) {
            if (u == v) continue;
            if (!cie(g.graph, u, v).empty() && !node_twist(g, u, v).is_identity()) return false;
        }
    }
    return true;
}

CoaGraph permute_node_order(const Perm& gamma, const CoaGraph& g) {
    if (gamma.size() != g.nodes())
        throw std::invalid_argument("permute_node_order: size mismatch");
    CoaGraph out = g;
    out.node_order = apply_perm_to_positions(gamma, g.node_order);
    return out;
}

CanonicalForm canonical_form(const CoaGraph& g) {
    CanonicalForm cf;
    cf.node_map.assign(g.nodes(), -1);
    for (int pos = 0; pos < g.nodes(); ++pos) cf.node_map[g.node_order[pos]] = pos;
    cf.edge_map.assign(g.edges(), -1);
    int next = 0;
    auto take = [&](int e) {
        if (cf.edge_map[e] == -1) cf.edge_map[e] = next++;
    };
    for (int e : g.port_in) take(e);
    for (int e : g.port_out) take(e);
    for (int pos = 0; pos < g.nodes(); ++pos)
        for (int e : g.node_out[g.node_order[pos]]) take(e);
    if (next != g.edges())
        throw std::invalid_argument("canonical_form: orders do not cover all edges");

    CoaGraph& c = cf.graph;
    c.graph.edge_count = g.edges();
    c.graph.node_count = g.nodes();
    c.graph.enters.assign(g.edges(), std::nullopt);
    c.graph.exits.assign(g.edges(), std::nullopt);
    c.labels.assign(g.edges(), {});
    for (int e = 0; e < g.edges(); ++e) {
        int ne = cf.edge_map[e];
        c.labels[ne] = g.labels[e];
        if (g.graph.enters[e]) c.graph.enters[ne] = cf.node_map[*g.graph.enters[e]];
        if (g.graph.exits[e]) c.graph.exits[ne] = cf.node_map[*g.graph.exits[e]];
    }
    c.node_in.resize(g.nodes());
    c.node_out.resize(g.nodes());
    for (int x = 0; x < g.nodes(); ++x) {
        int nx = cf.node_map[x];
        for (int e : g.node_in[x]) c.node_in[nx].push_back(cf.edge_map[e]);
        for (int e : g.node_out[x]) c.node_out[nx].push_back(cf.edge_map[e]);
    }
    for (int e : g.port_in) c.port_in.push_back(cf.edge_map[e]);
    for (int e : g.port_out) c.port_out.push_back(cf.edge_map[e]);
    c.node_order.resize(g.nodes());
    std::iota(c.node_order.begin(), c.node_order.end(), 0);
    return cf;
}

std::string canonical_encode(const CoaGraph& g) {
    CoaGraph c = canonical_form(g).graph;
    std::string out = "E" + std::to_string(c.edges()) + ";N" + std::to_string(c.nodes()) + ";L";
    append_word(out, c.labels);
    out += ";PI";
    append_ints(out, c.port_in);
    out += ";PO";
    append_ints(out, c.port_out);
    out += ";NI";
    for (int x = 0; x < c.nodes(); ++x) {
        if (x) out += '|';
        append_ints(out, c.node_in[x]);
    }
    out += ";NO";
    for (int x = 0; x < c.nodes(); ++x) {
        if (x) out += '|';
        append_ints(out, c.node_out[x]);
    }
    return out;
}

CoaGraph canonical_decode(const std::string& enc) {
    auto expect = [&](std::size_t& pos, const std::string& tag) {
        if (enc.compare(pos, tag.size(), tag) != 0)
            throw std::invalid_argument("canonical_decode: malformed encoding");
        pos += tag.size();
    };
    std::size_t pos = 0;
    expect(pos, "E");
    std::size_t semi = enc.find(';', pos);
    int edges = std::stoi(enc.substr(pos, semi - pos));
    pos = semi + 1;
    expect(pos, "N");
    semi = enc.find(';', pos);
    int nodes = std::stoi(enc.substr(pos, semi - pos));
    pos = semi + 1;
    expect(pos, "L");
    CoaGraph g;
    g.labels = parse_word(enc, pos, ';');
    expect(pos, ";PI");
    g.port_in = parse_ints(enc, pos, ";");
    expect(pos, ";PO");
    g.port_out = parse_ints(enc, pos, ";");
    expect(pos, ";NI");
    g.node_in.resize(nodes);
    for (int x = 0; x < nodes; ++x) {
        g.node_in[x] = parse_ints(enc, pos, ";|");
        if (x + 1 < nodes) ++pos;  // skip '|'
    }
    expect(pos, ";NO");
    g.node_out.resize(nodes);
    for (int x = 0; x < nodes; ++x) {
        g.node_out[x] = parse_ints(enc, pos, ";|");
        if (x + 1 < nodes) ++pos;
    }
    g.graph.edge_count = edges;
    g.graph.node_count = nodes;
    g.graph.enters.assign(edges, std::nullopt);
    g.graph.exits.assign(edges, std::nullopt);
    for (int x = 0; x < nodes; ++x) {
        for (int e : g.node_in[x]) g.graph.enters[e] = x;
        for (int e : g.node_out[x]) g.graph.exits[e] = x;
    }
    g.node_order.resize(nodes);
    std::iota(g.node_order.begin(), g.node_order.end(), 0);
    validate_coa(g);
    return g;
}

std::optional<CoaIso> coa_iso(const CoaGraph& g, const CoaGraph& h) {
    if (canonical_encode(g) != canonical_encode(h)) return std::nullopt;
    auto cg = canonical_form(g);
    auto ch = canonical_form(h);
    std::vector<int> node_inv(h.nodes()), edge_inv(h.edges());
    for (int x = 0; x < h.nodes(); ++x) node_inv[ch.node_map[x]] = x;
    for (int e = 0; e < h.edges(); ++e) edge_inv[ch.edge_map[e]] = e;
    CoaIso iso;
    iso.node_map.resize(g.nodes());
    iso.edge_map.resize(g.edges());
    for (int x = 0; x < g.nodes(); ++x) iso.node_map[x] = node_inv[cg.node_map[x]];
    for (int e = 0; e < g.edges(); ++e) iso.edge_map[e] = edge_inv[cg.edge_map[e]];
    return iso;
}

std::vector<CoaIso> ordered_automorphisms(const CoaGraph& g) {
    std::vector<CoaIso> out;
    std::vector<int> nodes(g.nodes());
    std::iota(nodes.begin(), nodes.end(), 0);
    std::vector<int> fm = nodes;
    do {
        std::vector<int> em(g.edges(), -1);
        bool ok = true;
        auto set_or_check = [&](int e, int target) {
            if (em[e] == -1)
                em[e] = target;
            else if (em[e] != target)
                ok = false;
        };
        for (int x = 0; x < g.nodes() && ok; ++x) {
            int y = fm[x];
            if (g.node_in[x].size() != g.node_in[y].size() ||
                g.node_out[x].size() != g.node_out[y].size()) {
                ok = false;
                break;
            }
            for (std::size_t k = 0; k < g.node_in[x].size() && ok; ++k)
                set_or_check(g.node_in[x][k], g.node_in[y][k]);
            for (std::size_t k = 0; k < g.node_out[x].size() && ok; ++k)
                set_or_check(g.node_out[x][k], g.node_out[y][k]);
        }
        for (std::size_t k = 0; k < g.port_in.size() && ok; ++k)
            set_or_check(g.port_in[k], g.port_in[k]);
        for (std::size_t k = 0; k < g.port_out.size() && ok; ++k)
            set_or_check(g.port_out[k], g.port_out[k]);
        if (ok) {
            std::vector<bool> hit(g.edges(), false);
            for (int e = 0; e < g.edges() && ok; ++e) {
                if (em[e] == -1 || hit[em[e]] || g.labels[em[e]] != g.labels[e]) ok = false;
                else hit[em[e]] = true;
            }
        }
        if (ok) out.push_back(CoaIso{fm, em});
    } while (std::next_permutation(fm.begin(), fm.end()));
    return out;
}

std::string min_encode_ordered(const CoaGraph& g) {
    std::string best;
    bool first = true;
    for (const Perm& gamma : all_perms(g.nodes())) {
        std::string enc = canonical_encode(permute_node_order(gamma, g));
        if (first || enc < best) {
            best = enc;
            first = false;
        }
    }
    if (first) best = canonical_encode(g);  // zero nodes: single order
    return best;
}

namespace {

// A "top" is where an edge comes from: a graph inport position or a node
// export slot. A "bottom" is where it goes: a node import slot or a graph
// export position. Every completely ordered graph with the given arity is
// exactly a colour-preserving bijection tops -> bottoms whose induced node
// digraph is acyclic.
struct Slot {
    int node;  // -1 for graph port
    int pos;
    Colour colour;
};

}  // namespace

std::vector<CoaGraph> enumerate_coa(const Arity& a) {
    const int m = static_cast<int>(a.node_valences.size());
    std::vector<Slot> tops, bottoms;
    for (int j = 0; j < static_cast<int>(a.residue.ins.size()); ++j)
        tops.push_back({-1, j, a.residue.ins[j]});
    for (int x = 0; x < m; ++x)
        for (int k = 0; k < static_cast<int>(a.node_valences[x].outs.size()); ++k)
            tops.push_back({x, k, a.node_valences[x].outs[k]});
    for (int x = 0; x < m; ++x)
        for (int k = 0; k < static_cast<int>(a.node_valences[x].ins.size()); ++k)
            bottoms.push_back({x, k, a.node_valences[x].ins[k]});
    for (int j = 0; j < static_cast<int>(a.residue.outs.size()); ++j)
        bottoms.push_back({-1, j, a.residue.outs[j]});

    std::vector<CoaGraph> out;
    if (tops.size() != bottoms.size()) return out;
    {
        std::map<Colour, int> balance;
        for (const auto& t : tops) ++balance[t.colour];
        for (const auto& b : bottoms) --balance[b.colour];
        for (const auto& [c, d] : balance)
            if (d != 0) return out;
    }

    const int total = static_cast<int>(tops.size());
    // assign node exports first so cycle pruning takes effect early
    std::vector<int> top_order(total);
    std::iota(top_order.begin(), top_order.end(), 0);
    std::stable_sort(top_order.begin(), top_order.end(),
                     [&](int a, int b) { return (tops[a].node >= 0) > (tops[b].node >= 0); });
    std::vector<int> match(total, -1);  // top index -> bottom index
    std::vector<bool> used(total, false);

    // incremental acyclicity: arcs of the partial node digraph
    std::vector<std::vector<int>> arcs(m);
    std::function<bool(int, int, std::vector<bool>&)> reaches = [&](int from, int to,
                                                                    std::vector<bool>& seen) {
        if (from == to) return true;
        seen[from] = true;
        for (int nxt : arcs[from])
            if (!seen[nxt] && reaches(nxt, to, seen)) return true;
        return false;
    };

    auto build = [&]() {
        CoaGraph g;
        g.graph.edge_count = total;
        g.graph.node_count = m;
        g.graph.enters.assign(total, std::nullopt);
        g.graph.exits.assign(total, std::nullopt);
        g.labels.assign(total, {});
        g.node_in.assign(m, {});
        g.node_out.assign(m, {});
        for (int x = 0; x < m; ++x) {
            g.node_in[x].assign(a.node_valences[x].ins.size(), -1);
            g.node_out[x].assign(a.node_valences[x].outs.size(), -1);
        }
        g.port_in.assign(a.residue.ins.size(), -1);
        g.port_out.assign(a.residue.outs.size(), -1);
        for (int e = 0; e < total; ++e) {
            const Slot& t = tops[e];
            const Slot& b = bottoms[match[e]];
            g.labels[e] = t.colour;
            if (t.node >= 0) {
                g.graph.exits[e] = t.node;
                g.node_out[t.node][t.pos] = e;
            } else {
                g.port_in[t.pos] = e;
            }
            if (b.node >= 0) {
                g.graph.enters[e] = b.node;
                g.node_in[b.node][b.pos] = e;
            } else {
                g.port_out[b.pos] = e;
            }
        }
        g.node_order.resize(m);
        std::iota(g.node_order.begin(), g.node_order.end(), 0);
        if (is_acyclic(g.graph)) out.push_back(canonical_form(g).graph);
    };

    std::function<void(int)> assign = [&](int k) {
        if (k == total) {
            build();
            return;
        }
        const int t = top_order[k];
        for (int b = 0; b < total; ++b) {
            if (used[b] || bottoms[b].colour != tops[t].colour) continue;
            bool arc = tops[t].node >= 0 && bottoms[b].node >= 0;
            if (arc) {
                if (tops[t].node == bottoms[b].node) continue;  // self loop
                std::vector<bool> seen(m, false);
                if (reaches(bottoms[b].node, tops[t].node, seen)) continue;  // closes a cycle
                arcs[tops[t].node].push_back(bottoms[b].node);
            }
            used[b] = true;
            match[t] = b;
            assign(k + 1);
            used[b] = false;
            if (arc) arcs[tops[t].node].pop_back();
        }
    };
    assign(0);
    return out;
}

}  // namespace propcalc
