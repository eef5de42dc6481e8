#pragma once

#include <random>
#include <string>
#include <vector>

#include "propcalc/coa.hpp"
#include "propcalc/graph.hpp"

namespace testutil {

using namespace propcalc;

// single-colour valence of stars
inline CValence cv(int n, int m, const Colour& c = "*") {
    CValence v;
    v.ins.assign(n, c);
    v.outs.assign(m, c);
    return v;
}

inline Arity make_arity(const std::vector<CValence>& nodes, const CValence& res) {
    return Arity{nodes, res};
}

// Random open graph, possibly cyclic; endpoints drawn independently.
inline Graph random_graph(std::mt19937& rng, int max_nodes, int max_edges) {
    std::uniform_int_distribution<int> nd(0, max_nodes), ed(0, max_edges);
    Graph g;
    g.node_count = nd(rng);
    g.edge_count = ed(rng);
    g.enters.assign(g.edge_count, std::nullopt);
    g.exits.assign(g.edge_count, std::nullopt);
    if (g.node_count == 0) return g;
    std::uniform_int_distribution<int> pick(0, g.node_count);
    for (int e = 0; e < g.edge_count; ++e) {
        int a = pick(rng);
        int b = pick(rng);
        if (a > 0) g.enters[e] = a - 1;
        if (b > 0) g.exits[e] = b - 1;
    }
    return g;
}

// Random completely ordered acyclic coloured graph built from a random
// colour-preserving matching of attachment slots, retried until acyclic.
inline CoaGraph random_coa(std::mt19937& rng, int max_nodes, int max_ports,
                           const std::vector<Colour>& colours = {"*"}) {
    std::uniform_int_distribution<int> nd(0, max_nodes), pd(0, max_ports);
    std::uniform_int_distribution<std::size_t> cd(0, colours.size() - 1);
    for (;;) {
        int m = nd(rng);
        std::vector<CValence> vals(m);
        for (auto& v : vals) {
            int ni = pd(rng), no = pd(rng);
            for (int i = 0; i < ni; ++i) v.ins.push_back(colours[cd(rng)]);
            for (int i = 0; i < no; ++i) v.outs.push_back(colours[cd(rng)]);
        }
        // decide a residue compatible with a random matching: collect tops
        // (node exports) and bottoms (node imports); each top either feeds
        // a bottom of the same colour or becomes a graph export, each
        // unfed bottom becomes a graph inport.
        struct Slot {
            int node, pos;
            Colour colour;
        };
        std::vector<Slot> tops, bottoms;
        for (int x = 0; x < m; ++x) {
            for (std::size_t k = 0; k < vals[x].outs.size(); ++k)
                tops.push_back({x, static_cast<int>(k), vals[x].outs[k]});
            for (std::size_t k = 0; k < vals[x].ins.size(); ++k)
                bottoms.push_back({x, static_cast<int>(k), vals[x].ins[k]});
        }
        std::vector<int> top_to_bottom(tops.size(), -1);
        std::vector<bool> bottom_used(bottoms.size(), false);
        std::uniform_int_distribution<int> coin(0, 2);
        for (std::size_t t = 0; t < tops.size(); ++t) {
            if (coin(rng) == 0) continue;  // stays a graph export
            std::vector<int> candidates;
            for (std::size_t b = 0; b < bottoms.size(); ++b)
                if (!bottom_used[b] && bottoms[b].colour == tops[t].colour)
                    candidates.push_back(static_cast<int>(b));
            if (candidates.empty()) continue;
            std::uniform_int_distribution<std::size_t> pickb(0, candidates.size() - 1);
            int b = candidates[pickb(rng)];
            bottom_used[b] = true;
            top_to_bottom[t] = b;
        }
        CoaGraph g;
        g.graph.node_count = m;
        g.node_in.assign(m, {});
        g.node_out.assign(m, {});
        for (int x = 0; x < m; ++x) {
            g.node_in[x].assign(vals[x].ins.size(), -1);
            g.node_out[x].assign(vals[x].outs.size(), -1);
        }
        int edge = 0;
        // inner edges and node exports
        for (std::size_t t = 0; t < tops.size(); ++t) {
            g.labels.push_back(tops[t].colour);
            g.graph.exits.push_back(tops[t].node);
            if (top_to_bottom[t] >= 0) {
                const Slot& b = bottoms[top_to_bottom[t]];
                g.graph.enters.push_back(b.node);
                g.node_in[b.node][b.pos] = edge;
            } else {
                g.graph.enters.push_back(std::nullopt);
                g.port_out.push_back(edge);
            }
            g.node_out[tops[t].node][tops[t].pos] = edge;
            ++edge;
        }
        // graph inports feeding unfed bottoms
        for (std::size_t b = 0; b < bottoms.size(); ++b) {
            if (bottom_used[b]) continue;
            g.labels.push_back(bottoms[b].colour);
            g.graph.enters.push_back(bottoms[b].node);
            g.graph.exits.push_back(std::nullopt);
            g.node_in[bottoms[b].node][bottoms[b].pos] = edge;
            g.port_in.push_back(edge);
            ++edge;
        }
        g.graph.edge_count = edge;
        if (!is_acyclic(g.graph)) continue;
        // shuffle the port and node orders so twists are exercised
        std::shuffle(g.port_in.begin(), g.port_in.end(), rng);
        std::shuffle(g.port_out.begin(), g.port_out.end(), rng);
        for (int x = 0; x < m; ++x) {
            std::shuffle(g.node_in[x].begin(), g.node_in[x].end(), rng);
            std::shuffle(g.node_out[x].begin(), g.node_out[x].end(), rng);
        }
        g.node_order.resize(m);
        std::iota(g.node_order.begin(), g.node_order.end(), 0);
        std::shuffle(g.node_order.begin(), g.node_order.end(), rng);
        validate_coa(g);
        return g;
    }
}

// Direct search for a morphism from the n-cycle wheel into g: node images
// v_1..v_n (not necessarily distinct) with an edge from v_i to v_{i+1 mod n}.
inline bool has_wheel_morphism(const Graph& g, int n) {
    std::vector<std::vector<bool>> arc(g.node_count, std::vector<bool>(g.node_count, false));
    for (int e = 0; e < g.edge_count; ++e)
        if (g.enters[e] && g.exits[e]) arc[*g.exits[e]][*g.enters[e]] = true;
    std::vector<int> img(n);
    std::function<bool(int)> rec = [&](int i) -> bool {
        if (i == n) return arc[img[n - 1]][img[0]];
        for (int v = 0; v < g.node_count; ++v) {
            if (i > 0 && !arc[img[i - 1]][v]) continue;
            img[i] = v;
            if (rec(i + 1)) return true;
        }
        return false;
    };
    if (g.node_count == 0) return false;
    return rec(0);
}

inline bool wheel_free(const Graph& g) {
    for (int n = 1; n <= g.node_count; ++n)
        if (has_wheel_morphism(g, n)) return false;
    return true;
}

}  // namespace testutil
