#include "propcalc/graph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace propcalc {

void validate_graph(const Graph& g) {
    if (g.edge_count < 0 || g.node_count < 0)
        throw std::invalid_argument("graph: negative counts");
    if (static_cast<int>(g.enters.size()) != g.edge_count ||
        static_cast<int>(g.exits.size()) != g.edge_count)
        throw std::invalid_argument("graph: incidence vectors must have one entry per edge");
    for (int e = 0; e < g.edge_count; ++e) {
        if (g.enters[e] && (*g.enters[e] < 0 || *g.enters[e] >= g.node_count))
            throw std::invalid_argument("graph: enters out of range");
        if (g.exits[e] && (*g.exits[e] < 0 || *g.exits[e] >= g.node_count))
            throw std::invalid_argument("graph: exits out of range");
    }
}

Graph corolla(const Valence& v) {
    if (v.inputs < 0 || v.outputs < 0) throw std::invalid_argument("corolla: negative valence");
    Graph g;
    g.node_count = 1;
    g.edge_count = v.inputs + v.outputs;
    g.enters.assign(g.edge_count, std::nullopt);
    g.exits.assign(g.edge_count, std::nullopt);
    for (int e = 0; e < v.inputs; ++e) g.enters[e] = 0;
    for (int e = v.inputs; e < g.edge_count; ++e) g.exits[e] = 0;
    return g;
}

Residue residue(const Graph& g) {
    Residue r;
    for (int e = 0; e < g.edge_count; ++e) {
        if (!g.exits[e]) r.inports.push_back(e);
        if (!g.enters[e]) r.exports.push_back(e);
    }
    r.valence = {static_cast<int>(r.inports.size()), static_cast<int>(r.exports.size())};
    return r;
}

Valence node_valence(const Graph& g, int node) {
    if (node < 0 || node >= g.node_count) throw std::invalid_argument("node_valence: node out of range");
    Valence v;
    for (int e = 0; e < g.edge_count; ++e) {
        if (g.enters[e] == node) ++v.inputs;
        if (g.exits[e] == node) ++v.outputs;
    }
    return v;
}

std::vector<int> node_inports(const Graph& g, int node) {
    std::vector<int> out;
    for (int e = 0; e < g.edge_count; ++e)
        if (g.enters[e] == node) out.push_back(e);
    return out;
}

std::vector<int> node_exports(const Graph& g, int node) {
    std::vector<int> out;
    for (int e = 0; e < g.edge_count; ++e)
        if (g.exits[e] == node) out.push_back(e);
    return out;
}

std::vector<int> inner_edges(const Graph& g) {
    std::vector<int> out;
    for (int e = 0; e < g.edge_count; ++e)
        if (g.enters[e] && g.exits[e]) out.push_back(e);
    return out;
}

std::vector<int> free_edges(const Graph& g) {
    std::vector<int> out;
    for (int e = 0; e < g.edge_count; ++e)
        if (!g.enters[e] && !g.exits[e]) out.push_back(e);
    return out;
}

static std::vector<std::vector<int>> node_digraph(const Graph& g) {
    std::vector<std::vector<int>> adj(g.node_count);
    for (int e = 0; e < g.edge_count; ++e)
        if (g.enters[e] && g.exits[e]) adj[*g.exits[e]].push_back(*g.enters[e]);
    return adj;
}

bool is_acyclic(const Graph& g) {
    auto adj = node_digraph(g);
    std::vector<int> state(g.node_count, 0);  // 0 unvisited, 1 on stack, 2 done
    std::function<bool(int)> dfs = [&](int u) {
        state[u] = 1;
        for (int v : adj[u]) {
            if (state[v] == 1) return false;
            if (state[v] == 0 && !dfs(v)) return false;
        }
        state[u] = 2;
        return true;
    };
    for (int u = 0; u < g.node_count; ++u)
        if (state[u] == 0 && !dfs(u)) return false;
    return true;
}

namespace {
struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};
}  // namespace

Components connected_components(const Graph& g) {
    // cells: nodes 0..node_count-1, then edges
    UnionFind uf(g.node_count + g.edge_count);
    for (int e = 0; e < g.edge_count; ++e) {
        if (g.enters[e]) uf.unite(g.node_count + e, *g.enters[e]);
        if (g.exits[e]) uf.unite(g.node_count + e, *g.exits[e]);
    }
    Components comps;
    std::vector<int> root_to_comp(g.node_count + g.edge_count, -1);
    auto comp_of = [&](int cell) {
        int r = uf.find(cell);
        if (root_to_comp[r] == -1) {
            root_to_comp[r] = static_cast<int>(comps.nodes.size());
            comps.nodes.emplace_back();
            comps.edges.emplace_back();
        }
        return root_to_comp[r];
    };
    comps.node_component.resize(g.node_count);
    comps.edge_component.resize(g.edge_count);
    for (int n = 0; n < g.node_count; ++n) {
        int c = comp_of(n);
        comps.node_component[n] = c;
        comps.nodes[c].push_back(n);
    }
    for (int e = 0; e < g.edge_count; ++e) {
        int c = comp_of(g.node_count + e);
        comps.edge_component[e] = c;
        comps.edges[c].push_back(e);
    }
    for (std::size_t c = 0; c < comps.nodes.size(); ++c) {
        Graph sub;
        sub.node_count = static_cast<int>(comps.nodes[c].size());
        sub.edge_count = static_cast<int>(comps.edges[c].size());
        std::vector<int> node_local(g.node_count, -1);
        for (int i = 0; i < sub.node_count; ++i) node_local[comps.nodes[c][i]] = i;
        sub.enters.assign(sub.edge_count, std::nullopt);
        sub.exits.assign(sub.edge_count, std::nullopt);
        for (int i = 0; i < sub.edge_count; ++i) {
            int e = comps.edges[c][i];
            if (g.enters[e]) sub.enters[i] = node_local[*g.enters[e]];
            if (g.exits[e]) sub.exits[i] = node_local[*g.exits[e]];
        }
        comps.graphs.push_back(std::move(sub));
    }
    return comps;
}

bool is_connected(const Graph& g) {
    if (g.node_count == 0 && g.edge_count == 0) return false;
    return connected_components(g).graphs.size() == 1;
}

std::vector<int> cie(const Graph& g, int u, int v) {
    if (u == v) throw std::invalid_argument("cie: nodes must be distinct");
    std::vector<int> out;
    for (int e = 0; e < g.edge_count; ++e)
        if (g.exits[e] == u && g.enters[e] == v) out.push_back(e);
    return out;
}

std::optional<int> max_path_length(const Graph& g, int x, int y) {
    // longest directed path x -> y in the node digraph (graph acyclic)
    auto adj = node_digraph(g);
    std::vector<std::optional<int>> best(g.node_count);
    std::function<std::optional<int>(int)> longest = [&](int u) -> std::optional<int> {
        if (u == y) return 0;
        if (best[u]) return *best[u] == -1 ? std::optional<int>{} : best[u];
        best[u] = -1;  // marks "no path" while exploring; graph is acyclic
        std::optional<int> r;
        for (int w : adj[u]) {
            auto sub = longest(w);
            if (sub && (!r || *sub + 1 > *r)) r = *sub + 1;
        }
        if (r) best[u] = r;
        return r;
    };
    auto r = longest(x);
    if (r && *r == 0) return std::nullopt;  // x == y is not a path here
    return r;
}

DominanceResult dominance(const Graph& g, int x, int y) {
    if (x == y) throw std::invalid_argument("dominance: nodes must be distinct");
    if (!is_acyclic(g)) throw std::invalid_argument("dominance: graph is cyclic");
    auto xy = max_path_length(g, x, y);
    auto yx = max_path_length(g, y, x);
    if (xy) return {Dominance::FirstDominates, *xy};
    if (yx) return {Dominance::SecondDominates, *yx};
    return {Dominance::Disconnected, 0};
}

bool is_tree(const Graph& g) {
    if (!is_connected(g)) return false;
    auto r = residue(g);
    if (r.exports.size() != 1) return false;
    if (!is_acyclic(g)) return false;
    int root = r.exports[0];
    // count monotone open paths from each edge down to the root; an open
    // path advances edge -> node it enters -> one of that node's exports
    std::vector<std::optional<long long>> memo(g.edge_count);
    std::function<long long(int)> paths = [&](int e) -> long long {
        if (e == root) return 1;
        if (memo[e]) return *memo[e];
        long long total = 0;
        if (g.enters[e]) {
            int n = *g.enters[e];
            for (int f = 0; f < g.edge_count; ++f)
                if (g.exits[f] == n) total += paths(f);
        }
        memo[e] = total;
        return total;
    };
    for (int e = 0; e < g.edge_count; ++e)
        if (e != root && paths(e) != 1) return false;
    return true;
}

}  // namespace propcalc
