#include "propcalc/insertion.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace propcalc {

OrderedPartition InsertionPermutation::fibre_partition() const {
    OrderedPartition p;
    p.sizes.assign(blocks, 0);
    for (int v : map) {
        if (v < 1 || v > blocks) throw std::invalid_argument("InsertionPermutation: value out of range");
        ++p.sizes[v - 1];
    }
    return p;
}

namespace {
struct Uf {
    std::vector<int> parent;
    explicit Uf(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};
}  // namespace

CoaGraph insert(const CoaGraph& g, int v, const CoaGraph& h) {
    return insert_with_maps(g, v, h).graph;
}

InsertResult insert_with_maps(const CoaGraph& g, int v, const CoaGraph& h) {
    if (v < 0 || v >= g.nodes()) throw std::invalid_argument("insert: node out of range");
    if (!(c_valence_of_node(g, v) == residue_cvalence(h)))
        throw std::invalid_argument("insert: coloured valence mismatch");

    const int ge = g.edges(), he = h.edges();
    // combined edge ids: g edges, then h edges shifted by ge
    Uf uf(ge + he);
    for (std::size_t k = 0; k < g.node_in[v].size(); ++k)
        uf.unite(g.node_in[v][k], ge + h.port_in[k]);
    for (std::size_t k = 0; k < g.node_out[v].size(); ++k)
        uf.unite(g.node_out[v][k], ge + h.port_out[k]);

    // compact class ids in order of first appearance
    std::vector<int> class_id(ge + he, -1);
    int next_edge = 0;
    for (int e = 0; e < ge + he; ++e) {
        int r = uf.find(e);
        if (class_id[r] == -1) class_id[r] = next_edge++;
        class_id[e] = class_id[r];
    }

    // node ids: g nodes except v keep their relative order, h nodes follow
    const int gn = g.nodes(), hn = h.nodes();
    std::vector<int> gnode(gn, -1);
    for (int x = 0; x < gn; ++x)
        if (x != v) gnode[x] = x < v ? x : x - 1;
    auto hnode = [&](int y) { return gn - 1 + y; };

    CoaGraph out;
    out.graph.node_count = gn - 1 + hn;
    out.graph.edge_count = next_edge;
    out.graph.enters.assign(next_edge, std::nullopt);
    out.graph.exits.assign(next_edge, std::nullopt);
    out.labels.assign(next_edge, {});
    for (int e = 0; e < ge; ++e) {
        int c = class_id[e];
        out.labels[c] = g.labels[e];
        if (g.graph.enters[e] && *g.graph.enters[e] != v) out.graph.enters[c] = gnode[*g.graph.enters[e]];
        if (g.graph.exits[e] && *g.graph.exits[e] != v) out.graph.exits[c] = gnode[*g.graph.exits[e]];
    }
    for (int e = 0; e < he; ++e) {
        int c = class_id[ge + e];
        out.labels[c] = h.labels[e];
        if (h.graph.enters[e]) out.graph.enters[c] = hnode(*h.graph.enters[e]);
        if (h.graph.exits[e]) out.graph.exits[c] = hnode(*h.graph.exits[e]);
    }

    out.node_in.assign(out.graph.node_count, {});
    out.node_out.assign(out.graph.node_count, {});
    for (int x = 0; x < gn; ++x) {
        if (x == v) continue;
        for (int e : g.node_in[x]) out.node_in[gnode[x]].push_back(class_id[e]);
        for (int e : g.node_out[x]) out.node_out[gnode[x]].push_back(class_id[e]);
    }
    for (int y = 0; y < hn; ++y) {
        for (int e : h.node_in[y]) out.node_in[hnode(y)].push_back(class_id[ge + e]);
        for (int e : h.node_out[y]) out.node_out[hnode(y)].push_back(class_id[ge + e]);
    }
    for (int e : g.port_in) out.port_in.push_back(class_id[e]);
    for (int e : g.port_out) out.port_out.push_back(class_id[e]);

    int k = 0;
    while (g.node_order[k] != v) ++k;
    for (int i = 0; i < k; ++i) out.node_order.push_back(gnode[g.node_order[i]]);
    for (int i = 0; i < hn; ++i) out.node_order.push_back(hnode(h.node_order[i]));
    for (int i = k + 1; i < gn; ++i) out.node_order.push_back(gnode[g.node_order[i]]);

    validate_coa(out);
    InsertResult res;
    res.graph = std::move(out);
    res.g_nodes = gnode;
    for (int y = 0; y < hn; ++y) res.h_nodes.push_back(hnode(y));
    return res;
}

CoaGraph multi_insert(const CoaGraph& g, const InsertionPermutation& alpha,
                      const std::vector<CoaGraph>& ks) {
    const int m = g.nodes();
    if (static_cast<int>(ks.size()) != m)
        throw std::invalid_argument("multi_insert: one graph per node required");
    if (alpha.blocks != m || static_cast<int>(alpha.map.size()) !=
                                 std::accumulate(ks.begin(), ks.end(), 0,
                                                 [](int acc, const CoaGraph& k) { return acc + k.nodes(); }))
        throw std::invalid_argument("multi_insert: permutation shape mismatch");
    auto part = alpha.fibre_partition();
    for (int i = 0; i < m; ++i) {
        if (part.sizes[i] != ks[i].nodes())
            throw std::invalid_argument("multi_insert: fibre size does not match node count");
        if (!(c_valence_of_node(g, g.node_order[i]) == residue_cvalence(ks[i])))
            throw std::invalid_argument("multi_insert: coloured valence mismatch");
    }
    // insert from the last node-order position down so earlier positions
    // stay put
    CoaGraph cur = g;
    for (int i = m; i >= 1; --i) cur = insert(cur, cur.node_order[i - 1], ks[i - 1]);
    return permute_node_order(unshuffle(alpha.map, m), cur);
}

bool decompose_eligible(const CoaGraph& g, int x, int y) {
    if (x == y || x < 0 || y < 0 || x >= g.nodes() || y >= g.nodes()) return false;
    int posx = 0, posy = 0;
    for (int i = 0; i < g.nodes(); ++i) {
        if (g.node_order[i] == x) posx = i;
        if (g.node_order[i] == y) posy = i;
    }
    if (posx >= posy) return false;
    if (max_path_length(g.graph, y, x)) return false;
    auto xy = max_path_length(g.graph, x, y);
    return !xy || *xy == 1;
}

Decomposition decompose(const CoaGraph& g, int x, int y) {
    if (x == y) throw std::invalid_argument("decompose: nodes must be distinct");
    int posx = -1, posy = -1;
    for (int i = 0; i < g.nodes(); ++i) {
        if (g.node_order[i] == x) posx = i;
        if (g.node_order[i] == y) posy = i;
    }
    if (posx < 0 || posy < 0) throw std::invalid_argument("decompose: node out of range");
    if (posx > posy) throw std::invalid_argument("decompose: x must precede y in the node order");
    if (max_path_length(g.graph, y, x))
        throw std::invalid_argument("decompose: y dominates x");
    auto xy = max_path_length(g.graph, x, y);
    if (xy && *xy > 1)
        throw std::invalid_argument("decompose: monotone dead-ends path of length > 1");

    auto shared = cie(g.graph, x, y);
    std::set<int> shared_set(shared.begin(), shared.end());

    // merged covering order on the collapsed node
    std::vector<int> merged_in, merged_out;
    if (!shared.empty()) {
        // insert x's entering edges at the first shared edge of y's order,
        // then drop the remaining shared edges; dually on the output side
        auto first_in = restrict_order(g.node_in[y], shared)[0];
        auto full_in = insert_order(g.node_in[x], g.node_in[y], first_in);
        std::vector<int> keep_in;
        for (int e : full_in)
            if (!shared_set.count(e)) keep_in.push_back(e);
        merged_in = keep_in;

        auto first_out = restrict_order(g.node_out[x], shared)[0];
        auto full_out = insert_order(g.node_out[y], g.node_out[x], first_out);
        std::vector<int> keep_out;
        for (int e : full_out)
            if (!shared_set.count(e)) keep_out.push_back(e);
        merged_out = keep_out;
    } else {
        merged_in = g.node_in[x];
        merged_in.insert(merged_in.end(), g.node_in[y].begin(), g.node_in[y].end());
        merged_out = g.node_out[x];
        merged_out.insert(merged_out.end(), g.node_out[y].begin(), g.node_out[y].end());
    }

    // K: the two-node composition graph on x and y
    std::vector<int> kedge(g.edges(), -1);
    std::vector<int> korig;
    auto ktake = [&](int e) {
        if (kedge[e] == -1) {
            kedge[e] = static_cast<int>(korig.size());
            korig.push_back(e);
        }
    };
    for (int e : g.node_in[x]) ktake(e);
    for (int e : g.node_out[x]) ktake(e);
    for (int e : g.node_in[y]) ktake(e);
    for (int e : g.node_out[y]) ktake(e);

    CoaGraph k;
    k.graph.node_count = 2;
    k.graph.edge_count = static_cast<int>(korig.size());
    k.graph.enters.assign(korig.size(), std::nullopt);
    k.graph.exits.assign(korig.size(), std::nullopt);
    for (std::size_t i = 0; i < korig.size(); ++i) {
        int e = korig[i];
        k.labels.push_back(g.labels[e]);
        if (g.graph.enters[e] == x) k.graph.enters[i] = 0;
        if (g.graph.enters[e] == y) k.graph.enters[i] = 1;
        if (g.graph.exits[e] == x) k.graph.exits[i] = 0;
        if (g.graph.exits[e] == y) k.graph.exits[i] = 1;
    }
    k.node_in.resize(2);
    k.node_out.resize(2);
    for (int e : g.node_in[x]) k.node_in[0].push_back(kedge[e]);
    for (int e : g.node_out[x]) k.node_out[0].push_back(kedge[e]);
    for (int e : g.node_in[y]) k.node_in[1].push_back(kedge[e]);
    for (int e : g.node_out[y]) k.node_out[1].push_back(kedge[e]);
    for (int e : merged_in) k.port_in.push_back(kedge[e]);
    for (int e : merged_out) k.port_out.push_back(kedge[e]);
    k.node_order = {0, 1};
    validate_coa(k);

    // H: g with x, y and their shared edges shrunk into one node, last in
    // the node order
    std::vector<int> hedge(g.edges(), -1);
    int hnext = 0;
    for (int e = 0; e < g.edges(); ++e)
        if (!shared_set.count(e)) hedge[e] = hnext++;
    std::vector<int> hnodemap(g.nodes(), -1);
    for (int z = 0; z < g.nodes(); ++z)
        if (z != y) hnodemap[z] = z < y ? z : z - 1;
    hnodemap[y] = hnodemap[x];
    const int merged = hnodemap[x];

    CoaGraph h;
    h.graph.node_count = g.nodes() - 1;
    h.graph.edge_count = hnext;
    h.graph.enters.assign(hnext, std::nullopt);
    h.graph.exits.assign(hnext, std::nullopt);
    h.labels.assign(hnext, {});
    for (int e = 0; e < g.edges(); ++e) {
        if (hedge[e] == -1) continue;
        h.labels[hedge[e]] = g.labels[e];
        if (g.graph.enters[e]) h.graph.enters[hedge[e]] = hnodemap[*g.graph.enters[e]];
        if (g.graph.exits[e]) h.graph.exits[hedge[e]] = hnodemap[*g.graph.exits[e]];
    }
    h.node_in.assign(h.graph.node_count, {});
    h.node_out.assign(h.graph.node_count, {});
    for (int z = 0; z < g.nodes(); ++z) {
        if (z == x || z == y) continue;
        for (int e : g.node_in[z]) h.node_in[hnodemap[z]].push_back(hedge[e]);
        for (int e : g.node_out[z]) h.node_out[hnodemap[z]].push_back(hedge[e]);
    }
    for (int e : merged_in) h.node_in[merged].push_back(hedge[e]);
    for (int e : merged_out) h.node_out[merged].push_back(hedge[e]);
    for (int e : g.port_in) h.port_in.push_back(hedge[e]);
    for (int e : g.port_out) h.port_out.push_back(hedge[e]);
    for (int i = 0; i < g.nodes(); ++i) {
        int z = g.node_order[i];
        if (z != x && z != y) h.node_order.push_back(hnodemap[z]);
    }
    h.node_order.push_back(merged);
    validate_coa(h);

    Decomposition d;
    d.h = std::move(h);
    d.k = std::move(k);
    d.merged_node = merged;
    d.node_map = hnodemap;
    d.alpha.blocks = g.nodes() - 1;
    d.alpha.map.resize(g.nodes());
    std::vector<int> hpos(d.h.nodes());
    for (int i = 0; i < d.h.nodes(); ++i) hpos[d.h.node_order[i]] = i;
    for (int i = 0; i < g.nodes(); ++i)
        d.alpha.map[i] = hpos[hnodemap[g.node_order[i]]] + 1;
    return d;
}

CoaGraph reassemble(const Decomposition& d) {
    std::vector<CoaGraph> ks;
    for (int i = 0; i < d.h.nodes(); ++i) {
        int node = d.h.node_order[i];
        if (node == d.merged_node)
            ks.push_back(d.k);
        else
            ks.push_back(untwisted_corolla(c_valence_of_node(d.h, node)));
    }
    return multi_insert(d.h, d.alpha, ks);
}

}  // namespace propcalc
