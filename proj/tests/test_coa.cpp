#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "helpers.hpp"
#include "propcalc/coa.hpp"

using namespace propcalc;
using namespace testutil;

namespace {

// brute-force isomorphism of completely ordered graphs: try all node and
// edge bijections compatible with every piece of data
bool brute_coa_iso(const CoaGraph& g, const CoaGraph& h) {
    if (g.nodes() != h.nodes() || g.edges() != h.edges()) return false;
    std::vector<int> nm(g.nodes());
    std::iota(nm.begin(), nm.end(), 0);
    do {
        // node order must be preserved
        bool ok = true;
        for (int i = 0; i < g.nodes() && ok; ++i)
            if (nm[g.node_order[i]] != h.node_order[i]) ok = false;
        if (!ok) continue;
        // edge map forced by orders
        std::vector<int> em(g.edges(), -1);
        auto set_or_check = [&](int e, int t) {
            if (em[e] == -1)
                em[e] = t;
            else if (em[e] != t)
                ok = false;
        };
        for (int x = 0; x < g.nodes() && ok; ++x) {
            int y = nm[x];
            if (g.node_in[x].size() != h.node_in[y].size() ||
                g.node_out[x].size() != h.node_out[y].size()) {
                ok = false;
                break;
            }
            for (std::size_t k = 0; k < g.node_in[x].size(); ++k)
                set_or_check(g.node_in[x][k], h.node_in[y][k]);
            for (std::size_t k = 0; k < g.node_out[x].size(); ++k)
                set_or_check(g.node_out[x][k], h.node_out[y][k]);
        }
        if (!ok) continue;
        if (g.port_in.size() != h.port_in.size() || g.port_out.size() != h.port_out.size())
            continue;
        for (std::size_t k = 0; k < g.port_in.size() && ok; ++k)
            set_or_check(g.port_in[k], h.port_in[k]);
        for (std::size_t k = 0; k < g.port_out.size() && ok; ++k)
            set_or_check(g.port_out[k], h.port_out[k]);
        if (!ok) continue;
        std::vector<bool> hit(g.edges(), false);
        for (int e = 0; e < g.edges() && ok; ++e) {
            if (em[e] == -1 || hit[em[e]] || g.labels[e] != h.labels[em[e]]) ok = false;
            else hit[em[e]] = true;
        }
        if (ok) return true;
    } while (std::next_permutation(nm.begin(), nm.end()));
    return false;
}

CoaGraph shuffled_copy(std::mt19937& rng, const CoaGraph& g) {
    // structurally relabel nodes and edges at random
    std::vector<int> nm(g.nodes()), em(g.edges());
    std::iota(nm.begin(), nm.end(), 0);
    std::iota(em.begin(), em.end(), 0);
    std::shuffle(nm.begin(), nm.end(), rng);
    std::shuffle(em.begin(), em.end(), rng);
    CoaGraph out;
    out.graph.node_count = g.nodes();
    out.graph.edge_count = g.edges();
    out.graph.enters.assign(g.edges(), std::nullopt);
    out.graph.exits.assign(g.edges(), std::nullopt);
    out.labels.assign(g.edges(), {});
    for (int e = 0; e < g.edges(); ++e) {
        out.labels[em[e]] = g.labels[e];
        if (g.graph.enters[e]) out.graph.enters[em[e]] = nm[*g.graph.enters[e]];
        if (g.graph.exits[e]) out.graph.exits[em[e]] = nm[*g.graph.exits[e]];
    }
    out.node_in.assign(g.nodes(), {});
    out.node_out.assign(g.nodes(), {});
    for (int x = 0; x < g.nodes(); ++x) {
        for (int e : g.node_in[x]) out.node_in[nm[x]].push_back(em[e]);
        for (int e : g.node_out[x]) out.node_out[nm[x]].push_back(em[e]);
    }
    for (int e : g.port_in) out.port_in.push_back(em[e]);
    for (int e : g.port_out) out.port_out.push_back(em[e]);
    for (int n : g.node_order) out.node_order.push_back(nm[n]);
    return out;
}

}  // namespace

TEST_CASE("cvalence encode round trip") {
    CValence v;
    v.ins = {"a", "b,c", "x;y"};
    v.outs = {""};
    CHECK(decode_cvalence(encode_cvalence(v)) == v);
    CHECK(decode_cvalence(encode_cvalence(CValence{})) == CValence{});
}

TEST_CASE("c_valence_of_node and arity") {
    auto c = untwisted_corolla(cv(2, 1));
    CHECK(c_valence_of_node(c, 0) == cv(2, 1));
    CHECK(arity(c).node_valences == std::vector<CValence>{cv(2, 1)});
    CHECK(arity(c).residue == cv(2, 1));

    CValence mixed;
    mixed.ins = {"a", "b"};
    mixed.outs = {"c"};
    auto d = untwisted_corolla(mixed);
    CHECK(c_valence_of_node(d, 0) == mixed);

    CoaGraph empty;
    CHECK(arity(empty).node_valences.empty());
    CHECK(arity(empty).residue == CValence{});
}

TEST_CASE("twists of the untwisted corolla") {
    auto c = untwisted_corolla(cv(2, 2));
    auto [tin, tout] = io_twist(c, 0);
    CHECK(tin.is_identity());
    CHECK(tout.is_identity());
    CHECK(is_untwisted(c));
    // crossing the port order shows up as the crossing permutation
    auto crossed = c;
    std::swap(crossed.port_in[0], crossed.port_in[1]);
    auto [tin2, tout2] = io_twist(crossed, 0);
    CHECK(tin2 == Perm({2, 1}));
    CHECK(tout2.is_identity());
    CHECK_FALSE(is_untwisted(crossed));
}

TEST_CASE("node twist on parallel inner edges") {
    // two nodes joined by two parallel edges
    Arity a = make_arity({cv(0, 2), cv(2, 0)}, cv(0, 0));
    auto graphs = enumerate_coa(a);
    bool saw_id = false, saw_swap = false;
    for (const auto& g : graphs) {
        auto t = node_twist(g, 0, 1);
        if (t.is_identity()) saw_id = true;
        if (t == Perm({2, 1})) saw_swap = true;
    }
    CHECK(saw_id);
    CHECK(saw_swap);
    // single inner edge twist is trivially the identity
    Arity chain = make_arity({cv(0, 1), cv(1, 0)}, cv(0, 0));
    for (const auto& g : enumerate_coa(chain)) CHECK(node_twist(g, 0, 1).is_identity());
}

TEST_CASE("permute_node_order is a right action") {
    std::mt19937 rng(41);
    for (int t = 0; t < 60; ++t) {
        CoaGraph g = random_coa(rng, 4, 2);
        if (g.nodes() == 0) continue;
        auto perms = all_perms(g.nodes());
        std::uniform_int_distribution<std::size_t> pick(0, perms.size() - 1);
        Perm gamma = perms[pick(rng)], delta = perms[pick(rng)];
        CHECK(canonical_encode(permute_node_order(Perm::identity(g.nodes()), g)) ==
              canonical_encode(g));
        auto lhs = permute_node_order(gamma, permute_node_order(delta, g));
        auto rhs = permute_node_order(compose(delta, gamma), g);
        CHECK(canonical_encode(lhs) == canonical_encode(rhs));
    }
}

TEST_CASE("canonical encoding is relabelling invariant and decodable") {
    std::mt19937 rng(42);
    for (int t = 0; t < 120; ++t) {
        CoaGraph g = random_coa(rng, 4, 3, {"a", "b"});
        auto enc = canonical_encode(g);
        CHECK(canonical_encode(shuffled_copy(rng, g)) == enc);
        auto back = canonical_decode(enc);
        CHECK(canonical_encode(back) == enc);
        CHECK(back == canonical_form(g).graph);
    }
}

TEST_CASE("twists are encoded") {
    auto c = untwisted_corolla(cv(2, 1));
    auto crossed = c;
    std::swap(crossed.port_in[0], crossed.port_in[1]);
    CHECK(canonical_encode(c) != canonical_encode(crossed));
}

TEST_CASE("coa_iso") {
    std::mt19937 rng(43);
    for (int t = 0; t < 80; ++t) {
        CoaGraph g = random_coa(rng, 4, 2, {"a", "b"});
        auto self = coa_iso(g, g);
        REQUIRE(self.has_value());
        for (int x = 0; x < g.nodes(); ++x) CHECK(self->node_map[x] == x);

        auto copy = shuffled_copy(rng, g);
        auto iso = coa_iso(g, copy);
        REQUIRE(iso.has_value());
        // the found isomorphism commutes with all incidence and order data
        for (int x = 0; x < g.nodes(); ++x) {
            int y = iso->node_map[x];
            REQUIRE(g.node_in[x].size() == copy.node_in[y].size());
            for (std::size_t k = 0; k < g.node_in[x].size(); ++k)
                CHECK(iso->edge_map[g.node_in[x][k]] == copy.node_in[y][k]);
            for (std::size_t k = 0; k < g.node_out[x].size(); ++k)
                CHECK(iso->edge_map[g.node_out[x][k]] == copy.node_out[y][k]);
        }
        for (std::size_t k = 0; k < g.port_in.size(); ++k)
            CHECK(iso->edge_map[g.port_in[k]] == copy.port_in[k]);
        for (std::size_t k = 0; k < g.port_out.size(); ++k)
            CHECK(iso->edge_map[g.port_out[k]] == copy.port_out[k]);
        for (int e = 0; e < g.edges(); ++e) CHECK(g.labels[e] == copy.labels[iso->edge_map[e]]);
        for (int i = 0; i < g.nodes(); ++i)
            CHECK(iso->node_map[g.node_order[i]] == copy.node_order[i]);
        // agreement with the brute-force search
        CHECK(brute_coa_iso(g, copy));
    }
}

TEST_CASE("node order permutation generically changes the class") {
    // a graph whose nodes all reach a port is rigid
    Arity a = make_arity({cv(1, 1), cv(1, 1)}, cv(2, 2));
    auto graphs = enumerate_coa(a);
    REQUIRE(!graphs.empty());
    for (const auto& g : graphs) {
        auto swapped = permute_node_order(Perm({2, 1}), g);
        CHECK(canonical_encode(swapped) != canonical_encode(g));
        CHECK_FALSE(coa_iso(g, swapped).has_value());
        CHECK_FALSE(brute_coa_iso(g, swapped));
    }
}

TEST_CASE("ordered automorphisms") {
    // every node reaches a port: only the identity
    Arity a = make_arity({cv(1, 1), cv(1, 1)}, cv(1, 1));
    for (const auto& g : enumerate_coa(a)) CHECK(ordered_automorphisms(g).size() == 1);

    // two isolated nullary nodes: the swap is an automorphism
    Arity iso2 = make_arity({cv(0, 0), cv(0, 0)}, cv(0, 0));
    auto graphs = enumerate_coa(iso2);
    REQUIRE(graphs.size() == 1);
    CHECK(ordered_automorphisms(graphs[0]).size() == 2);
}

TEST_CASE("closed diamond has the double-swap automorphism") {
    // nodes 0,1 with two exports each; nodes 2,3 with two imports each;
    // 0 sends (a to 3, b to 2), 1 sends (a to 2, b to 3)
    CoaGraph g;
    g.graph.node_count = 4;
    g.graph.edge_count = 4;
    g.labels = {"a", "b", "a", "b"};
    g.graph.exits = {0, 0, 1, 1};
    g.graph.enters = {3, 2, 2, 3};
    g.node_in = {{}, {}, {2, 1}, {0, 3}};
    g.node_out = {{0, 1}, {2, 3}, {}, {}};
    g.port_in = {};
    g.port_out = {};
    g.node_order = {0, 1, 2, 3};
    validate_coa(g);
    auto autos = ordered_automorphisms(g);
    REQUIRE(autos.size() == 2);
    bool found = false;
    for (const auto& f : autos)
        if (f.node_map == std::vector<int>{1, 0, 3, 2}) found = true;
    CHECK(found);
}

TEST_CASE("enumerate_coa corolla counts are n! m!") {
    for (int n = 0; n <= 3; ++n)
        for (int m = 0; m <= 3; ++m) {
            auto graphs = enumerate_coa(make_arity({cv(n, m)}, cv(n, m)));
            long long want = 1;
            for (int i = 2; i <= n; ++i) want *= i;
            for (int i = 2; i <= m; ++i) want *= i;
            CHECK(static_cast<long long>(graphs.size()) == want);
        }
}

TEST_CASE("enumerate_coa known small counts") {
    CHECK(enumerate_coa(make_arity({cv(1, 1), cv(1, 1)}, cv(1, 1))).size() == 2);
    CHECK(enumerate_coa(make_arity({cv(0, 0), cv(0, 0)}, cv(0, 0))).size() == 1);
    // identity wiring with no nodes
    CHECK(enumerate_coa(make_arity({}, cv(1, 1))).size() == 1);
    // colour mismatch yields nothing
    Arity bad;
    bad.residue.ins = {"a"};
    bad.residue.outs = {"b"};
    CHECK(enumerate_coa(bad).empty());
    // unbalanced slots yield nothing
    CHECK(enumerate_coa(make_arity({cv(2, 0)}, cv(0, 0))).empty());
}

TEST_CASE("enumerate_coa returns each class once, with the right arity") {
    std::vector<Arity> arities = {
        make_arity({cv(1, 1), cv(1, 1)}, cv(1, 1)),
        make_arity({cv(2, 1), cv(1, 1)}, cv(2, 1)),
        make_arity({cv(0, 2), cv(2, 0)}, cv(0, 0)),
        make_arity({cv(0, 0), cv(0, 0)}, cv(0, 0)),
        make_arity({cv(1, 2), cv(1, 1), cv(2, 1)}, cv(1, 1)),
    };
    for (const auto& a : arities) {
        auto graphs = enumerate_coa(a);
        std::set<std::string> encs;
        for (const auto& g : graphs) {
            validate_coa(g);
            CHECK(arity(g) == a);
            encs.insert(canonical_encode(g));
        }
        CHECK(encs.size() == graphs.size());
        // no cross isomorphisms by brute force
        for (std::size_t i = 0; i < graphs.size(); ++i)
            for (std::size_t j = i + 1; j < graphs.size(); ++j)
                CHECK_FALSE(brute_coa_iso(graphs[i], graphs[j]));
    }
}

TEST_CASE("balance equations hold for every enumerated graph") {
    auto a = make_arity({cv(1, 2), cv(2, 1)}, cv(1, 1));
    for (const auto& g : enumerate_coa(a)) {
        int inner = static_cast<int>(inner_edges(g.graph).size());
        int free = static_cast<int>(free_edges(g.graph).size());
        int sum_in = 0, sum_out = 0;
        for (int x = 0; x < g.nodes(); ++x) {
            sum_in += static_cast<int>(g.node_in[x].size());
            sum_out += static_cast<int>(g.node_out[x].size());
        }
        CHECK(static_cast<int>(g.port_in.size()) + inner - free == sum_in);
        CHECK(static_cast<int>(g.port_out.size()) + inner - free == sum_out);
    }
}

TEST_CASE("min_encode_ordered collapses node orders only") {
    std::mt19937 rng(59);
    for (int t = 0; t < 40; ++t) {
        CoaGraph g = random_coa(rng, 3, 2);
        if (g.nodes() == 0) continue;
        auto perms = all_perms(g.nodes());
        std::uniform_int_distribution<std::size_t> pick(0, perms.size() - 1);
        CHECK(min_encode_ordered(permute_node_order(perms[pick(rng)], g)) ==
              min_encode_ordered(g));
    }
}

TEST_CASE("validate_coa rejects broken data") {
    auto g = untwisted_corolla(cv(1, 1));
    auto bad = g;
    bad.node_in[0] = {};
    CHECK_THROWS_AS(validate_coa(bad), std::invalid_argument);
    bad = g;
    bad.labels.pop_back();
    CHECK_THROWS_AS(validate_coa(bad), std::invalid_argument);
    bad = g;
    bad.node_order = {1};
    CHECK_THROWS_AS(validate_coa(bad), std::invalid_argument);
}
