#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "helpers.hpp"
#include "prop_oracles.hpp"
#include "propcalc/prop.hpp"

using namespace propcalc;
using namespace testutil;

TEST_CASE("endomorphism prop of finite sets satisfies the axioms") {
    EndProp end({{"a", 2}, {"b", 2}});
    auto P = end.prop();
    std::vector<CValence> probes = {
        CValence{{"a"}, {"a"}},      CValence{{"a"}, {"b"}},      CValence{{"b"}, {"a"}},
        CValence{{"a", "b"}, {"a"}}, CValence{{"a"}, {"a", "b"}}, CValence{{"b", "a"}, {"a"}},
        CValence{{"a"}, {"b", "a"}}, CValence{{}, {}},            CValence{{"a", "a"}, {"a"}},
    };
    auto rep = check_prop_axioms(P, probes, 0, 800, 5);
    for (const auto& v : rep.violations) MESSAGE(v);
    CHECK(rep.ok);
    CHECK(rep.checks > 100);
}

TEST_CASE("free prop on the terminal operad counts functions") {
    auto P = free_prop_on_operad(make_com_operad(), {"*"});
    for (int n = 0; n <= 4; ++n)
        for (int m = 0; m <= 4; ++m) {
            auto hs = P.hom(cv(n, m), 0);
            long long want = 1;
            for (int i = 0; i < n; ++i) want *= m;
            if (n == 0) want = 1;
            CHECK(hs.saturated);
            CHECK(static_cast<long long>(hs.elements.size()) == want);
        }
}

TEST_CASE("free prop composition composes the underlying maps") {
    auto P = free_prop_on_operad(make_com_operad(), {"*"});
    for (int n = 0; n <= 2; ++n)
        for (int m = 0; m <= 2; ++m)
            for (int k = 0; k <= 2; ++k) {
                for (const auto& fe : P.hom(cv(n, m), 0).elements)
                    for (const auto& ge : P.hom(cv(m, k), 0).elements) {
                        WOp wf = decode_w_op(fe), wg = decode_w_op(ge);
                        WOp wc = decode_w_op(P.vcomp(ge, fe));
                        for (int j = 1; j <= n; ++j)
                            CHECK(wc.map[j - 1] == wg.map[wf.map[j - 1] - 1]);
                    }
            }
}

TEST_CASE("free prop identities") {
    auto P = free_prop_on_operad(make_com_operad(), {"*"});
    auto id2 = P.unit({"*", "*"});
    for (const auto& x : P.hom(cv(2, 2), 0).elements) {
        CHECK(P.vcomp(id2, x) == x);
        CHECK(P.vcomp(x, id2) == x);
    }
}

TEST_CASE("free prop axioms over the terminal operad") {
    auto P = free_prop_on_operad(make_com_operad(), {"*"});
    std::vector<CValence> probes;
    for (int n = 0; n <= 2; ++n)
        for (int m = 0; m <= 2; ++m) probes.push_back(cv(n, m));
    auto rep = check_prop_axioms(P, probes, 0, 600, 9);
    for (const auto& v : rep.violations) MESSAGE(v);
    CHECK(rep.ok);
}

namespace {

// horizontal stack of graphs: ports concatenate
CoaGraph hstack(const std::vector<CoaGraph>& parts) {
    CoaGraph out;
    int edge = 0, node = 0;
    for (const auto& part : parts) {
        for (int e = 0; e < part.edges(); ++e) {
            out.labels.push_back(part.labels[e]);
            out.graph.enters.push_back(part.graph.enters[e]
                                           ? std::optional<int>(*part.graph.enters[e] + node)
                                           : std::nullopt);
            out.graph.exits.push_back(part.graph.exits[e]
                                          ? std::optional<int>(*part.graph.exits[e] + node)
                                          : std::nullopt);
        }
        for (int x = 0; x < part.nodes(); ++x) {
            out.node_in.emplace_back();
            out.node_out.emplace_back();
            for (int e : part.node_in[x]) out.node_in.back().push_back(e + edge);
            for (int e : part.node_out[x]) out.node_out.back().push_back(e + edge);
        }
        for (int e : part.port_in) out.port_in.push_back(e + edge);
        for (int e : part.port_out) out.port_out.push_back(e + edge);
        for (int x : part.node_order) out.node_order.push_back(x + node);
        edge += part.edges();
        node += part.nodes();
    }
    out.graph.edge_count = edge;
    out.graph.node_count = node;
    validate_coa(out);
    return out;
}

CoaGraph free_edge_graph() {
    CoaGraph d;
    d.graph.edge_count = 1;
    d.graph.enters = {std::nullopt};
    d.graph.exits = {std::nullopt};
    d.labels = {"*"};
    d.port_in = {0};
    d.port_out = {0};
    return d;
}

// binary trees with leaves as inputs; composition grafts at a leaf
SetOperad binary_tree_operad() {
    SetOperad o;
    o.colours = std::vector<Colour>{"*"};
    o.hom_fn = [](const Signature& s) -> std::vector<OpValue> {
        if (s.output != "*") return {};
        const int n = s.arity();
        for (const auto& c : s.inputs)
            if (c != "*") return {};
        // operations are trees without a node order: label the classes by
        // their least encoding
        std::set<OpValue> classes;
        if (n == 1) classes.insert(min_encode_ordered(free_edge_graph()));
        if (n >= 2) {
            Arity ar;
            ar.node_valences.assign(n - 1, cv(2, 1));
            ar.residue = cv(n, 1);
            for (const auto& g : enumerate_coa(ar))
                if (is_tree(g.graph)) classes.insert(min_encode_ordered(g));
        }
        return std::vector<OpValue>(classes.begin(), classes.end());
    };
    o.compose_fn = [](const OpValue& te, int slot, const OpValue& se) {
        CoaGraph t = canonical_decode(te);
        CoaGraph s = canonical_decode(se);
        // top row: identities with s at the grafting slot
        std::vector<CoaGraph> row;
        for (std::size_t k = 0; k < t.port_in.size(); ++k) {
            if (static_cast<int>(k) == slot - 1)
                row.push_back(s);
            else
                row.push_back(free_edge_graph());
        }
        return min_encode_ordered(vertical_glue(hstack(row), t));
    };
    o.act_fn = [](const Perm& g, const OpValue& te) {
        CoaGraph t = canonical_decode(te);
        t.port_in = apply_perm_to_positions(g, t.port_in);
        return min_encode_ordered(t);
    };
    o.unit_fn = [](const Colour&) { return min_encode_ordered(free_edge_graph()); };
    return o;
}

}  // namespace

TEST_CASE("the binary tree operad passes the axiom checker") {
    auto trees = binary_tree_operad();
    std::vector<Signature> probes;
    for (int n = 1; n <= 3; ++n) probes.push_back(Signature{std::vector<Colour>(n, "*"), "*"});
    auto rep = check_operad_axioms(trees, probes, 400, 400, 37);
    for (const auto& v : rep.violations) MESSAGE(v);
    CHECK(rep.ok);
}

TEST_CASE("free prop over the tree operad matches graph semantics") {
    // elements interpreted as glued graphs; the composition formula must
    // agree with direct vertical gluing up to ordered isomorphism
    auto trees = binary_tree_operad();
    auto P = free_prop_on_operad(trees, {"*"});
    std::mt19937 rng(123);
    int done = 0;
    while (done < 60) {
        std::uniform_int_distribution<int> nd(0, 3), md(0, 2);
        int n = nd(rng), m = md(rng), k = md(rng);
        auto fs = P.hom(cv(n, m), 0).elements;
        auto gs = P.hom(cv(m, k), 0).elements;
        if (fs.empty() || gs.empty()) continue;
        std::uniform_int_distribution<std::size_t> pf(0, fs.size() - 1), pg(0, gs.size() - 1);
        ElValue fe = fs[pf(rng)], ge = gs[pg(rng)];
        ++done;
        CoaGraph lhs = interpret_w_op(decode_w_op(P.vcomp(ge, fe)));
        CoaGraph rhs =
            vertical_glue(interpret_w_op(decode_w_op(fe)), interpret_w_op(decode_w_op(ge)));
        CHECK(min_encode_ordered(lhs) == min_encode_ordered(rhs));
    }
}

TEST_CASE("w_! elements with a nontrivial unshuffle compose correctly") {
    // two-step composition exercising the fibre reordering
    auto trees = binary_tree_operad();
    auto P = free_prop_on_operad(trees, {"*"});
    auto fs = P.hom(cv(3, 2), 0).elements;
    auto gs = P.hom(cv(2, 1), 0).elements;
    REQUIRE(!fs.empty());
    REQUIRE(!gs.empty());
    int nontrivial = 0;
    for (const auto& fe : fs)
        for (const auto& ge : gs) {
            WOp wf = decode_w_op(fe);
            bool monotone = std::is_sorted(wf.map.begin(), wf.map.end());
            if (monotone) continue;
            ++nontrivial;
            CoaGraph lhs = interpret_w_op(decode_w_op(P.vcomp(ge, fe)));
            CoaGraph rhs = vertical_glue(interpret_w_op(wf), interpret_w_op(decode_w_op(ge)));
            CHECK(min_encode_ordered(lhs) == min_encode_ordered(rhs));
            if (nontrivial > 200) return;
        }
    CHECK(nontrivial > 0);
}

TEST_CASE("corrupted interchange is caught with a witness") {
    auto P = free_prop_on_operad(make_com_operad(), {"*"});
    SetProp bad = P;
    bad.vcomp_fn = [P](const ElValue& g, const ElValue& f) {
        ElValue r = P.vcomp(g, f);
        if (P.valence_of(r).outs.size() == 2) r = P.out_act(Perm({2, 1}), r);
        return r;
    };
    std::vector<CValence> probes = {cv(1, 1), cv(1, 2), cv(2, 2), cv(2, 1)};
    auto rep = check_prop_axioms(bad, probes, 0, 400, 13);
    CHECK_FALSE(rep.ok);
    CHECK(!rep.violations.empty());
}

TEST_CASE("terminal prop passes") {
    auto P = make_terminal_prop({"a", "b"});
    std::vector<CValence> probes = {CValence{{"a"}, {"b"}}, CValence{{"b"}, {"a"}},
                                    CValence{{"a", "b"}, {"a"}}, CValence{{}, {}}};
    auto rep = check_prop_axioms(P, probes, 0, 500, 17);
    for (const auto& v : rep.violations) MESSAGE(v);
    CHECK(rep.ok);
}

TEST_CASE("free symmetric monoidal category counts") {
    // one object, one morphism
    FinCategory one;
    one.objects = {"x"};
    one.arrows = {{"id_x", "x", "x"}};
    one.identities = {{"x", "id_x"}};
    auto P1 = free_symmetric_monoidal(one);
    long long fact = 1;
    for (int n = 0; n <= 4; ++n) {
        if (n > 0) fact *= n;
        CHECK(static_cast<long long>(P1.hom(cv(n, n, "x"), 0).elements.size()) == fact);
        if (n >= 1)
            CHECK(P1.hom(CValence{std::vector<Colour>(n, "x"), std::vector<Colour>(n - 1, "x")},
                         0)
                      .elements.empty());
    }

    // one object with a k-element monoid gives n! k^n
    for (int k = 1; k <= 3; ++k) {
        FinCategory mon;
        mon.objects = {"x"};
        for (int i = 0; i < k; ++i) mon.arrows.push_back({"g" + std::to_string(i), "x", "x"});
        mon.identities = {{"x", "g0"}};
        // cyclic monoid Z/k
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                mon.comp[{"g" + std::to_string(i), "g" + std::to_string(j)}] =
                    "g" + std::to_string((i + j) % k);
        auto P = free_symmetric_monoidal(mon);
        long long want = 1;
        for (int n = 0; n <= 3; ++n) {
            if (n > 0) want = want * n;  // running n!
            long long kn = 1;
            for (int i = 0; i < n; ++i) kn *= k;
            CHECK(static_cast<long long>(P.hom(cv(n, n, "x"), 0).elements.size()) == want * kn);
        }
    }
}

TEST_CASE("free symmetric monoidal agrees with the free prop on the unary operad") {
    FinCategory mon;
    mon.objects = {"x", "y"};
    mon.arrows = {{"id_x", "x", "x"}, {"id_y", "y", "y"}, {"h", "x", "y"}};
    mon.identities = {{"x", "id_x"}, {"y", "id_y"}};
    auto K = free_symmetric_monoidal(mon);
    auto W = free_prop_on_operad(operad_from_category(mon), mon.objects);
    std::vector<CValence> vals = {
        CValence{{"x", "y"}, {"y", "y"}}, CValence{{"x", "x"}, {"x", "y"}},
        CValence{{"x"}, {"y"}},           CValence{{"y"}, {"x"}},
        CValence{{}, {}},                 CValence{{"x", "y", "x"}, {"y", "y", "y"}},
    };
    for (const auto& v : vals)
        CHECK(K.hom(v, 0).elements.size() == W.hom(v, 0).elements.size());
    // compositions agree elementwise through the shared encoding
    for (const auto& fe : K.hom(CValence{{"x", "x"}, {"x", "y"}}, 0).elements)
        for (const auto& ge : K.hom(CValence{{"x", "y"}, {"y", "y"}}, 0).elements)
            CHECK(K.vcomp(ge, fe) == W.vcomp(ge, fe));
    auto rep = check_prop_axioms(K, vals, 0, 500, 19);
    for (const auto& v : rep.violations) MESSAGE(v);
    CHECK(rep.ok);
}

TEST_CASE("free prop on a bicollection: chain counting") {
    Bicollection a;
    a.colour_set = {"*"};
    a.support[cv(1, 1)] = {"g"};
    auto P = free_prop_on_bicollection(a);
    for (int k = 0; k <= 4; ++k) {
        auto hs = P.hom(cv(1, 1), k);
        CHECK(static_cast<int>(hs.elements.size()) == k + 1);
        CHECK_FALSE(hs.saturated);
    }
}

TEST_CASE("free prop on the empty bicollection: permutation classes only") {
    Bicollection a;
    a.colour_set = {"*"};
    auto P = free_prop_on_bicollection(a);
    auto hs = P.hom(cv(1, 1), 0);
    CHECK(hs.elements.size() == 1);
    CHECK(hs.saturated);
    CHECK(P.hom(cv(2, 2), 3).elements.size() == 2);
    CHECK(P.hom(cv(1, 2), 2).elements.empty());
    // composing the two wirings at (2,2) realizes the symmetric group
    auto two = P.hom(cv(2, 2), 0).elements;
    REQUIRE(two.size() == 2);
    CHECK(P.vcomp(two[0], two[1]) == two[1]);  // identity after crossing
    CHECK(P.vcomp(two[1], two[1]) == two[0]);  // crossing twice
    CHECK(two[0] == P.unit({"*", "*"}));
}

TEST_CASE("free prop on a bicollection is a prop") {
    Bicollection a;
    a.colour_set = {"a", "b"};
    a.support[CValence{{"a"}, {"b"}}] = {"g"};
    a.support[CValence{{"b", "a"}, {"a"}}] = {"h"};
    auto P = free_prop_on_bicollection(a);
    std::vector<CValence> probes = {
        CValence{{"a"}, {"b"}},      CValence{{"b"}, {"a"}},      CValence{{"a"}, {"a"}},
        CValence{{"b"}, {"b"}},      CValence{{"b", "a"}, {"a"}}, CValence{{"a", "b"}, {"a"}},
        CValence{{"a", "a"}, {"b"}}, CValence{{}, {}},
    };
    auto rep = check_prop_axioms(P, probes, 2, 300, 23);
    for (const auto& v : rep.violations) MESSAGE(v);
    CHECK(rep.ok);
}

TEST_CASE("one-output bicollections agree with the free prop on the free operad") {
    // one binary generator: the free operad consists of binary trees,
    // realized directly as the one-output coa graphs with binary nodes
    Bicollection a;
    a.colour_set = {"*"};
    a.support[cv(2, 1)] = {"mu"};

    SetOperad free_op;
    free_op.colours = {"*"};
    free_op.hom_fn = [](const Signature& s) -> std::vector<OpValue> {
        if (s.output != "*") return {};
        const int n = s.arity();
        for (const auto& c : s.inputs)
            if (c != "*") return {};
        std::set<OpValue> classes;
        if (n == 1) classes.insert(min_encode_ordered(enumerate_coa(Arity{{}, cv(1, 1)})[0]));
        const int nodes = n - 1;
        if (nodes >= 1) {
            Arity ar;
            ar.node_valences.assign(nodes, cv(2, 1));
            ar.residue = cv(n, 1);
            for (const auto& g : enumerate_coa(ar))
                if (is_tree(g.graph)) classes.insert(min_encode_ordered(g));
        }
        return std::vector<OpValue>(classes.begin(), classes.end());
    };
    // only hom is consulted by the free-prop construction
    free_op.compose_fn = [](const OpValue&, int, const OpValue&) -> OpValue {
        throw std::logic_error("not used");
    };
    free_op.act_fn = [](const Perm&, const OpValue&) -> OpValue {
        throw std::logic_error("not used");
    };
    free_op.unit_fn = [](const Colour&) -> OpValue { throw std::logic_error("not used"); };

    auto W = free_prop_on_operad(free_op, {"*"});
    auto F = free_prop_on_bicollection(a);
    for (int n = 1; n <= 3; ++n)
        for (int m = 1; m <= 2; ++m) {
            auto left = F.hom(cv(n, m), n).elements.size();
            auto right = W.hom(cv(n, m), 0).elements.size();
            CHECK(left == right);
        }
}

namespace {

// union-find count of (phi, decorations)-orbits under a set of
// position-permuting automorphisms; phi ranges over Aut(v)
int orbit_count(int aut_v, const std::vector<std::vector<int>>& deco_tuples,
                const std::vector<std::vector<int>>& position_autos) {
    // states: aut_v x deco tuples; autos permute decoration positions
    std::map<std::pair<int, std::vector<int>>, int> id;
    std::vector<int> parent;
    auto cell = [&](int phi, const std::vector<int>& d) {
        auto key = std::make_pair(phi, d);
        auto it = id.find(key);
        if (it != id.end()) return it->second;
        int n = static_cast<int>(parent.size());
        parent.push_back(n);
        id[key] = n;
        return n;
    };
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int phi = 0; phi < aut_v; ++phi)
        for (const auto& d : deco_tuples)
            for (const auto& a : position_autos) {
                std::vector<int> moved(d.size());
                for (std::size_t i = 0; i < d.size(); ++i) moved[a[i]] = d[i];
                int x = cell(phi, d), y = cell(phi, moved);
                parent[find(x)] = find(y);
            }
    std::set<int> roots;
    for (int i = 0; i < static_cast<int>(parent.size()); ++i) roots.insert(find(i));
    return static_cast<int>(roots.size());
}

}  // namespace

TEST_CASE("free symmetric bicollection and nullary orbit collapse") {
    Bicollection a;
    a.colour_set = {"*"};
    a.support[cv(0, 0)] = {"z"};
    auto sym = free_symmetric_bicollection(a);
    // a nullary-valence generator admits no twists
    CHECK(sym.base.support.at(cv(0, 0)).size() == 1);

    auto N = free_prop_on_sym_bicollection(sym);
    auto hs = N.hom(cv(0, 0), 2);
    // empty graph, one node, two nodes: the swap identifies the two node
    // orders of the two-node graph
    CHECK(hs.elements.size() == 3);

    // independent union-find oracle for the two-node contribution:
    // Aut(v) is trivial, one decoration tuple, the swap acts on positions
    CHECK(orbit_count(1, {{0, 0}}, {{0, 1}, {1, 0}}) == 1);
}

TEST_CASE("sym construction counts when automorphisms are trivial") {
    Bicollection a;
    a.colour_set = {"*"};
    a.support[cv(1, 1)] = {"g", "h"};
    auto sym = free_symmetric_bicollection(a);
    CHECK(sym.base.support.at(cv(1, 1)).size() == 2);
    auto N = free_prop_on_sym_bicollection(sym);
    // single (1,1) node inside valence (1,1): identity wiring + one node
    // decorated by either generator
    auto hs = N.hom(cv(1, 1), 1);
    CHECK(hs.elements.size() == 3);
    // oracle: |Aut(v)| x prod |A| with trivial automorphisms, per class
    CHECK(orbit_count(1, {{0}, {1}}, {{0}}) == 2);
    // permutation classes at (2,2), level 0
    CHECK(N.hom(cv(2, 2), 0).elements.size() == 2);
}

TEST_CASE("adjunction triangle: sym of free symmetric equals plain free") {
    Bicollection a;
    a.colour_set = {"*"};
    a.support[CValence{{"*", "*"}, {"*"}}] = {"m"};
    auto F = free_prop_on_bicollection(a);
    auto N = free_prop_on_sym_bicollection(free_symmetric_bicollection(a));
    std::vector<CValence> vals = {cv(2, 1), cv(1, 1), cv(3, 1), cv(2, 2), cv(0, 0)};
    for (const auto& v : vals)
        for (int level = 0; level <= 2; ++level)
            CHECK(F.hom(v, level).elements.size() == N.hom(v, level).elements.size());
}

TEST_CASE("sym prop satisfies the axioms on samples") {
    Bicollection a;
    a.colour_set = {"*"};
    a.support[cv(2, 1)] = {"m"};
    auto N = free_prop_on_sym_bicollection(free_symmetric_bicollection(a));
    std::vector<CValence> probes = {cv(1, 1), cv(2, 1), cv(2, 2), cv(1, 2)};
    auto rep = check_prop_axioms(N, probes, 1, 150, 29);
    for (const auto& v : rep.violations) MESSAGE(v);
    CHECK(rep.ok);
}
