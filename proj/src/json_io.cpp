#include "propcalc/json_io.hpp"

#include <stdexcept>

namespace propcalc {

using nlohmann::json;

json perm_to_json(const Perm& p) {
    json j;
    j["perm"] = p.images();
    return j;
}

Perm perm_from_json(const json& j) {
    return Perm(j.at("perm").get<std::vector<int>>());
}

namespace {

json opt_node(const std::optional<int>& n) {
    if (!n) return nullptr;
    return *n + 1;
}

std::optional<int> node_opt(const json& j, int node_count) {
    if (j.is_null()) return std::nullopt;
    int v = j.get<int>();
    if (v < 1 || v > node_count) throw std::invalid_argument("graph json: node out of range");
    return v - 1;
}

std::vector<int> one_based_list(const std::vector<int>& v) {
    std::vector<int> out;
    for (int x : v) out.push_back(x + 1);
    return out;
}

std::vector<int> zero_based_list(const json& j, int bound, const char* what) {
    std::vector<int> out;
    for (const auto& x : j) {
        int v = x.get<int>();
        if (v < 1 || v > bound) throw std::invalid_argument(std::string("json: ") + what + " out of range");
        out.push_back(v - 1);
    }
    return out;
}

}  // namespace

json graph_to_json(const Graph& g) {
    json j;
    j["edges"] = g.edge_count;
    j["nodes"] = g.node_count;
    j["enters"] = json::array();
    j["exits"] = json::array();
    for (int e = 0; e < g.edge_count; ++e) {
        j["enters"].push_back(opt_node(g.enters[e]));
        j["exits"].push_back(opt_node(g.exits[e]));
    }
    return j;
}

Graph graph_from_json(const json& j) {
    Graph g;
    g.edge_count = j.at("edges").get<int>();
    g.node_count = j.at("nodes").get<int>();
    for (const auto& x : j.at("enters")) g.enters.push_back(node_opt(x, g.node_count));
    for (const auto& x : j.at("exits")) g.exits.push_back(node_opt(x, g.node_count));
    validate_graph(g);
    return g;
}

json coa_to_json(const CoaGraph& g) {
    json j;
    j["graph"] = graph_to_json(g.graph);
    j["labels"] = g.labels;
    j["node_in"] = json::array();
    j["node_out"] = json::array();
    for (int x = 0; x < g.nodes(); ++x) {
        j["node_in"].push_back(one_based_list(g.node_in[x]));
        j["node_out"].push_back(one_based_list(g.node_out[x]));
    }
    j["port_in"] = one_based_list(g.port_in);
    j["port_out"] = one_based_list(g.port_out);
    j["node_order"] = one_based_list(g.node_order);
    return j;
}

CoaGraph coa_from_json(const json& j) {
    CoaGraph g;
    g.graph = graph_from_json(j.at("graph"));
    g.labels = j.at("labels").get<std::vector<Colour>>();
    for (const auto& x : j.at("node_in")) g.node_in.push_back(zero_based_list(x, g.edges(), "edge"));
    for (const auto& x : j.at("node_out"))
        g.node_out.push_back(zero_based_list(x, g.edges(), "edge"));
    g.port_in = zero_based_list(j.at("port_in"), g.edges(), "edge");
    g.port_out = zero_based_list(j.at("port_out"), g.edges(), "edge");
    g.node_order = zero_based_list(j.at("node_order"), g.nodes(), "node");
    validate_coa(g);
    return g;
}

json cvalence_to_json(const CValence& v) {
    json j;
    j["in"] = v.ins;
    j["out"] = v.outs;
    return j;
}

CValence cvalence_from_json(const json& j) {
    CValence v;
    v.ins = j.at("in").get<std::vector<Colour>>();
    v.outs = j.at("out").get<std::vector<Colour>>();
    return v;
}

json arity_to_json(const Arity& a) {
    json j;
    j["nodes"] = json::array();
    for (const auto& v : a.node_valences) j["nodes"].push_back(cvalence_to_json(v));
    j["residue"] = cvalence_to_json(a.residue);
    return j;
}

Arity arity_from_json(const json& j) {
    Arity a;
    for (const auto& v : j.at("nodes")) a.node_valences.push_back(cvalence_from_json(v));
    a.residue = cvalence_from_json(j.at("residue"));
    return a;
}

namespace {

Signature signature_from_json(const json& j) {
    Signature s;
    s.inputs = j.at("inputs").get<std::vector<Colour>>();
    s.output = j.at("output").get<Colour>();
    return s;
}

json signature_to_json(const Signature& s) {
    json j;
    j["inputs"] = s.inputs;
    j["output"] = s.output;
    return j;
}

}  // namespace

TableOperad table_operad_from_json(const json& j) {
    TableOperad t;
    t.colours = j.at("colours").get<std::vector<Colour>>();
    for (const auto& h : j.at("homs"))
        t.homs[signature_from_json(h)] = h.at("ops").get<std::vector<OpValue>>();
    for (const auto& c : j.at("compositions"))
        t.compositions[{c.at("outer").get<OpValue>(), c.at("slot").get<int>(),
                        c.at("inner").get<OpValue>()}] = c.at("result").get<OpValue>();
    if (j.contains("actions"))
        for (const auto& a : j.at("actions"))
            t.actions[{a.at("perm").get<std::vector<int>>(), a.at("op").get<OpValue>()}] =
                a.at("result").get<OpValue>();
    for (const auto& [c, u] : j.at("units").items()) t.units[c] = u.get<OpValue>();
    return t;
}

json table_operad_to_json(const TableOperad& t) {
    json j;
    j["colours"] = t.colours;
    j["homs"] = json::array();
    for (const auto& [s, ops] : t.homs) {
        json h = signature_to_json(s);
        h["ops"] = ops;
        j["homs"].push_back(h);
    }
    j["compositions"] = json::array();
    for (const auto& [key, result] : t.compositions) {
        json c;
        c["outer"] = std::get<0>(key);
        c["slot"] = std::get<1>(key);
        c["inner"] = std::get<2>(key);
        c["result"] = result;
        j["compositions"].push_back(c);
    }
    j["actions"] = json::array();
    for (const auto& [key, result] : t.actions) {
        json a;
        a["perm"] = key.first;
        a["op"] = key.second;
        a["result"] = result;
        j["actions"].push_back(a);
    }
    j["units"] = json::object();
    for (const auto& [c, u] : t.units) j["units"][c] = u;
    return j;
}

FinCategory category_from_json(const json& j) {
    FinCategory c;
    c.objects = j.at("objects").get<std::vector<std::string>>();
    for (const auto& a : j.at("arrows"))
        c.arrows.push_back({a.at("id").get<std::string>(), a.at("src").get<std::string>(),
                            a.at("dst").get<std::string>()});
    for (const auto& [obj, id] : j.at("identities").items()) c.identities[obj] = id;
    if (j.contains("compositions"))
        for (const auto& e : j.at("compositions"))
            c.comp[{e.at("second").get<std::string>(), e.at("first").get<std::string>()}] =
                e.at("result").get<std::string>();
    c.validate();
    return c;
}

OperadicFamily operadic_family_from_json(const json& j) {
    OperadicFamily f;
    f.index = category_from_json(j.at("index"));
    std::map<std::string, TableOperad> tables;
    for (const auto& [obj, t] : j.at("fibres").items()) {
        tables[obj] = table_operad_from_json(t);
        f.fibre[obj] = make_table_operad(tables[obj]);
    }
    for (const auto& [arrow, m] : j.at("transports").items()) {
        auto colour_map = std::make_shared<std::map<Colour, Colour>>();
        auto op_map = std::make_shared<std::map<OpValue, OpValue>>();
        for (const auto& [from, to] : m.at("colours").items()) (*colour_map)[from] = to;
        if (m.contains("ops"))
            for (const auto& [from, to] : m.at("ops").items()) (*op_map)[from] = to;
        OperadMorphism mor;
        mor.colour_map = [colour_map](const Colour& c) {
            auto it = colour_map->find(c);
            if (it == colour_map->end())
                throw std::invalid_argument("transport: unmapped colour " + c);
            return it->second;
        };
        mor.op_map = [op_map](const Signature&, const OpValue& op) {
            auto it = op_map->find(op);
            if (it == op_map->end()) return op;  // identity-on-operations default
            return it->second;
        };
        f.transport[arrow] = mor;
    }
    return f;
}

Bicollection bicollection_from_json(const json& j) {
    Bicollection b;
    b.colour_set = j.at("colours").get<std::vector<Colour>>();
    for (const auto& s : j.at("support"))
        b.support[cvalence_from_json(s.at("valence"))] =
            s.at("elements").get<std::vector<ElValue>>();
    return b;
}

// ---- arity strings ----

namespace {

struct Parser {
    const std::string& text;
    const std::vector<Colour>& colours;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("arity parse error at position " + std::to_string(pos) +
                                    ": " + what);
    }
    char peek() const { return pos < text.size() ? text[pos] : '\0'; }
    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos;
    }
    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    std::string token() {
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_' ||
                text[pos] == '*'))
            ++pos;
        if (pos == start) fail("expected a name or number");
        return text.substr(start, pos - start);
    }

    // (n,m) shorthand over a single colour, or ((a,b),(c)) with words
    CValence valence() {
        skip_ws();
        expect('(');
        skip_ws();
        CValence v;
        if (peek() == '(') {
            v.ins = word();
            skip_ws();
            expect(',');
            v.outs = word();
            skip_ws();
            expect(')');
            return v;
        }
        std::string a = token();
        skip_ws();
        expect(',');
        skip_ws();
        std::string b = token();
        skip_ws();
        expect(')');
        if (colours.size() != 1)
            fail("the (n,m) shorthand needs exactly one declared colour");
        for (char c : a + b)
            if (!std::isdigit(static_cast<unsigned char>(c)))
                fail("expected numbers in the (n,m) shorthand");
        v.ins.assign(std::stoi(a), colours[0]);
        v.outs.assign(std::stoi(b), colours[0]);
        return v;
    }

    std::vector<Colour> word() {
        skip_ws();
        expect('(');
        std::vector<Colour> out;
        skip_ws();
        while (peek() != ')') {
            std::string c = token();
            if (std::find(colours.begin(), colours.end(), c) == colours.end())
                fail("unknown colour '" + c + "'");
            out.push_back(c);
            skip_ws();
            if (peek() == ',') {
                ++pos;
                skip_ws();
            }
        }
        expect(')');
        return out;
    }

    Arity arity() {
        skip_ws();
        expect('(');
        Arity a;
        skip_ws();
        while (peek() != ';') {
            a.node_valences.push_back(valence());
            skip_ws();
            if (peek() == ',') {
                ++pos;
                skip_ws();
            }
        }
        expect(';');
        a.residue = valence();
        skip_ws();
        expect(')');
        skip_ws();
        if (pos != text.size()) fail("trailing characters");
        return a;
    }
};

}  // namespace

Arity parse_arity_string(const std::string& text, const std::vector<Colour>& colours) {
    Parser p{text, colours};
    return p.arity();
}

CValence parse_valence_string(const std::string& text, const std::vector<Colour>& colours) {
    Parser p{text, colours};
    CValence v = p.valence();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing characters");
    return v;
}

}  // namespace propcalc
