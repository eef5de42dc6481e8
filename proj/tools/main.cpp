// Batch command-line interface: enumeration, composition, verification,
// free-construction counting, push-out computation and DOT export.
// Machine-readable JSON goes to stdout, human summaries to stderr.
// Exit codes: 0 success or verification pass, 1 verification fail (with a
// witness), 2 malformed input.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "propcalc/dot.hpp"
#include "propcalc/json_io.hpp"
#include "propcalc/operad.hpp"
#include "propcalc/prop.hpp"
#include "propcalc/pushout.hpp"

using namespace propcalc;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitBadInput = 2;

std::vector<Colour> parse_colours(const std::string& spec) {
    // a number means that many anonymous colours; otherwise a comma list
    if (!spec.empty() && std::all_of(spec.begin(), spec.end(), [](char c) {
            return std::isdigit(static_cast<unsigned char>(c));
        })) {
        int n = std::stoi(spec);
        if (n == 1) return {"*"};
        std::vector<Colour> out;
        for (int i = 0; i < n; ++i) out.push_back("c" + std::to_string(i + 1));
        return out;
    }
    std::vector<Colour> out;
    std::string cur;
    for (char c : spec) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    if (out.empty()) throw std::invalid_argument("no colours given");
    return out;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    json j;
    in >> j;
    return j;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

SetOperad named_operad(const std::string& name, const std::vector<Colour>& colours) {
    if (name == "prop") return prop_operad(colours);
    if (name == "cf-prop") return cf_prop_operad(colours);
    if (name == "af-prop") return af_prop_operad(colours);
    if (name == "oper") return oper_suboperad(colours);
    if (name == "cat") return cat_suboperad(colours);
    if (name == "com") return make_com_operad(colours.size() == 1 ? colours[0] : "*");
    // otherwise a table operad from a file
    return make_table_operad(table_operad_from_json(load_json(name)));
}

bool graph_backed(const std::string& name) {
    return name == "prop" || name == "cf-prop" || name == "af-prop" || name == "oper" ||
           name == "cat";
}

// signatures whose operations have at most max_nodes nodes, ports bounded
std::vector<Signature> graph_signatures(const std::vector<Colour>& colours, int max_nodes,
                                        int max_ports) {
    auto vals = bounded_valences(colours, max_ports, max_ports);
    std::vector<Signature> out;
    for (int n = 0; n <= max_nodes; ++n)
        for (const auto& s : signatures_with_inputs(vals, n)) out.push_back(s);
    return out;
}

std::vector<Signature> table_signatures(const std::vector<Colour>& cs, int max_inputs) {
    std::vector<Signature> probes;
    for (int n = 0; n <= max_inputs; ++n) {
        if (cs.empty()) break;
        std::vector<int> pick(n, 0);
        for (;;) {
            for (const auto& out : cs) {
                Signature s;
                for (int i = 0; i < n; ++i) s.inputs.push_back(cs[pick[i]]);
                s.output = out;
                probes.push_back(s);
            }
            int i = 0;
            while (i < n && pick[i] + 1 == static_cast<int>(cs.size())) pick[i++] = 0;
            if (i == n) break;
            ++pick[i];
        }
    }
    return probes;
}

json signature_to_json_out(const Signature& s) {
    json j;
    j["inputs"] = s.inputs;
    j["output"] = s.output;
    return j;
}

int cmd_enumerate(const std::string& colour_spec, const std::string& arity_str,
                  const std::string& dot_dir) {
    auto colours = parse_colours(colour_spec);
    Arity a = parse_arity_string(arity_str, colours);
    auto graphs = enumerate_coa(a);
    json out;
    out["count"] = graphs.size();
    out["graphs"] = json::array();
    for (const auto& g : graphs) out["graphs"].push_back(coa_to_json(g));
    emit(out);
    if (!dot_dir.empty()) {
        std::filesystem::create_directories(dot_dir);
        for (std::size_t i = 0; i < graphs.size(); ++i) {
            std::ofstream f(dot_dir + "/graph" + std::to_string(i + 1) + ".dot");
            f << coa_to_dot(graphs[i], "g" + std::to_string(i + 1));
        }
    }
    std::cerr << graphs.size() << " isomorphism classes\n";
    return kExitPass;
}

int cmd_compose(const std::string& lhs, int slot, const std::string& rhs) {
    CoaGraph g = coa_from_json(load_json(lhs));
    CoaGraph h = coa_from_json(load_json(rhs));
    if (slot < 1 || slot > g.nodes()) throw std::invalid_argument("slot out of range");
    CoaGraph r = insert(g, g.node_order[slot - 1], h);
    emit(coa_to_json(canonical_form(r).graph));
    std::cerr << "composed at slot " << slot << "\n";
    return kExitPass;
}

int cmd_verify_operad(const std::string& name, const std::string& colour_spec, int max_nodes,
                      int max_ports, long long samples, std::uint64_t seed) {
    auto colours = parse_colours(colour_spec);
    auto op = named_operad(name, colours);
    std::vector<Signature> probes = graph_backed(name) || !op.colours
                                        ? graph_signatures(colours, max_nodes, max_ports)
                                        : table_signatures(*op.colours, max_nodes);
    auto rep = check_operad_axioms(op, probes, samples, samples, seed);
    json out;
    out["ok"] = rep.ok;
    out["checks"] = rep.checks;
    out["violations"] = rep.violations;
    emit(out);
    std::cerr << (rep.ok ? "axioms hold" : "axioms violated") << " after " << rep.checks
              << " checks\n";
    return rep.ok ? kExitPass : kExitFail;
}

int cmd_sigma_free(const std::string& name, const std::string& colour_spec, int max_nodes,
                   int max_ports) {
    auto colours = parse_colours(colour_spec);
    auto op = named_operad(name, colours);
    auto rep = is_sigma_free(op, graph_signatures(colours, max_nodes, max_ports));
    json out;
    out["free"] = rep.free;
    if (rep.witness) {
        json w;
        w["signature"] = signature_to_json_out(rep.witness->signature);
        w["perm"] = rep.witness->perm.images();
        w["op"] = rep.witness->op;
        out["witness"] = w;
    }
    emit(out);
    std::cerr << (rep.free ? "action is free" : "fixed point found") << "\n";
    return rep.free ? kExitPass : kExitFail;
}

int cmd_count_free(const std::string& operad_name, const std::string& colour_spec, int n, int m,
                   const std::string& bicollection_path, const std::string& valence_str,
                   int level, const std::string& category_path) {
    json out;
    if (!bicollection_path.empty()) {
        Bicollection b = bicollection_from_json(load_json(bicollection_path));
        auto P = free_prop_on_bicollection(b);
        CValence v = parse_valence_string(valence_str, b.colour_set);
        out["levels"] = json::array();
        for (int k = 0; k <= level; ++k) {
            auto hs = P.hom(v, k);
            json row;
            row["level"] = k;
            row["count"] = hs.elements.size();
            row["saturated"] = hs.saturated;
            out["levels"].push_back(row);
        }
        emit(out);
        std::cerr << "graded counts up to level " << level << "\n";
        return kExitPass;
    }
    if (!category_path.empty()) {
        FinCategory c = category_from_json(load_json(category_path));
        auto P = free_symmetric_monoidal(c);
        if (c.objects.size() != 1)
            throw std::invalid_argument("count-free over a category needs one object");
        CValence v;
        v.ins.assign(n, c.objects[0]);
        v.outs.assign(m, c.objects[0]);
        out["count"] = P.hom(v, 0).elements.size();
        emit(out);
        return kExitPass;
    }
    auto colours = parse_colours(colour_spec);
    auto op = named_operad(operad_name, colours);
    auto P = free_prop_on_operad(op, colours);
    if (colours.size() != 1)
        throw std::invalid_argument("count-free with --n/--m needs one colour");
    CValence v;
    v.ins.assign(n, colours[0]);
    v.outs.assign(m, colours[0]);
    out["count"] = P.hom(v, 0).elements.size();
    emit(out);
    std::cerr << "hom(" << n << ";" << m << ")\n";
    return kExitPass;
}

int cmd_verify_prop(const std::string& kind, const std::string& colour_spec,
                    const std::string& bicollection_path, int level, int max_ports,
                    long long samples, std::uint64_t seed) {
    SetProp p;
    std::vector<Colour> colours;
    if (!bicollection_path.empty()) {
        Bicollection b = bicollection_from_json(load_json(bicollection_path));
        p = free_prop_on_bicollection(b);
        colours = b.colour_set;
    } else {
        colours = parse_colours(colour_spec);
        if (kind == "terminal") {
            p = make_terminal_prop(colours);
        } else if (kind == "free-com") {
            p = free_prop_on_operad(make_com_operad(colours.size() == 1 ? colours[0] : "*"),
                                    colours);
        } else {
            throw std::invalid_argument("unknown prop kind " + kind);
        }
    }
    std::vector<CValence> probes = bounded_valences(colours, max_ports, max_ports);
    auto rep = check_prop_axioms(p, probes, level, samples, seed);
    json out;
    out["ok"] = rep.ok;
    out["checks"] = rep.checks;
    out["violations"] = rep.violations;
    emit(out);
    std::cerr << (rep.ok ? "axioms hold" : "axioms violated") << " after " << rep.checks
              << " checks\n";
    return rep.ok ? kExitPass : kExitFail;
}

int cmd_grothendieck(const std::string& family_path, const std::string& signature_json,
                     bool verify, long long samples, std::uint64_t seed) {
    OperadicFamily fam = operadic_family_from_json(load_json(family_path));
    auto G = grothendieck(fam);
    json out;
    if (!signature_json.empty()) {
        json sj = json::parse(signature_json);
        Signature s;
        for (const auto& c : sj.at("inputs"))
            s.inputs.push_back(
                encode_pair_colour(c.at(0).get<std::string>(), c.at(1).get<std::string>()));
        s.output = encode_pair_colour(sj.at("output").at(0).get<std::string>(),
                                      sj.at("output").at(1).get<std::string>());
        auto ops = G.hom(s);
        out["count"] = ops.size();
        out["ops"] = json::array();
        for (const auto& op : ops) {
            TaggedOp t = decode_tagged_op(op);
            json jt;
            jt["morphisms"] = t.fs;
            jt["op"] = t.op;
            out["ops"].push_back(jt);
        }
    }
    if (verify) {
        std::vector<Signature> probes;
        if (G.colours)
            for (const auto& c : *G.colours) {
                probes.push_back(Signature{{}, c});
                probes.push_back(Signature{{c}, c});
                for (const auto& d : *G.colours) probes.push_back(Signature{{c, d}, c});
            }
        auto rep = check_operad_axioms(G, probes, samples, samples, seed);
        out["ok"] = rep.ok;
        out["checks"] = rep.checks;
        out["violations"] = rep.violations;
        emit(out);
        std::cerr << (rep.ok ? "axioms hold" : "axioms violated") << "\n";
        return rep.ok ? kExitPass : kExitFail;
    }
    emit(out);
    return kExitPass;
}

int cmd_pushout(const std::string& problem_path, const std::string& valence_str, int max_nodes,
                const std::string& dot_dir) {
    PushoutProblem prob = pushout_problem_from_json(load_json(problem_path));
    CValence v = parse_valence_string(valence_str, prob.c_colours);
    auto vrep = validate_problem(prob, {v});
    auto colim = pushout_component(prob, v, max_nodes);
    auto ff = verify_fully_faithful(prob, {v}, max_nodes, max_nodes);
    json out;
    out["problem_ok"] = vrep.ok;
    out["problem_violations"] = vrep.violations;
    out["classes"] = colim.class_count;
    out["objects"] = colim.object_count;
    out["stabilized"] = colim.stabilized;
    const auto& e = ff.entries.at(0);
    out["p_elements"] = e.p_elements;
    out["injective"] = e.injective;
    out["bijective"] = e.bijective;
    emit(out);
    if (!dot_dir.empty()) {
        std::filesystem::create_directories(dot_dir);
        int i = 0;
        for (const auto& rep : colim.representatives) {
            json cell = json::parse(rep);
            CoaGraph g = canonical_decode(cell.at("g").get<std::string>());
            auto marks = cell.at("m").get<std::vector<std::string>>();
            std::ofstream f(dot_dir + "/class" + std::to_string(++i) + ".dot");
            f << coa_to_dot(g, "class" + std::to_string(i), marks);
        }
    }
    std::cerr << colim.class_count << " classes, "
              << (colim.stabilized ? "stabilized" : "not stabilized") << ", "
              << (e.bijective ? "bijective" : e.injective ? "injective" : "not injective")
              << "\n";
    bool pass = vrep.ok && e.injective && (!colim.stabilized || e.bijective);
    return pass ? kExitPass : kExitFail;
}

int cmd_export_dot(const std::string& input, const std::string& out_dir,
                   const std::string& kind) {
    json j = load_json(input);
    std::filesystem::create_directories(out_dir);
    std::ofstream f(out_dir + "/graph.dot");
    if (kind == "graph") {
        f << graph_to_dot(graph_from_json(j));
    } else if (kind == "coa") {
        f << coa_to_dot(coa_from_json(j));
    } else if (kind == "marked") {
        CoaGraph g = coa_from_json(j.at("graph"));
        auto marks = j.at("marks").get<std::vector<std::string>>();
        f << coa_to_dot(g, "g", marks);
    } else {
        throw std::invalid_argument("unknown kind " + kind);
    }
    std::cerr << "wrote " << out_dir << "/graph.dot\n";
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"combinatorics of coloured props: ordered acyclic graphs, insertion, operads, "
                 "free props and push-outs"};
    app.require_subcommand(1);

    std::string colours = "1", arity, dot_dir, lhs, rhs, operad_name = "prop";
    std::string bicollection_path, category_path, valence_str, family_path, signature_json;
    std::string problem_path, input_path, out_dir, kind = "coa", prop_kind = "free-com";
    int slot = 1, max_nodes = 2, max_ports = 2, n = 0, m = 0, level = 3;
    long long samples = 5000;
    std::uint64_t seed = 1;
    bool verify = false;

    auto* enumerate = app.add_subcommand("enumerate", "isomorphism classes at an arity");
    enumerate->add_option("--colours", colours);
    enumerate->add_option("--arity", arity)->required();
    enumerate->add_option("--emit-dot", dot_dir);

    auto* compose = app.add_subcommand("compose", "insert one graph into a node of another");
    compose->add_option("--lhs", lhs)->required();
    compose->add_option("--slot", slot)->required();
    compose->add_option("--rhs", rhs)->required();

    auto* vop = app.add_subcommand("verify-operad", "check the operad axioms");
    vop->add_option("--operad", operad_name);
    vop->add_option("--colours", colours);
    vop->add_option("--max-nodes", max_nodes);
    vop->add_option("--max-ports", max_ports);
    vop->add_option("--samples", samples);
    vop->add_option("--seed", seed);

    auto* vprop = app.add_subcommand("verify-prop", "check the prop axioms");
    vprop->add_option("--prop", prop_kind);
    vprop->add_option("--colours", colours);
    vprop->add_option("--bicollection", bicollection_path);
    vprop->add_option("--level", level);
    vprop->add_option("--max-ports", max_ports);
    vprop->add_option("--samples", samples);
    vprop->add_option("--seed", seed);

    auto* sf = app.add_subcommand("sigma-free", "check freeness of the permutation actions");
    sf->add_option("--operad", operad_name);
    sf->add_option("--colours", colours);
    sf->add_option("--max-nodes", max_nodes);
    sf->add_option("--max-ports", max_ports);

    auto* gr = app.add_subcommand("grothendieck", "glue an operadic family");
    gr->add_option("--family", family_path)->required();
    gr->add_option("--signature", signature_json);
    gr->add_flag("--verify", verify);
    gr->add_option("--samples", samples);
    gr->add_option("--seed", seed);

    auto* cf = app.add_subcommand("count-free", "cardinalities of free constructions");
    cf->add_option("--operad", operad_name);
    cf->add_option("--colours", colours);
    cf->add_option("--n", n);
    cf->add_option("--m", m);
    cf->add_option("--bicollection", bicollection_path);
    cf->add_option("--category", category_path);
    cf->add_option("--valence", valence_str);
    cf->add_option("--level", level);

    auto* po = app.add_subcommand("pushout", "push-out of a prop along an operad inclusion");
    po->add_option("--problem", problem_path)->required();
    po->add_option("--valence", valence_str)->required();
    po->add_option("--max-nodes", max_nodes);
    po->add_option("--emit-dot", dot_dir);

    auto* ed = app.add_subcommand("export-dot", "render a graph file");
    ed->add_option("--input", input_path)->required();
    ed->add_option("--out", out_dir)->required();
    ed->add_option("--kind", kind);

    CLI11_PARSE(app, argc, argv);

    try {
        if (enumerate->parsed()) return cmd_enumerate(colours, arity, dot_dir);
        if (compose->parsed()) return cmd_compose(lhs, slot, rhs);
        if (vop->parsed())
            return cmd_verify_operad(operad_name, colours, max_nodes, max_ports, samples, seed);
        if (vprop->parsed())
            return cmd_verify_prop(prop_kind, colours, bicollection_path, level, max_ports,
                                   samples, seed);
        if (sf->parsed()) return cmd_sigma_free(operad_name, colours, max_nodes, max_ports);
        if (gr->parsed())
            return cmd_grothendieck(family_path, signature_json, verify, samples, seed);
        if (cf->parsed())
            return cmd_count_free(operad_name, colours, n, m, bicollection_path, valence_str,
                                  level, category_path);
        if (po->parsed()) return cmd_pushout(problem_path, valence_str, max_nodes, dot_dir);
        if (ed->parsed()) return cmd_export_dot(input_path, out_dir, kind);
    } catch (const std::exception& e) {
        json err;
        err["error"] = e.what();
        emit(err);
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
    return kExitBadInput;
}
