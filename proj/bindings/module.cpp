#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "propcalc/json_io.hpp"
#include "propcalc/operad.hpp"
#include "propcalc/prop.hpp"
#include "propcalc/pushout.hpp"

namespace py = pybind11;
using namespace propcalc;
using nlohmann::json;

namespace {

SetOperad operad_by_name(const std::string& name, const std::vector<Colour>& colours) {
    if (name == "prop") return prop_operad(colours);
    if (name == "cf-prop") return cf_prop_operad(colours);
    if (name == "af-prop") return af_prop_operad(colours);
    if (name == "oper") return oper_suboperad(colours);
    if (name == "cat") return cat_suboperad(colours);
    if (name == "com") return make_com_operad(colours.size() == 1 ? colours[0] : "*");
    throw std::invalid_argument("unknown operad " + name);
}

std::vector<Signature> bounded_signatures(const std::vector<Colour>& colours, int max_nodes,
                                          int max_ports) {
    auto vals = bounded_valences(colours, max_ports, max_ports);
    std::vector<Signature> out;
    for (int n = 0; n <= max_nodes; ++n)
        for (const auto& s : signatures_with_inputs(vals, n)) out.push_back(s);
    return out;
}

}  // namespace

PYBIND11_MODULE(_propcalc, m) {
    m.doc() = "combinatorics of coloured props: graphs, insertion, operads and push-outs";

    // permutation bookkeeping
    m.def("unshuffle", [](const std::vector<int>& f, int range) {
        return unshuffle(f, range).images();
    });
    m.def("compose_perms", [](const std::vector<int>& p, const std::vector<int>& q) {
        return compose(Perm(p), Perm(q)).images();
    });
    m.def("block_perm", [](const std::vector<int>& sigma, const std::vector<int>& sizes) {
        return block_perm(Perm(sigma), OrderedPartition{sizes}).images();
    });
    m.def("twist", [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
        return twist(a, b).images();
    });
    m.def("insert_order", [](const std::vector<std::string>& alpha,
                             const std::vector<std::string>& beta, const std::string& d) {
        return insert_order(alpha, beta, d);
    });

    // graphs and enumeration; graphs cross the boundary as JSON strings
    m.def("enumerate_arity",
          [](const std::string& arity, const std::vector<Colour>& colours) {
              Arity a = parse_arity_string(arity, colours);
              std::vector<std::string> out;
              for (const auto& g : enumerate_coa(a)) out.push_back(coa_to_json(g).dump());
              return out;
          });
    m.def("canonical_encode", [](const std::string& coa_json) {
        return canonical_encode(coa_from_json(json::parse(coa_json)));
    });
    m.def("canonical_decode", [](const std::string& enc) {
        return coa_to_json(canonical_decode(enc)).dump();
    });
    m.def("insert_graph", [](const std::string& g_json, int slot, const std::string& h_json) {
        CoaGraph g = coa_from_json(json::parse(g_json));
        CoaGraph h = coa_from_json(json::parse(h_json));
        if (slot < 1 || slot > g.nodes()) throw std::invalid_argument("slot out of range");
        return coa_to_json(canonical_form(insert(g, g.node_order[slot - 1], h)).graph).dump();
    });

    // the operad of graphs and its relatives
    m.def("operad_hom", [](const std::string& name, const std::vector<Colour>& colours,
                           const std::vector<std::string>& inputs, const std::string& output) {
        return operad_by_name(name, colours).hom(Signature{inputs, output});
    });
    m.def("operad_compose",
          [](const std::string& name, const std::vector<Colour>& colours, const std::string& o,
             int slot, const std::string& p) {
              return operad_by_name(name, colours).compose_at(o, slot, p);
          });
    m.def("operad_act", [](const std::string& name, const std::vector<Colour>& colours,
                           const std::vector<int>& perm, const std::string& o) {
        return operad_by_name(name, colours).act(Perm(perm), o);
    });
    m.def("operad_unit", [](const std::string& name, const std::vector<Colour>& colours,
                            const std::string& colour) {
        return operad_by_name(name, colours).unit(colour);
    });
    m.def("encode_valence", [](const std::vector<Colour>& ins, const std::vector<Colour>& outs) {
        return encode_cvalence(CValence{ins, outs});
    });

    m.def("check_operad", [](const std::string& name, const std::vector<Colour>& colours,
                             int max_nodes, int max_ports, long long samples,
                             std::uint64_t seed) {
        auto rep = check_operad_axioms(operad_by_name(name, colours),
                                       bounded_signatures(colours, max_nodes, max_ports),
                                       samples, samples, seed);
        json out;
        out["ok"] = rep.ok;
        out["checks"] = rep.checks;
        out["violations"] = rep.violations;
        return out.dump();
    });

    m.def("sigma_free", [](const std::string& name, const std::vector<Colour>& colours,
                           int max_nodes, int max_ports) {
        auto rep = is_sigma_free(operad_by_name(name, colours),
                                 bounded_signatures(colours, max_nodes, max_ports));
        json out;
        out["free"] = rep.free;
        if (rep.witness) {
            out["witness"] = {{"inputs", rep.witness->signature.inputs},
                              {"output", rep.witness->signature.output},
                              {"perm", rep.witness->perm.images()},
                              {"op", rep.witness->op}};
        }
        return out.dump();
    });

    // free constructions
    m.def("free_com_count", [](int n, int m_out) {
        auto p = free_prop_on_operad(make_com_operad(), {"*"});
        CValence v;
        v.ins.assign(n, "*");
        v.outs.assign(m_out, "*");
        return p.hom(v, 0).elements.size();
    });
    m.def("free_bicollection_counts",
          [](const std::string& bicollection_json, const std::string& valence,
             int max_level) {
              Bicollection b = bicollection_from_json(json::parse(bicollection_json));
              auto p = free_prop_on_bicollection(b);
              CValence v = parse_valence_string(valence, b.colour_set);
              std::vector<std::pair<std::size_t, bool>> out;
              for (int k = 0; k <= max_level; ++k) {
                  auto hs = p.hom(v, k);
                  out.push_back({hs.elements.size(), hs.saturated});
              }
              return out;
          });

    // push-outs
    m.def("pushout_report", [](const std::string& problem_json, const std::string& valence,
                               int max_nodes) {
        PushoutProblem prob = pushout_problem_from_json(json::parse(problem_json));
        CValence v = parse_valence_string(valence, prob.c_colours);
        auto colim = pushout_component(prob, v, max_nodes);
        auto ff = verify_fully_faithful(prob, {v}, max_nodes, max_nodes);
        json out;
        out["classes"] = colim.class_count;
        out["stabilized"] = colim.stabilized;
        out["p_elements"] = ff.entries.at(0).p_elements;
        out["injective"] = ff.entries.at(0).injective;
        out["bijective"] = ff.entries.at(0).bijective;
        return out.dump();
    });
}
