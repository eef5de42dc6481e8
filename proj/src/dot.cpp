#include "propcalc/dot.hpp"

#include <sstream>

namespace propcalc {

std::string graph_to_dot(const Graph& g, const std::string& name) {
    std::ostringstream out;
    out << "digraph " << name << " {\n  rankdir=TB;\n  node [shape=circle];\n";
    for (int x = 0; x < g.node_count; ++x) out << "  n" << x << ";\n";
    auto r = residue(g);
    for (int e : r.inports) out << "  in" << e << " [shape=none, label=\"\"];\n";
    for (int e : r.exports) out << "  out" << e << " [shape=none, label=\"\"];\n";
    for (int e = 0; e < g.edge_count; ++e) {
        std::string src = g.exits[e] ? "n" + std::to_string(*g.exits[e]) : "in" + std::to_string(e);
        std::string dst = g.enters[e] ? "n" + std::to_string(*g.enters[e]) : "out" + std::to_string(e);
        out << "  " << src << " -> " << dst << " [label=\"e" << e + 1 << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

std::string coa_to_dot(const CoaGraph& g, const std::string& name,
                       const std::vector<std::string>& marks) {
    std::ostringstream out;
    out << "digraph " << name << " {\n  rankdir=TB;\n";
    std::vector<int> position(g.nodes());
    for (int i = 0; i < g.nodes(); ++i) position[g.node_order[i]] = i + 1;
    for (int x = 0; x < g.nodes(); ++x) {
        std::string shape = "circle";
        if (!marks.empty()) {
            if (marks[x] == "A") shape = "invtriangle";
            else if (marks[x] == "B") shape = "triangle, orientation=270";
            else if (marks[x] == "O") shape = "diamond";
        }
        out << "  n" << x << " [shape=" << shape << ", label=\"" << position[x] << "\"];\n";
    }
    // graph ports laid out left to right on their own ranks
    out << "  { rank=source;";
    for (std::size_t k = 0; k < g.port_in.size(); ++k) out << " pi" << k << ";";
    out << " }\n  { rank=sink;";
    for (std::size_t k = 0; k < g.port_out.size(); ++k) out << " po" << k << ";";
    out << " }\n";
    for (std::size_t k = 0; k < g.port_in.size(); ++k)
        out << "  pi" << k << " [shape=none, label=\"" << k + 1 << "\"];\n";
    for (std::size_t k = 0; k < g.port_out.size(); ++k)
        out << "  po" << k << " [shape=none, label=\"" << k + 1 << "\"];\n";
    std::vector<int> in_pos(g.edges(), -1), out_pos(g.edges(), -1);
    for (std::size_t k = 0; k < g.port_in.size(); ++k) in_pos[g.port_in[k]] = static_cast<int>(k);
    for (std::size_t k = 0; k < g.port_out.size(); ++k) out_pos[g.port_out[k]] = static_cast<int>(k);
    for (int e = 0; e < g.edges(); ++e) {
        std::string src = g.graph.exits[e] ? "n" + std::to_string(*g.graph.exits[e])
                                           : "pi" + std::to_string(in_pos[e]);
        std::string dst = g.graph.enters[e] ? "n" + std::to_string(*g.graph.enters[e])
                                            : "po" + std::to_string(out_pos[e]);
        out << "  " << src << " -> " << dst << " [label=\"" << g.labels[e] << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace propcalc
