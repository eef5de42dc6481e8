#pragma once

#include <json.hpp>
#include <string>

#include "propcalc/coa.hpp"
#include "propcalc/operad.hpp"
#include "propcalc/perm.hpp"
#include "propcalc/prop.hpp"

namespace propcalc {

// External JSON formats. Everything is one-indexed: permutation images,
// edge and node references.

nlohmann::json perm_to_json(const Perm& p);
Perm perm_from_json(const nlohmann::json& j);

nlohmann::json graph_to_json(const Graph& g);
Graph graph_from_json(const nlohmann::json& j);

nlohmann::json coa_to_json(const CoaGraph& g);
CoaGraph coa_from_json(const nlohmann::json& j);

nlohmann::json cvalence_to_json(const CValence& v);
CValence cvalence_from_json(const nlohmann::json& j);

nlohmann::json arity_to_json(const Arity& a);
Arity arity_from_json(const nlohmann::json& j);

TableOperad table_operad_from_json(const nlohmann::json& j);
nlohmann::json table_operad_to_json(const TableOperad& t);

FinCategory category_from_json(const nlohmann::json& j);

// Fibres are finite table operads; transports are explicit colour and
// operation maps.
OperadicFamily operadic_family_from_json(const nlohmann::json& j);

Bicollection bicollection_from_json(const nlohmann::json& j);

// Arity strings: "((2,1),(1,1);(1,1))" in the single-colour shorthand or
// "(((a),(b)),((b),(c));((a),(c)))" with explicit colour words. Errors
// carry the exact position.
Arity parse_arity_string(const std::string& text, const std::vector<Colour>& colours);
CValence parse_valence_string(const std::string& text, const std::vector<Colour>& colours);

}  // namespace propcalc
