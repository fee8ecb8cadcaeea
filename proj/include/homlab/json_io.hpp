#pragma once

#include <string>

#include <json.hpp>

#include "homlab/decon.hpp"
#include "homlab/games.hpp"
#include "homlab/graph.hpp"
#include "homlab/relstruct.hpp"

namespace homlab {

// Canonical JSON structure format, bit-exact:
// {"relations": {"E": [["a","b"],...]}, "universe": ["a",...],
//  "vocabulary": {"E": 2}} with sorted keys and lexicographically sorted
// tuples.

nlohmann::json structure_to_json(const Structure& s);
Structure structure_from_json(const nlohmann::json& j);

nlohmann::json decon_to_json(const Deconstruction& d);
Deconstruction decon_from_json(const nlohmann::json& j);

nlohmann::json forest_to_json(const RootedForest& f);
RootedForest forest_from_json(const nlohmann::json& j);

nlohmann::json strategy_to_json(const StrategyTable& w);

nlohmann::json vdecomp_to_json(const VDecomposition& vd);

nlohmann::json facts_to_json(const ClassFacts& f);
ClassFacts facts_from_json(const nlohmann::json& j);

/// Graph text format: one "u v" edge per line, isolated vertices alone,
/// optional "root u" lines for rooted forests.
std::string graph_to_text(const Graph& g);
Graph graph_from_text(const std::string& text);
RootedForest forest_from_text(const std::string& text);

/// Reads a graph from a file holding either the JSON structure format or
/// the text edge format.
Graph load_graph(const std::string& path);
Structure load_structure(const std::string& path);
nlohmann::json load_json(const std::string& path);

void write_file(const std::string& path, const std::string& contents);
std::string dump_canonical(const nlohmann::json& j);

} // namespace homlab
