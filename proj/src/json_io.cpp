#include "homlab/json_io.hpp"

#include <fstream>
#include <sstream>

namespace homlab {

using nlohmann::json;

json structure_to_json(const Structure& s) {
    json j;
    json voc = json::object();
    for (const auto& [name, ar] : s.vocabulary.symbols) voc[name] = ar;
    j["vocabulary"] = std::move(voc);
    j["universe"] = s.universe;
    json rels = json::object();
    for (const auto& [name, tuples] : s.relations) {
        json list = json::array();
        for (const auto& t : tuples) list.push_back(t);
        rels[name] = std::move(list);
    }
    j["relations"] = std::move(rels);
    return j;
}

Structure structure_from_json(const json& j) {
    std::map<std::string, int> symbols;
    for (const auto& [name, ar] : j.at("vocabulary").items()) symbols[name] = ar.get<int>();
    std::vector<std::string> universe = j.at("universe").get<std::vector<std::string>>();
    std::map<std::string, std::set<Tuple>> rels;
    int max_ar = 1;
    for (const auto& [n, ar] : symbols) {
        (void)n;
        max_ar = std::max(max_ar, ar);
    }
    if (j.contains("relations"))
        for (const auto& [name, tuples] : j.at("relations").items()) {
            auto& dst = rels[name];
            for (const auto& t : tuples) dst.insert(t.get<Tuple>());
        }
    return Structure::make(Vocabulary::make(std::move(symbols), std::max(4, max_ar)),
                           std::move(universe), std::move(rels));
}

json decon_to_json(const Deconstruction& d) {
    json j;
    j["subject"] = structure_to_json(d.subject.s);
    j["host"] = structure_to_json(d.host.s);
    j["mode"] = d.mode == DeconMode::Deconstruction ? "deconstruction" : "decomposition";
    json bags = json::object();
    for (const auto& [h, bag] : d.bags) bags[h] = std::vector<std::string>(bag.begin(), bag.end());
    j["bags"] = std::move(bags);
    return j;
}

Deconstruction decon_from_json(const json& j) {
    Deconstruction d;
    d.subject = Graph::from_structure(structure_from_json(j.at("subject")));
    d.host = Graph::from_structure(structure_from_json(j.at("host")));
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "deconstruction")
        d.mode = DeconMode::Deconstruction;
    else if (mode == "decomposition")
        d.mode = DeconMode::Decomposition;
    else
        throw std::invalid_argument("deconstruction: unknown mode " + mode);
    for (const auto& [h, bag] : j.at("bags").items()) {
        auto list = bag.get<std::vector<std::string>>();
        d.bags[h] = {list.begin(), list.end()};
    }
    return d;
}

json forest_to_json(const RootedForest& f) {
    json j;
    j["graph"] = structure_to_json(f.graph.s);
    j["roots"] = std::vector<std::string>(f.roots.begin(), f.roots.end());
    return j;
}

RootedForest forest_from_json(const json& j) {
    auto g = Graph::from_structure(structure_from_json(j.at("graph")));
    auto roots = j.at("roots").get<std::vector<std::string>>();
    return RootedForest::make(std::move(g), {roots.begin(), roots.end()});
}

json strategy_to_json(const StrategyTable& w) {
    json rounds = json::array();
    for (const auto& round : w.rounds) {
        json maps = json::array();
        for (const auto& g : round) {
            json m = json::object();
            for (const auto& [x, y] : g) m[x] = y;
            maps.push_back(std::move(m));
        }
        rounds.push_back(std::move(maps));
    }
    return json{{"rounds", std::move(rounds)}};
}

json vdecomp_to_json(const VDecomposition& vd) {
    json bags = json::object();
    for (const auto& [h, bag] : vd.bags)
        bags[h] = std::vector<std::string>(bag.begin(), bag.end());
    return json{{"host", forest_to_json(vd.host)}, {"bags", std::move(bags)}};
}

json facts_to_json(const ClassFacts& f) {
    return json{{"all_grids_minors", f.all_grids_minors},
                {"all_trees_minors", f.all_trees_minors},
                {"all_paths_minors", f.all_paths_minors},
                {"stack_depth", f.stack_depth},
                {"unbounded_multiplicity", f.unbounded_multiplicity}};
}

ClassFacts facts_from_json(const json& j) {
    ClassFacts f;
    f.all_grids_minors = j.value("all_grids_minors", false);
    f.all_trees_minors = j.value("all_trees_minors", false);
    f.all_paths_minors = j.value("all_paths_minors", false);
    f.stack_depth = j.value("stack_depth", 0);
    f.unbounded_multiplicity = j.value("unbounded_multiplicity", false);
    return f;
}

std::string graph_to_text(const Graph& g) {
    std::ostringstream out;
    std::set<std::string> covered;
    for (const auto& t : g.s.tuples("E"))
        if (t[0] < t[1]) {
            out << t[0] << " " << t[1] << "\n";
            covered.insert(t[0]);
            covered.insert(t[1]);
        }
    for (const auto& v : g.vertices())
        if (!covered.count(v)) out << v << "\n";
    return out.str();
}

namespace {

struct ParsedText {
    std::vector<std::string> vertices;
    std::vector<std::pair<std::string, std::string>> edges;
    std::set<std::string> roots;
};

ParsedText parse_graph_text(const std::string& text) {
    ParsedText out;
    std::istringstream in(text);
    std::string line;
    std::set<std::string> seen;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::vector<std::string> words;
        std::string w;
        while (ls >> w) words.push_back(w);
        if (words.empty()) continue;
        if (words[0] == "root") {
            if (words.size() != 2) throw std::invalid_argument("graph text: bad root line");
            out.roots.insert(words[1]);
            seen.insert(words[1]);
        } else if (words.size() == 1) {
            seen.insert(words[0]);
        } else if (words.size() == 2) {
            out.edges.emplace_back(words[0], words[1]);
            seen.insert(words[0]);
            seen.insert(words[1]);
        } else {
            throw std::invalid_argument("graph text: expected 'u v', 'u' or 'root u'");
        }
    }
    out.vertices.assign(seen.begin(), seen.end());
    return out;
}

} // namespace

Graph graph_from_text(const std::string& text) {
    auto parsed = parse_graph_text(text);
    return Graph::from_edges(std::move(parsed.vertices), std::move(parsed.edges));
}

RootedForest forest_from_text(const std::string& text) {
    auto parsed = parse_graph_text(text);
    auto g = Graph::from_edges(std::move(parsed.vertices), std::move(parsed.edges));
    return RootedForest::make(std::move(g), std::move(parsed.roots));
}

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

json load_json(const std::string& path) { return json::parse(slurp(path)); }

Structure load_structure(const std::string& path) {
    const std::string text = slurp(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{')
        return structure_from_json(json::parse(text));
    return graph_from_text(text).s;
}

Graph load_graph(const std::string& path) {
    return Graph::from_structure(load_structure(path));
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << contents;
}

std::string dump_canonical(const json& j) { return j.dump(2) + "\n"; }

} // namespace homlab
