#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "homlab/relstruct.hpp"

namespace homlab {

/// Graph: a {E:2} structure with irreflexive symmetric E.
struct Graph {
    Structure s;

    static Graph from_structure(Structure s);
    static Graph from_edges(std::vector<std::string> vertices,
                            std::vector<std::pair<std::string, std::string>> edges);

    const std::vector<std::string>& vertices() const { return s.universe; }
    std::size_t size() const { return s.universe.size(); }
    bool adjacent(const std::string& u, const std::string& v) const;
    std::vector<std::string> neighbors(const std::string& u) const;
    bool operator==(const Graph&) const = default;
};

/// Rooted forest: acyclic graph plus one designated root per component.
struct RootedForest {
    Graph graph;
    std::set<std::string> roots;

    static RootedForest make(Graph g, std::set<std::string> roots);

    bool is_single_tree() const { return roots.size() == 1; }
    /// Parent map; roots map to themselves.
    std::map<std::string, std::string> parents() const;
    std::map<std::string, std::vector<std::string>> children() const;
    /// Depth of each node in edges from its root.
    std::map<std::string, int> depths() const;
    /// Ancestors of t including t itself, root first.
    std::vector<std::string> ancestors(const std::string& t) const;
    /// True iff (u,v) joins two ancestor-related nodes.
    bool in_closure(const std::string& u, const std::string& v) const;
    bool operator==(const RootedForest&) const = default;
};

Graph gaifman_graph(const Structure& a);

// --- generators ------------------------------------------------------------

Graph gen_path(int n);
Graph gen_cycle(int n);
Graph gen_grid(int n);
Graph gen_complete(int n);
Graph gen_star(int k);
/// T_{h,k}: tree on strings over [k] of length <= h, rooted at the empty
/// string (named "r"); children of t are t.1 .. t.k.
RootedForest gen_tree(int h, int k);

// --- invariants -------------------------------------------------------------

/// Edge-count height, max over components.
int height(const RootedForest& f);

struct TreeDepthResult {
    int depth = 0;
    RootedForest witness;
};

/// Exact tree depth in the paper convention (single vertex has depth 0),
/// with a witness forest of that height whose closure contains E^G.
TreeDepthResult tree_depth(const Graph& g, int guard = default_guards().graph_size);

int treewidth(const Graph& g, int guard = default_guards().graph_size);
int pathwidth(const Graph& g, int guard = default_guards().graph_size);

using MinorMap = std::map<std::string, std::set<std::string>>;

/// Checks the three minor-map conditions: nonempty connected branch sets,
/// disjointness, edge realization.
bool is_minor_map(const Graph& m, const Graph& g, const MinorMap& mu);

struct MinorSearchResult {
    SearchStatus status = SearchStatus::None;
    MinorMap witness;
    std::uint64_t steps = 0;
};

/// Exhaustive branch-set search with connectivity pruning; deterministic.
MinorSearchResult find_minor(const Graph& g, const Graph& m,
                             std::uint64_t budget = default_guards().hom_budget,
                             int guard = default_guards().graph_size);

/// Property P(d,k) of a rooted tree: d = 0 always holds; for d > 0 the root
/// needs k pairwise incomparable proper descendants with P(d-1,k).
/// Evaluated bottom-up by antichain counting.
bool has_property_P(const RootedForest& t, int d, int k);

/// Largest d <= d_max such that T_{d,k} is a minor of g.
int stack_profile(const Graph& g, int d_max, int k,
                  int guard = default_guards().graph_size);

/// Depth-first search forest under canonical order; its closure contains E^G.
RootedForest dfs_forest(const Graph& g);

} // namespace homlab
