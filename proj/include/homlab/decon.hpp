#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "homlab/graph.hpp"

namespace homlab {

enum class DeconMode { Deconstruction, Decomposition };

/// Host-indexed bag family over a subject graph. In deconstruction mode a
/// refl edge of the subject may span a bag union along a refl edge of the
/// host; in decomposition mode it must sit inside a single bag. Empty bags
/// are legal.
struct Deconstruction {
    Graph subject;
    Graph host;
    std::map<std::string, std::set<std::string>> bags;
    DeconMode mode = DeconMode::Deconstruction;
};

std::vector<std::string> validate(const Deconstruction& d);

/// Width in the mode's convention: deconstructions take
/// max |B_h u B_h'| over refl host edges, decompositions max |B_h| - 1.
int width(const Deconstruction& d);

/// Singleton bags over the graph itself; width <= 2.
Deconstruction self_deconstruction(const Graph& g);

/// Bags B_(i,j) = {i-th, j-th vertex} over the |g|-by-|g| grid; width <= 3.
Deconstruction grid_deconstruction(const Graph& g);

/// Bag-union composition: C+_i = union of B_h over h in C_i.
Deconstruction compose(const Deconstruction& d_gh, const Deconstruction& d_hi);

/// Deconstruction of the minor m over g induced by a minor map:
/// B_g = {m | g in mu(m)}; width <= 2.
Deconstruction from_minor_map(const Graph& m, const Graph& g, const MinorMap& mu);

/// Tree-host deconstruction to decomposition: C_h = B_h u B_parent(h);
/// bag sizes < 2w.
Deconstruction tree_decon_to_decomp(const Deconstruction& d);

/// Ancestor bags along a tree-depth witness give a decomposition of width
/// <= height(t) for a connected subject.
Deconstruction decomp_from_treedepth_witness(const Graph& g, const RootedForest& t);

/// Niceness of a minor-map-backed deconstruction of a rooted tree over a
/// rooted tree: minor map, root containment, child-edge direction.
bool is_nice(const RootedForest& m, const RootedForest& g, const Deconstruction& d);

struct TdDeconstruction {
    RootedForest host;   // single tree of height <= d
    Deconstruction decon;
    int width = 0;
};

/// The stack-depth recursion: builds a nice T_d-host deconstruction of a
/// rooted tree t that fails P(d+1,K).
TdDeconstruction build_td_deconstruction(const RootedForest& t, int d, int K);

/// Asserted facts about a (possibly infinite) class of graphs; inputs to the
/// hierarchy decision, never inferred from finite samples.
struct ClassFacts {
    bool all_grids_minors = false;
    bool all_trees_minors = false;
    bool all_paths_minors = false;
    int stack_depth = 0;
    bool unbounded_multiplicity = false;
};

struct HierarchyLevel {
    enum class Tag { T_d, F_d, P, T, L } tag;
    int d = 0;  // meaningful for T_d / F_d

    std::string to_string() const;
    bool operator==(const HierarchyLevel&) const = default;
};

HierarchyLevel hierarchy_level(const ClassFacts& f);

} // namespace homlab
