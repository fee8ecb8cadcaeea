#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "homlab/decon.hpp"
#include "homlab/folog.hpp"
#include "homlab/games.hpp"

namespace homlab {

/// Output of an instance reduction plus the construction trace needed to
/// reconstruct it deterministically.
struct ReductionResult {
    Structure output;
    nlohmann::json trace;
};

/// Deconstruction-driven homomorphism reduction: B' = PH(G*,B,w) with edges
/// via PH(G*,B,2w) and colors C_h selecting the bag listing of h. Components
/// of the host with empty bags are absorbed by a looped vertex b''. Yields
/// G* -> B iff H* -> B'.
ReductionResult decon_hom_reduction(const Graph& g, const Deconstruction& d,
                                    const Structure& b);

/// Decomposition variant for arbitrary structures: requires every relation
/// tuple of a inside a single bag; host components with empty bags are
/// dropped. Returns the pruned host alongside B'.
struct DecompReductionResult {
    Structure output;
    Graph pruned_host;
    nlohmann::json trace;
};
DecompReductionResult decomp_hom_reduction(const Structure& a, const Deconstruction& d,
                                           const Structure& b);

/// Product reduction for a core a: B' is the substructure of a x B induced
/// on the color-consistent pairs. A* -> B iff a -> B'. The result is
/// undefined (nullopt) when no pair is color-consistent; no homomorphism
/// from a exists in that case.
std::optional<ReductionResult> product_reduction(const Structure& a, const Structure& b);

/// Expands b with full-universe colors for every element of core(a):
/// a -> b iff core(a)* -> b'.
ReductionResult color_trivialize(const Structure& a, const Structure& b);

/// Reduction from graph(a)* instances to a* instances: B' on A x B keeps a
/// tuple when its a-part is a tuple of a and distinct positions are joined
/// by edges of b. graph(a)* -> b iff a* -> B'.
ReductionResult graph_reduction(const Structure& a, const Structure& b);

struct IncidenceGraph {
    Graph graph;
    std::vector<std::string> left;   // (R, tuple, position) vertices
    std::vector<std::string> right;  // original elements
};

/// Incidence-style graph in(A): left vertices (R,ā,i) forming per-tuple
/// cliques, joined to their witnessing elements on the right.
IncidenceGraph incidence_graph(const Structure& a);

/// b' = in(b) with position colors and full right colors; a -> b iff
/// in(a)* -> b'.
ReductionResult incidence_reduction(const Structure& a, const Structure& b);

struct DppHomResult {
    RootedForest forest;   // F in F_{q-1}
    Structure output;      // b' over the vocabulary of F*
    nlohmann::json trace;
};

/// Compiles a disjunction of PP sentences into a homomorphism instance by
/// the root-merge construction: B |= phi_1 v ... v phi_k iff F* -> b'.
DppHomResult dpp_to_hom(const Structure& b, const std::vector<Formula>& disjuncts);

/// Full pipeline for existential sentences: complement expansion, DPP
/// rewriting, root-merge compilation. B |= f iff F* -> b'; the forest has
/// height <= qr(f) - 1.
DppHomResult mc_to_hom_pipeline(const Structure& b, const Formula& f);

struct Theorem48Interpretation {
    Structure g_tilde;       // g* expanded with w-ary bag-listing relations
    Interpretation interp;   // dimension 2w
};

/// The definability witness for decon_hom_reduction (nonempty bags only):
/// eval_interpretation(interp, pair(g_tilde, b)) is isomorphic to the direct
/// reduction output.
Theorem48Interpretation theorem48_interpretation(const Graph& g, const Deconstruction& d);

} // namespace homlab
