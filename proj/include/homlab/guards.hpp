#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace homlab {

/// Thrown when an exhaustive operation would exceed its size guard.
/// Partiality is always an error value, never a wrong answer.
class GuardError : public std::runtime_error {
public:
    explicit GuardError(const std::string& what) : std::runtime_error(what) {}
};

/// Size guards for the exponential operations. Desk scale by design:
/// operations fail loudly instead of hanging.
struct Guards {
    int structure_size = 8;    // is_core / core / isomorphism
    int graph_size = 12;       // tree depth, treewidth, pathwidth, minors
    int pebbles = 6;           // duplicator_wins total pebbles
    std::uint64_t set_vectors = 200000;    // build_unfolding
    std::uint64_t hom_budget = 20000000;   // find_hom / find_minor default step budget
    std::uint64_t ph_table = 200000;       // PH(G*,B,w) enumeration
    std::uint64_t eval_tuples = 50000000;  // interpretation evaluation index space
    std::uint64_t dnf_disjuncts = 4096;    // existential -> DPP expansion
};

/// Process-wide defaults; HOMLAB_GUARD=<n> overrides the two size guards.
Guards& default_guards();

inline void ensure(bool ok, const std::string& msg) {
    if (!ok) throw GuardError(msg);
}

} // namespace homlab
