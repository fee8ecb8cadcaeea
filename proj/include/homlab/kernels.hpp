#pragma once

// Hot enumeration kernels, each in a serial reference version and an
// OpenMP-parallel version producing identical results. The serial versions
// stay around for differential testing and benchmarking; callers go through
// the dispatching wrappers which honor the process-wide parallel switch.

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace homlab {
struct Structure;
}

namespace homlab::kernels {

bool parallel_enabled();
void set_parallel(bool on);

/// Structure lowered to dense integer ids for inner loops.
struct Indexed {
    int n = 0;
    std::vector<std::string> names;
    // per symbol: arity and tuple list (ids)
    std::vector<std::string> symbols;
    std::vector<int> arities;
    std::vector<std::vector<std::vector<int>>> tuples;

    int id_of(const std::string& name) const;
};

Indexed index_structure(const Structure& s);

/// Partial-homomorphism pair table PH(a,b,len): all (g-tuple, b-tuple) pairs
/// of length len whose pair set is a partial homomorphism from a to b.
/// Tuples range over the full len-fold products; results sorted.
using PhEntry = std::pair<std::vector<int>, std::vector<int>>;

/// Precomputed lookup state shared by the PH scans.
struct PhContext {
    Indexed a, b;
    std::vector<std::set<std::vector<int>>> b_sets;  // per symbol

    PhContext(const Structure& sa, const Structure& sb);
    /// True iff the pair set {(gs_i, bs_i)} is a partial homomorphism.
    bool pair_ok(const std::vector<int>& gs, const std::vector<int>& bs) const;
    /// The edge predicate of the deconstruction reduction: the union of two
    /// entries is still a partial homomorphism.
    bool union_ok(const PhEntry& x, const PhEntry& y) const;
};

std::vector<PhEntry> ph_table_serial(const PhContext& ctx, int len, std::uint64_t guard);
std::vector<PhEntry> ph_table_parallel(const PhContext& ctx, int len, std::uint64_t guard);
std::vector<PhEntry> ph_table(const PhContext& ctx, int len, std::uint64_t guard);

/// All ordered index pairs whose entry union stays a partial homomorphism.
std::vector<std::pair<int, int>> ph_edges_serial(const PhContext& ctx,
                                                 const std::vector<PhEntry>& entries);
std::vector<std::pair<int, int>> ph_edges_parallel(const PhContext& ctx,
                                                   const std::vector<PhEntry>& entries);
std::vector<std::pair<int, int>> ph_edges(const PhContext& ctx,
                                          const std::vector<PhEntry>& entries);

/// Flat scan over an index space {0,..,n-1}^k collecting indices whose
/// assignment satisfies pred; pred must be pure. Results sorted.
std::vector<std::vector<int>> scan_satisfying_serial(
    int n, int k, const std::function<bool(const std::vector<int>&)>& pred,
    std::uint64_t guard);
std::vector<std::vector<int>> scan_satisfying_parallel(
    int n, int k, const std::function<bool(const std::vector<int>&)>& pred,
    std::uint64_t guard);
std::vector<std::vector<int>> scan_satisfying(
    int n, int k, const std::function<bool(const std::vector<int>&)>& pred,
    std::uint64_t guard);

/// Exact treewidth / pathwidth by dynamic programming over vertex subsets,
/// parallel across each popcount layer. adj is an n-vector of bitmasks.
int treewidth_dp_serial(const std::vector<std::uint32_t>& adj);
int treewidth_dp_parallel(const std::vector<std::uint32_t>& adj);
int treewidth_dp(const std::vector<std::uint32_t>& adj);

int pathwidth_dp_serial(const std::vector<std::uint32_t>& adj);
int pathwidth_dp_parallel(const std::vector<std::uint32_t>& adj);
int pathwidth_dp(const std::vector<std::uint32_t>& adj);

} // namespace homlab::kernels
