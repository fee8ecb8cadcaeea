#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "homlab/decon.hpp"
#include "homlab/relstruct.hpp"

namespace homlab {

/// Pebble-game resource vector (p_1,...,p_r): r rounds, p_i fresh pebbles in
/// round i. Zero rounds are legal no-ops.
struct GameVector {
    std::vector<int> rounds;

    static GameVector make(std::vector<int> rounds);
    static GameVector parse(const std::string& text);  // "1,1,2"
    static GameVector ones(int n);

    int round_count() const { return static_cast<int>(rounds.size()); }
    int pebbles() const;
    std::string to_string() const;
};

/// Nested set chain C_1 <= ... <= C_m indexing the unfolding T_v(A).
struct SetVector {
    std::vector<std::set<std::string>> chain;

    std::string to_string() const;  // "{a}|{a,b}"
    bool operator<(const SetVector& o) const { return chain < o.chain; }
    bool operator==(const SetVector&) const = default;
};

/// Per-round families of extendable partial homomorphisms.
struct StrategyTable {
    std::vector<std::vector<PartialHom>> rounds;
};

/// Checks the two closure bullets of a Duplicator winning strategy.
std::vector<std::string> validate_strategy(const Structure& a, const Structure& b,
                                           const GameVector& v, const StrategyTable& w);

struct GameResult {
    bool wins = false;
    StrategyTable strategy;            // populated when wins
    std::optional<int> refutation_round;  // least m with the m-round prefix lost
};

/// Memoized AND-OR evaluation of the v-game on (a,b). When Duplicator wins,
/// the reachable winning positions are returned per round in canonical order.
GameResult duplicator_wins(const Structure& a, const Structure& b, const GameVector& v,
                           int pebble_guard = default_guards().pebbles);

struct Unfolding {
    Structure structure;              // T_v(A)
    RootedForest bag_forest;          // set vectors, edge = extend by one entry
    std::map<std::string, std::set<std::string>> bags;  // rendered set vector -> tagged elements
};

/// The unfolding T_v(A) over set vectors: universe of tagged elements
/// (a, u(a,s)); a relation tuple is present when its elements share a bag
/// B_s and the underlying tuple is in R^A. Throws GuardError when the
/// unfolding would be empty (all-zero vector) or too large.
Unfolding build_unfolding(const Structure& a, const GameVector& v,
                          std::uint64_t guard = default_guards().set_vectors);

/// v-decomposition conditions: structure decomposition over a rooted forest
/// of height < r, level-1 bags <= p_1, child bags contain parents and grow
/// by <= p_{i+1}.
std::vector<std::string> validate_v_decomposition(
    const Structure& a, const RootedForest& host,
    const std::map<std::string, std::set<std::string>>& bags, const GameVector& v);

struct VDecomposition {
    RootedForest host;
    std::map<std::string, std::set<std::string>> bags;
};

/// Top-down extraction of a homomorphism t -> b from a winning strategy and
/// a v-decomposition of t.
PartialHom strategy_to_hom(const Structure& t, const Structure& b,
                           const StrategyTable& w, const VDecomposition& vd);

struct SolveResult {
    bool solves = false;
    PartialHom witness;  // homomorphism a -> T_v(a) when solves
};

/// The v-game solves HOM(a) iff a maps homomorphically into its own
/// unfolding.
SolveResult v_game_solves(const Structure& a, const GameVector& v);

/// Pulls the unfolding's bags back along the (injective on the core)
/// homomorphism; yields a v-decomposition of core(a).
VDecomposition extract_v_decomposition(const Structure& a, const GameVector& v);

/// Least n <= n_max such that the (1,...,1) game with n rounds solves
/// HOM(a); equals tree depth of gaifman(core(a)) plus one.
std::optional<int> min_pebbles_unary(const Structure& a, int n_max);

} // namespace homlab
