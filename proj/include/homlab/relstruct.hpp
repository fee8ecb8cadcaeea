#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "homlab/guards.hpp"

namespace homlab {

using Tuple = std::vector<std::string>;

/// Finite relational vocabulary: symbol name -> arity.
struct Vocabulary {
    std::map<std::string, int> symbols;

    static Vocabulary make(std::map<std::string, int> symbols, int max_arity = 4);

    bool has(const std::string& name) const { return symbols.count(name) > 0; }
    int arity(const std::string& name) const;
    bool operator==(const Vocabulary&) const = default;
};

/// Finite relational structure. The universe is kept sorted; the
/// lexicographic order on element names is the canonical total order that
/// fixes all tie-breaking downstream. Values are immutable by convention
/// once built.
struct Structure {
    Vocabulary vocabulary;
    std::vector<std::string> universe;
    std::map<std::string, std::set<Tuple>> relations;

    /// Normalizes (sorts universe, fills missing relations) and throws
    /// std::invalid_argument if the invariants fail.
    static Structure make(Vocabulary voc, std::vector<std::string> universe,
                          std::map<std::string, std::set<Tuple>> relations);

    bool has_element(const std::string& e) const;
    std::size_t size() const { return universe.size(); }
    const std::set<Tuple>& tuples(const std::string& symbol) const;
    bool operator==(const Structure&) const = default;
};

/// Partial homomorphism as a finite map; the empty map is legal.
using PartialHom = std::map<std::string, std::string>;

enum class SearchStatus { Found, None, BudgetExceeded };

struct HomSearchResult {
    SearchStatus status = SearchStatus::None;
    PartialHom witness;        // total map when status == Found
    std::uint64_t steps = 0;
};

/// Structure invariant check. Never throws; returns human-readable
/// violations, empty when the value is well-formed.
std::vector<std::string> validate_structure(const Structure& s);

/// Induced substructure on a nonempty subset of the universe.
Structure induced(const Structure& a, const std::set<std::string>& s);

/// Gaifman graph as a {E:2} structure: an edge joins two distinct elements
/// that co-occur in some relation tuple.
Structure gaifman(const Structure& a);

/// Connected components as induced substructures, ordered by least element.
std::vector<Structure> components(const Structure& a);

/// Direct product: universe A x B, relations componentwise.
/// Element (a,b) is named "a*b".
Structure direct_product(const Structure& a, const Structure& b);

/// Tagged disjoint union <A,B> with fresh unary P_1, P_2 marking the two
/// parts. Elements are renamed "1.x" / "2.y".
Structure pair_structure(const Structure& a, const Structure& b);

/// Star expansion A*: adds a unary color C_x with interpretation {x} for
/// every universe element x. Always a core.
Structure star_expand(const Structure& a);

std::string color_symbol(const std::string& element);

bool is_partial_hom(const Structure& a, const Structure& b, const PartialHom& g);

/// Deterministic backtracking search for a homomorphism a -> b; returns the
/// lexicographically least witness under the canonical element order.
HomSearchResult find_hom(const Structure& a, const Structure& b,
                         std::uint64_t budget = default_guards().hom_budget);

/// True iff every endomorphism of a is injective. Exhaustive; respects the
/// structure_size guard.
bool is_core(const Structure& a, int guard = default_guards().structure_size);

/// Core by iterative retract elimination: find a non-injective endomorphism,
/// restrict to its image (induced tuples), repeat. Deterministic under the
/// canonical order.
Structure core(const Structure& a, int guard = default_guards().structure_size);

/// Brute-force isomorphism test with signature pruning.
bool is_isomorphic(const Structure& a, const Structure& b,
                   int guard = default_guards().structure_size + 6);

} // namespace homlab
