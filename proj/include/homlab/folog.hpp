#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "homlab/graph.hpp"
#include "homlab/relstruct.hpp"

namespace homlab {

/// Existential first-order formulas: atoms, equalities, negated atoms,
/// conjunction, disjunction, existential quantification. Built as immutable
/// shared trees.
struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

enum class FormulaKind { Atom, Eq, Not, And, Or, Exists };

struct FormulaNode {
    FormulaKind kind;
    // Atom
    std::string rel;
    std::vector<std::string> vars;
    // Not/Exists child, And/Or children
    std::vector<Formula> children;
    // Exists variable
    std::string bound;
};

Formula f_atom(std::string rel, std::vector<std::string> vars);
Formula f_eq(std::string x, std::string y);
Formula f_not(Formula atom);  // argument must be an atom or equality
Formula f_and(std::vector<Formula> xs);
Formula f_or(std::vector<Formula> xs);
Formula f_exists(std::string var, Formula body);

std::string format_formula(const Formula& f);
/// S-expression syntax: (exists x (and (atom E x y) (not (atom C x)))),
/// (eq x y), (or ...).
Formula parse_formula(const std::string& text);

std::set<std::string> free_variables(const Formula& f);
bool is_sentence(const Formula& f);

int qrank(const Formula& f);

enum class Fragment { PP, DPP, Existential, Other };

/// Syntactic fragment of f under arity bound r: PP (exists/and of positive
/// atoms), DPP (disjunction of PP), existential, or Other when some symbol
/// exceeds the arity bound.
Fragment classify_fragment(const Formula& f, int r);

/// Brute-force model checking of a sentence.
bool model_check(const Structure& b, const Formula& f);

/// Formula evaluation under a partial assignment of the free variables.
bool eval_with_env(const Structure& b, const Formula& f,
                   std::map<std::string, std::string>& env);

/// Renames bound variables apart and eliminates equality atoms by unifying
/// variables (the shallower-quantified one survives). PP input only.
Formula normalize_pp(const Formula& f);

/// Canonical structure A_phi of a PP sentence: universe = variables,
/// relations read off the atoms. Satisfies B |= phi iff A_phi -> B.
/// The optional vocabulary widens the result to match a target structure.
Structure canonical_structure(const Formula& f,
                              const std::optional<Vocabulary>& voc = std::nullopt);

/// Canonical query of a rooted tree over its starred vocabulary:
/// phi_{T,r}(x) = C_r x /\ for each child subtree an exists-step. The
/// returned formula has one free variable "x0" and qr = height of t.
Formula canonical_query(const RootedForest& t, const std::string& root);

/// The forest of a PP sentence: variables, with an edge when two exists
/// quantifiers are consecutive in the formula tree; rooted at the
/// first-quantified variable of each component.
RootedForest formula_forest(const Formula& f);

struct DppResult {
    Structure expanded;            // input structure plus complement relations
    std::vector<Formula> disjuncts;  // PP sentences; the DPP is their disjunction
};

/// Rewrites an existential sentence over a into a DPP sentence over the
/// complement-expanded structure; preserves truth and quantifier rank.
DppResult existential_to_dpp(const Structure& a, const Formula& f,
                             std::uint64_t guard = default_guards().dnf_disjuncts);

/// Quantifier-free interpretation of tau in sigma with dimension w.
/// Formula variables follow the block convention x{block}_{pos}, blocks and
/// positions 1-based; the universe formula has one block.
struct Interpretation {
    Vocabulary input;
    Vocabulary output;
    int dimension = 1;
    Formula universe_formula;
    std::map<std::string, Formula> relation_formulas;
};

std::vector<std::string> validate_interpretation(const Interpretation& i);

/// Evaluates the interpretation; the result is undefined (nullopt) when the
/// universe formula has no satisfying tuple. Elements are w-tuples rendered
/// with "*" separators.
std::optional<Structure> eval_interpretation(
    const Interpretation& i, const Structure& a,
    std::uint64_t guard = default_guards().eval_tuples);

/// The identity interpretation over a vocabulary (dimension 1).
Interpretation identity_interpretation(const Vocabulary& voc);

} // namespace homlab
