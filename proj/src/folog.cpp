#include "homlab/folog.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

#include "homlab/kernels.hpp"

namespace homlab {

namespace {

Formula node(FormulaNode n) { return std::make_shared<const FormulaNode>(std::move(n)); }

} // namespace

Formula f_atom(std::string rel, std::vector<std::string> vars) {
    if (rel.empty() || vars.empty()) throw std::invalid_argument("atom: nonempty symbol and variables");
    FormulaNode n;
    n.kind = FormulaKind::Atom;
    n.rel = std::move(rel);
    n.vars = std::move(vars);
    return node(std::move(n));
}

Formula f_eq(std::string x, std::string y) {
    FormulaNode n;
    n.kind = FormulaKind::Eq;
    n.vars = {std::move(x), std::move(y)};
    return node(std::move(n));
}

Formula f_not(Formula atom) {
    if (atom->kind != FormulaKind::Atom && atom->kind != FormulaKind::Eq)
        throw std::invalid_argument("not: negation only in front of atoms");
    FormulaNode n;
    n.kind = FormulaKind::Not;
    n.children = {std::move(atom)};
    return node(std::move(n));
}

Formula f_and(std::vector<Formula> xs) {
    FormulaNode n;
    n.kind = FormulaKind::And;
    n.children = std::move(xs);
    return node(std::move(n));
}

Formula f_or(std::vector<Formula> xs) {
    FormulaNode n;
    n.kind = FormulaKind::Or;
    n.children = std::move(xs);
    return node(std::move(n));
}

Formula f_exists(std::string var, Formula body) {
    FormulaNode n;
    n.kind = FormulaKind::Exists;
    n.bound = std::move(var);
    n.children = {std::move(body)};
    return node(std::move(n));
}

std::string format_formula(const Formula& f) {
    switch (f->kind) {
        case FormulaKind::Atom: {
            std::string out = "(atom " + f->rel;
            for (const auto& v : f->vars) out += " " + v;
            return out + ")";
        }
        case FormulaKind::Eq:
            return "(eq " + f->vars[0] + " " + f->vars[1] + ")";
        case FormulaKind::Not:
            return "(not " + format_formula(f->children[0]) + ")";
        case FormulaKind::And:
        case FormulaKind::Or: {
            std::string out = f->kind == FormulaKind::And ? "(and" : "(or";
            for (const auto& c : f->children) out += " " + format_formula(c);
            return out + ")";
        }
        case FormulaKind::Exists:
            return "(exists " + f->bound + " " + format_formula(f->children[0]) + ")";
    }
    return "?";
}

namespace {

struct SexprParser {
    const std::string& text;
    std::size_t pos = 0;

    explicit SexprParser(const std::string& t) : text(t) {}

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    std::string token() {
        skip_ws();
        if (pos >= text.size()) throw std::invalid_argument("formula: unexpected end");
        if (text[pos] == '(' || text[pos] == ')') return std::string(1, text[pos++]);
        std::size_t start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
               text[pos] != '(' && text[pos] != ')')
            ++pos;
        return text.substr(start, pos - start);
    }

    std::string peek() {
        const std::size_t save = pos;
        std::string t = token();
        pos = save;
        return t;
    }

    Formula parse() {
        if (token() != "(") throw std::invalid_argument("formula: expected (");
        const std::string head = token();
        if (head == "atom") {
            std::string rel = token();
            std::vector<std::string> vars;
            while (peek() != ")") vars.push_back(token());
            token();
            return f_atom(std::move(rel), std::move(vars));
        }
        if (head == "eq") {
            std::string x = token(), y = token();
            if (token() != ")") throw std::invalid_argument("formula: expected )");
            return f_eq(std::move(x), std::move(y));
        }
        if (head == "not") {
            Formula inner = parse();
            if (token() != ")") throw std::invalid_argument("formula: expected )");
            return f_not(std::move(inner));
        }
        if (head == "and" || head == "or") {
            std::vector<Formula> xs;
            while (peek() != ")") xs.push_back(parse());
            token();
            return head == "and" ? f_and(std::move(xs)) : f_or(std::move(xs));
        }
        if (head == "exists") {
            std::string var = token();
            Formula body = parse();
            if (token() != ")") throw std::invalid_argument("formula: expected )");
            return f_exists(std::move(var), std::move(body));
        }
        throw std::invalid_argument("formula: unknown head " + head);
    }
};

} // namespace

Formula parse_formula(const std::string& text) {
    SexprParser p(text);
    Formula f = p.parse();
    p.skip_ws();
    if (p.pos != text.size()) throw std::invalid_argument("formula: trailing input");
    return f;
}

namespace {

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
    switch (f->kind) {
        case FormulaKind::Atom:
        case FormulaKind::Eq:
            for (const auto& v : f->vars)
                if (!bound.count(v)) out.insert(v);
            return;
        case FormulaKind::Not:
            collect_free(f->children[0], bound, out);
            return;
        case FormulaKind::And:
        case FormulaKind::Or:
            for (const auto& c : f->children) collect_free(c, bound, out);
            return;
        case FormulaKind::Exists: {
            const bool fresh = bound.insert(f->bound).second;
            collect_free(f->children[0], bound, out);
            if (fresh) bound.erase(f->bound);
            return;
        }
    }
}

} // namespace

std::set<std::string> free_variables(const Formula& f) {
    std::set<std::string> bound, out;
    collect_free(f, bound, out);
    return out;
}

bool is_sentence(const Formula& f) { return free_variables(f).empty(); }

int qrank(const Formula& f) {
    switch (f->kind) {
        case FormulaKind::Atom:
        case FormulaKind::Eq:
            return 0;
        case FormulaKind::Not:
            return qrank(f->children[0]);
        case FormulaKind::And:
        case FormulaKind::Or: {
            int q = 0;
            for (const auto& c : f->children) q = std::max(q, qrank(c));
            return q;
        }
        case FormulaKind::Exists:
            return 1 + qrank(f->children[0]);
    }
    return 0;
}

namespace {

bool arity_within(const Formula& f, int r) {
    switch (f->kind) {
        case FormulaKind::Atom:
            return static_cast<int>(f->vars.size()) <= r;
        case FormulaKind::Eq:
            return true;
        default:
            for (const auto& c : f->children)
                if (!arity_within(c, r)) return false;
            return true;
    }
}

bool is_pp(const Formula& f) {
    switch (f->kind) {
        case FormulaKind::Atom:
        case FormulaKind::Eq:
            return true;
        case FormulaKind::Not:
            return false;
        case FormulaKind::Or:
            return false;
        case FormulaKind::And:
        case FormulaKind::Exists:
            for (const auto& c : f->children)
                if (!is_pp(c)) return false;
            return true;
    }
    return false;
}

} // namespace

Fragment classify_fragment(const Formula& f, int r) {
    if (!arity_within(f, r)) return Fragment::Other;
    if (is_pp(f)) return Fragment::PP;
    if (f->kind == FormulaKind::Or) {
        bool all_pp = true;
        for (const auto& c : f->children)
            if (!is_pp(c)) all_pp = false;
        if (all_pp) return Fragment::DPP;
    }
    return Fragment::Existential;
}

namespace {

bool eval_rec(const Structure& b, const Formula& f, std::map<std::string, std::string>& env) {
    switch (f->kind) {
        case FormulaKind::Atom: {
            Tuple t;
            t.reserve(f->vars.size());
            for (const auto& v : f->vars) {
                auto it = env.find(v);
                if (it == env.end()) throw std::invalid_argument("eval: free variable " + v);
                t.push_back(it->second);
            }
            return b.tuples(f->rel).count(t) > 0;
        }
        case FormulaKind::Eq:
            return env.at(f->vars[0]) == env.at(f->vars[1]);
        case FormulaKind::Not:
            return !eval_rec(b, f->children[0], env);
        case FormulaKind::And:
            for (const auto& c : f->children)
                if (!eval_rec(b, c, env)) return false;
            return true;
        case FormulaKind::Or:
            for (const auto& c : f->children)
                if (eval_rec(b, c, env)) return true;
            return false;
        case FormulaKind::Exists: {
            auto saved = env.find(f->bound) != env.end()
                             ? std::optional<std::string>(env[f->bound])
                             : std::nullopt;
            for (const auto& e : b.universe) {
                env[f->bound] = e;
                if (eval_rec(b, f->children[0], env)) {
                    if (saved) env[f->bound] = *saved; else env.erase(f->bound);
                    return true;
                }
            }
            if (saved) env[f->bound] = *saved; else env.erase(f->bound);
            return false;
        }
    }
    return false;
}

void check_symbols(const Structure& b, const Formula& f) {
    switch (f->kind) {
        case FormulaKind::Atom:
            if (!b.vocabulary.has(f->rel))
                throw std::invalid_argument("model_check: unknown symbol " + f->rel);
            if (b.vocabulary.arity(f->rel) != static_cast<int>(f->vars.size()))
                throw std::invalid_argument("model_check: arity mismatch on " + f->rel);
            return;
        case FormulaKind::Eq:
            return;
        default:
            for (const auto& c : f->children) check_symbols(b, c);
            return;
    }
}

} // namespace

bool model_check(const Structure& b, const Formula& f) {
    if (!is_sentence(f)) throw std::invalid_argument("model_check: sentence required");
    check_symbols(b, f);
    std::map<std::string, std::string> env;
    return eval_rec(b, f, env);
}

bool eval_with_env(const Structure& b, const Formula& f,
                   std::map<std::string, std::string>& env) {
    return eval_rec(b, f, env);
}

namespace {

// Renames bound variables apart ("v0", "v1", ...) and records quantifier
// depth per new name.
struct Renamer {
    int counter = 0;
    std::map<std::string, int> depth_of;

    Formula run(const Formula& f, std::map<std::string, std::string>& scope, int depth) {
        switch (f->kind) {
            case FormulaKind::Atom: {
                std::vector<std::string> vars;
                for (const auto& v : f->vars) vars.push_back(scope.at(v));
                return f_atom(f->rel, std::move(vars));
            }
            case FormulaKind::Eq:
                return f_eq(scope.at(f->vars[0]), scope.at(f->vars[1]));
            case FormulaKind::Not:
                return f_not(run(f->children[0], scope, depth));
            case FormulaKind::And:
            case FormulaKind::Or: {
                std::vector<Formula> cs;
                for (const auto& c : f->children) cs.push_back(run(c, scope, depth));
                return f->kind == FormulaKind::And ? f_and(std::move(cs)) : f_or(std::move(cs));
            }
            case FormulaKind::Exists: {
                const std::string fresh = "v" + std::to_string(counter++);
                depth_of[fresh] = depth;
                auto saved = scope.find(f->bound) != scope.end()
                                 ? std::optional<std::string>(scope[f->bound])
                                 : std::nullopt;
                scope[f->bound] = fresh;
                Formula body = run(f->children[0], scope, depth + 1);
                if (saved) scope[f->bound] = *saved; else scope.erase(f->bound);
                return f_exists(fresh, std::move(body));
            }
        }
        throw std::logic_error("unreachable");
    }
};

// Union-find over variables keyed by quantifier depth: the shallower
// variable survives a merge, so substitution never escapes a scope.
struct VarUnifier {
    std::map<std::string, std::string> parent;
    const std::map<std::string, int>& depth;

    explicit VarUnifier(const std::map<std::string, int>& d) : depth(d) {}

    std::string find(const std::string& x) {
        auto it = parent.find(x);
        if (it == parent.end() || it->second == x) return x;
        return parent[x] = find(it->second);
    }

    void unite(const std::string& a, const std::string& b) {
        std::string ra = find(a), rb = find(b);
        if (ra == rb) return;
        if (depth.at(ra) > depth.at(rb)) std::swap(ra, rb);
        parent[rb] = ra;  // shallower becomes the representative
    }
};

void collect_equalities(const Formula& f, VarUnifier& u) {
    switch (f->kind) {
        case FormulaKind::Eq:
            u.unite(f->vars[0], f->vars[1]);
            return;
        case FormulaKind::Atom:
            return;
        default:
            for (const auto& c : f->children) collect_equalities(c, u);
            return;
    }
}

// Rewrites under a substitution, dropping equalities (now x=x) and the
// quantifiers of eliminated variables.
Formula substitute(const Formula& f, VarUnifier& u) {
    switch (f->kind) {
        case FormulaKind::Atom: {
            std::vector<std::string> vars;
            for (const auto& v : f->vars) vars.push_back(u.find(v));
            return f_atom(f->rel, std::move(vars));
        }
        case FormulaKind::Eq:
            return f_and({});  // satisfied after unification
        case FormulaKind::Not:
            return f_not(substitute(f->children[0], u));
        case FormulaKind::And:
        case FormulaKind::Or: {
            std::vector<Formula> cs;
            for (const auto& c : f->children) cs.push_back(substitute(c, u));
            return f->kind == FormulaKind::And ? f_and(std::move(cs)) : f_or(std::move(cs));
        }
        case FormulaKind::Exists: {
            Formula body = substitute(f->children[0], u);
            if (u.find(f->bound) != f->bound) return body;  // variable was merged away
            return f_exists(f->bound, std::move(body));
        }
    }
    throw std::logic_error("unreachable");
}

} // namespace

Formula normalize_pp(const Formula& f) {
    if (classify_fragment(f, INT32_MAX) != Fragment::PP)
        throw std::invalid_argument("normalize_pp: PP formula required");
    if (!is_sentence(f)) throw std::invalid_argument("normalize_pp: sentence required");
    Renamer ren;
    std::map<std::string, std::string> scope;
    Formula renamed = ren.run(f, scope, 0);
    VarUnifier unifier(ren.depth_of);
    collect_equalities(renamed, unifier);
    return substitute(renamed, unifier);
}

namespace {

void collect_atoms(const Formula& f, std::vector<const FormulaNode*>& atoms,
                   std::set<std::string>& vars) {
    switch (f->kind) {
        case FormulaKind::Atom:
            atoms.push_back(f.get());
            for (const auto& v : f->vars) vars.insert(v);
            return;
        case FormulaKind::Eq:
            throw std::invalid_argument("canonical_structure: unexpected equality (normalize first)");
        case FormulaKind::Not:
            throw std::invalid_argument("canonical_structure: PP formula required");
        case FormulaKind::And:
            for (const auto& c : f->children) collect_atoms(c, atoms, vars);
            return;
        case FormulaKind::Or:
            throw std::invalid_argument("canonical_structure: PP formula required");
        case FormulaKind::Exists:
            vars.insert(f->bound);
            collect_atoms(f->children[0], atoms, vars);
            return;
    }
}

} // namespace

Structure canonical_structure(const Formula& f, const std::optional<Vocabulary>& voc) {
    Formula norm = normalize_pp(f);
    std::vector<const FormulaNode*> atoms;
    std::set<std::string> vars;
    collect_atoms(norm, atoms, vars);
    if (vars.empty()) throw std::invalid_argument("canonical_structure: no variables");
    std::map<std::string, int> symbols = voc ? voc->symbols : std::map<std::string, int>{};
    std::map<std::string, std::set<Tuple>> rels;
    for (const auto* atom : atoms) {
        const int ar = static_cast<int>(atom->vars.size());
        auto it = symbols.find(atom->rel);
        if (it != symbols.end() && it->second != ar)
            throw std::invalid_argument("canonical_structure: arity mismatch on " + atom->rel);
        symbols[atom->rel] = ar;
        rels[atom->rel].insert(atom->vars);
    }
    int max_ar = 1;
    for (const auto& [n, ar] : symbols) {
        (void)n;
        max_ar = std::max(max_ar, ar);
    }
    return Structure::make(Vocabulary::make(std::move(symbols), std::max(4, max_ar)),
                           {vars.begin(), vars.end()}, std::move(rels));
}

namespace {

Formula canonical_query_rec(const RootedForest& t, const std::string& at,
                            const std::string& var, int& counter) {
    std::vector<Formula> parts{f_atom(color_symbol(at), {var})};
    for (const auto& child : t.children().at(at)) {
        const std::string y = "x" + std::to_string(++counter);
        Formula sub = canonical_query_rec(t, child, y, counter);
        parts.push_back(f_exists(y, f_and({f_atom("E", {var, y}), std::move(sub)})));
    }
    if (parts.size() == 1) return std::move(parts.front());
    return f_and(std::move(parts));
}

} // namespace

Formula canonical_query(const RootedForest& t, const std::string& root) {
    if (!t.is_single_tree()) throw std::invalid_argument("canonical_query: single tree required");
    if (!t.graph.s.has_element(root))
        throw std::invalid_argument("canonical_query: foreign root " + root);
    // re-root at the requested vertex
    RootedForest rerooted = RootedForest::make(t.graph, {root});
    int counter = 0;
    return canonical_query_rec(rerooted, root, "x0", counter);
}

RootedForest formula_forest(const Formula& f) {
    Formula norm = normalize_pp(f);
    std::vector<std::string> vars;
    std::vector<std::pair<std::string, std::string>> edges;
    std::set<std::string> roots;
    std::function<void(const Formula&, const std::string&)> walk =
        [&](const Formula& g, const std::string& enclosing) {
            switch (g->kind) {
                case FormulaKind::Exists:
                    vars.push_back(g->bound);
                    if (enclosing.empty())
                        roots.insert(g->bound);
                    else
                        edges.emplace_back(enclosing, g->bound);
                    walk(g->children[0], g->bound);
                    return;
                case FormulaKind::And:
                case FormulaKind::Or:
                case FormulaKind::Not:
                    for (const auto& c : g->children) walk(c, enclosing);
                    return;
                default:
                    return;
            }
        };
    walk(norm, "");
    if (vars.empty()) throw std::invalid_argument("formula_forest: no quantified variables");
    return RootedForest::make(Graph::from_edges(std::move(vars), std::move(edges)),
                              std::move(roots));
}

namespace {

std::string complement_symbol(const std::string& rel) { return "not_" + rel; }

void negated_symbols(const Formula& f, std::map<std::string, int>& out, bool& negated_eq) {
    switch (f->kind) {
        case FormulaKind::Not: {
            const auto& inner = f->children[0];
            if (inner->kind == FormulaKind::Eq)
                negated_eq = true;
            else
                out[inner->rel] = static_cast<int>(inner->vars.size());
            return;
        }
        case FormulaKind::Atom:
        case FormulaKind::Eq:
            return;
        default:
            for (const auto& c : f->children) negated_symbols(c, out, negated_eq);
            return;
    }
}

Formula rewrite_negations(const Formula& f, bool use_neq) {
    switch (f->kind) {
        case FormulaKind::Not: {
            const auto& inner = f->children[0];
            if (inner->kind == FormulaKind::Eq) {
                if (!use_neq) throw std::logic_error("unexpected negated equality");
                return f_atom("neq", inner->vars);
            }
            return f_atom(complement_symbol(inner->rel), inner->vars);
        }
        case FormulaKind::Atom:
        case FormulaKind::Eq:
            return f;
        case FormulaKind::And:
        case FormulaKind::Or: {
            std::vector<Formula> cs;
            for (const auto& c : f->children) cs.push_back(rewrite_negations(c, use_neq));
            return f->kind == FormulaKind::And ? f_and(std::move(cs)) : f_or(std::move(cs));
        }
        case FormulaKind::Exists:
            return f_exists(f->bound, rewrite_negations(f->children[0], use_neq));
    }
    throw std::logic_error("unreachable");
}

// Distributes exists and conjunction over disjunction, producing the PP
// disjuncts. Sizes are guarded by the caller.
std::vector<Formula> disjunctive_form(const Formula& f, std::uint64_t guard) {
    switch (f->kind) {
        case FormulaKind::Atom:
        case FormulaKind::Eq:
            return {f};
        case FormulaKind::Not:
            throw std::logic_error("negation must be rewritten before distribution");
        case FormulaKind::Or: {
            std::vector<Formula> out;
            for (const auto& c : f->children) {
                auto sub = disjunctive_form(c, guard);
                out.insert(out.end(), sub.begin(), sub.end());
                ensure(out.size() <= guard, "existential_to_dpp: disjunct count exceeds guard");
            }
            return out;
        }
        case FormulaKind::And: {
            std::vector<std::vector<Formula>> parts;
            for (const auto& c : f->children) parts.push_back(disjunctive_form(c, guard));
            std::vector<Formula> out;
            std::vector<std::size_t> pick(parts.size(), 0);
            for (;;) {
                std::vector<Formula> conj;
                for (std::size_t i = 0; i < parts.size(); ++i) conj.push_back(parts[i][pick[i]]);
                out.push_back(f_and(std::move(conj)));
                ensure(out.size() <= guard, "existential_to_dpp: disjunct count exceeds guard");
                std::size_t i = 0;
                while (i < parts.size() && ++pick[i] == parts[i].size()) pick[i++] = 0;
                if (i == parts.size()) break;
            }
            return out;
        }
        case FormulaKind::Exists: {
            auto subs = disjunctive_form(f->children[0], guard);
            std::vector<Formula> out;
            out.reserve(subs.size());
            for (auto& s : subs) out.push_back(f_exists(f->bound, std::move(s)));
            return out;
        }
    }
    throw std::logic_error("unreachable");
}

} // namespace

DppResult existential_to_dpp(const Structure& a, const Formula& f, std::uint64_t guard) {
    if (!is_sentence(f)) throw std::invalid_argument("existential_to_dpp: sentence required");
    check_symbols(a, f);

    std::map<std::string, int> negated;
    bool negated_eq = false;
    negated_symbols(f, negated, negated_eq);

    std::map<std::string, int> symbols = a.vocabulary.symbols;
    std::map<std::string, std::set<Tuple>> rels = a.relations;
    int max_ar = 1;
    for (const auto& [n, ar] : symbols) {
        (void)n;
        max_ar = std::max(max_ar, ar);
    }
    for (const auto& [rel, ar] : negated) {
        const std::string comp = complement_symbol(rel);
        if (symbols.count(comp))
            throw std::invalid_argument("existential_to_dpp: symbol clash on " + comp);
        symbols[comp] = ar;
        // complement relation: full ar-fold product minus the tuples of rel
        std::set<Tuple> full;
        std::vector<std::size_t> pick(ar, 0);
        for (;;) {
            Tuple t;
            for (std::size_t i = 0; i < static_cast<std::size_t>(ar); ++i)
                t.push_back(a.universe[pick[i]]);
            if (!a.tuples(rel).count(t)) full.insert(std::move(t));
            std::size_t i = 0;
            while (i < static_cast<std::size_t>(ar) && ++pick[i] == a.universe.size())
                pick[i++] = 0;
            if (i == static_cast<std::size_t>(ar)) break;
        }
        rels[comp] = std::move(full);
    }
    if (negated_eq) {
        if (symbols.count("neq"))
            throw std::invalid_argument("existential_to_dpp: symbol clash on neq");
        symbols["neq"] = 2;
        std::set<Tuple> off_diag;
        for (const auto& x : a.universe)
            for (const auto& y : a.universe)
                if (x != y) off_diag.insert({x, y});
        rels["neq"] = std::move(off_diag);
    }

    DppResult out;
    out.expanded = Structure::make(Vocabulary::make(std::move(symbols), std::max(4, max_ar)),
                                   a.universe, std::move(rels));
    Formula rewritten = rewrite_negations(f, negated_eq);
    out.disjuncts = disjunctive_form(rewritten, guard);
    return out;
}

std::vector<std::string> validate_interpretation(const Interpretation& i) {
    std::vector<std::string> out;
    if (i.dimension < 1) out.push_back("dimension must be >= 1");
    auto check = [&](const Formula& f, int blocks, const std::string& what) {
        if (!f) {
            out.push_back("missing formula for " + what);
            return;
        }
        // quantifier-free check
        std::function<bool(const Formula&)> qf = [&](const Formula& g) -> bool {
            if (g->kind == FormulaKind::Exists) return false;
            for (const auto& c : g->children)
                if (!qf(c)) return false;
            return true;
        };
        if (!qf(f)) out.push_back("formula for " + what + " is not quantifier-free");
        std::set<std::string> allowed;
        for (int bl = 1; bl <= blocks; ++bl)
            for (int p = 1; p <= i.dimension; ++p)
                allowed.insert("x" + std::to_string(bl) + "_" + std::to_string(p));
        for (const auto& v : free_variables(f))
            if (!allowed.count(v)) out.push_back("formula for " + what + " uses stray variable " + v);
    };
    check(i.universe_formula, 1, "U");
    for (const auto& [name, ar] : i.output.symbols) {
        auto it = i.relation_formulas.find(name);
        if (it == i.relation_formulas.end()) {
            out.push_back("missing formula for " + name);
            continue;
        }
        check(it->second, ar, name);
    }
    return out;
}

namespace {

std::string tuple_name(const std::vector<int>& ids, const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out += "*";
        out += names[ids[i]];
    }
    return out;
}

} // namespace

std::optional<Structure> eval_interpretation(const Interpretation& interp, const Structure& a,
                                             std::uint64_t guard) {
    auto violations = validate_interpretation(interp);
    if (!violations.empty())
        throw std::invalid_argument("eval_interpretation: " + violations.front());
    if (!(interp.input == a.vocabulary))
        throw std::invalid_argument("eval_interpretation: input vocabulary mismatch");

    const int w = interp.dimension;
    const int n = static_cast<int>(a.universe.size());

    // universe scan over A^w
    auto u_pred = [&](const std::vector<int>& ids) {
        std::map<std::string, std::string> env;
        for (int p = 0; p < w; ++p) env["x1_" + std::to_string(p + 1)] = a.universe[ids[p]];
        return eval_with_env(a, interp.universe_formula, env);
    };
    const auto universe_tuples = kernels::scan_satisfying(n, w, u_pred, guard);
    if (universe_tuples.empty()) return std::nullopt;

    std::vector<std::string> universe;
    universe.reserve(universe_tuples.size());
    for (const auto& t : universe_tuples) universe.push_back(tuple_name(t, a.universe));

    std::map<std::string, std::set<Tuple>> rels;
    int max_ar = 1;
    for (const auto& [name, ar] : interp.output.symbols) {
        max_ar = std::max(max_ar, ar);
        const Formula& phi = interp.relation_formulas.at(name);
        const int m = static_cast<int>(universe_tuples.size());
        // scan over universe-tuple indices, not raw element tuples
        auto pred = [&](const std::vector<int>& pick) {
            std::map<std::string, std::string> env;
            for (int bl = 0; bl < ar; ++bl)
                for (int p = 0; p < w; ++p)
                    env["x" + std::to_string(bl + 1) + "_" + std::to_string(p + 1)] =
                        a.universe[universe_tuples[pick[bl]][p]];
            return eval_with_env(a, phi, env);
        };
        auto hits = kernels::scan_satisfying(m, ar, pred, guard);
        auto& dst = rels[name];
        for (const auto& pick : hits) {
            Tuple t;
            t.reserve(pick.size());
            for (int idx : pick) t.push_back(universe[idx]);
            dst.insert(std::move(t));
        }
    }
    return Structure::make(Vocabulary::make(interp.output.symbols, std::max(4, max_ar)),
                           std::move(universe), std::move(rels));
}

Interpretation identity_interpretation(const Vocabulary& voc) {
    Interpretation i;
    i.input = voc;
    i.output = voc;
    i.dimension = 1;
    i.universe_formula = f_eq("x1_1", "x1_1");
    for (const auto& [name, ar] : voc.symbols) {
        std::vector<std::string> vars;
        for (int bl = 1; bl <= ar; ++bl) vars.push_back("x" + std::to_string(bl) + "_1");
        i.relation_formulas[name] = f_atom(name, std::move(vars));
    }
    return i;
}

} // namespace homlab
