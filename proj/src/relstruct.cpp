#include "homlab/relstruct.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

#include "homlab/kernels.hpp"

namespace homlab {

Vocabulary Vocabulary::make(std::map<std::string, int> symbols, int max_arity) {
    for (const auto& [name, ar] : symbols) {
        if (name.empty()) throw std::invalid_argument("vocabulary: empty symbol name");
        if (ar < 1) throw std::invalid_argument("vocabulary: arity of " + name + " must be >= 1");
        if (ar > max_arity)
            throw std::invalid_argument("vocabulary: arity of " + name + " exceeds bound " +
                                        std::to_string(max_arity));
    }
    Vocabulary v;
    v.symbols = std::move(symbols);
    return v;
}

int Vocabulary::arity(const std::string& name) const {
    auto it = symbols.find(name);
    if (it == symbols.end()) throw std::invalid_argument("unknown symbol " + name);
    return it->second;
}

Structure Structure::make(Vocabulary voc, std::vector<std::string> universe,
                          std::map<std::string, std::set<Tuple>> relations) {
    Structure s;
    s.vocabulary = std::move(voc);
    std::sort(universe.begin(), universe.end());
    universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
    s.universe = std::move(universe);
    s.relations = std::move(relations);
    for (const auto& [name, ar] : s.vocabulary.symbols) {
        (void)ar;
        s.relations.try_emplace(name);
    }
    auto violations = validate_structure(s);
    if (!violations.empty()) throw std::invalid_argument("invalid structure: " + violations.front());
    return s;
}

bool Structure::has_element(const std::string& e) const {
    return std::binary_search(universe.begin(), universe.end(), e);
}

const std::set<Tuple>& Structure::tuples(const std::string& symbol) const {
    auto it = relations.find(symbol);
    if (it == relations.end()) throw std::invalid_argument("unknown symbol " + symbol);
    return it->second;
}

std::vector<std::string> validate_structure(const Structure& s) {
    std::vector<std::string> out;
    if (s.universe.empty()) out.push_back("empty universe");
    if (!std::is_sorted(s.universe.begin(), s.universe.end()))
        out.push_back("universe not in canonical order");
    if (std::adjacent_find(s.universe.begin(), s.universe.end()) != s.universe.end())
        out.push_back("duplicate universe element");
    for (const auto& [name, tuples] : s.relations) {
        if (!s.vocabulary.has(name)) {
            out.push_back("relation over unknown symbol " + name);
            continue;
        }
        const int ar = s.vocabulary.arity(name);
        for (const auto& t : tuples) {
            if (static_cast<int>(t.size()) != ar) {
                out.push_back("arity mismatch in " + name);
                continue;
            }
            for (const auto& e : t)
                if (!s.has_element(e)) out.push_back("foreign element " + e + " in " + name);
        }
    }
    for (const auto& [name, ar] : s.vocabulary.symbols) {
        (void)ar;
        if (!s.relations.count(name)) out.push_back("missing relation entry for " + name);
    }
    return out;
}

Structure induced(const Structure& a, const std::set<std::string>& s) {
    if (s.empty()) throw std::invalid_argument("induced: empty subset");
    for (const auto& e : s)
        if (!a.has_element(e)) throw std::invalid_argument("induced: foreign element " + e);
    std::map<std::string, std::set<Tuple>> rels;
    for (const auto& [name, tuples] : a.relations) {
        auto& dst = rels[name];
        for (const auto& t : tuples) {
            bool inside = std::all_of(t.begin(), t.end(),
                                      [&](const std::string& e) { return s.count(e) > 0; });
            if (inside) dst.insert(t);
        }
    }
    return Structure::make(a.vocabulary, {s.begin(), s.end()}, std::move(rels));
}

Structure gaifman(const Structure& a) {
    std::set<Tuple> edges;
    for (const auto& [name, tuples] : a.relations) {
        (void)name;
        for (const auto& t : tuples)
            for (const auto& x : t)
                for (const auto& y : t)
                    if (x != y) edges.insert({x, y});
    }
    return Structure::make(Vocabulary::make({{"E", 2}}), a.universe, {{"E", std::move(edges)}});
}

namespace {

// Union-find over universe indices.
struct Dsu {
    std::vector<int> p;
    explicit Dsu(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
    void unite(int a, int b) { p[find(a)] = find(b); }
};

} // namespace

std::vector<Structure> components(const Structure& a) {
    const auto g = gaifman(a);
    std::map<std::string, int> idx;
    for (int i = 0; i < static_cast<int>(a.universe.size()); ++i) idx[a.universe[i]] = i;
    Dsu dsu(static_cast<int>(a.universe.size()));
    for (const auto& t : g.tuples("E")) dsu.unite(idx[t[0]], idx[t[1]]);
    std::map<int, std::set<std::string>> groups;
    for (int i = 0; i < static_cast<int>(a.universe.size()); ++i)
        groups[dsu.find(i)].insert(a.universe[i]);
    // order by least element = canonical order of the root's group minimum
    std::vector<std::pair<std::string, std::set<std::string>>> ordered;
    for (auto& [root, members] : groups) {
        (void)root;
        ordered.emplace_back(*members.begin(), std::move(members));
    }
    std::sort(ordered.begin(), ordered.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<Structure> out;
    out.reserve(ordered.size());
    for (const auto& [least, members] : ordered) {
        (void)least;
        out.push_back(induced(a, members));
    }
    return out;
}

Structure direct_product(const Structure& a, const Structure& b) {
    if (!(a.vocabulary == b.vocabulary))
        throw std::invalid_argument("direct_product: vocabulary mismatch");
    auto name = [](const std::string& x, const std::string& y) { return x + "*" + y; };
    std::vector<std::string> universe;
    for (const auto& x : a.universe)
        for (const auto& y : b.universe) universe.push_back(name(x, y));
    std::map<std::string, std::set<Tuple>> rels;
    for (const auto& [sym, ar] : a.vocabulary.symbols) {
        auto& dst = rels[sym];
        for (const auto& ta : a.tuples(sym))
            for (const auto& tb : b.tuples(sym)) {
                Tuple t(ar);
                for (int i = 0; i < ar; ++i) t[i] = name(ta[i], tb[i]);
                dst.insert(std::move(t));
            }
    }
    return Structure::make(a.vocabulary, std::move(universe), std::move(rels));
}

Structure pair_structure(const Structure& a, const Structure& b) {
    if (a.vocabulary.has("P_1") || a.vocabulary.has("P_2") || b.vocabulary.has("P_1") ||
        b.vocabulary.has("P_2"))
        throw std::invalid_argument("pair: P_1/P_2 already present");
    std::map<std::string, int> symbols = a.vocabulary.symbols;
    for (const auto& [name, ar] : b.vocabulary.symbols) {
        auto it = symbols.find(name);
        if (it != symbols.end() && it->second != ar)
            throw std::invalid_argument("pair: symbol " + name + " has conflicting arities");
        symbols[name] = ar;
    }
    symbols["P_1"] = 1;
    symbols["P_2"] = 1;
    auto tag = [](int part, const std::string& e) { return std::to_string(part) + "." + e; };

    std::vector<std::string> universe;
    std::map<std::string, std::set<Tuple>> rels;
    for (const auto& x : a.universe) {
        universe.push_back(tag(1, x));
        rels["P_1"].insert({tag(1, x)});
    }
    for (const auto& y : b.universe) {
        universe.push_back(tag(2, y));
        rels["P_2"].insert({tag(2, y)});
    }
    auto copy_side = [&](const Structure& s, int part) {
        for (const auto& [name, tuples] : s.relations)
            for (const auto& t : tuples) {
                Tuple tt;
                tt.reserve(t.size());
                for (const auto& e : t) tt.push_back(tag(part, e));
                rels[name].insert(std::move(tt));
            }
    };
    copy_side(a, 1);
    copy_side(b, 2);
    int max_ar = 1;
    for (const auto& [n, ar] : symbols) {
        (void)n;
        max_ar = std::max(max_ar, ar);
    }
    return Structure::make(Vocabulary::make(std::move(symbols), std::max(4, max_ar)),
                           std::move(universe), std::move(rels));
}

std::string color_symbol(const std::string& element) { return "C_" + element; }

Structure star_expand(const Structure& a) {
    std::map<std::string, int> symbols = a.vocabulary.symbols;
    for (const auto& e : a.universe) {
        const std::string c = color_symbol(e);
        if (symbols.count(c)) throw std::invalid_argument("star_expand: symbol clash on " + c);
        symbols[c] = 1;
    }
    std::map<std::string, std::set<Tuple>> rels = a.relations;
    for (const auto& e : a.universe) rels[color_symbol(e)] = {{e}};
    int max_ar = 1;
    for (const auto& [n, ar] : symbols) {
        (void)n;
        max_ar = std::max(max_ar, ar);
    }
    return Structure::make(Vocabulary::make(std::move(symbols), std::max(4, max_ar)), a.universe,
                           std::move(rels));
}

bool is_partial_hom(const Structure& a, const Structure& b, const PartialHom& g) {
    if (!(a.vocabulary == b.vocabulary))
        throw std::invalid_argument("is_partial_hom: vocabulary mismatch");
    for (const auto& [x, y] : g) {
        if (!a.has_element(x)) throw std::invalid_argument("is_partial_hom: foreign source " + x);
        if (!b.has_element(y)) throw std::invalid_argument("is_partial_hom: foreign target " + y);
    }
    if (g.empty()) return true;
    for (const auto& [name, tuples] : a.relations) {
        const auto& target = b.tuples(name);
        for (const auto& t : tuples) {
            Tuple image;
            image.reserve(t.size());
            bool covered = true;
            for (const auto& e : t) {
                auto it = g.find(e);
                if (it == g.end()) {
                    covered = false;
                    break;
                }
                image.push_back(it->second);
            }
            if (covered && !target.count(image)) return false;
        }
    }
    return true;
}

namespace {

struct HomProblem {
    kernels::Indexed a, b;
    // per a-element: tuples (symbol idx, tuple idx) it participates in
    std::vector<std::vector<std::pair<int, int>>> involving;
    // b-side tuple membership by encoded key
    std::vector<std::set<std::vector<int>>> b_sets;

    explicit HomProblem(const Structure& sa, const Structure& sb)
        : a(kernels::index_structure(sa)), b(kernels::index_structure(sb)) {
        involving.resize(a.n);
        for (int si = 0; si < static_cast<int>(a.symbols.size()); ++si)
            for (int ti = 0; ti < static_cast<int>(a.tuples[si].size()); ++ti)
                for (int e : a.tuples[si][ti]) involving[e].emplace_back(si, ti);
        for (int e = 0; e < a.n; ++e) {
            std::sort(involving[e].begin(), involving[e].end());
            involving[e].erase(std::unique(involving[e].begin(), involving[e].end()),
                               involving[e].end());
        }
        b_sets.resize(b.symbols.size());
        for (int si = 0; si < static_cast<int>(b.symbols.size()); ++si)
            for (const auto& t : b.tuples[si]) b_sets[si].insert(t);
    }

    // Checks all a-tuples involving element e that are fully assigned.
    bool consistent(const std::vector<int>& img, int e) const {
        for (auto [si, ti] : involving[e]) {
            const auto& t = a.tuples[si][ti];
            std::vector<int> image;
            image.reserve(t.size());
            bool covered = true;
            for (int x : t) {
                if (img[x] < 0) {
                    covered = false;
                    break;
                }
                image.push_back(img[x]);
            }
            if (covered && !b_sets[si].count(image)) return false;
        }
        return true;
    }
};

// Connected pieces of a's Gaifman graph, each listing element ids in
// canonical order.
std::vector<std::vector<int>> gaifman_components(const Structure& sa) {
    auto comps = components(sa);
    std::map<std::string, int> idx;
    for (int i = 0; i < static_cast<int>(sa.universe.size()); ++i) idx[sa.universe[i]] = i;
    std::vector<std::vector<int>> out;
    for (const auto& c : comps) {
        std::vector<int> ids;
        ids.reserve(c.universe.size());
        for (const auto& e : c.universe) ids.push_back(idx.at(e));
        out.push_back(std::move(ids));
    }
    return out;
}

bool backtrack_hom(const HomProblem& p, const std::vector<int>& order, std::size_t pos,
                   std::vector<int>& img, std::uint64_t budget, std::uint64_t& steps) {
    if (pos == order.size()) return true;
    const int e = order[pos];
    for (int y = 0; y < p.b.n; ++y) {
        if (++steps > budget) return false;
        img[e] = y;
        if (p.consistent(img, e) && backtrack_hom(p, order, pos + 1, img, budget, steps))
            return true;
        img[e] = -1;
    }
    return false;
}

} // namespace

HomSearchResult find_hom(const Structure& a, const Structure& b, std::uint64_t budget) {
    if (!(a.vocabulary == b.vocabulary))
        throw std::invalid_argument("find_hom: vocabulary mismatch");
    HomProblem p(a, b);
    HomSearchResult res;
    std::vector<int> img(p.a.n, -1);
    for (const auto& comp : gaifman_components(a)) {
        std::uint64_t steps = 0;
        if (!backtrack_hom(p, comp, 0, img, budget, steps)) {
            res.steps += steps;
            res.status = steps > budget ? SearchStatus::BudgetExceeded : SearchStatus::None;
            return res;
        }
        res.steps += steps;
    }
    res.status = SearchStatus::Found;
    for (int e = 0; e < p.a.n; ++e) res.witness[p.a.names[e]] = p.b.names[img[e]];
    return res;
}

namespace {

// Searches for a non-injective endomorphism by backtracking in canonical
// order; the first one found is the lexicographically least.
bool find_noninjective_endo(const Structure& a, std::vector<int>& out) {
    HomProblem p(a, a);
    std::vector<int> img(p.a.n, -1);
    // rec over all elements in canonical order
    std::vector<int> used(p.a.n, 0);
    std::function<bool(int, bool)> rec = [&](int pos, bool collided) -> bool {
        if (pos == p.a.n) return collided;
        // prune: if no collision yet and remaining slots cannot create one,
        // a collision must still be possible; it always is unless forced
        // injective, so no cheap prune here beyond constraint checks.
        for (int y = 0; y < p.a.n; ++y) {
            img[pos] = y;
            if (!p.consistent(img, pos)) {
                img[pos] = -1;
                continue;
            }
            bool c2 = collided || used[y] > 0;
            ++used[y];
            if (rec(pos + 1, c2)) return true;
            --used[y];
            img[pos] = -1;
        }
        return false;
    };
    if (!rec(0, false)) return false;
    out = img;
    return true;
}

} // namespace

bool is_core(const Structure& a, int guard) {
    ensure(static_cast<int>(a.size()) <= guard,
           "is_core: structure size " + std::to_string(a.size()) + " exceeds guard " +
               std::to_string(guard));
    std::vector<int> endo;
    return !find_noninjective_endo(a, endo);
}

Structure core(const Structure& a, int guard) {
    ensure(static_cast<int>(a.size()) <= guard,
           "core: structure size " + std::to_string(a.size()) + " exceeds guard " +
               std::to_string(guard));
    Structure cur = a;
    for (;;) {
        std::vector<int> endo;
        if (!find_noninjective_endo(cur, endo)) return cur;
        std::set<std::string> image;
        for (int y : endo) image.insert(cur.universe[y]);
        cur = induced(cur, image);
    }
}

namespace {

// Per-element signature: occurrence counts per (symbol, position), used to
// prune isomorphism candidates.
std::vector<std::map<std::pair<int, int>, int>> signature(const kernels::Indexed& x) {
    std::vector<std::map<std::pair<int, int>, int>> sig(x.n);
    for (int si = 0; si < static_cast<int>(x.symbols.size()); ++si)
        for (const auto& t : x.tuples[si])
            for (int i = 0; i < static_cast<int>(t.size()); ++i) ++sig[t[i]][{si, i}];
    return sig;
}

} // namespace

bool is_isomorphic(const Structure& a, const Structure& b, int guard) {
    if (!(a.vocabulary == b.vocabulary)) return false;
    if (a.size() != b.size()) return false;
    for (const auto& [name, tuples] : a.relations)
        if (tuples.size() != b.tuples(name).size()) return false;
    ensure(static_cast<int>(a.size()) <= guard,
           "is_isomorphic: size " + std::to_string(a.size()) + " exceeds guard " +
               std::to_string(guard));
    auto ia = kernels::index_structure(a);
    auto ib = kernels::index_structure(b);
    auto sa = signature(ia);
    auto sb = signature(ib);
    std::vector<std::vector<int>> cand(ia.n);
    for (int x = 0; x < ia.n; ++x) {
        for (int y = 0; y < ib.n; ++y)
            if (sa[x] == sb[y]) cand[x].push_back(y);
        if (cand[x].empty()) return false;
    }
    std::vector<std::set<std::vector<int>>> bsets(ib.symbols.size());
    for (int si = 0; si < static_cast<int>(ib.symbols.size()); ++si)
        for (const auto& t : ib.tuples[si]) bsets[si].insert(t);
    std::vector<std::vector<std::pair<int, int>>> involving(ia.n);
    for (int si = 0; si < static_cast<int>(ia.symbols.size()); ++si)
        for (int ti = 0; ti < static_cast<int>(ia.tuples[si].size()); ++ti)
            for (int e : ia.tuples[si][ti]) involving[e].emplace_back(si, ti);

    std::vector<int> img(ia.n, -1), used(ib.n, 0);
    std::function<bool(int)> rec = [&](int pos) -> bool {
        if (pos == ia.n) {
            // tuple counts match and the map is a bijective homomorphism,
            // hence an isomorphism
            return true;
        }
        for (int y : cand[pos]) {
            if (used[y]) continue;
            img[pos] = y;
            bool ok = true;
            for (auto [si, ti] : involving[pos]) {
                const auto& t = ia.tuples[si][ti];
                std::vector<int> image;
                image.reserve(t.size());
                bool covered = true;
                for (int e : t) {
                    if (img[e] < 0) {
                        covered = false;
                        break;
                    }
                    image.push_back(img[e]);
                }
                if (covered && !bsets[si].count(image)) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                used[y] = 1;
                if (rec(pos + 1)) return true;
                used[y] = 0;
            }
            img[pos] = -1;
        }
        return false;
    };
    return rec(0);
}

} // namespace homlab
