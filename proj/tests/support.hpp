#pragma once

// Test-only oracles, deliberately independent of the library's search and
// DP paths: blind enumeration everywhere, no pruning, no memoization.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "homlab/decon.hpp"
#include "homlab/folog.hpp"
#include "homlab/games.hpp"
#include "homlab/graph.hpp"
#include "homlab/relstruct.hpp"

namespace homlab::testing {

/// Deterministic splittable RNG (xorshift*); identical across platforms.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed ^ 0x9e3779b97f4a7c15ull) {
        next();
        next();
    }

    std::uint64_t next() {
        state ^= state >> 12;
        state ^= state << 25;
        state ^= state >> 27;
        return state * 0x2545f4914f6cdd1dull;
    }

    // uniform in [0, n)
    std::uint64_t below(std::uint64_t n) { return next() % n; }
    bool coin(double p = 0.5) { return static_cast<double>(next() >> 11) / (1ull << 53) < p; }
};

// --- blind homomorphism oracle ----------------------------------------------

inline bool map_is_hom(const Structure& a, const Structure& b, const PartialHom& f) {
    for (const auto& [name, tuples] : a.relations) {
        const auto& target = b.tuples(name);
        for (const auto& t : tuples) {
            Tuple image;
            for (const auto& e : t) image.push_back(f.at(e));
            if (!target.count(image)) return false;
        }
    }
    return true;
}

/// Exhaustive scan over all |B|^|A| maps.
inline bool hom_oracle(const Structure& a, const Structure& b) {
    const std::size_t n = a.universe.size(), m = b.universe.size();
    std::vector<std::size_t> pick(n, 0);
    for (;;) {
        PartialHom f;
        for (std::size_t i = 0; i < n; ++i) f[a.universe[i]] = b.universe[pick[i]];
        if (map_is_hom(a, b, f)) return true;
        std::size_t i = 0;
        while (i < n && ++pick[i] == m) pick[i++] = 0;
        if (i == n) return false;
    }
}

/// All homomorphisms, for witness-set comparisons.
inline std::vector<PartialHom> all_homs_oracle(const Structure& a, const Structure& b) {
    std::vector<PartialHom> out;
    const std::size_t n = a.universe.size(), m = b.universe.size();
    std::vector<std::size_t> pick(n, 0);
    for (;;) {
        PartialHom f;
        for (std::size_t i = 0; i < n; ++i) f[a.universe[i]] = b.universe[pick[i]];
        if (map_is_hom(a, b, f)) out.push_back(f);
        std::size_t i = 0;
        while (i < n && ++pick[i] == m) pick[i++] = 0;
        if (i == n) return out;
    }
}

inline bool is_core_oracle(const Structure& a) {
    for (const auto& f : all_homs_oracle(a, a)) {
        std::set<std::string> image;
        for (const auto& [x, y] : f) {
            (void)x;
            image.insert(y);
        }
        if (image.size() != a.universe.size()) return false;
    }
    return true;
}

// --- width oracles (permutation brute force) ---------------------------------

struct AdjOracle {
    int n = 0;
    std::vector<std::string> names;
    std::vector<std::vector<bool>> adj;

    explicit AdjOracle(const Graph& g) {
        names = g.vertices();
        n = static_cast<int>(names.size());
        adj.assign(n, std::vector<bool>(n, false));
        std::map<std::string, int> idx;
        for (int i = 0; i < n; ++i) idx[names[i]] = i;
        for (const auto& t : g.s.tuples("E")) adj[idx[t[0]]][idx[t[1]]] = true;
    }
};

/// Treewidth as the best elimination order, with explicit fill-in.
inline int treewidth_oracle(const Graph& g) {
    AdjOracle a(g);
    std::vector<int> order(a.n);
    std::iota(order.begin(), order.end(), 0);
    int best = a.n;
    do {
        auto adj = a.adj;
        std::vector<bool> gone(a.n, false);
        int worst = 0;
        for (int v : order) {
            std::vector<int> nb;
            for (int u = 0; u < a.n; ++u)
                if (!gone[u] && adj[v][u]) nb.push_back(u);
            worst = std::max(worst, static_cast<int>(nb.size()));
            for (std::size_t i = 0; i < nb.size(); ++i)
                for (std::size_t j = i + 1; j < nb.size(); ++j)
                    adj[nb[i]][nb[j]] = adj[nb[j]][nb[i]] = true;
            gone[v] = true;
        }
        best = std::min(best, worst);
    } while (std::next_permutation(order.begin(), order.end()));
    return best;
}

/// Pathwidth as the best vertex-separation order.
inline int pathwidth_oracle(const Graph& g) {
    AdjOracle a(g);
    std::vector<int> order(a.n);
    std::iota(order.begin(), order.end(), 0);
    int best = a.n;
    do {
        std::vector<bool> placed(a.n, false);
        int worst = 0;
        for (int step = 0; step < a.n; ++step) {
            placed[order[step]] = true;
            int boundary = 0;
            for (int u = 0; u < a.n; ++u) {
                if (!placed[u]) continue;
                bool open = false;
                for (int w = 0; w < a.n; ++w)
                    if (!placed[w] && a.adj[u][w]) open = true;
                if (open) ++boundary;
            }
            worst = std::max(worst, boundary);
        }
        best = std::min(best, worst);
    } while (std::next_permutation(order.begin(), order.end()));
    return best;
}

/// Tree depth by enumerating every parent assignment (rooted forests on the
/// vertex set) and checking height and closure.
inline int tree_depth_oracle(const Graph& g) {
    AdjOracle a(g);
    const int n = a.n;
    std::vector<int> parent(n, -1);  // -1 = root
    int best = n;
    std::function<void(int)> rec = [&](int v) {
        if (v == n) {
            // acyclicity + depth via parent chains
            std::vector<int> depth(n, -2);
            std::function<int(int)> depth_of = [&](int u) -> int {
                if (depth[u] != -2) return depth[u];
                depth[u] = -3;  // in progress
                int d = parent[u] == -1 ? 0 : 1 + depth_of(parent[u]);
                if (parent[u] != -1 && depth[parent[u]] == -3) d = 1000000;  // cycle
                depth[u] = d;
                return d;
            };
            int h = 0;
            for (int u = 0; u < n; ++u) h = std::max(h, depth_of(u));
            if (h >= 1000000 || h >= best) return;
            // closure: each edge joins ancestor-related vertices
            auto ancestor_of = [&](int x, int y) {
                for (int c = y; c != -1; c = parent[c])
                    if (c == x) return true;
                return false;
            };
            for (int x = 0; x < n; ++x)
                for (int y = 0; y < n; ++y)
                    if (a.adj[x][y] && !ancestor_of(x, y) && !ancestor_of(y, x)) return;
            best = std::min(best, h);
            return;
        }
        for (int p = -1; p < n; ++p) {
            if (p == v) continue;
            parent[v] = p;
            rec(v + 1);
        }
        parent[v] = -1;
    };
    rec(0);
    return best;
}

// --- property P and game oracles ---------------------------------------------

/// P(d,k) by literal recursion with subset enumeration over proper
/// descendants.
inline bool property_oracle(const RootedForest& t, const std::string& u, int d, int k) {
    if (d == 0) return true;
    const auto parents = t.parents();
    const auto depths = t.depths();
    // proper descendants of u
    std::vector<std::string> desc;
    for (const auto& v : t.graph.vertices()) {
        if (v == u) continue;
        for (std::string c = v; ; c = parents.at(c)) {
            if (c == u) {
                desc.push_back(v);
                break;
            }
            if (parents.at(c) == c) break;
        }
    }
    auto incomparable = [&](const std::string& x, const std::string& y) {
        auto anc = [&](const std::string& p, const std::string& q) {
            for (std::string c = q; ; c = parents.at(c)) {
                if (c == p) return true;
                if (parents.at(c) == c) return false;
            }
        };
        return !anc(x, y) && !anc(y, x);
    };
    const int m = static_cast<int>(desc.size());
    if (m < k) return false;
    std::vector<int> pick;
    std::function<bool(int)> choose = [&](int from) -> bool {
        if (static_cast<int>(pick.size()) == k) {
            for (std::size_t i = 0; i < pick.size(); ++i)
                for (std::size_t j = i + 1; j < pick.size(); ++j)
                    if (!incomparable(desc[pick[i]], desc[pick[j]])) return false;
            for (int i : pick)
                if (!property_oracle(t, desc[i], d - 1, k)) return false;
            return true;
        }
        for (int i = from; i < m; ++i) {
            pick.push_back(i);
            if (choose(i + 1)) return true;
            pick.pop_back();
        }
        return false;
    };
    return choose(0);
}

inline bool property_oracle(const RootedForest& t, int d, int k) {
    return property_oracle(t, *t.roots.begin(), d, k);
}

/// Duplicator game value by the literal alternating-quantifier formula over
/// pebble tuples (repetitions allowed); no memoization.
inline bool game_formula_oracle(const Structure& a, const Structure& b,
                                const std::vector<int>& p) {
    std::vector<std::pair<std::string, std::string>> pairs;
    std::function<bool(std::size_t)> round = [&](std::size_t i) -> bool {
        if (i == p.size()) {
            PartialHom f;
            for (const auto& [x, y] : pairs) {
                auto it = f.find(x);
                if (it != f.end() && it->second != y) return false;
                f[x] = y;
            }
            return is_partial_hom(a, b, f);
        }
        // Spoiler: all a-tuples of length p[i]; Duplicator: some b-tuple
        const int len = p[i];
        std::vector<std::size_t> apick(len, 0);
        for (;;) {
            bool answered = false;
            std::vector<std::size_t> bpick(len, 0);
            for (;;) {
                for (int q = 0; q < len; ++q)
                    pairs.emplace_back(a.universe[apick[q]], b.universe[bpick[q]]);
                if (round(i + 1)) answered = true;
                for (int q = 0; q < len; ++q) pairs.pop_back();
                if (answered) break;
                std::size_t q = 0;
                while (q < static_cast<std::size_t>(len) && ++bpick[q] == b.universe.size())
                    bpick[q++] = 0;
                if (q == static_cast<std::size_t>(len)) break;
            }
            if (!answered) return false;
            std::size_t q = 0;
            while (q < static_cast<std::size_t>(len) && ++apick[q] == a.universe.size())
                apick[q++] = 0;
            if (q == static_cast<std::size_t>(len)) return true;
        }
    };
    return round(0);
}

// --- random generators --------------------------------------------------------

inline Graph random_graph(int n, Rng& rng, double density = 0.5) {
    std::vector<std::string> vs;
    for (int i = 0; i < n; ++i) vs.push_back("g" + std::to_string(i));
    std::vector<std::pair<std::string, std::string>> es;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.coin(density)) es.emplace_back(vs[i], vs[j]);
    return Graph::from_edges(std::move(vs), std::move(es));
}

inline RootedForest random_tree(int nodes, Rng& rng) {
    std::vector<std::string> vs;
    for (int i = 0; i < nodes; ++i) vs.push_back("t" + std::to_string(i));
    std::vector<std::pair<std::string, std::string>> es;
    for (int i = 1; i < nodes; ++i)
        es.emplace_back(vs[rng.below(i)], vs[i]);
    return RootedForest::make(Graph::from_edges(std::move(vs), std::move(es)), {vs[0]});
}

inline RootedForest random_tree_of_height(int nodes, int max_height, Rng& rng) {
    if (nodes > 1 && max_height < 1)
        throw std::invalid_argument("random_tree_of_height: max_height >= 1 required");
    std::vector<std::string> vs;
    for (int i = 0; i < nodes; ++i) vs.push_back("t" + std::to_string(i));
    std::vector<std::pair<std::string, std::string>> es;
    std::vector<int> depth(nodes, 0);
    for (int i = 1; i < nodes; ++i) {
        for (;;) {
            const int p = static_cast<int>(rng.below(i));
            if (depth[p] < max_height) {
                es.emplace_back(vs[p], vs[i]);
                depth[i] = depth[p] + 1;
                break;
            }
        }
    }
    return RootedForest::make(Graph::from_edges(std::move(vs), std::move(es)), {vs[0]});
}

/// Random structure over a vocabulary; every tuple kept with the given
/// density.
inline Structure random_structure(const Vocabulary& voc, int n, Rng& rng,
                                  double density = 0.35, const std::string& stem = "e") {
    std::vector<std::string> vs;
    for (int i = 0; i < n; ++i) vs.push_back(stem + std::to_string(i));
    std::map<std::string, std::set<Tuple>> rels;
    for (const auto& [name, ar] : voc.symbols) {
        auto& dst = rels[name];
        std::vector<std::size_t> pick(ar, 0);
        for (;;) {
            if (rng.coin(density)) {
                Tuple t;
                for (int i = 0; i < ar; ++i) t.push_back(vs[pick[i]]);
                dst.insert(std::move(t));
            }
            std::size_t i = 0;
            while (i < static_cast<std::size_t>(ar) && ++pick[i] == vs.size()) pick[i++] = 0;
            if (i == static_cast<std::size_t>(ar)) break;
        }
    }
    return Structure::make(voc, std::move(vs), std::move(rels));
}

/// Random graph-shaped structure (irreflexive symmetric E).
inline Structure random_graph_structure(int n, Rng& rng, double density = 0.5,
                                        const std::string& stem = "e") {
    std::vector<std::string> vs;
    for (int i = 0; i < n; ++i) vs.push_back(stem + std::to_string(i));
    std::set<Tuple> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.coin(density)) {
                edges.insert({vs[i], vs[j]});
                edges.insert({vs[j], vs[i]});
            }
    return Structure::make(Vocabulary::make({{"E", 2}}), std::move(vs), {{"E", std::move(edges)}});
}

/// Random b over the vocabulary of a* with the requested color density.
inline Structure random_starred_target(const Structure& a, int n, Rng& rng,
                                       double edge_density = 0.5, double color_density = 0.6) {
    const Structure a_star = star_expand(a);
    std::vector<std::string> vs;
    for (int i = 0; i < n; ++i) vs.push_back("b" + std::to_string(i));
    std::map<std::string, std::set<Tuple>> rels;
    for (const auto& [name, ar] : a_star.vocabulary.symbols) {
        auto& dst = rels[name];
        if (ar == 1) {
            for (const auto& v : vs)
                if (rng.coin(color_density)) dst.insert({v});
        } else {
            std::vector<std::size_t> pick(ar, 0);
            for (;;) {
                if (rng.coin(edge_density)) {
                    Tuple t;
                    for (int i = 0; i < ar; ++i) t.push_back(vs[pick[i]]);
                    dst.insert(std::move(t));
                }
                std::size_t i = 0;
                while (i < static_cast<std::size_t>(ar) && ++pick[i] == vs.size()) pick[i++] = 0;
                if (i == static_cast<std::size_t>(ar)) break;
            }
        }
    }
    return Structure::make(a_star.vocabulary, std::move(vs), std::move(rels));
}

// --- tiny fixture structures ---------------------------------------------------

inline Structure k2() { return gen_complete(2).s; }
inline Structure k3() { return gen_complete(3).s; }
inline Structure p3() { return gen_path(3).s; }

} // namespace homlab::testing
