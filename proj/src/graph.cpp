#include "homlab/graph.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <queue>

#include "homlab/kernels.hpp"

namespace homlab {

Graph Graph::from_structure(Structure s) {
    if (s.vocabulary.symbols != std::map<std::string, int>{{"E", 2}})
        throw std::invalid_argument("graph: vocabulary must be {E:2}");
    for (const auto& t : s.tuples("E")) {
        if (t[0] == t[1]) throw std::invalid_argument("graph: E must be irreflexive");
        if (!s.tuples("E").count({t[1], t[0]}))
            throw std::invalid_argument("graph: E must be symmetric");
    }
    return Graph{std::move(s)};
}

Graph Graph::from_edges(std::vector<std::string> vertices,
                        std::vector<std::pair<std::string, std::string>> edges) {
    std::set<Tuple> e;
    for (auto& [u, v] : edges) {
        e.insert({u, v});
        e.insert({v, u});
    }
    return from_structure(Structure::make(Vocabulary::make({{"E", 2}}), std::move(vertices),
                                          {{"E", std::move(e)}}));
}

bool Graph::adjacent(const std::string& u, const std::string& v) const {
    return s.tuples("E").count({u, v}) > 0;
}

std::vector<std::string> Graph::neighbors(const std::string& u) const {
    std::vector<std::string> out;
    for (const auto& t : s.tuples("E"))
        if (t[0] == u) out.push_back(t[1]);
    std::sort(out.begin(), out.end());
    return out;
}

Graph gaifman_graph(const Structure& a) { return Graph::from_structure(gaifman(a)); }

RootedForest RootedForest::make(Graph g, std::set<std::string> roots) {
    RootedForest f{std::move(g), std::move(roots)};
    const auto comps = components(f.graph.s);
    // acyclic: |E|/2 == n - #components
    std::size_t edges = f.graph.s.tuples("E").size() / 2;
    if (edges != f.graph.size() - comps.size())
        throw std::invalid_argument("rooted forest: underlying graph has a cycle");
    std::set<std::string> seen;
    for (const auto& c : comps) {
        int count = 0;
        for (const auto& r : f.roots)
            if (c.has_element(r)) ++count;
        if (count != 1)
            throw std::invalid_argument("rooted forest: exactly one root per component required");
    }
    for (const auto& r : f.roots)
        if (!f.graph.s.has_element(r))
            throw std::invalid_argument("rooted forest: foreign root " + r);
    return f;
}

std::map<std::string, std::string> RootedForest::parents() const {
    std::map<std::string, std::string> parent;
    for (const auto& r : roots) {
        parent[r] = r;
        std::queue<std::string> bfs;
        bfs.push(r);
        while (!bfs.empty()) {
            auto u = bfs.front();
            bfs.pop();
            for (const auto& v : graph.neighbors(u))
                if (!parent.count(v)) {
                    parent[v] = u;
                    bfs.push(v);
                }
        }
    }
    return parent;
}

std::map<std::string, std::vector<std::string>> RootedForest::children() const {
    std::map<std::string, std::vector<std::string>> ch;
    for (const auto& v : graph.vertices()) ch[v];
    for (const auto& [v, p] : parents())
        if (v != p) ch[p].push_back(v);
    for (auto& [v, list] : ch) {
        (void)v;
        std::sort(list.begin(), list.end());
    }
    return ch;
}

std::map<std::string, int> RootedForest::depths() const {
    std::map<std::string, int> d;
    const auto parent = parents();
    std::function<int(const std::string&)> depth_of = [&](const std::string& v) -> int {
        auto it = d.find(v);
        if (it != d.end()) return it->second;
        int val = parent.at(v) == v ? 0 : 1 + depth_of(parent.at(v));
        d[v] = val;
        return val;
    };
    for (const auto& v : graph.vertices()) depth_of(v);
    return d;
}

std::vector<std::string> RootedForest::ancestors(const std::string& t) const {
    const auto parent = parents();
    std::vector<std::string> chain;
    std::string cur = t;
    chain.push_back(cur);
    while (parent.at(cur) != cur) {
        cur = parent.at(cur);
        chain.push_back(cur);
    }
    std::reverse(chain.begin(), chain.end());
    return chain;
}

bool RootedForest::in_closure(const std::string& u, const std::string& v) const {
    const auto au = ancestors(u);
    if (std::find(au.begin(), au.end(), v) != au.end()) return true;
    const auto av = ancestors(v);
    return std::find(av.begin(), av.end(), u) != av.end();
}

// --- generators ------------------------------------------------------------

namespace {

std::string padded(int i, int n) {
    const int width = static_cast<int>(std::to_string(n).size());
    std::string s = std::to_string(i);
    while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
    return s;
}

} // namespace

Graph gen_path(int n) {
    if (n < 1) throw std::invalid_argument("path: n >= 1 required");
    std::vector<std::string> vs;
    std::vector<std::pair<std::string, std::string>> es;
    for (int i = 1; i <= n; ++i) vs.push_back("v" + padded(i, n));
    for (int i = 1; i < n; ++i) es.emplace_back("v" + padded(i, n), "v" + padded(i + 1, n));
    return Graph::from_edges(std::move(vs), std::move(es));
}

Graph gen_cycle(int n) {
    if (n < 3) throw std::invalid_argument("cycle: n >= 3 required");
    std::vector<std::string> vs;
    std::vector<std::pair<std::string, std::string>> es;
    for (int i = 1; i <= n; ++i) vs.push_back("v" + padded(i, n));
    for (int i = 1; i <= n; ++i)
        es.emplace_back("v" + padded(i, n), "v" + padded(i % n + 1, n));
    return Graph::from_edges(std::move(vs), std::move(es));
}

Graph gen_grid(int n) {
    if (n < 1) throw std::invalid_argument("grid: n >= 1 required");
    auto name = [&](int i, int j) { return padded(i, n) + "," + padded(j, n); };
    std::vector<std::string> vs;
    std::vector<std::pair<std::string, std::string>> es;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            vs.push_back(name(i, j));
            if (i < n) es.emplace_back(name(i, j), name(i + 1, j));
            if (j < n) es.emplace_back(name(i, j), name(i, j + 1));
        }
    return Graph::from_edges(std::move(vs), std::move(es));
}

Graph gen_complete(int n) {
    if (n < 1) throw std::invalid_argument("complete: n >= 1 required");
    std::vector<std::string> vs;
    std::vector<std::pair<std::string, std::string>> es;
    for (int i = 1; i <= n; ++i) vs.push_back("v" + padded(i, n));
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) es.emplace_back(vs[i - 1], vs[j - 1]);
    return Graph::from_edges(std::move(vs), std::move(es));
}

Graph gen_star(int k) {
    if (k < 1) throw std::invalid_argument("star: k >= 1 required");
    std::vector<std::string> vs{"c"};
    std::vector<std::pair<std::string, std::string>> es;
    for (int i = 1; i <= k; ++i) {
        vs.push_back("l" + padded(i, k));
        es.emplace_back("c", "l" + padded(i, k));
    }
    return Graph::from_edges(std::move(vs), std::move(es));
}

RootedForest gen_tree(int h, int k) {
    if (h < 0 || k < 1) throw std::invalid_argument("tree: h >= 0 and k >= 1 required");
    std::vector<std::string> vs;
    std::vector<std::pair<std::string, std::string>> es;
    std::function<void(const std::string&, int)> grow = [&](const std::string& node, int depth) {
        vs.push_back(node);
        if (depth == h) return;
        for (int i = 1; i <= k; ++i) {
            const std::string child = node + "." + padded(i, k);
            es.emplace_back(node, child);
            grow(child, depth + 1);
        }
    };
    grow("r", 0);
    return RootedForest::make(Graph::from_edges(std::move(vs), std::move(es)), {"r"});
}

// --- invariants -------------------------------------------------------------

int height(const RootedForest& f) {
    int h = 0;
    for (const auto& [v, d] : f.depths()) {
        (void)v;
        h = std::max(h, d);
    }
    return h;
}

namespace {

struct BitGraph {
    int n = 0;
    std::vector<std::string> names;
    std::vector<std::uint32_t> adj;

    explicit BitGraph(const Graph& g) {
        names = g.vertices();
        n = static_cast<int>(names.size());
        adj.assign(n, 0);
        std::map<std::string, int> idx;
        for (int i = 0; i < n; ++i) idx[names[i]] = i;
        for (const auto& t : g.s.tuples("E")) adj[idx.at(t[0])] |= 1u << idx.at(t[1]);
    }
};

std::uint32_t component_of(const std::vector<std::uint32_t>& adj, std::uint32_t mask, int v) {
    std::uint32_t comp = 1u << v;
    std::uint32_t frontier = comp;
    while (frontier) {
        std::uint32_t next = 0;
        std::uint32_t f = frontier;
        while (f) {
            int u = std::countr_zero(f);
            f &= f - 1;
            next |= adj[u] & mask & ~comp;
        }
        comp |= next;
        frontier = next;
    }
    return comp;
}

// Exhaustive tree-depth recursion over connected vertex masks, memoized;
// best root chosen canonically for a reproducible witness.
struct TdSolver {
    const BitGraph& g;
    std::map<std::uint32_t, std::pair<int, int>> memo;  // mask -> (depth, best root)

    explicit TdSolver(const BitGraph& bg) : g(bg) {}

    int depth_connected(std::uint32_t mask) {
        auto it = memo.find(mask);
        if (it != memo.end()) return it->second.first;
        if (std::popcount(mask) == 1) {
            memo[mask] = {0, std::countr_zero(mask)};
            return 0;
        }
        int best = INT32_MAX, best_v = -1;
        std::uint32_t c = mask;
        while (c) {
            int v = std::countr_zero(c);
            c &= c - 1;
            const std::uint32_t rest = mask & ~(1u << v);
            int worst = 0;
            std::uint32_t todo = rest;
            while (todo) {
                int u = std::countr_zero(todo);
                const std::uint32_t comp = component_of(g.adj, rest, u);
                todo &= ~comp;
                worst = std::max(worst, depth_connected(comp));
            }
            if (1 + worst < best) {
                best = 1 + worst;
                best_v = v;
            }
        }
        memo[mask] = {best, best_v};
        return best;
    }

    // Emits parent edges of the witness tree for a connected mask; returns
    // its root vertex id.
    int witness(std::uint32_t mask, std::vector<std::pair<int, int>>& edges) {
        depth_connected(mask);
        const int root = memo.at(mask).second;
        const std::uint32_t rest = mask & ~(1u << root);
        std::uint32_t todo = rest;
        while (todo) {
            int u = std::countr_zero(todo);
            const std::uint32_t comp = component_of(g.adj, rest, u);
            todo &= ~comp;
            edges.emplace_back(root, witness(comp, edges));
        }
        return root;
    }
};

} // namespace

TreeDepthResult tree_depth(const Graph& g, int guard) {
    ensure(static_cast<int>(g.size()) <= guard,
           "tree_depth: graph size exceeds guard " + std::to_string(guard));
    BitGraph bg(g);
    TdSolver solver(bg);
    int depth = 0;
    std::set<std::string> roots;
    std::vector<std::pair<std::string, std::string>> edges;
    std::uint32_t all = bg.n == 32 ? 0xffffffffu : ((1u << bg.n) - 1);
    std::uint32_t todo = all;
    while (todo) {
        int u = std::countr_zero(todo);
        const std::uint32_t comp = component_of(bg.adj, all, u);
        todo &= ~comp;
        depth = std::max(depth, solver.depth_connected(comp));
        std::vector<std::pair<int, int>> tree_edges;
        int root = solver.witness(comp, tree_edges);
        roots.insert(bg.names[root]);
        for (auto [p, c] : tree_edges) edges.emplace_back(bg.names[p], bg.names[c]);
    }
    auto witness =
        RootedForest::make(Graph::from_edges(g.vertices(), std::move(edges)), std::move(roots));
    return TreeDepthResult{depth, std::move(witness)};
}

int treewidth(const Graph& g, int guard) {
    ensure(static_cast<int>(g.size()) <= guard,
           "treewidth: graph size exceeds guard " + std::to_string(guard));
    return kernels::treewidth_dp(BitGraph(g).adj);
}

int pathwidth(const Graph& g, int guard) {
    ensure(static_cast<int>(g.size()) <= guard,
           "pathwidth: graph size exceeds guard " + std::to_string(guard));
    return kernels::pathwidth_dp(BitGraph(g).adj);
}

bool is_minor_map(const Graph& m, const Graph& g, const MinorMap& mu) {
    for (const auto& v : m.vertices())
        if (!mu.count(v)) throw std::invalid_argument("minor map: missing branch set for " + v);
    for (const auto& [v, set] : mu) {
        if (!m.s.has_element(v)) throw std::invalid_argument("minor map: foreign vertex " + v);
        for (const auto& x : set)
            if (!g.s.has_element(x))
                throw std::invalid_argument("minor map: foreign branch element " + x);
    }
    BitGraph bg(g);
    std::map<std::string, int> idx;
    for (int i = 0; i < bg.n; ++i) idx[bg.names[i]] = i;
    std::map<std::string, std::uint32_t> masks;
    std::uint32_t used = 0;
    for (const auto& v : m.vertices()) {
        const auto& set = mu.at(v);
        if (set.empty()) return false;
        std::uint32_t mask = 0;
        for (const auto& x : set) mask |= 1u << idx.at(x);
        if (mask & used) return false;  // overlap
        used |= mask;
        const int first = std::countr_zero(mask);
        if (component_of(bg.adj, mask, first) != mask) return false;  // disconnected
        masks[v] = mask;
    }
    for (const auto& t : m.s.tuples("E")) {
        bool realized = false;
        std::uint32_t x = masks.at(t[0]);
        while (x && !realized) {
            int u = std::countr_zero(x);
            x &= x - 1;
            if (bg.adj[u] & masks.at(t[1])) realized = true;
        }
        if (!realized) return false;
    }
    return true;
}

namespace {

// Branch-set assignment search: vertices of m are assigned connected masks
// in canonical order; edges to already-placed neighbors must be realized.
struct MinorSearch {
    const BitGraph& g;
    const BitGraph& m;
    std::vector<std::uint32_t> connected_sets;  // all connected masks, ascending
    std::uint64_t budget;
    std::uint64_t steps = 0;

    MinorSearch(const BitGraph& g_, const BitGraph& m_, std::uint64_t budget_)
        : g(g_), m(m_), budget(budget_) {
        const std::uint32_t all = g.n == 32 ? 0xffffffffu : ((1u << g.n) - 1);
        for (std::uint32_t mask = 1; mask <= all && mask != 0; ++mask) {
            const int first = std::countr_zero(mask);
            if (component_of(g.adj, mask, first) == mask) connected_sets.push_back(mask);
        }
    }

    bool rec(int pos, std::uint32_t used, std::vector<std::uint32_t>& assign) {
        if (pos == m.n) return true;
        if (g.n - std::popcount(used) < m.n - pos) return false;
        for (std::uint32_t mask : connected_sets) {
            if (++steps > budget) return false;
            if (mask & used) continue;
            bool ok = true;
            for (int q = 0; q < pos && ok; ++q) {
                if (!(m.adj[pos] >> q & 1)) continue;
                bool realized = false;
                std::uint32_t x = mask;
                while (x && !realized) {
                    int u = std::countr_zero(x);
                    x &= x - 1;
                    if (g.adj[u] & assign[q]) realized = true;
                }
                ok = realized;
            }
            if (!ok) continue;
            assign[pos] = mask;
            if (rec(pos + 1, used | mask, assign)) return true;
        }
        return false;
    }
};

} // namespace

MinorSearchResult find_minor(const Graph& g, const Graph& m, std::uint64_t budget, int guard) {
    ensure(static_cast<int>(g.size()) <= guard,
           "find_minor: graph size exceeds guard " + std::to_string(guard));
    MinorSearchResult res;
    if (m.size() > g.size()) {
        res.status = SearchStatus::None;
        return res;
    }
    BitGraph bg(g), bm(m);
    MinorSearch search(bg, bm, budget);
    std::vector<std::uint32_t> assign(bm.n, 0);
    const bool found = search.rec(0, 0, assign);
    res.steps = search.steps;
    if (!found) {
        res.status = search.steps > budget ? SearchStatus::BudgetExceeded : SearchStatus::None;
        return res;
    }
    res.status = SearchStatus::Found;
    for (int i = 0; i < bm.n; ++i) {
        std::set<std::string> branch;
        std::uint32_t x = assign[i];
        while (x) {
            int u = std::countr_zero(x);
            x &= x - 1;
            branch.insert(bg.names[u]);
        }
        res.witness[bm.names[i]] = std::move(branch);
    }
    return res;
}

namespace {

// f_d(x): maximum antichain of P(d,k)-nodes within the subtree of x,
// allowing x itself; P(d+1,k)(x) needs the children sum only (the k
// witnesses are proper descendants of x).
struct PropertySolver {
    const std::map<std::string, std::vector<std::string>>& children;
    int k;

    bool good(const std::string& u, int d, std::map<std::pair<std::string, int>, bool>& memo_good,
              std::map<std::pair<std::string, int>, long>& memo_f) const {
        if (d == 0) return true;
        auto key = std::make_pair(u, d);
        auto it = memo_good.find(key);
        if (it != memo_good.end()) return it->second;
        long sum = 0;
        for (const auto& c : children.at(u)) sum += antichain(c, d - 1, memo_good, memo_f);
        const bool res = sum >= k;
        memo_good[key] = res;
        return res;
    }

    long antichain(const std::string& u, int d,
                   std::map<std::pair<std::string, int>, bool>& memo_good,
                   std::map<std::pair<std::string, int>, long>& memo_f) const {
        auto key = std::make_pair(u, d);
        auto it = memo_f.find(key);
        if (it != memo_f.end()) return it->second;
        long sum = 0;
        for (const auto& c : children.at(u)) sum += antichain(c, d, memo_good, memo_f);
        long res = std::max<long>(good(u, d, memo_good, memo_f) ? 1 : 0, sum);
        memo_f[key] = res;
        return res;
    }
};

} // namespace

bool has_property_P(const RootedForest& t, int d, int k) {
    if (!t.is_single_tree()) throw std::invalid_argument("has_property_P: single tree required");
    if (k < 1) throw std::invalid_argument("has_property_P: k >= 1 required");
    if (d < 0) throw std::invalid_argument("has_property_P: d >= 0 required");
    const auto ch = t.children();
    PropertySolver solver{ch, k};
    std::map<std::pair<std::string, int>, bool> memo_good;
    std::map<std::pair<std::string, int>, long> memo_f;
    return solver.good(*t.roots.begin(), d, memo_good, memo_f);
}

int stack_profile(const Graph& g, int d_max, int k, int guard) {
    ensure(static_cast<int>(g.size()) <= guard,
           "stack_profile: graph size exceeds guard " + std::to_string(guard));
    if (k < 1) throw std::invalid_argument("stack_profile: k >= 1 required");
    int best = 0;  // T_{0,k} is a single vertex, always a minor of a nonempty graph
    for (int d = 1; d <= d_max; ++d) {
        const auto t = gen_tree(d, k);
        if (t.graph.size() > g.size()) break;
        const auto res = find_minor(g, t.graph, default_guards().hom_budget, guard);
        if (res.status == SearchStatus::BudgetExceeded)
            throw GuardError("stack_profile: minor search budget exceeded");
        if (res.status != SearchStatus::Found) break;
        best = d;
    }
    return best;
}

RootedForest dfs_forest(const Graph& g) {
    std::set<std::string> visited;
    std::set<std::string> roots;
    std::vector<std::pair<std::string, std::string>> edges;
    std::function<void(const std::string&)> dfs = [&](const std::string& u) {
        visited.insert(u);
        for (const auto& v : g.neighbors(u))
            if (!visited.count(v)) {
                edges.emplace_back(u, v);
                dfs(v);
            }
    };
    for (const auto& v : g.vertices())
        if (!visited.count(v)) {
            roots.insert(v);
            dfs(v);
        }
    return RootedForest::make(Graph::from_edges(g.vertices(), std::move(edges)),
                              std::move(roots));
}

} // namespace homlab
