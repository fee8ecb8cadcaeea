#include "homlab/decon.hpp"

#include <algorithm>
#include <functional>
#include <queue>

namespace homlab {

namespace {

std::set<std::pair<std::string, std::string>> refl_edges(const Graph& g) {
    std::set<std::pair<std::string, std::string>> out;
    for (const auto& t : g.s.tuples("E")) out.emplace(t[0], t[1]);
    for (const auto& v : g.vertices()) out.emplace(v, v);
    return out;
}

bool connected_in(const Graph& g, const std::set<std::string>& set) {
    if (set.empty()) return true;
    std::set<std::string> seen;
    std::queue<std::string> bfs;
    bfs.push(*set.begin());
    seen.insert(*set.begin());
    while (!bfs.empty()) {
        auto u = bfs.front();
        bfs.pop();
        for (const auto& v : g.neighbors(u))
            if (set.count(v) && !seen.count(v)) {
                seen.insert(v);
                bfs.push(v);
            }
    }
    return seen.size() == set.size();
}

} // namespace

std::vector<std::string> validate(const Deconstruction& d) {
    std::vector<std::string> out;
    for (const auto& h : d.host.vertices())
        if (!d.bags.count(h)) out.push_back("missing bag for host vertex " + h);
    for (const auto& [h, bag] : d.bags) {
        if (!d.host.s.has_element(h)) out.push_back("bag for foreign host vertex " + h);
        for (const auto& g : bag)
            if (!d.subject.s.has_element(g)) out.push_back("foreign subject element " + g);
    }
    if (!out.empty()) return out;

    const auto host_refl = refl_edges(d.host);
    for (const auto& [g, g2] : refl_edges(d.subject)) {
        bool covered = false;
        if (d.mode == DeconMode::Deconstruction) {
            for (const auto& [h, h2] : host_refl) {
                const auto& b1 = d.bags.at(h);
                const auto& b2 = d.bags.at(h2);
                auto in_union = [&](const std::string& x) { return b1.count(x) || b2.count(x); };
                if (in_union(g) && in_union(g2)) {
                    covered = true;
                    break;
                }
            }
        } else {
            for (const auto& [h, bag] : d.bags)
                if (bag.count(g) && bag.count(g2)) {
                    (void)h;
                    covered = true;
                    break;
                }
        }
        if (!covered) out.push_back("uncovered pair (" + g + "," + g2 + ")");
    }

    for (const auto& g : d.subject.vertices()) {
        std::set<std::string> occurs;
        for (const auto& [h, bag] : d.bags)
            if (bag.count(g)) occurs.insert(h);
        if (!connected_in(d.host, occurs))
            out.push_back("occurrence set of " + g + " disconnected in host");
    }
    return out;
}

int width(const Deconstruction& d) {
    auto violations = validate(d);
    if (!violations.empty())
        throw std::invalid_argument("width: invalid input: " + violations.front());
    if (d.mode == DeconMode::Decomposition) {
        std::size_t largest = 0;
        for (const auto& [h, bag] : d.bags) {
            (void)h;
            largest = std::max(largest, bag.size());
        }
        return static_cast<int>(largest) - 1;
    }
    std::size_t best = 0;
    for (const auto& [h, h2] : refl_edges(d.host)) {
        std::set<std::string> u = d.bags.at(h);
        u.insert(d.bags.at(h2).begin(), d.bags.at(h2).end());
        best = std::max(best, u.size());
    }
    return static_cast<int>(best);
}

Deconstruction self_deconstruction(const Graph& g) {
    Deconstruction d{g, g, {}, DeconMode::Deconstruction};
    for (const auto& v : g.vertices()) d.bags[v] = {v};
    return d;
}

Deconstruction grid_deconstruction(const Graph& g) {
    const int n = static_cast<int>(g.size());
    const Graph host = gen_grid(n);
    Deconstruction d{g, host, {}, DeconMode::Deconstruction};
    const auto& verts = g.vertices();
    // host vertex names are "i,j" with both coordinates 1-based and padded
    for (const auto& h : host.vertices()) {
        const auto comma = h.find(',');
        const int i = std::stoi(h.substr(0, comma));
        const int j = std::stoi(h.substr(comma + 1));
        d.bags[h] = {verts[i - 1], verts[j - 1]};
    }
    return d;
}

Deconstruction compose(const Deconstruction& d_gh, const Deconstruction& d_hi) {
    if (!(d_gh.host == d_hi.subject))
        throw std::invalid_argument("compose: host of first must equal subject of second");
    auto v1 = validate(d_gh);
    auto v2 = validate(d_hi);
    if (!v1.empty() || !v2.empty())
        throw std::invalid_argument("compose: invalid input deconstruction");
    Deconstruction out{d_gh.subject, d_hi.host, {}, DeconMode::Deconstruction};
    for (const auto& [i, ci] : d_hi.bags) {
        auto& bag = out.bags[i];
        for (const auto& h : ci) {
            const auto& bh = d_gh.bags.at(h);
            bag.insert(bh.begin(), bh.end());
        }
    }
    return out;
}

Deconstruction from_minor_map(const Graph& m, const Graph& g, const MinorMap& mu) {
    if (!is_minor_map(m, g, mu)) throw std::invalid_argument("from_minor_map: not a minor map");
    Deconstruction d{m, g, {}, DeconMode::Deconstruction};
    for (const auto& v : g.vertices()) d.bags[v];
    for (const auto& [mv, branch] : mu)
        for (const auto& gv : branch) d.bags[gv].insert(mv);
    return d;
}

namespace {

// Least-element rooting of a tree host.
RootedForest root_tree(const Graph& host) {
    return RootedForest::make(host, {host.vertices().front()});
}

} // namespace

Deconstruction tree_decon_to_decomp(const Deconstruction& d) {
    auto violations = validate(d);
    if (!violations.empty())
        throw std::invalid_argument("tree_decon_to_decomp: invalid input");
    const auto comps = components(d.host.s);
    if (comps.size() != 1 || d.host.s.tuples("E").size() / 2 != d.host.size() - 1)
        throw std::invalid_argument("tree_decon_to_decomp: host must be a tree");
    const auto rooted = root_tree(d.host);
    const auto parent = rooted.parents();
    Deconstruction out{d.subject, d.host, {}, DeconMode::Decomposition};
    for (const auto& [h, bag] : d.bags) {
        std::set<std::string> c = bag;
        const auto& pb = d.bags.at(parent.at(h));
        c.insert(pb.begin(), pb.end());
        out.bags[h] = std::move(c);
    }
    return out;
}

Deconstruction decomp_from_treedepth_witness(const Graph& g, const RootedForest& t) {
    for (const auto& tup : g.s.tuples("E"))
        if (!t.in_closure(tup[0], tup[1]))
            throw std::invalid_argument("decomp_from_treedepth_witness: edge (" + tup[0] + "," +
                                        tup[1] + ") not in witness closure");
    Deconstruction out{g, t.graph, {}, DeconMode::Decomposition};
    for (const auto& v : t.graph.vertices()) {
        const auto chain = t.ancestors(v);
        out.bags[v] = {chain.begin(), chain.end()};
    }
    return out;
}

bool is_nice(const RootedForest& m, const RootedForest& g, const Deconstruction& d) {
    if (!m.is_single_tree() || !g.is_single_tree())
        throw std::invalid_argument("is_nice: rooted trees required");
    // bags must be exactly the branch sets of a minor map indexed by m
    if (!(d.host.s.universe == m.graph.s.universe))
        throw std::invalid_argument("is_nice: host universe mismatch");
    MinorMap mu;
    for (const auto& [h, bag] : d.bags) mu[h] = bag;
    if (!is_minor_map(m.graph, g.graph, mu)) return false;
    const std::string g0 = *g.roots.begin();
    const std::string m0 = *m.roots.begin();
    if (!mu.at(m0).count(g0)) return false;
    const auto g_parent = g.parents();
    const auto m_parent = m.parents();
    for (const auto& [mv, mp] : m_parent) {
        if (mv == mp) continue;  // root
        // mv is a child of mp: edges between their branch sets must point
        // from parent to child in g
        for (const auto& gv : mu.at(mp))
            for (const auto& gw : mu.at(mv))
                if (g.graph.adjacent(gv, gw) && g_parent.at(gw) != gv) return false;
    }
    return true;
}

namespace {

struct TreeView {
    std::string root;
    std::map<std::string, std::vector<std::string>> children;
    std::map<std::string, int> depth;

    std::vector<std::string> subtree(const std::string& u) const {
        std::vector<std::string> out{u};
        for (std::size_t i = 0; i < out.size(); ++i)
            for (const auto& c : children.at(out[i])) out.push_back(c);
        std::sort(out.begin(), out.end());
        return out;
    }

    int height_below(const std::string& u) const {
        int h = 0;
        for (const auto& c : children.at(u)) h = std::max(h, 1 + height_below(c));
        return h;
    }
};

TreeView view_of(const RootedForest& t) {
    TreeView v;
    v.root = *t.roots.begin();
    v.children = t.children();
    v.depth = t.depths();
    return v;
}

RootedForest subtree_forest(const RootedForest& t, const std::string& new_root) {
    const auto view = view_of(t);
    const auto nodes = view.subtree(new_root);
    std::set<std::string> node_set(nodes.begin(), nodes.end());
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& u : nodes)
        for (const auto& c : view.children.at(u))
            if (node_set.count(c)) edges.emplace_back(u, c);
    return RootedForest::make(Graph::from_edges(nodes, std::move(edges)), {new_root});
}

// Fresh deterministic names for host nodes assembled during the recursion.
std::string scoped(const std::string& prefix, const std::string& name) {
    return prefix.empty() ? name : prefix + "/" + name;
}

RootedForest rename_forest(const RootedForest& f,
                           const std::map<std::string, std::string>& ren) {
    std::vector<std::string> vs;
    for (const auto& v : f.graph.vertices()) vs.push_back(ren.at(v));
    std::vector<std::pair<std::string, std::string>> es;
    for (const auto& t : f.graph.s.tuples("E"))
        if (t[0] < t[1]) es.emplace_back(ren.at(t[0]), ren.at(t[1]));
    std::set<std::string> roots;
    for (const auto& r : f.roots) roots.insert(ren.at(r));
    return RootedForest::make(Graph::from_edges(std::move(vs), std::move(es)),
                              std::move(roots));
}

struct TdBuild {
    RootedForest host;
    std::map<std::string, std::set<std::string>> bags;
};

// The stack-depth recursion. Precondition: t fails P(d+1,K).
TdBuild build_rec(const RootedForest& t, int d, int K, const std::string& prefix) {
    const auto view = view_of(t);

    if (d == 0) {
        // single-bag host holding the whole tree
        const std::string h = scoped(prefix, "h");
        TdBuild out;
        out.host = RootedForest::make(Graph::from_edges({h}, {}), {h});
        const auto& vs = t.graph.vertices();
        out.bags[h] = {vs.begin(), vs.end()};
        return out;
    }

    const int e = view.height_below(view.root);
    if (e <= d) {
        // identity deconstruction; the tree itself is a legal host
        std::map<std::string, std::string> ren;
        for (const auto& v : t.graph.vertices()) ren[v] = scoped(prefix, v);
        TdBuild out;
        out.host = rename_forest(t, ren);
        for (const auto& v : t.graph.vertices()) out.bags[scoped(prefix, v)] = {v};
        return out;
    }

    // split root children by P(d,K)
    std::vector<std::string> with_p, without_p;
    for (const auto& c : view.children.at(view.root)) {
        if (has_property_P(subtree_forest(t, c), d, K))
            with_p.push_back(c);
        else
            without_p.push_back(c);
    }
    // t fails P(d+1,K), so fewer than K children carry P(d,K)
    if (static_cast<int>(with_p.size()) >= K)
        throw std::invalid_argument("build_td_deconstruction: input has property P(d+1,K)");

    // contract {root} u with_p into h0; recurse on the P-free subtrees at
    // depth d-1; keep the kept subtrees below with_p verbatim
    const std::string h0 = scoped(prefix, "h");
    std::vector<std::string> host_vs{h0};
    std::vector<std::pair<std::string, std::string>> host_es;
    std::map<std::string, std::set<std::string>> mid_bags;
    mid_bags[h0] = {view.root};
    for (const auto& b : with_p) mid_bags[h0].insert(b);

    int child_counter = 0;
    for (const auto& c : without_p) {
        const auto sub = build_rec(subtree_forest(t, c), d - 1, K,
                                   scoped(prefix, "c" + std::to_string(child_counter++)));
        for (const auto& v : sub.host.graph.vertices()) host_vs.push_back(v);
        for (const auto& tup : sub.host.graph.s.tuples("E"))
            if (tup[0] < tup[1]) host_es.emplace_back(tup[0], tup[1]);
        const std::string sub_root = *sub.host.roots.begin();
        host_es.emplace_back(h0, sub_root);
        for (const auto& [h, bag] : sub.bags) mid_bags[h] = bag;
    }
    for (const auto& b : with_p) {
        // grandchildren below b stay as singleton-bag host nodes
        for (const auto& gchild : view.children.at(b)) {
            const auto nodes = view.subtree(gchild);
            std::set<std::string> node_set(nodes.begin(), nodes.end());
            for (const auto& v : nodes) {
                const std::string hv = scoped(prefix, "k" + v);
                host_vs.push_back(hv);
                mid_bags[hv] = {v};
            }
            for (const auto& u : nodes)
                for (const auto& cc : view.children.at(u))
                    if (node_set.count(cc))
                        host_es.emplace_back(scoped(prefix, "k" + u), scoped(prefix, "k" + cc));
            host_es.emplace_back(h0, scoped(prefix, "k" + gchild));
        }
    }
    auto mid_host =
        RootedForest::make(Graph::from_edges(std::move(host_vs), std::move(host_es)), {h0});

    // the contracted host has height <= e-1 and still fails P(d+1,K);
    // recurse on it at the same d and compose the bag families
    const auto outer = build_rec(mid_host, d, K, prefix + "+");
    TdBuild out;
    out.host = outer.host;
    for (const auto& [n, mids] : outer.bags) {
        std::set<std::string> bag;
        for (const auto& mid : mids) {
            const auto& inner = mid_bags.at(mid);
            bag.insert(inner.begin(), inner.end());
        }
        out.bags[n] = std::move(bag);
    }
    return out;
}

} // namespace

TdDeconstruction build_td_deconstruction(const RootedForest& t, int d, int K) {
    if (!t.is_single_tree())
        throw std::invalid_argument("build_td_deconstruction: single tree required");
    if (d < 0 || K < 1)
        throw std::invalid_argument("build_td_deconstruction: d >= 0 and K >= 1 required");
    if (has_property_P(t, d + 1, K))
        throw std::invalid_argument("build_td_deconstruction: input has property P(d+1,K)");
    const auto built = build_rec(t, d, K, "");
    TdDeconstruction out;
    out.host = built.host;
    out.decon = Deconstruction{t.graph, built.host.graph, built.bags, DeconMode::Deconstruction};
    out.width = width(out.decon);
    return out;
}

std::string HierarchyLevel::to_string() const {
    switch (tag) {
        case Tag::T_d: return "T_" + std::to_string(d);
        case Tag::F_d: return "F_" + std::to_string(d);
        case Tag::P: return "P";
        case Tag::T: return "T";
        case Tag::L: return "L";
    }
    return "?";
}

HierarchyLevel hierarchy_level(const ClassFacts& f) {
    if (f.stack_depth < 0) throw std::invalid_argument("hierarchy_level: stack depth < 0");
    if ((f.all_grids_minors && !f.all_trees_minors) ||
        (f.all_trees_minors && !f.all_paths_minors))
        throw std::invalid_argument("hierarchy_level: inconsistent facts (grids => trees => paths)");
    if (f.all_grids_minors) return {HierarchyLevel::Tag::L, 0};
    if (f.all_trees_minors) return {HierarchyLevel::Tag::T, 0};
    if (f.all_paths_minors) return {HierarchyLevel::Tag::P, 0};
    if (f.unbounded_multiplicity) return {HierarchyLevel::Tag::F_d, f.stack_depth};
    return {HierarchyLevel::Tag::T_d, f.stack_depth};
}

} // namespace homlab
