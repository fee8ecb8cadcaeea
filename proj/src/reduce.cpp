#include "homlab/reduce.hpp"

#include <algorithm>
#include <functional>

#include "homlab/kernels.hpp"

namespace homlab {

namespace {

std::string join(const Tuple& t, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) out += sep;
        out += t[i];
    }
    return out;
}

// Canonical-order bag listing padded to length w by repeating the least
// element.
Tuple bag_listing(const std::set<std::string>& bag, int w) {
    Tuple t(bag.begin(), bag.end());
    while (static_cast<int>(t.size()) < w) t.push_back(*bag.begin());
    return t;
}

struct HostSplit {
    std::vector<std::string> nonempty;  // H_0 vertices
    std::vector<std::string> empty;     // H_1 vertices
};

// Splits host components into all-empty and all-nonempty; a mixed component
// cannot be normalized without changing the host and is rejected.
HostSplit split_host(const Graph& host,
                     const std::map<std::string, std::set<std::string>>& bags) {
    HostSplit out;
    for (const auto& comp : components(host.s)) {
        bool any_empty = false, any_full = false;
        for (const auto& h : comp.universe)
            (bags.at(h).empty() ? any_empty : any_full) = true;
        if (any_empty && any_full)
            throw std::invalid_argument(
                "reduction: host component mixes empty and nonempty bags; no normalization "
                "keeps the host intact");
        auto& dst = any_full ? out.nonempty : out.empty;
        dst.insert(dst.end(), comp.universe.begin(), comp.universe.end());
    }
    return out;
}

struct PhConstruction {
    std::vector<std::string> names;      // entry names, aligned with entries
    std::vector<kernels::PhEntry> entries;
    std::set<Tuple> edges;               // edges among entry names
    int width = 0;
};

// Shared PH(core of the reduction): elements, edge relation, and the entry
// list for color assignment.
PhConstruction ph_construct(const Structure& a_star, const Structure& b, int w) {
    kernels::PhContext ctx(a_star, b);
    PhConstruction out;
    out.width = w;
    out.entries = kernels::ph_table(ctx, w, default_guards().ph_table);
    ensure(out.entries.size() <= 20000, "reduction: PH table too large");
    ensure(out.entries.size() * out.entries.size() <= default_guards().eval_tuples,
           "reduction: PH edge matrix too large");
    out.names.reserve(out.entries.size());
    for (const auto& [gs, bs] : out.entries) {
        Tuple gt, bt;
        for (int id : gs) gt.push_back(ctx.a.names[id]);
        for (int id : bs) bt.push_back(ctx.b.names[id]);
        out.names.push_back(join(gt, ",") + "|" + join(bt, ","));
    }
    for (const auto& [i, j] : kernels::ph_edges(ctx, out.entries))
        out.edges.insert({out.names[i], out.names[j]});
    return out;
}

// Entry indices whose a-part equals the given listing.
std::vector<int> entries_with_listing(const PhConstruction& ph, const Structure& a_star,
                                      const Tuple& listing) {
    std::vector<int> ids;
    std::vector<int> want;
    kernels::Indexed ia = kernels::index_structure(a_star);
    for (const auto& e : listing) want.push_back(ia.id_of(e));
    for (int i = 0; i < static_cast<int>(ph.entries.size()); ++i)
        if (ph.entries[i].first == want) ids.push_back(i);
    return ids;
}

} // namespace

ReductionResult decon_hom_reduction(const Graph& g, const Deconstruction& d, const Structure& b) {
    if (!(d.subject == g))
        throw std::invalid_argument("decon_hom_reduction: subject of d must be g");
    if (d.mode != DeconMode::Deconstruction)
        throw std::invalid_argument("decon_hom_reduction: deconstruction mode required");
    auto violations = validate(d);
    if (!violations.empty())
        throw std::invalid_argument("decon_hom_reduction: invalid deconstruction: " +
                                    violations.front());
    const Structure g_star = star_expand(g.s);
    if (!(b.vocabulary == g_star.vocabulary))
        throw std::invalid_argument("decon_hom_reduction: b must be over the vocabulary of g*");

    const auto split = split_host(d.host, d.bags);
    int w = 0;
    for (const auto& h : split.nonempty)
        w = std::max(w, static_cast<int>(d.bags.at(h).size()));
    if (w == 0)
        throw std::invalid_argument("decon_hom_reduction: all bags empty");

    auto ph = ph_construct(g_star, b, w);

    // output vocabulary: H* for the full host
    std::map<std::string, int> symbols{{"E", 2}};
    for (const auto& h : d.host.vertices()) symbols[color_symbol(h)] = 1;

    std::vector<std::string> universe = ph.names;
    std::set<Tuple> edges = ph.edges;
    std::map<std::string, std::set<Tuple>> rels;
    nlohmann::json trace;
    trace["op"] = "decon_hom_reduction";
    trace["w"] = w;
    trace["ph_size"] = ph.names.size();
    trace["empty_host_vertices"] = split.empty;

    for (const auto& h : split.nonempty) {
        auto& color = rels[color_symbol(h)];
        for (int idx : entries_with_listing(ph, g_star, bag_listing(d.bags.at(h), w)))
            color.insert({ph.names[idx]});
    }
    if (!split.empty.empty()) {
        const std::string b_loop = "b_loop";
        universe.push_back(b_loop);
        edges.insert({b_loop, b_loop});
        for (const auto& h : split.empty) rels[color_symbol(h)] = {{b_loop}};
        trace["b_loop"] = b_loop;
    }
    if (universe.empty()) {
        // PH empty and no empty-bag component: one inert colorless vertex
        universe.push_back("inert");
        trace["inert"] = true;
    }
    rels["E"] = std::move(edges);
    ReductionResult out;
    out.output = Structure::make(Vocabulary::make(std::move(symbols), std::max(4, w)),
                                 std::move(universe), std::move(rels));
    out.trace = std::move(trace);
    return out;
}

DecompReductionResult decomp_hom_reduction(const Structure& a, const Deconstruction& d,
                                           const Structure& b) {
    if (d.mode != DeconMode::Decomposition)
        throw std::invalid_argument("decomp_hom_reduction: decomposition mode required");
    if (!(d.subject == gaifman_graph(a)))
        throw std::invalid_argument("decomp_hom_reduction: subject must be gaifman(a)");
    auto violations = validate(d);
    if (!violations.empty())
        throw std::invalid_argument("decomp_hom_reduction: invalid decomposition: " +
                                    violations.front());
    const Structure a_star = star_expand(a);
    if (!(b.vocabulary == a_star.vocabulary))
        throw std::invalid_argument("decomp_hom_reduction: b must be over the vocabulary of a*");
    // clique-in-bag precondition: every relation tuple sits inside one bag
    for (const auto& [name, tuples] : a.relations)
        for (const auto& t : tuples) {
            bool found = false;
            for (const auto& [h, bag] : d.bags) {
                (void)h;
                if (std::all_of(t.begin(), t.end(),
                                [&](const std::string& e) { return bag.count(e) > 0; })) {
                    found = true;
                    break;
                }
            }
            if (!found)
                throw std::invalid_argument("decomp_hom_reduction: tuple of " + name +
                                            " not inside any bag");
        }

    const auto split = split_host(d.host, d.bags);
    if (split.nonempty.empty())
        throw std::invalid_argument("decomp_hom_reduction: all bags empty");
    int w = 0;
    for (const auto& h : split.nonempty)
        w = std::max(w, static_cast<int>(d.bags.at(h).size()));

    // drop empty components from the host
    std::set<std::string> keep(split.nonempty.begin(), split.nonempty.end());
    std::vector<std::pair<std::string, std::string>> host_edges;
    for (const auto& t : d.host.s.tuples("E"))
        if (t[0] < t[1] && keep.count(t[0]) && keep.count(t[1]))
            host_edges.emplace_back(t[0], t[1]);
    Graph pruned = Graph::from_edges(split.nonempty, std::move(host_edges));

    auto ph = ph_construct(a_star, b, w);

    std::map<std::string, int> symbols{{"E", 2}};
    for (const auto& h : pruned.vertices()) symbols[color_symbol(h)] = 1;

    std::vector<std::string> universe = ph.names;
    std::map<std::string, std::set<Tuple>> rels;
    for (const auto& h : pruned.vertices()) {
        auto& color = rels[color_symbol(h)];
        for (int idx : entries_with_listing(ph, a_star, bag_listing(d.bags.at(h), w)))
            color.insert({ph.names[idx]});
    }
    nlohmann::json trace;
    trace["op"] = "decomp_hom_reduction";
    trace["w"] = w;
    trace["ph_size"] = ph.names.size();
    trace["dropped_host_vertices"] = split.empty;
    if (universe.empty()) {
        universe.push_back("inert");
        trace["inert"] = true;
    }
    rels["E"] = std::move(ph.edges);
    DecompReductionResult out;
    out.output = Structure::make(Vocabulary::make(std::move(symbols), std::max(4, w)),
                                 std::move(universe), std::move(rels));
    out.pruned_host = std::move(pruned);
    out.trace = std::move(trace);
    return out;
}

std::optional<ReductionResult> product_reduction(const Structure& a, const Structure& b) {
    if (!is_core(a)) throw std::invalid_argument("product_reduction: a must be a core");
    const Structure a_star = star_expand(a);
    if (!(b.vocabulary == a_star.vocabulary))
        throw std::invalid_argument("product_reduction: b must be over the vocabulary of a*");
    // restriction of b to the vocabulary of a
    std::map<std::string, std::set<Tuple>> sigma_rels;
    for (const auto& [name, ar] : a.vocabulary.symbols) {
        (void)ar;
        sigma_rels[name] = b.tuples(name);
    }
    const Structure b_sigma = Structure::make(a.vocabulary, b.universe, std::move(sigma_rels));
    std::set<std::string> carrier;
    for (const auto& x : a.universe)
        for (const auto& t : b.tuples(color_symbol(x))) carrier.insert(x + "*" + t[0]);
    if (carrier.empty()) return std::nullopt;
    ReductionResult out;
    out.output = induced(direct_product(a, b_sigma), carrier);
    out.trace = {{"op", "product_reduction"}, {"carrier_size", carrier.size()}};
    return out;
}

ReductionResult color_trivialize(const Structure& a, const Structure& b) {
    if (!(a.vocabulary == b.vocabulary))
        throw std::invalid_argument("color_trivialize: similar structures required");
    const Structure c = core(a);
    std::map<std::string, int> symbols = b.vocabulary.symbols;
    std::map<std::string, std::set<Tuple>> rels = b.relations;
    for (const auto& x : c.universe) {
        const std::string sym = color_symbol(x);
        if (symbols.count(sym))
            throw std::invalid_argument("color_trivialize: symbol clash on " + sym);
        symbols[sym] = 1;
        auto& dst = rels[sym];
        for (const auto& y : b.universe) dst.insert({y});
    }
    int max_ar = 1;
    for (const auto& [n, ar] : symbols) {
        (void)n;
        max_ar = std::max(max_ar, ar);
    }
    ReductionResult out;
    out.output = Structure::make(Vocabulary::make(std::move(symbols), std::max(4, max_ar)),
                                 b.universe, std::move(rels));
    out.trace = {{"op", "color_trivialize"}, {"core_size", c.universe.size()}};
    return out;
}

ReductionResult graph_reduction(const Structure& a, const Structure& b) {
    const Structure g_star = star_expand(gaifman(a));
    if (!(b.vocabulary == g_star.vocabulary))
        throw std::invalid_argument("graph_reduction: b must be over the vocabulary of graph(a)*");
    const Structure a_star = star_expand(a);
    auto name = [](const std::string& x, const std::string& y) { return x + "*" + y; };
    std::vector<std::string> universe;
    for (const auto& x : a.universe)
        for (const auto& y : b.universe) universe.push_back(name(x, y));
    std::map<std::string, std::set<Tuple>> rels;
    for (const auto& x : a.universe) {
        auto& color = rels[color_symbol(x)];
        for (const auto& t : b.tuples(color_symbol(x))) color.insert({name(x, t[0])});
    }
    const auto& b_edges = b.tuples("E");
    for (const auto& [sym, ar] : a.vocabulary.symbols) {
        auto& dst = rels[sym];
        for (const auto& ta : a.tuples(sym)) {
            // all b-assignments to the positions, filtered by the
            // collision-or-edge condition
            std::vector<std::size_t> pick(ar, 0);
            for (;;) {
                bool ok = true;
                for (int i = 0; i < ar && ok; ++i)
                    for (int j = 0; j < ar && ok; ++j) {
                        if (ta[i] == ta[j]) {
                            // same a-element must get the same b-element
                            if (pick[i] != pick[j]) ok = false;
                        } else if (!b_edges.count({b.universe[pick[i]], b.universe[pick[j]]})) {
                            ok = false;
                        }
                    }
                if (ok) {
                    Tuple t;
                    for (int i = 0; i < ar; ++i) t.push_back(name(ta[i], b.universe[pick[i]]));
                    dst.insert(std::move(t));
                }
                std::size_t i = 0;
                while (i < static_cast<std::size_t>(ar) && ++pick[i] == b.universe.size())
                    pick[i++] = 0;
                if (i == static_cast<std::size_t>(ar)) break;
            }
        }
    }
    ReductionResult out;
    out.output = Structure::make(a_star.vocabulary, std::move(universe), std::move(rels));
    out.trace = {{"op", "graph_reduction"}};
    return out;
}

namespace {

std::string left_name(const std::string& rel, const Tuple& t, int i) {
    return rel + "(" + join(t, ",") + ")#" + std::to_string(i + 1);
}

} // namespace

IncidenceGraph incidence_graph(const Structure& a) {
    IncidenceGraph out;
    std::vector<std::string> vs = a.universe;
    out.right = a.universe;
    std::vector<std::pair<std::string, std::string>> es;
    for (const auto& [rel, tuples] : a.relations) {
        const int ar = a.vocabulary.arity(rel);
        for (const auto& t : tuples) {
            for (int i = 0; i < ar; ++i) {
                const std::string li = left_name(rel, t, i);
                vs.push_back(li);
                out.left.push_back(li);
                es.emplace_back(li, t[i]);
                for (int j = 0; j < i; ++j) es.emplace_back(left_name(rel, t, j), li);
            }
        }
    }
    std::sort(out.left.begin(), out.left.end());
    for (const auto& l : out.left)
        if (a.has_element(l))
            throw std::invalid_argument("incidence_graph: name collision on " + l);
    out.graph = Graph::from_edges(std::move(vs), std::move(es));
    return out;
}

ReductionResult incidence_reduction(const Structure& a, const Structure& b) {
    if (!(a.vocabulary == b.vocabulary))
        throw std::invalid_argument("incidence_reduction: similar structures required");
    const auto in_a = incidence_graph(a);
    const auto in_b = incidence_graph(b);
    const Structure vocab_source = star_expand(in_a.graph.s);

    std::map<std::string, std::set<Tuple>> rels;
    rels["E"] = in_b.graph.s.tuples("E");
    // left colors: position (R, ., i) of in(a) collects all (R, ., i) of in(b)
    for (const auto& [rel, tuples] : a.relations) {
        const int ar = a.vocabulary.arity(rel);
        for (const auto& t : tuples)
            for (int i = 0; i < ar; ++i) {
                auto& color = rels[color_symbol(left_name(rel, t, i))];
                for (const auto& tb : b.tuples(rel)) color.insert({left_name(rel, tb, i)});
            }
    }
    // right colors: the whole right part of in(b)
    for (const auto& x : a.universe) {
        auto& color = rels[color_symbol(x)];
        for (const auto& y : b.universe) color.insert({y});
    }
    ReductionResult out;
    out.output = Structure::make(vocab_source.vocabulary, in_b.graph.s.universe, std::move(rels));
    out.trace = {{"op", "incidence_reduction"},
                 {"left_a", in_a.left.size()},
                 {"left_b", in_b.left.size()}};
    return out;
}

namespace {

struct CompiledDisjunct {
    Structure b_i;                       // over the vocabulary of F_i*
    RootedForest forest;                 // F_i
    std::vector<std::string> tree_roots; // roots in canonical order (c_i trees)
};

CompiledDisjunct compile_pp(const Structure& b, const Formula& phi) {
    if (classify_fragment(phi, INT32_MAX) != Fragment::PP)
        throw std::invalid_argument("dpp_to_hom: PP disjunct required");
    CompiledDisjunct out;
    const Structure a_phi = canonical_structure(phi, b.vocabulary);
    out.forest = formula_forest(phi);

    // Hom(A_phi) -> Hom(A_phi*): give every variable the full color
    std::map<std::string, int> symbols = b.vocabulary.symbols;
    std::map<std::string, std::set<Tuple>> rels = b.relations;
    for (const auto& x : a_phi.universe) {
        symbols[color_symbol(x)] = 1;
        auto& dst = rels[color_symbol(x)];
        for (const auto& y : b.universe) dst.insert({y});
    }
    int max_ar = 1;
    for (const auto& [n, ar] : symbols) {
        (void)n;
        max_ar = std::max(max_ar, ar);
    }
    const Structure b_colored = Structure::make(
        Vocabulary::make(std::move(symbols), std::max(4, max_ar)), b.universe, std::move(rels));

    // ancestor bags along the formula forest give a decomposition
    Deconstruction d{gaifman_graph(a_phi), out.forest.graph, {}, DeconMode::Decomposition};
    for (const auto& v : out.forest.graph.vertices()) {
        const auto chain = out.forest.ancestors(v);
        d.bags[v] = {chain.begin(), chain.end()};
    }
    auto reduced = decomp_hom_reduction(a_phi, d, b_colored);
    out.b_i = std::move(reduced.output);
    out.tree_roots.assign(out.forest.roots.begin(), out.forest.roots.end());
    return out;
}

std::string jbar_token(const std::vector<int>& jbar) {
    std::string out;
    for (std::size_t i = 0; i < jbar.size(); ++i) {
        if (i) out += "-";
        out += std::to_string(jbar[i] + 1);
    }
    return out;
}

} // namespace

DppHomResult dpp_to_hom(const Structure& b, const std::vector<Formula>& disjuncts) {
    const int k = static_cast<int>(disjuncts.size());
    if (k < 1) throw std::invalid_argument("dpp_to_hom: at least one disjunct");
    ensure(k <= 6, "dpp_to_hom: too many disjuncts");

    std::vector<CompiledDisjunct> parts;
    parts.reserve(k);
    for (const auto& phi : disjuncts) parts.push_back(compile_pp(b, phi));

    std::uint64_t combos = 1;
    for (const auto& p : parts) {
        combos *= p.tree_roots.size();
        ensure(combos <= 256, "dpp_to_hom: product of component counts exceeds guard");
    }

    // per part: subtree nodes per tree, and the tree containing each node
    struct TreeInfo {
        std::vector<std::vector<std::string>> nodes;  // per tree index, sorted, root excluded
    };
    std::vector<TreeInfo> infos(k);
    for (int i = 0; i < k; ++i) {
        const auto comps = components(parts[i].forest.graph.s);
        infos[i].nodes.resize(parts[i].tree_roots.size());
        for (const auto& comp : comps) {
            int which = -1;
            for (std::size_t j = 0; j < parts[i].tree_roots.size(); ++j)
                if (comp.has_element(parts[i].tree_roots[j])) which = static_cast<int>(j);
            for (const auto& v : comp.universe)
                if (v != parts[i].tree_roots[which]) infos[i].nodes[which].push_back(v);
        }
    }

    // assemble the merged trees T_jbar and the renamed target parts
    std::vector<std::string> forest_vs;
    std::vector<std::pair<std::string, std::string>> forest_es;
    std::set<std::string> forest_roots;
    std::set<std::string> universe;
    std::map<std::string, std::set<Tuple>> rels;
    std::map<std::string, int> symbols{{"E", 2}};
    rels["E"];

    std::vector<int> jbar(k, 0);
    nlohmann::json trace_trees = nlohmann::json::array();
    for (;;) {
        const std::string tag = jbar_token(jbar);
        const std::string root = tag + ":root";
        forest_vs.push_back(root);
        forest_roots.insert(root);
        symbols[color_symbol(root)] = 1;
        rels[color_symbol(root)];
        auto tree_name = [&](int i, const std::string& v) {
            // nodes of tree j_i of part i keep their variable name under the
            // jbar tag; roots collapse onto the merged root
            return v == parts[i].tree_roots[jbar[i]] ? root : tag + ":" + std::to_string(i + 1) +
                                                                  "." + v;
        };
        for (int i = 0; i < k; ++i) {
            const auto& nodes = infos[i].nodes[jbar[i]];
            for (const auto& v : nodes) {
                forest_vs.push_back(tree_name(i, v));
                symbols[color_symbol(tree_name(i, v))] = 1;
                rels[color_symbol(tree_name(i, v))];
            }
            // edges of tree j_i (within the component of its root)
            std::set<std::string> in_tree(nodes.begin(), nodes.end());
            in_tree.insert(parts[i].tree_roots[jbar[i]]);
            for (const auto& t : parts[i].forest.graph.s.tuples("E"))
                if (t[0] < t[1] && in_tree.count(t[0]) && in_tree.count(t[1]))
                    forest_es.emplace_back(tree_name(i, t[0]), tree_name(i, t[1]));
        }

        // target part for each i: b_i with forgotten/renamed colors and root
        // loops
        for (int i = 0; i < k; ++i) {
            const std::string part_tag = tag + "/" + std::to_string(i + 1) + "/";
            auto el = [&](const std::string& e) { return part_tag + e; };
            const auto& b_i = parts[i].b_i;
            const std::string root_color = color_symbol(parts[i].tree_roots[jbar[i]]);
            const auto& root_set = b_i.tuples(root_color);
            for (const auto& e : b_i.universe) universe.insert(el(e));
            auto& edge_dst = rels["E"];
            for (const auto& t : b_i.tuples("E")) edge_dst.insert({el(t[0]), el(t[1])});
            for (const auto& t : root_set) edge_dst.insert({el(t[0]), el(t[0])});
            // kept colors: non-root nodes of tree j_i
            for (const auto& v : infos[i].nodes[jbar[i]]) {
                auto& dst = rels[color_symbol(tree_name(i, v))];
                for (const auto& t : b_i.tuples(color_symbol(v))) dst.insert({el(t[0])});
            }
            // every other node of T_jbar (the merged root and all nodes of
            // other trees) takes the root color of this part
            std::set<std::string> mine;
            for (const auto& v : infos[i].nodes[jbar[i]]) mine.insert(tree_name(i, v));
            for (const auto& n : forest_vs) {
                if (n.rfind(tag, 0) != 0) continue;  // nodes of this T_jbar only
                if (mine.count(n)) continue;
                auto& dst = rels[color_symbol(n)];
                for (const auto& t : root_set) dst.insert({el(t[0])});
            }
        }

        trace_trees.push_back(tag);
        int i = 0;
        while (i < k && ++jbar[i] == static_cast<int>(parts[i].tree_roots.size())) jbar[i++] = 0;
        if (i == k) break;
    }

    DppHomResult out;
    out.forest = RootedForest::make(Graph::from_edges(forest_vs, std::move(forest_es)),
                                    std::move(forest_roots));
    out.output = Structure::make(Vocabulary::make(std::move(symbols), 4),
                                 {universe.begin(), universe.end()}, std::move(rels));
    out.trace = {{"op", "dpp_to_hom"}, {"disjuncts", k}, {"merged_trees", trace_trees}};
    return out;
}

DppHomResult mc_to_hom_pipeline(const Structure& b, const Formula& f) {
    auto dpp = existential_to_dpp(b, f);
    auto out = dpp_to_hom(dpp.expanded, dpp.disjuncts);
    out.trace["pipeline"] = "existential_to_dpp + dpp_to_hom";
    out.trace["qr"] = qrank(f);
    return out;
}

namespace {

Formula implies(Formula lhs, Formula rhs) {
    return f_or({f_not(std::move(lhs)), std::move(rhs)});
}

std::string ivar(int block, int pos) {
    return "x" + std::to_string(block) + "_" + std::to_string(pos);
}

// ph^len over the variable layout of the theorem interpretation: xs and ys
// are (block,pos) coordinates of the left and right tuples.
Formula ph_formula(const Graph& g, const std::vector<std::pair<int, int>>& xs,
                   const std::vector<std::pair<int, int>>& ys) {
    std::vector<Formula> parts;
    const int len = static_cast<int>(xs.size());
    auto var = [&](const std::pair<int, int>& c) { return ivar(c.first, c.second); };
    for (int i = 0; i < len; ++i) parts.push_back(f_atom("P_1", {var(xs[i])}));
    for (int i = 0; i < len; ++i) parts.push_back(f_atom("P_2", {var(ys[i])}));
    for (int i = 0; i < len; ++i)
        for (int j = 0; j < len; ++j) {
            if (i == j) continue;
            parts.push_back(implies(f_eq(var(xs[i]), var(xs[j])), f_eq(var(ys[i]), var(ys[j]))));
            parts.push_back(implies(f_atom("E", {var(xs[i]), var(xs[j])}),
                                    f_atom("E", {var(ys[i]), var(ys[j])})));
        }
    // color preservation: the pair condition on C_v atoms, absent from the
    // two-sorted edge/equality clauses above but required for partial homs
    // from a starred structure
    for (int i = 0; i < len; ++i)
        for (const auto& v : g.vertices())
            parts.push_back(implies(f_atom(color_symbol(v), {var(xs[i])}),
                                    f_atom(color_symbol(v), {var(ys[i])})));
    return f_and(std::move(parts));
}

} // namespace

Theorem48Interpretation theorem48_interpretation(const Graph& g, const Deconstruction& d) {
    if (!(d.subject == g))
        throw std::invalid_argument("theorem48_interpretation: subject of d must be g");
    auto violations = validate(d);
    if (!violations.empty())
        throw std::invalid_argument("theorem48_interpretation: invalid deconstruction");
    int w = 0;
    for (const auto& [h, bag] : d.bags) {
        (void)h;
        if (bag.empty())
            throw std::invalid_argument("theorem48_interpretation: empty bag present");
        w = std::max(w, static_cast<int>(bag.size()));
    }

    Theorem48Interpretation out;
    // g* expanded with w-ary bag-listing relations
    Structure g_star = star_expand(g.s);
    std::map<std::string, int> symbols = g_star.vocabulary.symbols;
    std::map<std::string, std::set<Tuple>> rels = g_star.relations;
    for (const auto& [h, bag] : d.bags) {
        const std::string sym = "B_" + h;
        if (symbols.count(sym))
            throw std::invalid_argument("theorem48_interpretation: symbol clash on " + sym);
        symbols[sym] = w;
        rels[sym] = {bag_listing(bag, w)};
    }
    out.g_tilde = Structure::make(Vocabulary::make(std::move(symbols), std::max(4, w)),
                                  g_star.universe, std::move(rels));

    Interpretation interp;
    std::map<std::string, int> input_symbols = out.g_tilde.vocabulary.symbols;
    input_symbols["P_1"] = 1;
    input_symbols["P_2"] = 1;
    interp.input = Vocabulary::make(std::move(input_symbols), std::max(4, w));
    std::map<std::string, int> output_symbols{{"E", 2}};
    for (const auto& h : d.host.vertices()) output_symbols[color_symbol(h)] = 1;
    interp.output = Vocabulary::make(std::move(output_symbols), 4);
    interp.dimension = 2 * w;

    // block layout: x-part at positions 1..w, y-part at w+1..2w
    std::vector<std::pair<int, int>> xs1, ys1;
    for (int p = 1; p <= w; ++p) {
        xs1.emplace_back(1, p);
        ys1.emplace_back(1, w + p);
    }
    interp.universe_formula = ph_formula(g, xs1, ys1);
    std::vector<std::pair<int, int>> xs2 = xs1, ys2 = ys1;
    for (int p = 1; p <= w; ++p) {
        xs2.emplace_back(2, p);
        ys2.emplace_back(2, w + p);
    }
    interp.relation_formulas["E"] = ph_formula(g, xs2, ys2);
    for (const auto& h : d.host.vertices()) {
        std::vector<std::string> vars;
        for (int p = 1; p <= w; ++p) vars.push_back(ivar(1, p));
        interp.relation_formulas[color_symbol(h)] = f_atom("B_" + h, std::move(vars));
    }
    out.interp = interp;
    return out;
}

} // namespace homlab
