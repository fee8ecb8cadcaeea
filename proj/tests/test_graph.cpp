#include <doctest.h>

#include "homlab/graph.hpp"
#include "support.hpp"

using namespace homlab;
using namespace homlab::testing;

TEST_SUITE("graphlib") {

TEST_CASE("generators") {
    CHECK(gen_path(1).size() == 1);
    CHECK(gen_path(1).s.tuples("E").empty());
    CHECK(gen_grid(2).size() == 4);
    CHECK(gen_grid(2).s.tuples("E").size() == 8);  // C_4, both directions
    const auto star = gen_tree(1, 3);
    CHECK(star.graph.size() == 4);
    CHECK(star.graph.neighbors("r").size() == 3);
    CHECK(gen_tree(2, 2).graph.size() == 7);
    CHECK_THROWS_AS(gen_cycle(2), std::invalid_argument);
    CHECK_THROWS_AS(gen_path(0), std::invalid_argument);

    CHECK_THROWS_AS(Graph::from_edges({"a"}, {{"a", "a"}}), std::invalid_argument);
}

TEST_CASE("rooted forest basics") {
    const auto t = gen_tree(2, 2);
    CHECK(height(t) == 2);
    CHECK(height(RootedForest::make(gen_path(1), {"v1"})) == 0);
    // path rooted at an end has height n-1
    const auto p4 = gen_path(4);
    CHECK(height(RootedForest::make(p4, {"v1"})) == 3);

    const auto anc = t.ancestors("r.1.2");
    CHECK(anc == std::vector<std::string>{"r", "r.1", "r.1.2"});
    CHECK(t.in_closure("r", "r.2.1"));
    CHECK_FALSE(t.in_closure("r.1", "r.2"));

    CHECK_THROWS_AS(RootedForest::make(gen_cycle(3), {"v1"}), std::invalid_argument);
    CHECK_THROWS_AS(RootedForest::make(gen_path(3), {"v1", "v2"}), std::invalid_argument);
}

TEST_CASE("tree_depth known values") {
    CHECK(tree_depth(gen_complete(2)).depth == 1);
    CHECK(tree_depth(gen_path(4)).depth == 2);
    CHECK(tree_depth(gen_complete(3)).depth == 2);
    CHECK(tree_depth(gen_path(1)).depth == 0);
    CHECK_THROWS_AS(tree_depth(gen_grid(4)), GuardError);
}

TEST_CASE("tree_depth matches the forest-enumeration oracle") {
    Rng rng(21);
    for (int i = 0; i < 25; ++i) {
        const auto g = random_graph(1 + static_cast<int>(rng.below(5)), rng);
        CHECK(tree_depth(g).depth == tree_depth_oracle(g));
    }
}

TEST_CASE("tree_depth witness has the stated height and closure") {
    Rng rng(22);
    for (int i = 0; i < 25; ++i) {
        const auto g = random_graph(1 + static_cast<int>(rng.below(6)), rng);
        const auto res = tree_depth(g);
        CHECK(height(res.witness) == res.depth);
        for (const auto& t : g.s.tuples("E")) CHECK(res.witness.in_closure(t[0], t[1]));
    }
}

TEST_CASE("treewidth and pathwidth known values") {
    CHECK(treewidth(gen_tree(2, 2).graph) == 1);
    CHECK(treewidth(gen_grid(3)) == 3);
    CHECK(pathwidth(gen_complete(4)) == 3);
    CHECK(pathwidth(gen_path(5)) == 1);
    CHECK(treewidth(gen_path(1)) == 0);
}

TEST_CASE("width DPs match the permutation oracles") {
    Rng rng(23);
    for (int i = 0; i < 20; ++i) {
        const auto g = random_graph(1 + static_cast<int>(rng.below(6)), rng);
        CHECK(treewidth(g) == treewidth_oracle(g));
        CHECK(pathwidth(g) == pathwidth_oracle(g));
    }
}

TEST_CASE("invariant chain treewidth <= pathwidth <= tree_depth") {
    Rng rng(24);
    for (int i = 0; i < 30; ++i) {
        const auto g = random_graph(1 + static_cast<int>(rng.below(7)), rng);
        const int tw = treewidth(g), pw = pathwidth(g), td = tree_depth(g).depth;
        CHECK(tw <= pw);
        CHECK(pw <= td);
    }
}

TEST_CASE("is_minor_map") {
    const auto g = gen_cycle(5);
    MinorMap identity;
    for (const auto& v : g.vertices()) identity[v] = {v};
    CHECK(is_minor_map(g, g, identity));

    // C_5 -> K_3 by contracting two adjacent pairs
    MinorMap mu{{"v1", {"v1", "v2"}}, {"v2", {"v3", "v4"}}, {"v3", {"v5"}}};
    CHECK(is_minor_map(gen_complete(3), gen_cycle(5), mu));

    MinorMap overlap{{"v1", {"v1", "v2"}}, {"v2", {"v2", "v3"}}, {"v3", {"v5"}}};
    CHECK_FALSE(is_minor_map(gen_complete(3), gen_cycle(5), overlap));
}

TEST_CASE("find_minor") {
    CHECK(find_minor(gen_path(5), gen_complete(3)).status == SearchStatus::None);
    const auto res = find_minor(gen_cycle(5), gen_complete(3));
    REQUIRE(res.status == SearchStatus::Found);
    CHECK(is_minor_map(gen_complete(3), gen_cycle(5), res.witness));
    CHECK(find_minor(gen_grid(2), gen_path(1)).status == SearchStatus::Found);
}

TEST_CASE("minors of forests are forests") {
    Rng rng(25);
    for (int i = 0; i < 10; ++i) {
        const auto t = random_tree(2 + static_cast<int>(rng.below(6)), rng);
        for (int n = 3; n <= static_cast<int>(t.graph.size()); ++n)
            CHECK(find_minor(t.graph, gen_cycle(n)).status == SearchStatus::None);
    }
}

TEST_CASE("has_property_P") {
    // T_{d,k} has P(d,k) by construction
    for (int d = 0; d <= 2; ++d)
        for (int k = 1; k <= 3; ++k) {
            const auto t = gen_tree(d, k);
            CHECK(has_property_P(t, d, k));
            CHECK(property_oracle(t, d, k));
        }
    // a star has no two disjoint depth-1 witnesses
    const auto star = gen_tree(1, 3);
    CHECK_FALSE(has_property_P(star, 2, 2));
    CHECK_FALSE(property_oracle(star, 2, 2));
    // P(0,k) always
    Rng rng(26);
    for (int i = 0; i < 5; ++i)
        CHECK(has_property_P(random_tree(1 + static_cast<int>(rng.below(7)), rng), 0,
                             1 + static_cast<int>(rng.below(3))));
}

TEST_CASE("has_property_P matches the subset oracle") {
    Rng rng(27);
    for (int i = 0; i < 30; ++i) {
        const auto t = random_tree(1 + static_cast<int>(rng.below(8)), rng);
        const int d = static_cast<int>(rng.below(3));
        const int k = 1 + static_cast<int>(rng.below(3));
        CHECK(has_property_P(t, d, k) == property_oracle(t, d, k));
    }
}

TEST_CASE("property P gives a T_{d,k} minor") {
    Rng rng(28);
    for (int i = 0; i < 25; ++i) {
        const auto t = random_tree(1 + static_cast<int>(rng.below(8)), rng);
        const int d = static_cast<int>(rng.below(3));
        const int k = 1 + static_cast<int>(rng.below(2));
        if (has_property_P(t, d, k))
            CHECK(find_minor(t.graph, gen_tree(d, k).graph).status == SearchStatus::Found);
    }
}

TEST_CASE("stack_profile") {
    CHECK(stack_profile(gen_tree(2, 3).graph, 3, 3) == 2);
    CHECK(stack_profile(gen_path(2), 3, 2) == 0);
    // with k = 1 the profile is the deepest path minor
    CHECK(stack_profile(gen_path(4), 5, 1) == 3);
    CHECK(stack_profile(gen_path(1), 3, 2) == 0);
}

TEST_CASE("dfs_forest") {
    const auto f = dfs_forest(gen_complete(3));
    CHECK(f.roots == std::set<std::string>{"v1"});
    CHECK(height(f) == 2);  // a triangle DFS gives a path

    // DFS of a tree is the tree re-rooted at the least element
    const auto t = gen_tree(2, 2);
    const auto f2 = dfs_forest(t.graph);
    CHECK(f2.graph.s.tuples("E") == t.graph.s.tuples("E"));

    Rng rng(29);
    for (int i = 0; i < 20; ++i) {
        const auto g = random_graph(1 + static_cast<int>(rng.below(8)), rng);
        const auto f3 = dfs_forest(g);
        for (const auto& t3 : g.s.tuples("E")) CHECK(f3.in_closure(t3[0], t3[1]));
    }
}

} // TEST_SUITE
