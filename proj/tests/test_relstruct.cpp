#include <doctest.h>

#include "homlab/json_io.hpp"
#include "homlab/relstruct.hpp"
#include "support.hpp"

using namespace homlab;
using namespace homlab::testing;

TEST_SUITE("relstruct") {

TEST_CASE("validate_structure") {
    CHECK(validate_structure(k2()).empty());

    Structure bad = k2();
    bad.relations["E"].insert({"v1", "zz"});
    const auto v = validate_structure(bad);
    REQUIRE(!v.empty());
    CHECK(v.front().find("foreign element") != std::string::npos);

    Structure empty;
    empty.vocabulary = Vocabulary::make({{"E", 2}});
    empty.relations["E"] = {};
    const auto v2 = validate_structure(empty);
    CHECK(std::find(v2.begin(), v2.end(), "empty universe") != v2.end());
}

TEST_CASE("induced") {
    CHECK(induced(k3(), {"v1", "v2"}) == Structure::make(Vocabulary::make({{"E", 2}}),
                                                         {"v1", "v2"},
                                                         {{"E", {{"v1", "v2"}, {"v2", "v1"}}}}));
    // no edge survives between the endpoints of a path
    const auto ends = induced(p3(), {"v1", "v3"});
    CHECK(ends.tuples("E").empty());
    CHECK(induced(k3(), {"v1", "v2", "v3"}) == k3());
    CHECK_THROWS_AS(induced(k2(), {}), std::invalid_argument);
    CHECK_THROWS_AS(induced(k2(), {"nope"}), std::invalid_argument);
}

TEST_CASE("gaifman") {
    // one ternary tuple spans a triangle
    const auto s = Structure::make(Vocabulary::make({{"R", 3}}), {"a", "b", "c"},
                                   {{"R", {{"a", "b", "c"}}}});
    const auto g = gaifman(s);
    CHECK(g.tuples("E").size() == 6);

    CHECK(gaifman(k3()) == k3());

    const auto unary = Structure::make(Vocabulary::make({{"C", 1}}), {"a", "b"},
                                       {{"C", {{"a"}, {"b"}}}});
    CHECK(gaifman(unary).tuples("E").empty());
}

TEST_CASE("components") {
    Structure two = Structure::make(
        Vocabulary::make({{"E", 2}}), {"a", "b", "x", "y", "z"},
        {{"E", {{"a", "b"}, {"b", "a"}, {"x", "y"}, {"y", "x"}, {"y", "z"}, {"z", "y"},
                {"x", "z"}, {"z", "x"}}}});
    const auto comps = components(two);
    REQUIRE(comps.size() == 2);
    CHECK(comps[0].universe == std::vector<std::string>{"a", "b"});
    CHECK(comps[1].universe == std::vector<std::string>{"x", "y", "z"});

    CHECK(components(k3()).size() == 1);

    const auto iso = Structure::make(Vocabulary::make({{"E", 2}}), {"a", "b", "c"}, {});
    CHECK(components(iso).size() == 3);
}

TEST_CASE("direct_product") {
    const auto p = direct_product(k2(), k3());
    CHECK(p.universe.size() == 6);

    // K_2 x K_2 is a perfect matching on four vertices
    const auto q = direct_product(k2(), k2());
    CHECK(q.universe.size() == 4);
    CHECK(q.tuples("E") ==
          std::set<Tuple>{{"v1*v1", "v2*v2"}, {"v1*v2", "v2*v1"}, {"v2*v1", "v1*v2"},
                          {"v2*v2", "v1*v1"}});

    // unit structure: one element with a loop
    const auto unit = Structure::make(Vocabulary::make({{"E", 2}}), {"u"}, {{"E", {{"u", "u"}}}});
    CHECK(is_isomorphic(direct_product(k3(), unit), k3()));

    CHECK_THROWS_AS(direct_product(k2(), Structure::make(Vocabulary::make({{"R", 2}}), {"a"}, {})),
                    std::invalid_argument);
}

TEST_CASE("pair_structure") {
    const auto p = pair_structure(k2(), k3());
    CHECK(p.universe.size() == 5);
    CHECK(p.tuples("P_1").size() == 2);
    CHECK(p.tuples("P_2").size() == 3);
    // no cross edges between the parts
    for (const auto& t : p.tuples("E"))
        CHECK(t[0].substr(0, 2) == t[1].substr(0, 2));
    // the P_1 part is a copy of the first argument
    std::set<std::string> part1;
    for (const auto& t : p.tuples("P_1")) part1.insert(t[0]);
    auto restricted = induced(p, part1);
    std::map<std::string, std::set<Tuple>> rels{{"E", restricted.tuples("E")}};
    const auto part = Structure::make(k2().vocabulary, {part1.begin(), part1.end()}, rels);
    CHECK(is_isomorphic(part, k2()));
}

TEST_CASE("star_expand") {
    const auto s = star_expand(k2());
    CHECK(s.vocabulary.symbols ==
          std::map<std::string, int>{{"C_v1", 1}, {"C_v2", 1}, {"E", 2}});
    CHECK(s.tuples("C_v1") == std::set<Tuple>{{"v1"}});
    CHECK(s.relations.size() == k2().relations.size() + 2);

    // starred structures are cores
    Rng rng(42);
    for (int i = 0; i < 10; ++i) {
        const auto a = random_graph_structure(2 + static_cast<int>(rng.below(3)), rng);
        CHECK(is_core(star_expand(a)));
        CHECK(is_core_oracle(star_expand(a)));
    }
}

TEST_CASE("is_partial_hom") {
    CHECK(is_partial_hom(k2(), k2(), {}));
    CHECK_FALSE(is_partial_hom(k2(), k2(), {{"v1", "v1"}, {"v2", "v1"}}));
    CHECK(is_partial_hom(k2(), k2(), {{"v1", "v1"}, {"v2", "v2"}}));
    CHECK_THROWS_AS(is_partial_hom(k2(), k2(), {{"zz", "v1"}}), std::invalid_argument);
}

TEST_CASE("find_hom") {
    CHECK(find_hom(k3(), k2()).status == SearchStatus::None);
    CHECK_FALSE(hom_oracle(k3(), k2()));

    const auto res = find_hom(p3(), k2());
    REQUIRE(res.status == SearchStatus::Found);
    CHECK(hom_oracle(p3(), k2()));
    CHECK(res.witness == PartialHom{{"v1", "v1"}, {"v2", "v2"}, {"v3", "v1"}});

    // identity is the least witness on K_3 -> K_3
    const auto self = find_hom(k3(), k3());
    REQUIRE(self.status == SearchStatus::Found);
    CHECK(self.witness == PartialHom{{"v1", "v1"}, {"v2", "v2"}, {"v3", "v3"}});

    // budget exhaustion is distinguished
    const auto starved = find_hom(gen_complete(6).s, gen_complete(5).s, 3);
    CHECK(starved.status == SearchStatus::BudgetExceeded);
}

TEST_CASE("find_hom agrees with the blind oracle") {
    Rng rng(7);
    for (int i = 0; i < 60; ++i) {
        const auto a = random_graph_structure(1 + static_cast<int>(rng.below(4)), rng);
        const auto b = random_graph_structure(1 + static_cast<int>(rng.below(3)), rng);
        const auto res = find_hom(a, b);
        REQUIRE(res.status != SearchStatus::BudgetExceeded);
        CHECK((res.status == SearchStatus::Found) == hom_oracle(a, b));
        if (res.status == SearchStatus::Found) CHECK(map_is_hom(a, b, res.witness));
    }
}

TEST_CASE("find_hom is stable") {
    Rng rng(8);
    const auto a = random_graph_structure(4, rng);
    const auto b = random_graph_structure(3, rng);
    const auto r1 = find_hom(a, b);
    const auto r2 = find_hom(a, b);
    CHECK(r1.status == r2.status);
    CHECK(r1.witness == r2.witness);
}

TEST_CASE("homomorphisms compose") {
    Rng rng(9);
    int checked = 0;
    for (int i = 0; i < 40 && checked < 10; ++i) {
        const auto a = random_graph_structure(3, rng, 0.4, "a");
        const auto b = random_graph_structure(3, rng, 0.6, "b");
        const auto c = random_graph_structure(3, rng, 0.7, "c");
        const auto f = find_hom(a, b);
        const auto g = find_hom(b, c);
        if (f.status != SearchStatus::Found || g.status != SearchStatus::Found) continue;
        PartialHom comp;
        for (const auto& [x, y] : f.witness) comp[x] = g.witness.at(y);
        CHECK(is_partial_hom(a, c, comp));
        ++checked;
    }
    CHECK(checked > 0);
}

TEST_CASE("is_core") {
    CHECK(is_core(k3()));
    CHECK(is_core_oracle(k3()));
    CHECK_FALSE(is_core(p3()));
    CHECK_FALSE(is_core_oracle(p3()));
    CHECK_THROWS_AS(is_core(gen_complete(9).s), GuardError);
}

TEST_CASE("core") {
    CHECK(is_isomorphic(core(p3()), k2()));
    CHECK(core(k3()) == k3());
    Rng rng(10);
    for (int i = 0; i < 20; ++i) {
        const auto a = random_graph_structure(1 + static_cast<int>(rng.below(5)), rng);
        const auto c = core(a);
        CHECK(validate_structure(c).empty());
        CHECK(is_core(c));
        CHECK(core(c) == c);  // idempotent
        // homomorphically equivalent
        CHECK(find_hom(a, c).status == SearchStatus::Found);
        CHECK(find_hom(c, a).status == SearchStatus::Found);
    }
}

TEST_CASE("product projections are homomorphisms") {
    Rng rng(11);
    for (int i = 0; i < 10; ++i) {
        const auto a = random_graph_structure(3, rng, 0.5, "a");
        const auto b = random_graph_structure(2, rng, 0.5, "b");
        const auto p = direct_product(a, b);
        PartialHom proj;
        for (const auto& e : p.universe) proj[e] = e.substr(0, e.find('*'));
        CHECK(is_partial_hom(p, a, proj));
        CHECK(validate_structure(p).empty());
    }
}

TEST_CASE("json round trip is canonical") {
    const auto s = star_expand(p3());
    const auto j = structure_to_json(s);
    CHECK(structure_from_json(j) == s);
    CHECK(dump_canonical(j) == dump_canonical(structure_to_json(structure_from_json(j))));
}

} // TEST_SUITE
