#include "homlab/games.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "homlab/kernels.hpp"

namespace homlab {

GameVector GameVector::make(std::vector<int> rounds) {
    if (rounds.empty()) throw std::invalid_argument("game vector: at least one round");
    for (int p : rounds)
        if (p < 0) throw std::invalid_argument("game vector: negative pebble count");
    return GameVector{std::move(rounds)};
}

GameVector GameVector::parse(const std::string& text) {
    std::vector<int> rounds;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw std::invalid_argument("game vector: empty entry");
        rounds.push_back(std::stoi(item));
    }
    return make(std::move(rounds));
}

GameVector GameVector::ones(int n) {
    if (n < 1) throw std::invalid_argument("game vector: n >= 1 required");
    return make(std::vector<int>(n, 1));
}

int GameVector::pebbles() const {
    int sum = 0;
    for (int p : rounds) sum += p;
    return sum;
}

std::string GameVector::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < rounds.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(rounds[i]);
    }
    return out;
}

std::string SetVector::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        if (i) out += "|";
        out += "{";
        bool first = true;
        for (const auto& e : chain[i]) {
            if (!first) out += ",";
            first = false;
            out += e;
        }
        out += "}";
    }
    return out;
}

std::vector<std::string> validate_strategy(const Structure& a, const Structure& b,
                                           const GameVector& v, const StrategyTable& w) {
    std::vector<std::string> out;
    if (static_cast<int>(w.rounds.size()) != v.round_count()) {
        out.push_back("strategy has wrong number of rounds");
        return out;
    }
    for (const auto& round : w.rounds)
        for (const auto& g : round)
            if (!is_partial_hom(a, b, g)) out.push_back("non partial-hom member");
    // bullet 1: every <= p_1 domain is hit
    const int p1 = v.rounds[0];
    std::function<void(std::size_t, std::set<std::string>&, int)> subsets =
        [&](std::size_t i, std::set<std::string>& cur, int left) {
            bool found = false;
            for (const auto& g : w.rounds[0]) {
                if (g.size() != cur.size()) continue;
                bool same = true;
                for (const auto& [x, y] : g) {
                    (void)y;
                    if (!cur.count(x)) { same = false; break; }
                }
                if (same) { found = true; break; }
            }
            if (!found)
                out.push_back("round 1 misses a domain of size " + std::to_string(cur.size()));
            if (left == 0 || i == a.universe.size()) return;
            for (std::size_t j = i; j < a.universe.size(); ++j) {
                cur.insert(a.universe[j]);
                subsets(j + 1, cur, left - 1);
                cur.erase(a.universe[j]);
            }
        };
    std::set<std::string> cur;
    subsets(0, cur, p1);
    // bullet 2: extensions exist for every legal growth
    for (int i = 0; i + 1 < v.round_count(); ++i) {
        const int grow = v.rounds[i + 1];
        for (const auto& g : w.rounds[i]) {
            std::vector<std::string> rest;
            for (const auto& e : a.universe)
                if (!g.count(e)) rest.push_back(e);
            std::function<void(std::size_t, std::vector<std::string>&, int)> extend =
                [&](std::size_t at, std::vector<std::string>& picked, int left) {
                    std::set<std::string> dom;
                    for (const auto& [x, y] : g) {
                        (void)y;
                        dom.insert(x);
                    }
                    for (const auto& x : picked) dom.insert(x);
                    bool found = false;
                    for (const auto& g2 : w.rounds[i + 1]) {
                        if (g2.size() != dom.size()) continue;
                        bool extends = true;
                        for (const auto& [x, y] : g)
                            if (g2.count(x) == 0 || g2.at(x) != y) { extends = false; break; }
                        if (extends)
                            for (const auto& [x, y] : g2) {
                                (void)y;
                                if (!dom.count(x)) { extends = false; break; }
                            }
                        if (extends) { found = true; break; }
                    }
                    if (!found) out.push_back("round " + std::to_string(i + 2) + " misses an extension");
                    if (left == 0 || at == rest.size()) return;
                    for (std::size_t j = at; j < rest.size(); ++j) {
                        picked.push_back(rest[j]);
                        extend(j + 1, picked, left - 1);
                        picked.pop_back();
                    }
                };
            std::vector<std::string> picked;
            extend(0, picked, grow);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

// Memoized AND-OR game evaluation over canonical positions.
struct GameSolver {
    const Structure& a;
    const Structure& b;
    const std::vector<int>& p;
    std::map<std::pair<int, PartialHom>, bool> memo;

    GameSolver(const Structure& a_, const Structure& b_, const std::vector<int>& p_)
        : a(a_), b(b_), p(p_) {}

    // g is the position after round i (1-based); true iff Duplicator
    // survives all remaining rounds from it.
    bool good(int i, const PartialHom& g) {
        if (i == static_cast<int>(p.size())) return true;
        auto key = std::make_pair(i, g);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        std::vector<std::string> fresh;
        for (const auto& e : a.universe)
            if (!g.count(e)) fresh.push_back(e);
        bool ok = true;
        // Spoiler: any extension of the domain by <= p[i] fresh elements
        std::vector<std::string> picked;
        std::function<bool(std::size_t, int)> challenge = [&](std::size_t at, int left) -> bool {
            if (!answer(i, g, picked)) return false;
            if (left == 0) return true;
            for (std::size_t j = at; j < fresh.size(); ++j) {
                picked.push_back(fresh[j]);
                const bool survived = challenge(j + 1, left - 1);
                picked.pop_back();
                if (!survived) return false;
            }
            return true;
        };
        ok = challenge(0, p[i]);
        memo[key] = ok;
        return ok;
    }

    // Duplicator: some assignment of the picked elements extends g to a
    // partial homomorphism that stays good.
    bool answer(int i, const PartialHom& g, const std::vector<std::string>& picked) {
        PartialHom ext = g;
        std::function<bool(std::size_t)> assign = [&](std::size_t at) -> bool {
            if (at == picked.size())
                return is_partial_hom(a, b, ext) && good(i + 1, ext);
            for (const auto& y : b.universe) {
                ext[picked[at]] = y;
                if (assign(at + 1)) return true;
            }
            ext.erase(picked[at]);
            return false;
        };
        return assign(0);
    }
};

} // namespace

GameResult duplicator_wins(const Structure& a, const Structure& b, const GameVector& v,
                           int pebble_guard) {
    if (!(a.vocabulary == b.vocabulary))
        throw std::invalid_argument("duplicator_wins: vocabulary mismatch");
    ensure(v.pebbles() <= pebble_guard, "duplicator_wins: " + std::to_string(v.pebbles()) +
                                            " pebbles exceed guard " +
                                            std::to_string(pebble_guard));
    GameResult res;
    GameSolver solver(a, b, v.rounds);
    // round 0 position: the empty map; the first round is Spoiler's p_1 move
    res.wins = solver.good(0, {});
    if (!res.wins) {
        // least m such that the m-round prefix of v is already lost
        for (int m = 1; m <= v.round_count(); ++m) {
            GameVector prefix = GameVector::make(
                std::vector<int>(v.rounds.begin(), v.rounds.begin() + m));
            GameSolver ps(a, b, prefix.rounds);
            if (!ps.good(0, {})) {
                res.refutation_round = m;
                break;
            }
        }
        return res;
    }
    // reachable winning positions per round, canonical order
    res.strategy.rounds.assign(v.round_count(), {});
    std::vector<std::set<PartialHom>> reach(v.round_count() + 1);
    reach[0].insert(PartialHom{});
    for (int i = 0; i < v.round_count(); ++i) {
        for (const auto& g : reach[i]) {
            // all good extensions with <= p_{i+1} fresh elements
            std::vector<std::string> fresh;
            for (const auto& e : a.universe)
                if (!g.count(e)) fresh.push_back(e);
            std::function<void(std::size_t, int, PartialHom&)> expand =
                [&](std::size_t at, int left, PartialHom& ext) {
                    if (is_partial_hom(a, b, ext) && solver.good(i + 1, ext))
                        reach[i + 1].insert(ext);
                    if (left == 0) return;
                    for (std::size_t j = at; j < fresh.size(); ++j) {
                        for (const auto& y : b.universe) {
                            ext[fresh[j]] = y;
                            expand(j + 1, left - 1, ext);
                            ext.erase(fresh[j]);
                        }
                    }
                };
            PartialHom ext = g;
            expand(0, v.rounds[i], ext);
        }
        res.strategy.rounds[i].assign(reach[i + 1].begin(), reach[i + 1].end());
    }
    return res;
}

namespace {

std::vector<std::set<std::string>> subsets_up_to(const std::vector<std::string>& pool,
                                                 const std::set<std::string>& base, int grow) {
    std::vector<std::set<std::string>> out;
    std::vector<std::string> fresh;
    for (const auto& e : pool)
        if (!base.count(e)) fresh.push_back(e);
    std::function<void(std::size_t, std::set<std::string>&, int)> rec =
        [&](std::size_t at, std::set<std::string>& cur, int left) {
            out.push_back(cur);
            if (left == 0) return;
            for (std::size_t j = at; j < fresh.size(); ++j) {
                cur.insert(fresh[j]);
                rec(j + 1, cur, left - 1);
                cur.erase(fresh[j]);
            }
        };
    std::set<std::string> cur = base;
    rec(0, cur, grow);
    return out;
}

std::string tagged_name(const std::string& element, const SetVector& prefix) {
    return element + "@" + prefix.to_string();
}

} // namespace

Unfolding build_unfolding(const Structure& a, const GameVector& v, std::uint64_t guard) {
    ensure(v.pebbles() > 0, "build_unfolding: all-zero game vector yields an empty unfolding");
    // enumerate set vectors breadth-first by length
    std::vector<SetVector> vectors;
    std::vector<std::set<std::string>> starts =
        subsets_up_to(a.universe, {}, v.rounds[0]);
    for (const auto& c1 : starts) vectors.push_back(SetVector{{c1}});
    std::size_t begin = 0, end = vectors.size();
    for (int i = 1; i < v.round_count(); ++i) {
        for (std::size_t idx = begin; idx < end; ++idx) {
            const SetVector base = vectors[idx];
            for (const auto& grown :
                 subsets_up_to(a.universe, base.chain.back(), v.rounds[i])) {
                SetVector ext = base;
                ext.chain.push_back(grown);
                vectors.push_back(std::move(ext));
            }
        }
        begin = end;
        end = vectors.size();
        ensure(vectors.size() <= guard, "build_unfolding: set vector count exceeds guard");
    }

    // bags of tagged elements (a, u(a,s))
    Unfolding out;
    std::set<std::string> universe;
    auto smallest_prefix = [](const SetVector& s, const std::string& e) {
        SetVector prefix;
        for (const auto& c : s.chain) {
            prefix.chain.push_back(c);
            if (c.count(e)) return prefix;
        }
        throw std::logic_error("element not in chain");
    };
    std::map<std::string, std::set<std::string>> bags;
    for (const auto& s : vectors) {
        auto& bag = bags[s.to_string()];
        for (const auto& e : s.chain.back()) bag.insert(tagged_name(e, smallest_prefix(s, e)));
        universe.insert(bag.begin(), bag.end());
    }
    ensure(!universe.empty(), "build_unfolding: empty unfolding universe");

    // relations: tuples inside a common bag whose projection lies in R^A
    std::map<std::string, std::set<Tuple>> rels;
    for (const auto& [name, ar] : a.vocabulary.symbols) {
        (void)ar;
        rels[name];
    }
    for (const auto& s : vectors) {
        const auto& members = s.chain.back();
        std::map<std::string, std::string> tag;  // element -> tagged name in this bag
        for (const auto& e : members) tag[e] = tagged_name(e, smallest_prefix(s, e));
        for (const auto& [name, tuples] : a.relations)
            for (const auto& t : tuples) {
                bool inside = std::all_of(t.begin(), t.end(), [&](const std::string& e) {
                    return members.count(e) > 0;
                });
                if (!inside) continue;
                Tuple tt;
                tt.reserve(t.size());
                for (const auto& e : t) tt.push_back(tag.at(e));
                rels[name].insert(std::move(tt));
            }
    }
    out.structure = Structure::make(a.vocabulary, {universe.begin(), universe.end()},
                                    std::move(rels));

    // bag forest: roots are length-1 vectors, edges extend by one entry
    std::vector<std::string> forest_vs;
    std::vector<std::pair<std::string, std::string>> forest_es;
    std::set<std::string> forest_roots;
    for (const auto& s : vectors) {
        forest_vs.push_back(s.to_string());
        if (s.chain.size() == 1) {
            forest_roots.insert(s.to_string());
        } else {
            SetVector parent{std::vector<std::set<std::string>>(s.chain.begin(),
                                                                 s.chain.end() - 1)};
            forest_es.emplace_back(parent.to_string(), s.to_string());
        }
    }
    out.bag_forest = RootedForest::make(
        Graph::from_edges(std::move(forest_vs), std::move(forest_es)), std::move(forest_roots));
    out.bags = std::move(bags);
    return out;
}

std::vector<std::string> validate_v_decomposition(
    const Structure& a, const RootedForest& host,
    const std::map<std::string, std::set<std::string>>& bags, const GameVector& v) {
    std::vector<std::string> out;
    for (const auto& h : host.graph.vertices())
        if (!bags.count(h)) out.push_back("missing bag for " + h);
    if (!out.empty()) return out;
    for (const auto& [h, bag] : bags) {
        if (!host.graph.s.has_element(h)) out.push_back("bag for foreign host node " + h);
        for (const auto& e : bag)
            if (!a.has_element(e)) out.push_back("foreign element " + e);
    }
    if (!out.empty()) return out;

    if (height(host) >= v.round_count())
        out.push_back("host height " + std::to_string(height(host)) + " not < rounds");

    // every element occurs; every relation tuple sits inside one bag
    for (const auto& e : a.universe) {
        bool found = false;
        for (const auto& [h, bag] : bags)
            if (bag.count(e)) { (void)h; found = true; break; }
        if (!found) out.push_back("element " + e + " in no bag");
    }
    for (const auto& [name, tuples] : a.relations)
        for (const auto& t : tuples) {
            bool found = false;
            for (const auto& [h, bag] : bags) {
                (void)h;
                if (std::all_of(t.begin(), t.end(),
                                [&](const std::string& e) { return bag.count(e) > 0; })) {
                    found = true;
                    break;
                }
            }
            if (!found) out.push_back("tuple of " + name + " not inside any bag");
        }

    // connectivity of occurrence sets
    for (const auto& e : a.universe) {
        std::set<std::string> occurs;
        for (const auto& [h, bag] : bags)
            if (bag.count(e)) occurs.insert(h);
        if (occurs.empty()) continue;
        std::set<std::string> seen{*occurs.begin()};
        std::vector<std::string> queue{*occurs.begin()};
        while (!queue.empty()) {
            auto u = queue.back();
            queue.pop_back();
            for (const auto& w : host.graph.neighbors(u))
                if (occurs.count(w) && !seen.count(w)) {
                    seen.insert(w);
                    queue.push_back(w);
                }
        }
        if (seen != occurs) out.push_back("occurrence set of " + e + " disconnected");
    }

    // level conditions
    const auto depth = host.depths();
    const auto parent = host.parents();
    for (const auto& [h, bag] : bags) {
        const int level = depth.at(h) + 1;  // roots are level 1
        if (level == 1) {
            if (static_cast<int>(bag.size()) > v.rounds[0])
                out.push_back("level-1 bag " + h + " larger than p_1");
        } else {
            const auto& pb = bags.at(parent.at(h));
            for (const auto& e : pb)
                if (!bag.count(e)) out.push_back("bag " + h + " drops parent element " + e);
            std::size_t growth = 0;
            for (const auto& e : bag)
                if (!pb.count(e)) ++growth;
            if (level - 1 >= v.round_count() ||
                static_cast<int>(growth) > v.rounds[level - 1])
                out.push_back("bag " + h + " grows beyond p_" + std::to_string(level));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

PartialHom strategy_to_hom(const Structure& t, const Structure& b, const StrategyTable& w,
                           const VDecomposition& vd) {
    const auto depth = vd.host.depths();
    const auto parent = vd.host.parents();
    // process host nodes by depth then canonically
    std::vector<std::string> order = vd.host.graph.vertices();
    std::stable_sort(order.begin(), order.end(),
                     [&](const std::string& x, const std::string& y) {
                         return depth.at(x) < depth.at(y);
                     });
    std::map<std::string, PartialHom> assigned;
    for (const auto& h : order) {
        const int level = depth.at(h) + 1;
        if (level > static_cast<int>(w.rounds.size()))
            throw std::invalid_argument("strategy_to_hom: host deeper than strategy rounds");
        const auto& bag = vd.bags.at(h);
        const PartialHom* base = nullptr;
        if (parent.at(h) != h) base = &assigned.at(parent.at(h));
        bool placed = false;
        for (const auto& g : w.rounds[level - 1]) {
            if (g.size() != bag.size()) continue;
            bool dom_ok = true;
            for (const auto& [x, y] : g) {
                (void)y;
                if (!bag.count(x)) { dom_ok = false; break; }
            }
            if (!dom_ok) continue;
            if (base) {
                bool extends = true;
                for (const auto& [x, y] : *base)
                    if (g.count(x) == 0 || g.at(x) != y) { extends = false; break; }
                if (!extends) continue;
            }
            assigned[h] = g;
            placed = true;
            break;
        }
        if (!placed)
            throw std::runtime_error("strategy_to_hom: internal invariant violated (no map for bag " +
                                     h + ")");
    }
    PartialHom glued;
    for (const auto& [h, g] : assigned) {
        (void)h;
        for (const auto& [x, y] : g) {
            auto it = glued.find(x);
            if (it != glued.end() && it->second != y)
                throw std::runtime_error("strategy_to_hom: inconsistent glue");
            glued[x] = y;
        }
    }
    for (const auto& e : t.universe)
        if (!glued.count(e))
            throw std::runtime_error("strategy_to_hom: element " + e + " uncovered");
    if (!is_partial_hom(t, b, glued))
        throw std::runtime_error("strategy_to_hom: glued map is not a homomorphism");
    return glued;
}

SolveResult v_game_solves(const Structure& a, const GameVector& v) {
    const auto unfolding = build_unfolding(a, v);
    const auto res = find_hom(a, unfolding.structure);
    if (res.status == SearchStatus::BudgetExceeded)
        throw GuardError("v_game_solves: homomorphism search budget exceeded");
    SolveResult out;
    out.solves = res.status == SearchStatus::Found;
    if (out.solves) out.witness = res.witness;
    return out;
}

VDecomposition extract_v_decomposition(const Structure& a, const GameVector& v) {
    const auto unfolding = build_unfolding(a, v);
    const auto res = find_hom(a, unfolding.structure);
    if (res.status != SearchStatus::Found)
        throw std::invalid_argument("extract_v_decomposition: v-game does not solve HOM(a)");
    const Structure c = core(a);
    VDecomposition out;
    out.host = unfolding.bag_forest;
    for (const auto& [s, bag] : unfolding.bags) {
        std::set<std::string> pulled;
        for (const auto& e : c.universe)
            if (bag.count(res.witness.at(e))) pulled.insert(e);
        out.bags[s] = std::move(pulled);
    }
    return out;
}

std::optional<int> min_pebbles_unary(const Structure& a, int n_max) {
    for (int n = 1; n <= n_max; ++n) {
        if (v_game_solves(a, GameVector::ones(n)).solves) return n;
    }
    return std::nullopt;
}

} // namespace homlab
