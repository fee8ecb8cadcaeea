#include "homlab/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "homlab/json_io.hpp"
#include "homlab/reduce.hpp"

namespace homlab {

namespace {

using nlohmann::json;

void apply_guard_override(std::optional<int> guard) {
    if (guard) {
        default_guards().structure_size = *guard;
        default_guards().graph_size = *guard;
    }
}

void emit(std::ostream& out, const json& j) { out << dump_canonical(j); }

Formula formula_arg(const std::string& inline_text, const std::string& file) {
    if (!inline_text.empty() && !file.empty())
        throw std::invalid_argument("give either --formula or --formula-file, not both");
    if (!inline_text.empty()) return parse_formula(inline_text);
    if (!file.empty()) {
        std::ifstream in(file);
        if (!in) throw std::invalid_argument("cannot open " + file);
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse_formula(ss.str());
    }
    throw std::invalid_argument("--formula or --formula-file required");
}

int run_parsed(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return run_parsed(args, out, err);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0;  // --help
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const GuardError& e) {
        err << "guard error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

namespace {

int run_parsed(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"homlab: graph deconstructions, pebble games, and homomorphism reductions"};
    app.require_subcommand(1);
    std::optional<int> guard;
    app.add_option("--guard", guard, "override the size guards");
    bool as_json = false;
    app.add_flag("--json", as_json, "machine-readable JSON output");

    // hom
    auto* hom_cmd = app.add_subcommand("hom", "search for a homomorphism");
    std::string hom_from, hom_to;
    std::uint64_t budget = default_guards().hom_budget;
    hom_cmd->add_option("--from", hom_from)->required();
    hom_cmd->add_option("--to", hom_to)->required();
    hom_cmd->add_option("--budget", budget);

    // core
    auto* core_cmd = app.add_subcommand("core", "compute the core of a structure");
    std::string core_in;
    bool core_check = false;
    core_cmd->add_option("--in", core_in)->required();
    core_cmd->add_flag("--check", core_check, "only decide whether the input is a core");

    // invariants
    auto* inv_cmd = app.add_subcommand("invariants", "tree depth, treewidth, pathwidth");
    std::string inv_in;
    std::optional<int> stack_dmax, stack_k;
    inv_cmd->add_option("--in", inv_in)->required();
    inv_cmd->add_option("--stack-dmax", stack_dmax, "also report the stack profile up to d");
    inv_cmd->add_option("--stack-k", stack_k, "branching k for the stack profile");

    // gen
    auto* gen_cmd = app.add_subcommand("gen", "generate named graphs");
    std::string gen_kind;
    int gen_n = 1, gen_h = 0, gen_k = 1;
    bool gen_text = false;
    gen_cmd->add_option("--kind", gen_kind, "path|cycle|grid|complete|star|tree")->required();
    gen_cmd->add_option("--n", gen_n);
    gen_cmd->add_option("--h", gen_h);
    gen_cmd->add_option("--k", gen_k);
    gen_cmd->add_flag("--text", gen_text, "emit the text edge format");

    // decon
    auto* decon_cmd = app.add_subcommand("decon", "deconstruction calculus");
    decon_cmd->require_subcommand(1);
    auto* dval = decon_cmd->add_subcommand("validate", "check the per-mode invariants");
    auto* dwidth = decon_cmd->add_subcommand("width", "width in the mode's convention");
    auto* dmake = decon_cmd->add_subcommand("make", "self or grid deconstruction of a graph");
    auto* dcompose = decon_cmd->add_subcommand("compose", "bag-union composition");
    auto* dminor = decon_cmd->add_subcommand("from-minor", "deconstruction from a minor map");
    auto* dbuild = decon_cmd->add_subcommand("build-td", "bounded-height host construction");
    std::string d_in, d_first, d_second, d_kind, d_graph, d_minor_of, d_map, d_tree;
    int d_depth = 0, d_K = 2;
    dval->add_option("--in", d_in)->required();
    dwidth->add_option("--in", d_in)->required();
    dmake->add_option("--kind", d_kind, "self|grid")->required();
    dmake->add_option("--in", d_graph)->required();
    dcompose->add_option("--first", d_first)->required();
    dcompose->add_option("--second", d_second)->required();
    dminor->add_option("--minor", d_minor_of, "graph file of the minor M")->required();
    dminor->add_option("--in", d_graph, "host graph G")->required();
    dminor->add_option("--map", d_map, "JSON file {m: [g,...]}")->required();
    dbuild->add_option("--tree", d_tree, "rooted tree (forest JSON or text with a root line)")
        ->required();
    dbuild->add_option("--d", d_depth)->required();
    dbuild->add_option("--k", d_K)->required();

    // game
    auto* game_cmd = app.add_subcommand("game", "pebble games");
    game_cmd->require_subcommand(1);
    auto* gwins = game_cmd->add_subcommand("wins", "Duplicator winning strategy existence");
    auto* gsolves = game_cmd->add_subcommand("solves", "does the v-game solve HOM(a)?");
    auto* gunfold = game_cmd->add_subcommand("unfold", "the unfolding structure T_v(a)");
    auto* gmin = game_cmd->add_subcommand("min-pebbles", "least n with (1,..,1) solving HOM(a)");
    std::string g_a, g_b, g_in, g_vector;
    int g_max = 6;
    gwins->add_option("--a", g_a)->required();
    gwins->add_option("--b", g_b)->required();
    gwins->add_option("--v", g_vector)->required();
    gsolves->add_option("--in", g_in)->required();
    gsolves->add_option("--v", g_vector)->required();
    gunfold->add_option("--in", g_in)->required();
    gunfold->add_option("--v", g_vector)->required();
    gmin->add_option("--in", g_in)->required();
    gmin->add_option("--max", g_max);

    // reduce
    auto* reduce_cmd = app.add_subcommand("reduce", "instance reductions");
    reduce_cmd->require_subcommand(1);
    auto* rdecon = reduce_cmd->add_subcommand("decon", "deconstruction-driven reduction");
    auto* rdecomp = reduce_cmd->add_subcommand("decomp", "decomposition-driven reduction");
    auto* rproduct = reduce_cmd->add_subcommand("product", "product reduction for cores");
    auto* rcolor = reduce_cmd->add_subcommand("color", "full-color expansion");
    auto* rgraph = reduce_cmd->add_subcommand("graph", "graph(a)* instances to a* instances");
    auto* rincidence = reduce_cmd->add_subcommand("incidence", "incidence-graph reduction");
    auto* rdpp = reduce_cmd->add_subcommand("dpp", "DPP sentence to a homomorphism instance");
    auto* rmc = reduce_cmd->add_subcommand("mc", "existential sentence pipeline");
    std::string r_decon, r_a, r_b, r_formula, r_formula_file;
    bool with_trace = false;
    reduce_cmd->add_flag("--trace", with_trace, "include the construction trace");
    rdecon->add_option("--decon", r_decon)->required();
    rdecon->add_option("--b", r_b)->required();
    rdecomp->add_option("--a", r_a)->required();
    rdecomp->add_option("--decon", r_decon)->required();
    rdecomp->add_option("--b", r_b)->required();
    rproduct->add_option("--a", r_a)->required();
    rproduct->add_option("--b", r_b)->required();
    rcolor->add_option("--a", r_a)->required();
    rcolor->add_option("--b", r_b)->required();
    rgraph->add_option("--a", r_a)->required();
    rgraph->add_option("--b", r_b)->required();
    rincidence->add_option("--a", r_a)->required();
    rincidence->add_option("--b", r_b)->required();
    rdpp->add_option("--b", r_b)->required();
    rdpp->add_option("--formula", r_formula);
    rdpp->add_option("--formula-file", r_formula_file);
    rmc->add_option("--b", r_b)->required();
    rmc->add_option("--formula", r_formula);
    rmc->add_option("--formula-file", r_formula_file);

    // mc
    auto* mc_cmd = app.add_subcommand("mc", "brute-force model checking");
    std::string mc_in, mc_formula, mc_formula_file;
    mc_cmd->add_option("--in", mc_in)->required();
    mc_cmd->add_option("--formula", mc_formula);
    mc_cmd->add_option("--formula-file", mc_formula_file);

    // classify
    auto* classify_cmd = app.add_subcommand("classify", "hierarchy level from asserted facts");
    std::string facts_in;
    classify_cmd->add_option("--facts", facts_in)->required();

    std::vector<const char*> argv;
    argv.push_back("homlab");
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
    apply_guard_override(guard);

    if (*hom_cmd) {
        const auto a = load_structure(hom_from);
        const auto b = load_structure(hom_to);
        const auto res = find_hom(a, b, budget);
        if (res.status == SearchStatus::BudgetExceeded) {
            err << "budget exceeded after " << res.steps << " steps\n";
            return 2;
        }
        if (res.status == SearchStatus::None) {
            if (as_json)
                emit(out, json{{"homomorphism", nullptr}});
            else
                out << "no homomorphism\n";
            return 1;
        }
        if (as_json) {
            json w = json::object();
            for (const auto& [x, y] : res.witness) w[x] = y;
            emit(out, json{{"homomorphism", std::move(w)}});
        } else {
            for (const auto& [x, y] : res.witness) out << x << " -> " << y << "\n";
        }
        return 0;
    }

    if (*core_cmd) {
        const auto a = load_structure(core_in);
        if (core_check) {
            const bool ok = is_core(a);
            out << (ok ? "core\n" : "not a core\n");
            return ok ? 0 : 1;
        }
        emit(out, structure_to_json(core(a)));
        return 0;
    }

    if (*inv_cmd) {
        const auto g = load_graph(inv_in);
        const auto td = tree_depth(g);
        json j{{"tree_depth", td.depth},
               {"treewidth", treewidth(g)},
               {"pathwidth", pathwidth(g)}};
        if (stack_dmax) {
            if (!stack_k) throw std::invalid_argument("--stack-k required with --stack-dmax");
            j["stack_profile"] = stack_profile(g, *stack_dmax, *stack_k);
        }
        if (as_json) {
            j["tree_depth_witness"] = forest_to_json(td.witness);
            emit(out, j);
        } else {
            for (const auto& [key, val] : j.items()) out << key << ": " << val << "\n";
        }
        return 0;
    }

    if (*gen_cmd) {
        if (gen_kind == "tree") {
            const auto t = gen_tree(gen_h, gen_k);
            if (gen_text) {
                out << graph_to_text(t.graph) << "root r\n";
            } else {
                emit(out, forest_to_json(t));
            }
            return 0;
        }
        Graph g = [&] {
            if (gen_kind == "path") return gen_path(gen_n);
            if (gen_kind == "cycle") return gen_cycle(gen_n);
            if (gen_kind == "grid") return gen_grid(gen_n);
            if (gen_kind == "complete") return gen_complete(gen_n);
            if (gen_kind == "star") return gen_star(gen_k);
            throw std::invalid_argument("unknown kind " + gen_kind);
        }();
        if (gen_text)
            out << graph_to_text(g);
        else
            emit(out, structure_to_json(g.s));
        return 0;
    }

    if (*decon_cmd) {
        if (*dval) {
            const auto d = decon_from_json(load_json(d_in));
            const auto violations = validate(d);
            if (violations.empty()) {
                out << "ok\n";
                return 0;
            }
            for (const auto& v : violations) out << v << "\n";
            return 1;
        }
        if (*dwidth) {
            const auto d = decon_from_json(load_json(d_in));
            out << width(d) << "\n";
            return 0;
        }
        if (*dmake) {
            const auto g = load_graph(d_graph);
            if (d_kind == "self")
                emit(out, decon_to_json(self_deconstruction(g)));
            else if (d_kind == "grid")
                emit(out, decon_to_json(grid_deconstruction(g)));
            else
                throw std::invalid_argument("unknown kind " + d_kind);
            return 0;
        }
        if (*dcompose) {
            const auto d1 = decon_from_json(load_json(d_first));
            const auto d2 = decon_from_json(load_json(d_second));
            emit(out, decon_to_json(compose(d1, d2)));
            return 0;
        }
        if (*dminor) {
            const auto m = load_graph(d_minor_of);
            const auto g = load_graph(d_graph);
            MinorMap mu;
            const json map_json = load_json(d_map);
            for (const auto& [v, set] : map_json.items()) {
                auto list = set.get<std::vector<std::string>>();
                mu[v] = {list.begin(), list.end()};
            }
            emit(out, decon_to_json(from_minor_map(m, g, mu)));
            return 0;
        }
        if (*dbuild) {
            std::ifstream in(d_tree);
            if (!in) throw std::invalid_argument("cannot open " + d_tree);
            std::ostringstream ss;
            ss << in.rdbuf();
            const std::string text = ss.str();
            const auto first = text.find_first_not_of(" \t\r\n");
            RootedForest t = (first != std::string::npos && text[first] == '{')
                                 ? forest_from_json(json::parse(text))
                                 : forest_from_text(text);
            const auto built = build_td_deconstruction(t, d_depth, d_K);
            json j{{"host", forest_to_json(built.host)},
                   {"deconstruction", decon_to_json(built.decon)},
                   {"width", built.width}};
            emit(out, j);
            return 0;
        }
    }

    if (*game_cmd) {
        if (*gwins) {
            const auto a = load_structure(g_a);
            const auto b = load_structure(g_b);
            const auto v = GameVector::parse(g_vector);
            const auto res = duplicator_wins(a, b, v);
            if (as_json) {
                json j{{"wins", res.wins}};
                if (res.wins)
                    j["strategy"] = strategy_to_json(res.strategy);
                else
                    j["refutation_round"] = *res.refutation_round;
                emit(out, j);
            } else if (res.wins) {
                out << "duplicator wins\n";
            } else {
                out << "spoiler wins (refutation round " << *res.refutation_round << ")\n";
            }
            return res.wins ? 0 : 1;
        }
        if (*gsolves) {
            const auto a = load_structure(g_in);
            const auto v = GameVector::parse(g_vector);
            const auto res = v_game_solves(a, v);
            if (as_json) {
                json j{{"solves", res.solves}};
                if (res.solves) {
                    json w = json::object();
                    for (const auto& [x, y] : res.witness) w[x] = y;
                    j["witness"] = std::move(w);
                }
                emit(out, j);
            } else {
                out << (res.solves ? "solves\n" : "does not solve\n");
            }
            return res.solves ? 0 : 1;
        }
        if (*gunfold) {
            const auto a = load_structure(g_in);
            const auto v = GameVector::parse(g_vector);
            const auto unf = build_unfolding(a, v);
            if (as_json) {
                json bags = json::object();
                for (const auto& [s, bag] : unf.bags)
                    bags[s] = std::vector<std::string>(bag.begin(), bag.end());
                emit(out, json{{"structure", structure_to_json(unf.structure)},
                               {"bag_forest", forest_to_json(unf.bag_forest)},
                               {"bags", std::move(bags)}});
            } else {
                emit(out, structure_to_json(unf.structure));
            }
            return 0;
        }
        if (*gmin) {
            const auto a = load_structure(g_in);
            const auto n = min_pebbles_unary(a, g_max);
            if (!n) {
                out << "none within " << g_max << "\n";
                return 1;
            }
            out << *n << "\n";
            return 0;
        }
    }

    if (*reduce_cmd) {
        auto emit_reduction = [&](const Structure& s, const json& trace) {
            if (with_trace)
                emit(out, json{{"output", structure_to_json(s)}, {"trace", trace}});
            else
                emit(out, structure_to_json(s));
        };
        if (*rdecon) {
            const auto d = decon_from_json(load_json(r_decon));
            const auto b = load_structure(r_b);
            const auto res = decon_hom_reduction(d.subject, d, b);
            emit_reduction(res.output, res.trace);
            return 0;
        }
        if (*rdecomp) {
            const auto a = load_structure(r_a);
            const auto d = decon_from_json(load_json(r_decon));
            const auto b = load_structure(r_b);
            const auto res = decomp_hom_reduction(a, d, b);
            if (with_trace)
                emit(out, json{{"output", structure_to_json(res.output)},
                               {"pruned_host", structure_to_json(res.pruned_host.s)},
                               {"trace", res.trace}});
            else
                emit(out, structure_to_json(res.output));
            return 0;
        }
        if (*rproduct) {
            const auto a = load_structure(r_a);
            const auto b = load_structure(r_b);
            const auto res = product_reduction(a, b);
            if (!res) {
                out << "undefined (no color-consistent pair; no homomorphism exists)\n";
                return 1;
            }
            emit_reduction(res->output, res->trace);
            return 0;
        }
        if (*rcolor) {
            const auto a = load_structure(r_a);
            const auto b = load_structure(r_b);
            const auto res = color_trivialize(a, b);
            emit_reduction(res.output, res.trace);
            return 0;
        }
        if (*rgraph) {
            const auto a = load_structure(r_a);
            const auto b = load_structure(r_b);
            const auto res = graph_reduction(a, b);
            emit_reduction(res.output, res.trace);
            return 0;
        }
        if (*rincidence) {
            const auto a = load_structure(r_a);
            const auto b = load_structure(r_b);
            const auto res = incidence_reduction(a, b);
            emit_reduction(res.output, res.trace);
            return 0;
        }
        if (*rdpp || *rmc) {
            const auto b = load_structure(r_b);
            const Formula f = formula_arg(r_formula, r_formula_file);
            DppHomResult res;
            if (*rdpp) {
                std::vector<Formula> disjuncts;
                if (f->kind == FormulaKind::Or)
                    disjuncts = f->children;
                else
                    disjuncts = {f};
                res = dpp_to_hom(b, disjuncts);
            } else {
                res = mc_to_hom_pipeline(b, f);
            }
            json j{{"forest", forest_to_json(res.forest)},
                   {"output", structure_to_json(res.output)}};
            if (with_trace) j["trace"] = res.trace;
            emit(out, j);
            return 0;
        }
    }

    if (*mc_cmd) {
        const auto b = load_structure(mc_in);
        const Formula f = formula_arg(mc_formula, mc_formula_file);
        const bool holds = model_check(b, f);
        out << (holds ? "true\n" : "false\n");
        return holds ? 0 : 1;
    }

    if (*classify_cmd) {
        const auto facts = facts_from_json(load_json(facts_in));
        out << hierarchy_level(facts).to_string() << "\n";
        return 0;
    }

    err << "no subcommand\n";
    return 2;
}

} // namespace

} // namespace homlab
