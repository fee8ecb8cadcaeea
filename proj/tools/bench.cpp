// Benchmark comparing the serial reference kernels against the
// OpenMP-parallel ones on synthetic instances.

#include <chrono>
#include <cstdio>
#include <random>

#include "homlab/graph.hpp"
#include "homlab/kernels.hpp"
#include "homlab/relstruct.hpp"

using namespace homlab;

namespace {

double seconds(const std::function<void()>& body) {
    const auto start = std::chrono::steady_clock::now();
    body();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(stop - start).count();
}

std::vector<std::uint32_t> random_adjacency(int n, double density, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::uint32_t> adj(n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double coin =
                static_cast<double>(rng() >> 11) / static_cast<double>(1ull << 53);
            if (coin < density) {
                adj[i] |= 1u << j;
                adj[j] |= 1u << i;
            }
        }
    return adj;
}

Structure random_colored_graph(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::string> universe;
    for (int i = 0; i < n; ++i) universe.push_back("u" + std::to_string(i));
    std::set<Tuple> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng() % 2) {
                edges.insert({universe[i], universe[j]});
                edges.insert({universe[j], universe[i]});
            }
    return Structure::make(Vocabulary::make({{"E", 2}}), universe, {{"E", edges}});
}

} // namespace

int main() {
    std::printf("%-28s %10s %10s %8s\n", "kernel", "serial[s]", "openmp[s]", "speedup");

    {
        const int n = 20;
        auto adj = random_adjacency(n, 0.3, 7);
        int tw_s = 0, tw_p = 0;
        const double ts = seconds([&] { tw_s = kernels::treewidth_dp_serial(adj); });
        const double tp = seconds([&] { tw_p = kernels::treewidth_dp_parallel(adj); });
        if (tw_s != tw_p) std::printf("treewidth mismatch!\n");
        std::printf("%-28s %10.3f %10.3f %7.2fx\n", "treewidth subset DP (n=20)", ts, tp,
                    ts / tp);
    }
    {
        const int n = 20;
        auto adj = random_adjacency(n, 0.3, 11);
        int pw_s = 0, pw_p = 0;
        const double ts = seconds([&] { pw_s = kernels::pathwidth_dp_serial(adj); });
        const double tp = seconds([&] { pw_p = kernels::pathwidth_dp_parallel(adj); });
        if (pw_s != pw_p) std::printf("pathwidth mismatch!\n");
        std::printf("%-28s %10.3f %10.3f %7.2fx\n", "pathwidth subset DP (n=20)", ts, tp,
                    ts / tp);
    }
    {
        const auto a = star_expand(random_colored_graph(6, 3));
        const auto b = star_expand(random_colored_graph(6, 4));
        kernels::PhContext ctx(a, b);
        std::size_t s1 = 0, s2 = 0;
        const double ts =
            seconds([&] { s1 = kernels::ph_table_serial(ctx, 3, 1u << 30).size(); });
        const double tp =
            seconds([&] { s2 = kernels::ph_table_parallel(ctx, 3, 1u << 30).size(); });
        if (s1 != s2) std::printf("ph_table mismatch!\n");
        std::printf("%-28s %10.3f %10.3f %7.2fx\n", "PH table (w=3, n=6)", ts, tp, ts / tp);
    }
    {
        const auto a = star_expand(random_colored_graph(5, 5));
        const auto b = star_expand(random_colored_graph(5, 6));
        kernels::PhContext ctx(a, b);
        const auto entries = kernels::ph_table_serial(ctx, 2, 1u << 30);
        std::size_t s1 = 0, s2 = 0;
        const double ts = seconds([&] { s1 = kernels::ph_edges_serial(ctx, entries).size(); });
        const double tp = seconds([&] { s2 = kernels::ph_edges_parallel(ctx, entries).size(); });
        if (s1 != s2) std::printf("ph_edges mismatch!\n");
        std::printf("%-28s %10.3f %10.3f %7.2fx\n", "PH edge matrix (w=2, n=5)", ts, tp,
                    ts / tp);
    }
    return 0;
}
