#include "homlab/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdlib>
#include <map>
#include <set>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "homlab/guards.hpp"
#include "homlab/relstruct.hpp"

namespace homlab::kernels {

namespace {

bool& parallel_flag() {
    static bool flag = [] {
#ifdef _OPENMP
        if (const char* env = std::getenv("HOMLAB_SERIAL"))
            if (env[0] == '1') return false;
        return true;
#else
        return false;
#endif
    }();
    return flag;
}

} // namespace

bool parallel_enabled() { return parallel_flag(); }
void set_parallel(bool on) {
#ifdef _OPENMP
    parallel_flag() = on;
#else
    parallel_flag() = false;
    (void)on;
#endif
}

int Indexed::id_of(const std::string& name) const {
    auto it = std::lower_bound(names.begin(), names.end(), name);
    if (it == names.end() || *it != name)
        throw std::invalid_argument("unknown element " + name);
    return static_cast<int>(it - names.begin());
}

Indexed index_structure(const Structure& s) {
    Indexed x;
    x.n = static_cast<int>(s.universe.size());
    x.names = s.universe;
    for (const auto& [name, tuples] : s.relations) {
        x.symbols.push_back(name);
        x.arities.push_back(s.vocabulary.arity(name));
        std::vector<std::vector<int>> list;
        list.reserve(tuples.size());
        for (const auto& t : tuples) {
            std::vector<int> tt;
            tt.reserve(t.size());
            for (const auto& e : t) tt.push_back(x.id_of(e));
            list.push_back(std::move(tt));
        }
        x.tuples.push_back(std::move(list));
    }
    return x;
}

namespace {

// Decodes a flat index into a tuple over {0..n-1}^k, most significant first.
void decode(std::uint64_t idx, int n, int k, std::vector<int>& out) {
    out.resize(k);
    for (int i = k - 1; i >= 0; --i) {
        out[i] = static_cast<int>(idx % n);
        idx /= n;
    }
}

std::uint64_t pow_u64(int base, int exp) {
    std::uint64_t r = 1;
    for (int i = 0; i < exp; ++i) {
        if (r > (1ull << 62) / static_cast<std::uint64_t>(base))
            return 1ull << 62;
        r *= static_cast<std::uint64_t>(base);
    }
    return r;
}

} // namespace

PhContext::PhContext(const Structure& sa, const Structure& sb)
    : a(index_structure(sa)), b(index_structure(sb)) {
    b_sets.resize(b.symbols.size());
    for (int si = 0; si < static_cast<int>(b.symbols.size()); ++si)
        b_sets[si] = {b.tuples[si].begin(), b.tuples[si].end()};
}

bool PhContext::pair_ok(const std::vector<int>& gs, const std::vector<int>& bs) const {
    std::vector<int> img(a.n, -1);
    for (std::size_t i = 0; i < gs.size(); ++i) {
        int& slot = img[gs[i]];
        if (slot >= 0 && slot != bs[i]) return false;
        slot = bs[i];
    }
    // symbol lists are aligned between similar structures
    for (int si = 0; si < static_cast<int>(a.symbols.size()); ++si) {
        for (const auto& t : a.tuples[si]) {
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
            if (covered && !b_sets[si].count(image)) return false;
        }
    }
    return true;
}

bool PhContext::union_ok(const PhEntry& x, const PhEntry& y) const {
    std::vector<int> gs = x.first, bs = x.second;
    gs.insert(gs.end(), y.first.begin(), y.first.end());
    bs.insert(bs.end(), y.second.begin(), y.second.end());
    return pair_ok(gs, bs);
}

std::vector<PhEntry> ph_table_serial(const PhContext& ctx, int len, std::uint64_t guard) {
    const std::uint64_t ga = pow_u64(ctx.a.n, len);
    const std::uint64_t gb = pow_u64(ctx.b.n, len);
    ensure(ga <= guard && gb <= guard && ga * gb <= guard,
           "ph_table: index space exceeds guard " + std::to_string(guard));
    std::vector<PhEntry> out;
    std::vector<int> gs, bs;
    for (std::uint64_t i = 0; i < ga; ++i) {
        decode(i, ctx.a.n, len, gs);
        for (std::uint64_t j = 0; j < gb; ++j) {
            decode(j, ctx.b.n, len, bs);
            if (ctx.pair_ok(gs, bs)) out.emplace_back(gs, bs);
        }
    }
    return out;  // row-major scan yields sorted entries
}

std::vector<PhEntry> ph_table_parallel(const PhContext& ctx, int len, std::uint64_t guard) {
#ifndef _OPENMP
    return ph_table_serial(ctx, len, guard);
#else
    const std::uint64_t ga = pow_u64(ctx.a.n, len);
    const std::uint64_t gb = pow_u64(ctx.b.n, len);
    ensure(ga <= guard && gb <= guard && ga * gb <= guard,
           "ph_table: index space exceeds guard " + std::to_string(guard));
    std::vector<std::vector<PhEntry>> buckets;
#pragma omp parallel
    {
#pragma omp single
        buckets.resize(omp_get_num_threads());
        auto& mine = buckets[omp_get_thread_num()];
        std::vector<int> gs, bs;
#pragma omp for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(ga); ++i) {
            decode(static_cast<std::uint64_t>(i), ctx.a.n, len, gs);
            for (std::uint64_t j = 0; j < gb; ++j) {
                decode(j, ctx.b.n, len, bs);
                if (ctx.pair_ok(gs, bs)) mine.emplace_back(gs, bs);
            }
        }
    }
    std::vector<PhEntry> out;
    for (auto& bkt : buckets) out.insert(out.end(), bkt.begin(), bkt.end());
    std::sort(out.begin(), out.end());
    return out;
#endif
}

std::vector<PhEntry> ph_table(const PhContext& ctx, int len, std::uint64_t guard) {
    return parallel_enabled() ? ph_table_parallel(ctx, len, guard)
                              : ph_table_serial(ctx, len, guard);
}

std::vector<std::pair<int, int>> ph_edges_serial(const PhContext& ctx,
                                                 const std::vector<PhEntry>& entries) {
    std::vector<std::pair<int, int>> out;
    const int m = static_cast<int>(entries.size());
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (ctx.union_ok(entries[i], entries[j])) out.emplace_back(i, j);
    return out;
}

std::vector<std::pair<int, int>> ph_edges_parallel(const PhContext& ctx,
                                                   const std::vector<PhEntry>& entries) {
#ifndef _OPENMP
    return ph_edges_serial(ctx, entries);
#else
    const int m = static_cast<int>(entries.size());
    std::vector<std::vector<std::pair<int, int>>> rows(m);
#pragma omp parallel for schedule(dynamic, 4)
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (ctx.union_ok(entries[i], entries[j])) rows[i].emplace_back(i, j);
    std::vector<std::pair<int, int>> out;
    for (auto& r : rows) out.insert(out.end(), r.begin(), r.end());
    return out;
#endif
}

std::vector<std::pair<int, int>> ph_edges(const PhContext& ctx,
                                          const std::vector<PhEntry>& entries) {
    return parallel_enabled() ? ph_edges_parallel(ctx, entries) : ph_edges_serial(ctx, entries);
}

std::vector<std::vector<int>> scan_satisfying_serial(
    int n, int k, const std::function<bool(const std::vector<int>&)>& pred,
    std::uint64_t guard) {
    const std::uint64_t total = pow_u64(n, k);
    ensure(total <= guard, "scan: index space " + std::to_string(total) + " exceeds guard " +
                               std::to_string(guard));
    std::vector<std::vector<int>> out;
    std::vector<int> t;
    for (std::uint64_t i = 0; i < total; ++i) {
        decode(i, n, k, t);
        if (pred(t)) out.push_back(t);
    }
    return out;
}

std::vector<std::vector<int>> scan_satisfying_parallel(
    int n, int k, const std::function<bool(const std::vector<int>&)>& pred,
    std::uint64_t guard) {
#ifndef _OPENMP
    return scan_satisfying_serial(n, k, pred, guard);
#else
    const std::uint64_t total = pow_u64(n, k);
    ensure(total <= guard, "scan: index space " + std::to_string(total) + " exceeds guard " +
                               std::to_string(guard));
    std::vector<std::vector<std::vector<int>>> buckets;
#pragma omp parallel
    {
#pragma omp single
        buckets.resize(omp_get_num_threads());
        auto& mine = buckets[omp_get_thread_num()];
        std::vector<int> t;
#pragma omp for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(total); ++i) {
            decode(static_cast<std::uint64_t>(i), n, k, t);
            if (pred(t)) mine.push_back(t);
        }
    }
    std::vector<std::vector<int>> out;
    for (auto& bkt : buckets) out.insert(out.end(), bkt.begin(), bkt.end());
    std::sort(out.begin(), out.end());
    return out;
#endif
}

std::vector<std::vector<int>> scan_satisfying(
    int n, int k, const std::function<bool(const std::vector<int>&)>& pred,
    std::uint64_t guard) {
    return parallel_enabled() ? scan_satisfying_parallel(n, k, pred, guard)
                              : scan_satisfying_serial(n, k, pred, guard);
}

namespace {

// Vertices of the component of v within mask (v need not be in mask).
std::uint32_t component_through(const std::vector<std::uint32_t>& adj, std::uint32_t mask,
                                int v) {
    std::uint32_t comp = 1u << v;
    std::uint32_t frontier = comp;
    const std::uint32_t allowed = mask | (1u << v);
    while (frontier) {
        std::uint32_t next = 0;
        std::uint32_t f = frontier;
        while (f) {
            int u = std::countr_zero(f);
            f &= f - 1;
            next |= adj[u] & allowed & ~comp;
        }
        comp |= next;
        frontier = next;
    }
    return comp;
}

int q_cost(const std::vector<std::uint32_t>& adj, std::uint32_t s, int v) {
    const std::uint32_t comp = component_through(adj, s, v);
    std::uint32_t reach = 0;
    std::uint32_t c = comp;
    while (c) {
        int u = std::countr_zero(c);
        c &= c - 1;
        reach |= adj[u];
    }
    reach &= ~(s | (1u << v));
    return std::popcount(reach);
}

int boundary(const std::vector<std::uint32_t>& adj, std::uint32_t s, std::uint32_t all) {
    int count = 0;
    std::uint32_t c = s;
    while (c) {
        int u = std::countr_zero(c);
        c &= c - 1;
        if (adj[u] & all & ~s) ++count;
    }
    return count;
}

template <typename Cost>
int subset_dp(const std::vector<std::uint32_t>& adj, Cost cost, bool parallel) {
    const int n = static_cast<int>(adj.size());
    if (n == 0) throw std::invalid_argument("subset_dp: empty graph");
    const std::uint32_t full = n == 32 ? 0xffffffffu : ((1u << n) - 1);
    std::vector<int> f(static_cast<std::size_t>(full) + 1, 0);
    // layer by popcount so all dependencies are ready
    std::vector<std::vector<std::uint32_t>> layers(n + 1);
    for (std::uint32_t s = 1; s <= full && s != 0; ++s) layers[std::popcount(s)].push_back(s);
    for (int layer = 1; layer <= n; ++layer) {
        auto& masks = layers[layer];
        const auto body = [&](std::size_t i) {
            const std::uint32_t s = masks[i];
            int best = INT32_MAX;
            std::uint32_t c = s;
            while (c) {
                int v = std::countr_zero(c);
                c &= c - 1;
                const std::uint32_t rest = s & ~(1u << v);
                const int val = std::max(f[rest], cost(rest, v, s));
                best = std::min(best, val);
            }
            f[s] = best;
        };
        if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
            for (std::int64_t i = 0; i < static_cast<std::int64_t>(masks.size()); ++i)
                body(static_cast<std::size_t>(i));
#else
            for (std::size_t i = 0; i < masks.size(); ++i) body(i);
#endif
        } else {
            for (std::size_t i = 0; i < masks.size(); ++i) body(i);
        }
    }
    return f[full];
}

} // namespace

int treewidth_dp_serial(const std::vector<std::uint32_t>& adj) {
    return subset_dp(
        adj, [&](std::uint32_t rest, int v, std::uint32_t) { return q_cost(adj, rest, v); },
        false);
}

int treewidth_dp_parallel(const std::vector<std::uint32_t>& adj) {
    return subset_dp(
        adj, [&](std::uint32_t rest, int v, std::uint32_t) { return q_cost(adj, rest, v); },
        true);
}

int treewidth_dp(const std::vector<std::uint32_t>& adj) {
    return parallel_enabled() ? treewidth_dp_parallel(adj) : treewidth_dp_serial(adj);
}

int pathwidth_dp_serial(const std::vector<std::uint32_t>& adj) {
    const std::uint32_t full =
        adj.size() == 32 ? 0xffffffffu : ((1u << adj.size()) - 1);
    return subset_dp(
        adj, [&](std::uint32_t, int, std::uint32_t s) { return boundary(adj, s, full); },
        false);
}

int pathwidth_dp_parallel(const std::vector<std::uint32_t>& adj) {
    const std::uint32_t full =
        adj.size() == 32 ? 0xffffffffu : ((1u << adj.size()) - 1);
    return subset_dp(
        adj, [&](std::uint32_t, int, std::uint32_t s) { return boundary(adj, s, full); },
        true);
}

int pathwidth_dp(const std::vector<std::uint32_t>& adj) {
    return parallel_enabled() ? pathwidth_dp_parallel(adj) : pathwidth_dp_serial(adj);
}

} // namespace homlab::kernels
