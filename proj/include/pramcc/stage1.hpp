#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "context.hpp"
#include "forest.hpp"
#include "primitives.hpp"
#include "types.hpp"

namespace pramcc {

namespace detail {

inline constexpr std::uint64_t kMatchingRounds = 9;

/// Cost of a matching call on an empty edge set: its nine steps touch nothing.
inline void charge_idle_matchings(RunContext& ctx, std::uint64_t calls) {
    auto s = ctx.ledger.scope("stage1/matching");
    ctx.ledger.charge(kMatchingRounds * calls, 0);
}

inline std::vector<vertex_t> distinct(RunContext& ctx, const std::vector<vertex_t>& xs, vertex_t n) {
    auto idx = ctx.local_index(n);
    for (vertex_t v : xs) idx->add(v);
    return idx->members();
}

inline std::vector<vertex_t> endpoints(RunContext& ctx, const EdgeList& edges, vertex_t n) {
    auto idx = ctx.local_index(n);
    for (const auto& e : edges) {
        idx->add(e.u);
        idx->add(e.v);
    }
    return idx->members();
}

}  // namespace detail

/// One constant-shrink round. Only the forest changes; `edges` is read.
inline void matching(RunContext& ctx, const EdgeList& edges, ParentForest& f) {
    auto scope = ctx.ledger.scope("stage1/matching");
    auto idx = ctx.local_index(f.n());
    for (const auto& e : edges) {
        idx->add(e.u);
        idx->add(e.v);
    }
    const std::size_t nv = idx->size();

    // Steps 1-2: keep root-root non-loop edges, orient large end -> small end.
    struct Arc {
        std::uint32_t t, h;  // local slots; tail has the larger vertex id
    };
    std::vector<Arc> d0;
    for (const auto& e : edges) {
        if (e.u == e.v || !f.is_root(e.u) || !f.is_root(e.v)) continue;
        vertex_t a = std::max(e.u, e.v), b = std::min(e.u, e.v);
        d0.push_back(Arc{idx->find(a), idx->find(b)});
    }
    ctx.ledger.charge(1, edges.size());
    ctx.ledger.charge(1, d0.size());

    constexpr std::uint32_t none = ~std::uint32_t{0};
    auto vert = [&](std::uint32_t s) { return idx->member(s); };

    // Step 3: each vertex keeps one arbitrary out-arc (copies equal to it survive).
    std::vector<std::uint32_t> out_head(nv, none);
    {
        Arbiter arb = ctx.arbiter(nv);
        for (std::size_t i = 0; i < d0.size(); ++i) arb.write(d0[i].t, d0[i].h, i);
        for (std::size_t s = 0; s < nv; ++s)
            if (arb.written(s)) out_head[s] = static_cast<std::uint32_t>(arb.value(s));
    }
    std::vector<Arc> d;
    d.reserve(d0.size());
    for (const auto& a : d0)
        if (out_head[a.t] == a.h) d.push_back(a);
    ctx.ledger.charge(1, d0.size());

    // Step 4: vertices isolated by step 3 hook under an arbitrary in-neighbour from before step 3.
    std::vector<std::uint8_t> had_arc(nv, 0), has_arc(nv, 0);
    for (const auto& a : d0) had_arc[a.t] = had_arc[a.h] = 1;
    for (const auto& a : d) has_arc[a.t] = has_arc[a.h] = 1;
    {
        Arbiter arb = ctx.arbiter(nv);
        for (std::size_t i = 0; i < d0.size(); ++i) {
            std::uint32_t h = d0[i].h;
            if (had_arc[h] && !has_arc[h]) arb.write(h, d0[i].t, i);
        }
        for (std::uint32_t s = 0; s < nv; ++s)
            if (had_arc[s] && !has_arc[s] && arb.written(s)) f.link(vert(s), vert(static_cast<std::uint32_t>(arb.value(s))));
    }
    ctx.ledger.charge(1, d0.size() + nv);

    // Distinct in-neighbour test: more than one distinct tail per head.
    auto multi_in = [&](const std::vector<Arc>& arcs) {
        std::vector<std::uint32_t> first(nv, none);
        std::vector<std::uint8_t> multi(nv, 0);
        for (const auto& a : arcs) {
            if (first[a.h] == none)
                first[a.h] = a.t;
            else if (first[a.h] != a.t)
                multi[a.h] = 1;
        }
        return multi;
    };

    // Step 5: a vertex with several in-neighbours drops its out-arcs.
    {
        auto multi = multi_in(d);
        std::size_t out = 0;
        for (const auto& a : d)
            if (!multi[a.t]) d[out++] = a;
        d.resize(out);
    }
    ctx.ledger.charge(1, d.size() + nv);

    // Step 6: every in-neighbour of such a vertex hooks under it and leaves D.
    {
        auto multi = multi_in(d);
        std::vector<std::uint8_t> gone(nv, 0);
        for (const auto& a : d) {
            if (multi[a.h] && !gone[a.t]) {
                gone[a.t] = 1;
                f.link(vert(a.t), vert(a.h));
            }
        }
        std::size_t out = 0;
        for (const auto& a : d)
            if (!gone[a.t] && !gone[a.h]) d[out++] = a;
        d.resize(out);
    }
    ctx.ledger.charge(1, d.size() + nv);

    // Step 7: coin-flip arc deletion.
    {
        Rng rng = ctx.stream("stage1/matching");
        const double q = ctx.profile.matching_delete_prob;
        std::size_t out = 0;
        for (const auto& a : d)
            if (!rng.bernoulli(q)) d[out++] = a;
        d.resize(out);
    }
    ctx.ledger.charge(1, d.size());

    // Step 8: an isolated arc (u, v) hooks v under u. Each arc writes its content
    // into both end cells; a vertex seeing two contents is marked.
    {
        std::vector<std::uint64_t> cell(nv, 0);
        std::vector<std::uint8_t> written(nv, 0), marked(nv, 0);
        auto content = [](const Arc& a) { return (static_cast<std::uint64_t>(a.t) << 32) | a.h; };
        for (const auto& a : d) {
            for (std::uint32_t x : {a.t, a.h}) {
                if (!written[x]) {
                    written[x] = 1;
                    cell[x] = content(a);
                } else if (cell[x] != content(a)) {
                    marked[x] = 1;
                }
            }
        }
        for (const auto& a : d)
            if (!marked[a.t] && !marked[a.h]) f.link(vert(a.h), vert(a.t));
    }
    ctx.ledger.charge(1, d.size());

    // Step 9.
    shortcut(ctx, idx->members(), f);
}

/// Rounds of matching on a private copy of `edges`, then reverse-order
/// shortcuts of the vertices updated in each round. Returns V(E) of the copy.
inline std::vector<vertex_t> filter(RunContext& ctx, EdgeList edges, int k, ParentForest& f) {
    auto scope = ctx.ledger.scope("stage1/filter");
    Rng rng = ctx.stream("stage1/filter");
    struct RoundLog {
        int round;
        std::vector<vertex_t> updated;
    };
    std::vector<RoundLog> logs;
    for (int j = 0; j <= k; ++j) {
        if (edges.empty()) {
            std::uint64_t idle = static_cast<std::uint64_t>(k - j + 1);
            detail::charge_idle_matchings(ctx, idle);
            ctx.ledger.charge(2 * idle, 0);
            break;
        }
        std::vector<vertex_t> log;
        {
            UpdateLog guard(f, log);
            matching(ctx, edges, f);
        }
        alter_in_place(ctx, edges, f, false);
        const double q = ctx.profile.filter_delete_prob;
        std::size_t out = 0;
        for (const auto& e : edges)
            if (!rng.bernoulli(q)) edges[out++] = e;
        ctx.ledger.charge(1, edges.size());
        edges.resize(out);
        if (!log.empty()) logs.push_back(RoundLog{j, detail::distinct(ctx, log, f.n())});
    }
    // Rounds with no updates cost one idle round each.
    std::uint64_t idle_rounds = static_cast<std::uint64_t>(k + 1) - logs.size();
    ctx.ledger.charge(idle_rounds, 0);
    for (auto it = logs.rbegin(); it != logs.rend(); ++it) shortcut(ctx, it->updated, f);
    auto vs = detail::endpoints(ctx, edges, f.n());
    ctx.ledger.charge(1, edges.size());
    return vs;
}

/// Makes the vertices of `vp` roots of their trees, then shortcuts `universe`
/// and alters `edges`.
inline void reverse(RunContext& ctx, std::span<const vertex_t> vp, EdgeList& edges, ParentForest& f,
                    std::span<const vertex_t> universe) {
    auto scope = ctx.ledger.scope("stage1/reverse");
    // Only children of roots take part; deeper vertices would cut their tree.
    std::vector<vertex_t> movers;
    for (vertex_t v : vp)
        if (!f.is_root(v) && f.is_root(f.parent[v])) movers.push_back(v);
    {
        auto idx = ctx.local_index(f.n());
        for (vertex_t v : movers) idx->add(f.parent[v]);
        Arbiter arb = ctx.arbiter(idx->size());
        for (vertex_t v : movers) arb.write(idx->find(f.parent[v]), v, v);
        for (std::uint32_t s = 0; s < idx->size(); ++s) {
            vertex_t r = idx->member(s);
            vertex_t w = static_cast<vertex_t>(arb.value(s));
            f.set_parent(r, w);
            if (f.level[w] < f.level[r]) {
                f.level[w] = f.level[r];
                f.budget_level[w] = std::max(f.budget_level[w], f.level[r]);
            }
        }
    }
    ctx.ledger.charge(1, movers.size());
    shortcut(ctx, movers, f);
    shortcut(ctx, universe, f);
    alter_in_place(ctx, edges, f, false);
}

inline void check_edges_on_roots(const EdgeList& edges, const ParentForest& f, const char* where) {
    for (const auto& e : edges)
        if (!f.is_root(e.u) || !f.is_root(e.v)) throw structural_violation(std::string(where) + ": edge endpoint is not a root");
}

/// Shrinks the number of roots by a log log factor. Needs every edge on roots
/// and every tree of height 0 on `universe`.
inline void extract(RunContext& ctx, EdgeList& edges, int k, ParentForest& f, std::span<const vertex_t> universe) {
    auto scope = ctx.ledger.scope("stage1/extract");
    check_edges_on_roots(edges, f, "extract");
    for (vertex_t v : universe)
        if (!f.is_root(v)) throw structural_violation("extract: a tree has positive height");

    auto in_vp = ctx.local_index(f.n());
    EdgeList cur;
    cur.reserve(edges.size());
    for (const auto& e : edges)
        if (!e.is_loop()) cur.push_back(e);
    ctx.ledger.charge(1, edges.size());

    std::vector<std::vector<vertex_t>> logs;
    for (int i = 0; i <= k; ++i) {
        std::vector<vertex_t> log;
        {
            UpdateLog guard(f, log);
            for (vertex_t v : filter(ctx, cur, k, f)) in_vp->add(v);
            alter_in_place(ctx, cur, f, false);
            std::size_t out = 0;
            for (const auto& e : cur)
                if (!(in_vp->contains(e.u) && in_vp->contains(e.v))) cur[out++] = e;
            ctx.ledger.charge(1, cur.size());
            cur.resize(out);
        }
        logs.push_back(detail::distinct(ctx, log, f.n()));
    }
    for (auto it = logs.rbegin(); it != logs.rend(); ++it) shortcut(ctx, *it, f);
    std::vector<vertex_t> vp = in_vp->members();
    reverse(ctx, vp, edges, f, universe);
}

/// Stage 1 driver. `vertices` is the current vertex set; returns the roots
/// among it at the end (the new current vertex set).
inline std::vector<vertex_t> reduce(RunContext& ctx, std::span<const vertex_t> vertices, EdgeList& edges, int k,
                                    ParentForest& f) {
    auto scope = ctx.ledger.scope("stage1/reduce");
    extract(ctx, edges, ctx.profile.reduce_inner_k, f, vertices);

    // Vertices that stopped being roots stay leaves until the final shortcut.
    std::vector<vertex_t> cur = approximate_compaction(ctx.ledger, std::vector<vertex_t>(vertices.begin(), vertices.end()),
                                                       [&](vertex_t v) { return f.is_root(v); });

    std::vector<vertex_t> vp = filter(ctx, edges, k, f);
    shortcut(ctx, cur, f);
    alter_in_place(ctx, edges, f, false);

    EdgeList ep;
    {
        auto in_vp = ctx.local_index(f.n());
        for (vertex_t v : vp) in_vp->add(v);
        for (const auto& e : edges)
            if (!in_vp->contains(e.u) || !in_vp->contains(e.v)) ep.push_back(e);
        ctx.ledger.charge(1, edges.size());
    }
    for (int r = 0; r <= k; ++r) {
        if (ep.empty() && is_flat(f, cur)) {
            std::uint64_t idle = static_cast<std::uint64_t>(k - r + 1);
            detail::charge_idle_matchings(ctx, idle);
            ctx.ledger.charge(2 * idle, idle * cur.size());
            break;
        }
        matching(ctx, ep, f);
        shortcut(ctx, cur, f);
        alter_in_place(ctx, ep, f, false);
    }
    reverse(ctx, vp, edges, f, cur);
    auto out = approximate_compaction(ctx.ledger, cur, [&](vertex_t v) { return f.is_root(v); });
    ctx.notify(Boundary{"reduce", true, &cur}, f);
    return out;
}

}  // namespace pramcc
