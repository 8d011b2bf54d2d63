#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "context.hpp"
#include "expand.hpp"
#include "forest.hpp"
#include "primitives.hpp"
#include "types.hpp"

namespace pramcc {

struct LtzResult {
    bool complete = false;
    std::uint64_t rounds = 0;
};

/// Round-synchronous connectivity built from Expand-Maxlink. Works on a copy
/// of `edges`; each round is {expand_maxlink; shortcut; alter; dedup}. A round
/// that changes no parent falls back to hooking every root with a non-loop
/// edge onto its largest neighbour by (level, -id), which keeps the forest
/// acyclic and level-monotone. Stops when no non-loop edge is left or the
/// round budget runs out (then `complete` is false).
inline LtzResult ltz_connectivity(RunContext& ctx, EdgeList edges, ParentForest& f,
                                  std::optional<std::uint64_t> round_budget = std::nullopt) {
    auto scope = ctx.ledger.scope("stage3/ltz");
    LtzResult res;

    // Move endpoints to their roots by pointer jumping.
    {
        std::uint32_t deepest = 0;
        for (auto& e : edges) {
            for (vertex_t* x : {&e.u, &e.v}) {
                std::uint32_t d = 0;
                vertex_t v = *x;
                while (!f.is_root(v)) {
                    v = f.parent[v];
                    ++d;
                }
                *x = v;
                deepest = std::max(deepest, d);
            }
        }
        std::uint64_t jumps = deepest <= 1 ? 1 : static_cast<std::uint64_t>(ceil_log2(deepest) + 1);
        ctx.ledger.charge(jumps, jumps * edges.size());
    }
    edges = perfect_hash_dedup(ctx.ledger, edges);

    SkeletonGraph h;
    h.edges = std::move(edges);
    {
        auto idx = ctx.local_index(f.n());
        for (const auto& e : h.edges) {
            idx->add(e.u);
            idx->add(e.v);
        }
        h.vertices = idx->members();
    }

    while (!h.edges.empty()) {
        if (round_budget && res.rounds >= *round_budget) {
            flatten(ctx, h.vertices, f);
            return res;
        }
        ++res.rounds;
        auto st = expand_maxlink(ctx, h, f, false);
        std::size_t changed = st.parent_changes;
        changed += shortcut(ctx, h.vertices, f);
        alter_in_place(ctx, h.edges, f, false);
        h.edges = perfect_hash_dedup(ctx.ledger, h.edges);
        if (changed == 0 && !h.edges.empty()) {
            // Hook step: each root picks the min-id neighbour among those above it.
            auto idx = ctx.local_index(f.n());
            for (vertex_t v : h.vertices) idx->add(v);
            for (const auto& e : h.edges) {
                idx->add(e.u);
                idx->add(e.v);
            }
            constexpr vertex_t none = 0;
            std::vector<vertex_t> target(idx->size(), none);
            auto above = [&](vertex_t w, vertex_t v) {
                return f.level[w] > f.level[v] || (f.level[w] == f.level[v] && w < v);
            };
            for (const auto& e : h.edges) {
                for (auto [v, w] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
                    if (!f.is_root(v) || !f.is_root(w) || !above(w, v)) continue;
                    auto& t = target[idx->find(v)];
                    if (t == none || w < t) t = w;
                }
            }
            for (std::uint32_t s = 0; s < idx->size(); ++s)
                if (target[s] != none) f.link(idx->member(s), target[s]);
            ctx.ledger.charge(1, idx->size() + 2 * h.edges.size());
            shortcut(ctx, h.vertices, f);
            alter_in_place(ctx, h.edges, f, false);
            h.edges = perfect_hash_dedup(ctx.ledger, h.edges);
        }
    }
    flatten(ctx, h.vertices, f);
    res.complete = true;
    return res;
}

/// Stage 3: solve a sample of the edges, then v.p = v.p.p.p everywhere.
inline LtzResult sample_solve(RunContext& ctx, vertex_t n, const EdgeList& edges, ParentForest& f) {
    auto scope = ctx.ledger.scope("stage3/sample_solve");
    LtzResult r;
    if (static_cast<double>(n) <= ctx.profile.small_graph_cutoff) {
        r = ltz_connectivity(ctx, perfect_hash_dedup(ctx.ledger, edges), f);
    } else {
        Rng rng = ctx.stream("stage3/sample_solve");
        EdgeList sample;
        for (const auto& e : edges)
            if (rng.bernoulli(ctx.profile.stage3_sample_prob)) sample.push_back(e);
        ctx.ledger.charge(1, edges.size());
        r = ltz_connectivity(ctx, std::move(sample), f);
    }
    std::vector<vertex_t> next(f.parent.size());
    for (vertex_t v = 1; v <= n; ++v) next[v] = f.parent[f.parent[f.parent[v]]];
    for (vertex_t v = 1; v <= n; ++v) f.set_parent(v, next[v]);
    ctx.ledger.charge(1, n);
    return r;
}

}  // namespace pramcc
