#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "auxiliary.hpp"
#include "context.hpp"
#include "expand.hpp"
#include "forest.hpp"
#include "primitives.hpp"
#include "stage3.hpp"
#include "types.hpp"

namespace pramcc {

namespace detail {

/// Number of distinct cells each owner occupies after (owner slot, cell) writes.
inline std::vector<std::uint32_t> occupancy(std::vector<std::pair<std::uint32_t, std::uint64_t>>& writes, std::size_t owners) {
    std::sort(writes.begin(), writes.end());
    writes.erase(std::unique(writes.begin(), writes.end()), writes.end());
    std::vector<std::uint32_t> occ(owners, 0);
    for (const auto& w : writes) ++occ[w.first];
    return occ;
}

}  // namespace detail

/// Skeleton graph on V: neighbours are hashed into tables of b^table cells, a
/// vertex is high when more than b^high cells fill up, edges between two high
/// vertices survive with probability b^-sample.
inline SkeletonGraph build(RunContext& ctx, std::span<const vertex_t> vertices, const EdgeList& edges, double log2b,
                           const ParentForest& f) {
    auto scope = ctx.ledger.scope("stage2/build");
    const auto& prof = ctx.profile;
    SkeletonGraph h;
    h.vertices.assign(vertices.begin(), vertices.end());
    if (edges.empty()) return h;

    auto idx = ctx.local_index(f.n());
    for (vertex_t v : vertices) idx->add(v);
    for (const auto& e : edges) {
        idx->add(e.u);
        idx->add(e.v);
    }
    Rng rng = ctx.stream("stage2/build");
    const std::uint64_t cells = prof.skeleton_table_size(log2b);
    std::vector<std::pair<std::uint32_t, std::uint64_t>> writes;
    writes.reserve(2 * edges.size());
    for (const auto& e : edges) {
        if (e.is_loop()) continue;
        writes.emplace_back(idx->find(e.v), rng.below(cells));
        writes.emplace_back(idx->find(e.u), rng.below(cells));
    }
    ctx.ledger.charge(1, writes.size() + idx->size());
    auto occ = detail::occupancy(writes, idx->size());
    const double high = prof.skeleton_high_threshold(log2b);
    auto is_high = [&](vertex_t v) { return static_cast<double>(occ[idx->find(v)]) > high; };
    ctx.ledger.charge(1, idx->size());

    const double q = prof.skeleton_sample_prob(log2b);
    EdgeList kept;
    for (const auto& e : edges) {
        if (e.is_loop()) continue;
        if (!is_high(e.u) || !is_high(e.v) || rng.bernoulli(q)) kept.push_back(e);
    }
    ctx.ledger.charge(1, edges.size());
    h.edges = perfect_hash_dedup(ctx.ledger, kept);
    return h;
}

/// Skeleton edges for the sparse pipeline: active roots are classified by
/// their H2-degree, and the original edges of vertices hanging off low roots
/// are woken up from the auxiliary array. Returns E' together with E(H2),
/// both altered.
inline EdgeList sparse_build(RunContext& ctx, const AuxiliaryArray& aux, std::span<const vertex_t> active_roots,
                             const EdgeList& h2, double log2b, const ParentForest& f) {
    auto scope = ctx.ledger.scope("stage2/sparse_build");
    if (!aux.built) throw contract_error("sparse_build: auxiliary array not built");
    const auto& prof = ctx.profile;

    auto idx = ctx.local_index(f.n());
    for (vertex_t v : active_roots) idx->add(v);
    const std::size_t na = idx->size();

    EdgeList h2a = alter(ctx, h2, f, false);
    Rng rng = ctx.stream("stage2/sparse_build");
    const std::uint64_t cells = prof.skeleton_table_size(log2b);
    std::vector<std::pair<std::uint32_t, std::uint64_t>> writes;
    for (const auto& e : h2a) {
        std::uint32_t a = idx->find(e.u), b = idx->find(e.v);
        if (a != LocalIndex::npos && a < na) writes.emplace_back(a, rng.below(cells));
        if (b != LocalIndex::npos && b < na) writes.emplace_back(b, rng.below(cells));
    }
    ctx.ledger.charge(1, writes.size() + na);
    auto occ = detail::occupancy(writes, na);
    const double high = prof.skeleton_high_threshold(log2b);
    std::vector<std::uint8_t> low(na);
    for (std::size_t s = 0; s < na; ++s) low[s] = static_cast<double>(occ[s]) <= high;
    ctx.ledger.charge(1, na);

    EdgeList ep = low_edge_extract(
        ctx, aux,
        [&](vertex_t u) {
            std::uint32_t s = idx->find(f.parent[u]);
            return s != LocalIndex::npos && low[s];
        },
        prof.sparse_wake_depth(log2b));
    alter_in_place(ctx, ep, f, false);
    ep.insert(ep.end(), h2a.begin(), h2a.end());
    return perfect_hash_dedup(ctx.ledger, ep);
}

struct DensifyResult {
    std::vector<vertex_t> roots;
    EdgeList e_close;
    ParentSnapshots snaps;
    std::size_t R = 0;
};

/// Densify: R rounds of Expand-Maxlink, shortcuts, then a budgeted LTZ run on
/// everything gathered so far. Parent snapshots p_0..p_{2R+1} are kept.
inline DensifyResult densify(RunContext& ctx, SkeletonGraph h, double log2b, ParentForest& f) {
    auto scope = ctx.ledger.scope("stage2/densify");
    DensifyResult out;
    out.R = static_cast<std::size_t>(ctx.profile.densify_rounds(log2b));
    out.snaps = ParentSnapshots(h.vertices, f.n());
    if (h.edges.empty()) {
        // Nothing moves: every snapshot equals the current parent.
        for (vertex_t v : h.vertices)
            if (f.is_root(v)) out.roots.push_back(v);
        ctx.ledger.charge(1, h.vertices.size());
        return out;
    }
    for (std::size_t i = 0; i < out.R; ++i) {
        expand_maxlink(ctx, h, f, false, &out.snaps, i);
        h.edges = perfect_hash_dedup(ctx.ledger, h.edges);
        // One concurrent-OR round detects that nothing is left to contract.
        ctx.ledger.charge(1, h.edges.size());
        if (h.edges.empty()) {
            for (std::size_t j = 2 * i + 2; j < 2 * out.R; ++j) out.snaps.record(ctx, j, f);
            break;
        }
    }
    for (int r = 0; r < ctx.profile.densify_shortcut_reps; ++r) {
        shortcut(ctx, h.vertices, f);
        alter_in_place(ctx, h.edges, f, false);
    }
    out.snaps.record(ctx, 2 * out.R, f);

    out.e_close = perfect_hash_dedup(ctx.ledger, h.edges);
    ltz_connectivity(ctx, out.e_close, f, static_cast<std::uint64_t>(ctx.profile.densify_ltz_rounds));
    alter_in_place(ctx, out.e_close, f, false);
    out.snaps.record(ctx, 2 * out.R + 1, f);
    for (vertex_t v : h.vertices)
        if (f.is_root(v)) out.roots.push_back(v);
    ctx.ledger.charge(1, h.vertices.size());
    return out;
}

/// Increase steps 3-9 after Densify: each vertex of H goes under its iterated
/// root, heads are the roots whose table filled at least 2b cells, root
/// non-heads join an adjacent head, and a leader coin merges pairs of roots.
inline void increase_core(RunContext& ctx, std::span<const vertex_t> universe, DensifyResult& d, double log2b,
                          ParentForest& f) {
    auto scope = ctx.ledger.scope("stage2/increase");
    const auto& prof = ctx.profile;
    const auto& members = d.snaps.members();
    Rng rng = ctx.stream("stage2/increase");

    // Step 4. A target root that would itself move is skipped, so no two
    // roots swap places in the same step.
    std::vector<vertex_t> target(members.size());
    std::vector<std::uint8_t> moves(members.size(), 0);
    auto idx = ctx.local_index(f.n());
    for (std::size_t s = 0; s < members.size(); ++s) {
        idx->add(members[s]);
        target[s] = d.snaps.iterated(members[s], 2 * d.R + 1, f);
        moves[s] = f.is_root(target[s]) && target[s] != members[s];
    }
    auto stays = [&](vertex_t u) {
        std::uint32_t s = idx->find(u);
        return f.is_root(u) && (s == LocalIndex::npos || !moves[s]);
    };
    std::vector<std::uint8_t> go(members.size(), 0);
    for (std::size_t s = 0; s < members.size(); ++s) go[s] = moves[s] && stays(target[s]);
    for (std::size_t s = 0; s < members.size(); ++s)
        if (go[s]) f.link(members[s], target[s]);
    idx->reset(f.n());
    const std::uint64_t cells = prof.skeleton_table_size(log2b);
    std::vector<std::pair<std::uint32_t, std::uint64_t>> writes;
    for (std::size_t s = 0; s < members.size(); ++s) {
        vertex_t u = f.parent[members[s]];
        if (f.is_root(u)) writes.emplace_back(idx->add(u), rng.below(cells));
    }
    ctx.ledger.charge(2 * d.R + 2, members.size() * (2 * d.R + 2));

    // Step 5.
    auto occ = detail::occupancy(writes, idx->size());
    const double head_at = prof.head_threshold(log2b);
    auto is_head = [&](vertex_t v) {
        std::uint32_t s = idx->find(v);
        return f.is_root(v) && s != LocalIndex::npos && static_cast<double>(occ[s]) >= head_at;
    };
    ctx.ledger.charge(1, idx->size());

    // Step 6.
    EdgeList ec = alter(ctx, d.e_close, f, false);
    {
        std::vector<CellWrite> ws;
        for (const auto& e : ec) {
            for (auto [v, w] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
                if (f.is_root(v) && !is_head(v) && is_head(w)) ws.push_back(CellWrite{v, w, ws.size()});
            }
        }
        auto won = crcw_round(ws, ctx.policy, ctx.arbitration_salt(), &ctx.ledger);
        for (auto [v, w] : won) f.link(static_cast<vertex_t>(v), static_cast<vertex_t>(w));
    }

    // Step 7.
    shortcut(ctx, universe, f);
    alter_in_place(ctx, ec, f, false);

    // Step 8: a non-leader root hooks onto an adjacent leader root.
    {
        auto lead = ctx.local_index(f.n());
        std::vector<std::uint8_t> leader;
        auto leader_of = [&](vertex_t r) {
            std::uint32_t s = lead->find(r);
            if (s == LocalIndex::npos) {
                s = lead->add(r);
                leader.push_back(rng.bernoulli(prof.leader_prob) ? 1 : 0);
            }
            return leader[s] != 0;
        };
        std::vector<CellWrite> ws;
        for (const auto& e : ec) {
            for (auto [a, c] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
                if (!f.is_root(a) || !f.is_root(c)) continue;
                if (leader_of(a) && !leader_of(c)) ws.push_back(CellWrite{c, a, ws.size()});
            }
        }
        ctx.ledger.charge(1, lead->size());
        auto won = crcw_round(ws, ctx.policy, ctx.arbitration_salt(), &ctx.ledger);
        for (auto [c, a] : won) f.link(static_cast<vertex_t>(c), static_cast<vertex_t>(a));
    }

    // Step 9.
    shortcut(ctx, universe, f);
    flatten(ctx, universe, f);
}

/// Standalone Increase on (V, E): Build, Densify, steps 3-9, then Alter(E).
inline void increase(RunContext& ctx, std::span<const vertex_t> vertices, EdgeList& edges, double log2b, ParentForest& f) {
    SkeletonGraph h = build(ctx, vertices, edges, log2b, f);
    DensifyResult d = densify(ctx, std::move(h), log2b, f);
    std::vector<vertex_t> universe(vertices.begin(), vertices.end());
    increase_core(ctx, universe, d, log2b, f);
    alter_in_place(ctx, edges, f, false);
    ctx.notify(Boundary{"increase", true, &universe}, f);
}

/// Increase inside an Interweave phase: SparseBuild replaces Build and the
/// final alter runs on H1 with loops kept.
inline void increase_sparse(RunContext& ctx, const AuxiliaryArray& aux, std::span<const vertex_t> universe,
                            std::span<const vertex_t> active_roots, EdgeList& h1, const EdgeList& h2, double log2b,
                            ParentForest& f) {
    SkeletonGraph h;
    h.vertices.assign(active_roots.begin(), active_roots.end());
    h.edges = sparse_build(ctx, aux, active_roots, h2, log2b, f);
    DensifyResult d = densify(ctx, std::move(h), log2b, f);
    increase_core(ctx, universe, d, log2b, f);
    alter_in_place(ctx, h1, f, true);
    std::vector<vertex_t> scope(universe.begin(), universe.end());
    ctx.notify(Boundary{"increase", true, &scope}, f);
}

}  // namespace pramcc
