#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "context.hpp"
#include "forest.hpp"
#include "primitives.hpp"
#include "types.hpp"

namespace pramcc {

/// Padded-sorted copy of E(G') keyed by first end. Each edge is stored in both
/// orientations so that every endpoint owns a segment.
struct AuxiliaryArray {
    static constexpr std::uint64_t none = ~std::uint64_t{0};

    std::vector<std::optional<Edge>> cells;
    std::vector<std::uint64_t> l, r;   // per vertex, `none` if it owns no cell
    std::vector<std::uint8_t> compacted;
    std::vector<vertex_t> owners;      // vertices with a segment, in array order
    bool built = false;

    std::size_t segment_size(vertex_t v) const { return l[v] == none ? 0 : static_cast<std::size_t>(r[v] - l[v] + 1); }
};

inline AuxiliaryArray build_auxiliary(RunContext& ctx, vertex_t n, const EdgeList& edges) {
    auto scope = ctx.ledger.scope("orchestrator/build_auxiliary");
    AuxiliaryArray aux;
    aux.built = true;
    aux.l.assign(n + 1, AuxiliaryArray::none);
    aux.r.assign(n + 1, AuxiliaryArray::none);
    aux.compacted.assign(n + 1, 0);
    if (edges.empty()) return aux;

    EdgeList both;
    both.reserve(2 * edges.size());
    for (const auto& e : edges) {
        both.push_back(e);
        if (!e.is_loop()) both.push_back(Edge{e.v, e.u, e.origin});
    }
    ctx.ledger.charge(1, both.size());
    aux.cells = padded_sort(ctx.ledger, both, n, [](const Edge& e) -> std::uint64_t { return e.u; });

    // A cell starts (ends) a segment when its predecessor (successor) differs.
    const auto& c = aux.cells;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (!c[i]) continue;
        vertex_t u = c[i]->u;
        if (i == 0 || !c[i - 1] || c[i - 1]->u != u) {
            aux.l[u] = i;
            aux.owners.push_back(u);
        }
        if (i + 1 == c.size() || !c[i + 1] || c[i + 1]->u != u) aux.r[u] = i;
    }
    ctx.ledger.charge(1, c.size());

    // Segments are already contiguous; long ones are only flagged.
    for (vertex_t u : aux.owners)
        if (static_cast<double>(aux.r[u] - aux.l[u]) >= ctx.profile.aux_compaction_threshold) aux.compacted[u] = 1;
    ctx.ledger.charge(1, aux.owners.size());
    return aux;
}

/// For every segment owner u with pred(u): the doubling wake-up that, after
/// `depth` rounds, has reached cells [u.l, u.l + 2^(depth+1) - 1]. Returns the
/// awakened edges, one copy per origin.
template <class Pred>
EdgeList low_edge_extract(RunContext& ctx, const AuxiliaryArray& aux, Pred pred, int depth) {
    auto scope = ctx.ledger.scope("orchestrator/low_edge_extract");
    if (!aux.built) throw contract_error("low_edge_extract: auxiliary array not built");
    EdgeList out;
    std::vector<edge_id> seen_origins;
    const std::uint64_t reach = depth >= 62 ? ~std::uint64_t{0} >> 1 : (std::uint64_t{1} << (depth + 1));
    std::uint64_t scanned = 0;
    for (vertex_t u : aux.owners) {
        ++scanned;
        if (!pred(u)) continue;
        std::uint64_t end = std::min<std::uint64_t>(aux.r[u], aux.l[u] + reach - 1);
        for (std::uint64_t i = aux.l[u]; i <= end; ++i) {
            const auto& cell = aux.cells[i];
            if (!cell || cell->u != u) break;
            out.push_back(*cell);
        }
    }
    // Both orientations of an edge may wake up.
    std::sort(out.begin(), out.end(), [](const Edge& a, const Edge& b) {
        if (a.origin != b.origin) return a.origin < b.origin;
        return pair_key(a.u, a.v) < pair_key(b.u, b.v);
    });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const Edge& a, const Edge& b) { return a.origin == b.origin && pair_key(a.u, a.v) == pair_key(b.u, b.v); }),
              out.end());
    ctx.ledger.charge(static_cast<std::uint64_t>(std::max(depth, 0)), scanned + 2 * out.size());
    return out;
}

}  // namespace pramcc
