#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "context.hpp"
#include "forest.hpp"
#include "types.hpp"

namespace pramcc {

/// Origin id carried by edges created from hash-table items.
inline constexpr edge_id kTableEdge = ~edge_id{0};

/// A graph on an explicit vertex set (vertices may have no edges).
struct SkeletonGraph {
    std::vector<vertex_t> vertices;
    EdgeList edges;
};

/// Per-round parent snapshots v.p_j, recorded for a fixed member list.
class ParentSnapshots {
public:
    ParentSnapshots() = default;
    ParentSnapshots(std::span<const vertex_t> members, vertex_t n) : members_(members.begin(), members.end()), slot_(n + 1, npos) {
        for (std::uint32_t s = 0; s < members_.size(); ++s) slot_[members_[s]] = s;
    }

    void add_member(vertex_t v) {
        if (v < slot_.size() && slot_[v] == npos) {
            slot_[v] = static_cast<std::uint32_t>(members_.size());
            members_.push_back(v);
        }
    }

    void record(RunContext& ctx, std::size_t j, const ParentForest& f) {
        if (rows_.size() <= j) rows_.resize(j + 1);
        auto& row = rows_[j];
        row.resize(members_.size());
        for (std::size_t s = 0; s < members_.size(); ++s) row[s] = f.parent[members_[s]];
        ctx.ledger.charge(0, members_.size());
    }

    bool empty() const { return rows_.empty(); }
    std::size_t rows() const { return rows_.size(); }

    /// v.p_j, or `fallback` when v was not recorded at j.
    vertex_t at(std::size_t j, vertex_t v, vertex_t fallback) const {
        if (j >= rows_.size() || v >= slot_.size() || slot_[v] == npos) return fallback;
        const auto& row = rows_[j];
        std::uint32_t s = slot_[v];
        return s < row.size() ? row[s] : fallback;
    }

    /// v.p^(j): start at v and follow p_1, ..., p_j.
    vertex_t iterated(vertex_t v, std::size_t j, const ParentForest& f) const {
        vertex_t u = v;
        for (std::size_t t = 1; t <= j; ++t) u = at(t, u, f.parent[u]);
        return u;
    }

    const std::vector<vertex_t>& members() const { return members_; }

private:
    static constexpr std::uint32_t npos = ~std::uint32_t{0};
    std::vector<vertex_t> members_;
    std::vector<std::uint32_t> slot_;
    std::vector<std::vector<vertex_t>> rows_;
};

/// Two synchronous iterations of: v links to the highest-level member of
/// N*(v).p when that level is strictly larger than its own (ties: smallest id).
/// Returns the number of parent changes.
inline std::size_t maxlink(RunContext& ctx, std::span<const vertex_t> vs, const EdgeList& edges, ParentForest& f) {
    auto idx = ctx.local_index(f.n());
    for (vertex_t v : vs) idx->add(v);
    for (const auto& e : edges) {
        idx->add(e.u);
        idx->add(e.v);
    }
    const auto& members = idx->members();
    const std::size_t nv = members.size();
    auto better = [&](vertex_t a, vertex_t b) {  // is a preferred over b
        if (f.level[a] != f.level[b]) return f.level[a] > f.level[b];
        return a < b;
    };
    std::size_t changes = 0;
    std::vector<vertex_t> best(nv);
    for (int it = 0; it < 2; ++it) {
        for (std::size_t s = 0; s < nv; ++s) best[s] = f.parent[members[s]];
        for (const auto& e : edges) {
            std::uint32_t a = idx->find(e.u), b = idx->find(e.v);
            vertex_t pu = f.parent[e.u], pv = f.parent[e.v];
            if (better(pv, best[a])) best[a] = pv;
            if (better(pu, best[b])) best[b] = pu;
        }
        for (std::size_t s = 0; s < nv; ++s) {
            vertex_t v = members[s];
            if (f.level[best[s]] > f.level[v] && f.parent[v] != best[s]) {
                f.set_parent(v, best[s]);
                ++changes;
            }
        }
        ctx.ledger.charge(1, nv + 2 * edges.size());
    }
    return changes;
}

struct ExpandStats {
    std::size_t parent_changes = 0;
    std::size_t table_edges = 0;
    std::size_t dormant = 0;
    std::size_t level_ups = 0;
};

namespace detail {

struct TableWrite {
    std::uint32_t owner;  // local slot
    std::uint64_t cell;
    vertex_t value;
    std::uint64_t writer;
};

/// Resolved table cells of one step, grouped by owner: (owner, cell, value).
struct ResolvedTables {
    std::vector<TableWrite> cells;
    std::vector<std::uint8_t> collided;  // per owner
};

inline ResolvedTables resolve_table_writes(RunContext& ctx, std::vector<TableWrite>& writes, std::size_t owners) {
    ResolvedTables out;
    out.collided.assign(owners, 0);
    std::sort(writes.begin(), writes.end(), [](const TableWrite& a, const TableWrite& b) {
        if (a.owner != b.owner) return a.owner < b.owner;
        if (a.cell != b.cell) return a.cell < b.cell;
        return a.writer < b.writer;
    });
    const std::uint64_t salt = ctx.arbitration_salt();
    for (std::size_t i = 0; i < writes.size();) {
        std::size_t j = i;
        const TableWrite* win = &writes[i];
        std::uint64_t win_pr = write_priority(ctx.policy, salt, writes[i].cell * 1315423911ULL + writes[i].owner, writes[i].writer);
        bool distinct_values = false;
        while (j < writes.size() && writes[j].owner == writes[i].owner && writes[j].cell == writes[i].cell) {
            if (writes[j].value != writes[i].value) distinct_values = true;
            std::uint64_t pr = write_priority(ctx.policy, salt, writes[j].cell * 1315423911ULL + writes[j].owner, writes[j].writer);
            if (pr > win_pr) {
                win_pr = pr;
                win = &writes[j];
            }
            ++j;
        }
        if (distinct_values) out.collided[writes[i].owner] = 1;
        out.cells.push_back(*win);
        i = j;
    }
    return out;
}

}  // namespace detail

/// One round of Expand-Maxlink on H. Table items become edges of H before the
/// second Maxlink. Snapshots p_{2i} and p_{2i+1} are recorded when requested.
inline ExpandStats expand_maxlink(RunContext& ctx, SkeletonGraph& h, ParentForest& f, bool keep_loops,
                                  ParentSnapshots* snaps = nullptr, std::size_t round = 0) {
    ExpandStats st;
    const auto& prof = ctx.profile;

    // Endpoints outside the vertex list join it.
    {
        auto idx = ctx.local_index(f.n());
        for (vertex_t v : h.vertices) idx->add(v);
        for (const auto& e : h.edges) {
            idx->add(e.u);
            idx->add(e.v);
        }
        if (idx->size() != h.vertices.size()) h.vertices = idx->members();
    }
    if (snaps)
        for (vertex_t v : h.vertices) snaps->add_member(v);

    // Step 1.
    st.parent_changes += maxlink(ctx, h.vertices, h.edges, f);
    alter_in_place(ctx, h.edges, f, keep_loops);

    auto idx = ctx.local_index(f.n());
    for (vertex_t v : h.vertices) idx->add(v);
    for (const auto& e : h.edges) {
        idx->add(e.u);
        idx->add(e.v);
    }
    if (idx->size() != h.vertices.size()) h.vertices = idx->members();
    const std::size_t nv = idx->size();
    if (snaps) {
        for (vertex_t v : h.vertices) snaps->add_member(v);
        snaps->record(ctx, 2 * round, f);
    }
    auto slot = [&](vertex_t v) { return idx->find(v); };
    Rng rng = ctx.stream("stage2/expand_maxlink");

    // Step 2.
    std::vector<std::uint8_t> leveled(nv, 0), dormant(nv, 0);
    std::size_t roots = 0;
    for (std::size_t s = 0; s < nv; ++s) {
        vertex_t v = h.vertices[s];
        if (!f.is_root(v)) continue;
        ++roots;
        if (rng.bernoulli(prof.level_up_prob(f.budget_level[v]))) {
            ++f.level[v];
            leveled[s] = 1;
            ++st.level_ups;
        }
    }
    ctx.ledger.charge(1, roots);

    // Step 3: every root hashes itself and its equal-budget root neighbours.
    std::vector<detail::TableWrite> writes;
    std::uint64_t writer = 0;
    auto hash_into = [&](vertex_t owner, vertex_t value) {
        std::uint64_t cell = rng.below(prof.table_size(f.budget_level[owner]));
        writes.push_back(detail::TableWrite{slot(owner), cell, value, writer++});
    };
    for (vertex_t v : h.vertices)
        if (f.is_root(v)) hash_into(v, v);
    for (const auto& e : h.edges) {
        if (e.u == e.v || !f.is_root(e.u) || !f.is_root(e.v)) continue;
        if (f.budget_level[e.u] != f.budget_level[e.v]) continue;
        hash_into(e.u, e.v);
        hash_into(e.v, e.u);
    }
    ctx.ledger.charge(1, writes.size() + nv);
    auto t3 = detail::resolve_table_writes(ctx, writes, nv);

    // Tables as CSR over owners.
    auto build_csr = [&](const std::vector<detail::TableWrite>& cells, std::vector<std::uint32_t>& off) {
        off.assign(nv + 1, 0);
        for (const auto& c : cells) ++off[c.owner + 1];
        for (std::size_t s = 0; s < nv; ++s) off[s + 1] += off[s];
    };
    std::vector<std::uint32_t> off3;
    build_csr(t3.cells, off3);

    // Step 4.
    for (std::size_t s = 0; s < nv; ++s)
        if (t3.collided[s]) dormant[s] = 1;
    {
        std::vector<std::uint8_t> next = dormant;
        for (std::size_t s = 0; s < nv; ++s) {
            if (next[s]) continue;
            for (std::uint32_t k = off3[s]; k < off3[s + 1]; ++k) {
                std::uint32_t w = slot(t3.cells[k].value);
                if (w != LocalIndex::npos && dormant[w]) {
                    next[s] = 1;
                    break;
                }
            }
        }
        dormant.swap(next);
    }
    ctx.ledger.charge(2, nv + t3.cells.size());

    // Step 5: two-hop hashing for live roots, reading the step-3 tables.
    writes.clear();
    for (std::size_t s = 0; s < nv; ++s) {
        vertex_t v = h.vertices[s];
        if (!f.is_root(v) || dormant[s]) continue;
        for (std::uint32_t k = off3[s]; k < off3[s + 1]; ++k) {
            vertex_t w = t3.cells[k].value;
            if (w == v) continue;
            std::uint32_t ws = slot(w);
            if (ws == LocalIndex::npos) continue;
            for (std::uint32_t q = off3[ws]; q < off3[ws + 1]; ++q) hash_into(v, t3.cells[q].value);
        }
    }
    ctx.ledger.charge(1, writes.size());
    // Step-3 contents occupy their cells first; differing values collide.
    std::vector<detail::TableWrite> merged;
    merged.reserve(t3.cells.size() + writes.size());
    for (const auto& c : t3.cells) merged.push_back(detail::TableWrite{c.owner, c.cell, c.value, 0});
    for (auto& w : writes) {
        w.writer += 1;
        merged.push_back(w);
    }
    std::vector<std::uint8_t> collided5(nv, 0);
    std::vector<detail::TableWrite> final_cells;
    {
        std::sort(merged.begin(), merged.end(), [](const detail::TableWrite& a, const detail::TableWrite& b) {
            if (a.owner != b.owner) return a.owner < b.owner;
            if (a.cell != b.cell) return a.cell < b.cell;
            return a.writer < b.writer;
        });
        const std::uint64_t salt = ctx.arbitration_salt();
        for (std::size_t i = 0; i < merged.size();) {
            std::size_t j = i;
            bool distinct_values = false;
            const detail::TableWrite* win = &merged[i];
            std::uint64_t win_pr = 0;
            bool occupied = merged[i].writer == 0;
            while (j < merged.size() && merged[j].owner == merged[i].owner && merged[j].cell == merged[i].cell) {
                if (merged[j].value != merged[i].value) distinct_values = true;
                if (!occupied) {
                    std::uint64_t pr = write_priority(ctx.policy, salt, merged[j].cell * 1315423911ULL + merged[j].owner, merged[j].writer);
                    if (j == i || pr > win_pr) {
                        win_pr = pr;
                        win = &merged[j];
                    }
                }
                ++j;
            }
            if (distinct_values && merged[i].owner < nv && j - i > 1) collided5[merged[i].owner] = 1;
            final_cells.push_back(*win);
            i = j;
        }
    }
    for (std::size_t s = 0; s < nv; ++s)
        if (collided5[s] && f.is_root(h.vertices[s])) dormant[s] = 1;
    ctx.ledger.charge(1, merged.size());

    // Table items become edges (v, u); an item stored in two cells gives one edge.
    {
        std::size_t before = h.edges.size();
        std::vector<vertex_t> items;
        for (std::size_t i = 0; i < final_cells.size();) {
            std::size_t j = i;
            items.clear();
            while (j < final_cells.size() && final_cells[j].owner == final_cells[i].owner) items.push_back(final_cells[j++].value);
            std::sort(items.begin(), items.end());
            items.erase(std::unique(items.begin(), items.end()), items.end());
            vertex_t v = h.vertices[final_cells[i].owner];
            for (vertex_t u : items)
                if (u != v) h.edges.push_back(Edge{v, u, kTableEdge});
            i = j;
        }
        st.table_edges = h.edges.size() - before;
        ctx.ledger.charge(1, final_cells.size());
    }

    // Step 6.
    st.parent_changes += maxlink(ctx, h.vertices, h.edges, f);
    st.parent_changes += shortcut(ctx, h.vertices, f);
    alter_in_place(ctx, h.edges, f, keep_loops);
    if (snaps) snaps->record(ctx, 2 * round + 1, f);

    // Steps 7-8.
    for (std::size_t s = 0; s < nv; ++s) {
        vertex_t v = h.vertices[s];
        if (!f.is_root(v)) continue;
        if (dormant[s]) ++st.dormant;
        if (dormant[s] && !leveled[s]) {
            ++f.level[v];
            ++st.level_ups;
        }
        if (static_cast<int>(f.level[v]) > prof.max_level) throw instance_failed("expand_maxlink: level above the block pool");
        f.budget_level[v] = f.level[v];
    }
    ctx.ledger.charge(2, 2 * nv);
    return st;
}

}  // namespace pramcc
