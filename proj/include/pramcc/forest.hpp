#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <vector>

#include "context.hpp"
#include "random.hpp"
#include "types.hpp"

namespace pramcc {

/// Labeled digraph: parent pointers plus the per-vertex level and the level of
/// the block a root currently owns (its budget is beta at that level).
class ParentForest {
public:
    ParentForest() = default;
    explicit ParentForest(vertex_t n) : parent(n + 1), level(n + 1, 1), budget_level(n + 1, 1) {
        std::iota(parent.begin(), parent.end(), vertex_t{0});
    }

    std::vector<vertex_t> parent;
    std::vector<std::uint32_t> level;
    std::vector<std::uint32_t> budget_level;

    vertex_t n() const { return parent.empty() ? 0 : static_cast<vertex_t>(parent.size() - 1); }
    bool is_root(vertex_t v) const { return parent[v] == v; }

    void set_parent(vertex_t v, vertex_t p) {
        if (parent[v] == p) return;
        parent[v] = p;
        for (auto* log : logs_) log->push_back(v);
    }

    /// Hooks v under p and lifts p's level so that level(v) <= level(p) keeps
    /// holding for links made outside Maxlink.
    void link(vertex_t v, vertex_t p) {
        set_parent(v, p);
        if (level[p] < level[v]) {
            level[p] = level[v];
            budget_level[p] = std::max(budget_level[p], level[v]);
        }
    }

    /// Every parent change is appended to each attached log until detached.
    void attach_log(std::vector<vertex_t>* log) { logs_.push_back(log); }
    void detach_log(std::vector<vertex_t>* log) { logs_.erase(std::find(logs_.begin(), logs_.end(), log)); }

    vertex_t find_root(vertex_t v) const {
        std::size_t steps = 0;
        while (parent[v] != v) {
            v = parent[v];
            if (++steps > parent.size()) throw structural_violation("cycle in parent forest");
        }
        return v;
    }

    /// Fingerprint of parents and levels on `scope`.
    std::uint64_t fingerprint(std::span<const vertex_t> scope) const {
        std::uint64_t h = 0x243f6a8885a308d3ULL;
        for (vertex_t v : scope) h = combine(h, (static_cast<std::uint64_t>(parent[v]) << 32) ^ level[v] ^ (std::uint64_t{budget_level[v]} << 20) ^ v);
        return h;
    }

private:
    std::vector<std::vector<vertex_t>*> logs_;
};

/// RAII attachment of an update log.
class UpdateLog {
public:
    UpdateLog(ParentForest& f, std::vector<vertex_t>& log) : f_(f), log_(log) { f_.attach_log(&log_); }
    UpdateLog(const UpdateLog&) = delete;
    UpdateLog& operator=(const UpdateLog&) = delete;
    ~UpdateLog() { f_.detach_log(&log_); }

private:
    ParentForest& f_;
    std::vector<vertex_t>& log_;
};

/// Replaces every edge (u, v) by (u.p, v.p); loops are removed unless kept.
inline void alter_in_place(RunContext& ctx, EdgeList& edges, const ParentForest& f, bool keep_loops) {
    ctx.ledger.charge(1, edges.size());
    std::size_t out = 0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        Edge e = edges[i];
        e.u = f.parent[e.u];
        e.v = f.parent[e.v];
        if (!keep_loops && e.u == e.v) continue;
        edges[out++] = e;
    }
    edges.resize(out);
}

inline EdgeList alter(RunContext& ctx, EdgeList edges, const ParentForest& f, bool keep_loops) {
    alter_in_place(ctx, edges, f, keep_loops);
    return edges;
}

/// Synchronous v.p = v.p.p over `vs`. Returns the number of changed parents.
inline std::size_t shortcut(RunContext& ctx, std::span<const vertex_t> vs, ParentForest& f) {
    ctx.ledger.charge(1, vs.size());
    std::vector<vertex_t> next(vs.size());
    for (std::size_t i = 0; i < vs.size(); ++i) next[i] = f.parent[f.parent[vs[i]]];
    std::size_t changed = 0;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (f.parent[vs[i]] != next[i]) {
            f.set_parent(vs[i], next[i]);
            ++changed;
        }
    }
    return changed;
}

inline std::size_t shortcut_all(RunContext& ctx, ParentForest& f) {
    ctx.ledger.charge(1, f.n());
    std::vector<vertex_t> next(f.parent.size());
    for (vertex_t v = 1; v <= f.n(); ++v) next[v] = f.parent[f.parent[v]];
    std::size_t changed = 0;
    for (vertex_t v = 1; v <= f.n(); ++v) {
        if (f.parent[v] != next[v]) {
            f.set_parent(v, next[v]);
            ++changed;
        }
    }
    return changed;
}

/// Depth of every vertex (0 for roots). Throws on a cycle.
inline std::vector<std::uint32_t> depths(const ParentForest& f) {
    constexpr std::uint32_t unknown = ~std::uint32_t{0};
    constexpr std::uint32_t visiting = unknown - 1;
    std::vector<std::uint32_t> d(f.parent.size(), unknown);
    std::vector<vertex_t> stack;
    for (vertex_t s = 1; s <= f.n(); ++s) {
        if (d[s] != unknown) continue;
        vertex_t v = s;
        while (d[v] == unknown && f.parent[v] != v) {
            d[v] = visiting;
            stack.push_back(v);
            v = f.parent[v];
        }
        if (d[v] == visiting) throw structural_violation("cycle in parent forest");
        if (d[v] == unknown) d[v] = 0;  // v is a root
        std::uint32_t base = d[v];
        while (!stack.empty()) {
            d[stack.back()] = ++base;
            stack.pop_back();
        }
    }
    return d;
}

inline void check_acyclic(const ParentForest& f) { (void)depths(f); }

/// Height of each tree, keyed by root.
inline std::map<vertex_t, std::uint32_t> tree_heights(const ParentForest& f) {
    auto d = depths(f);
    std::map<vertex_t, std::uint32_t> h;
    for (vertex_t v = 1; v <= f.n(); ++v)
        if (f.is_root(v)) h.emplace(v, 0);
    for (vertex_t v = 1; v <= f.n(); ++v) {
        if (f.is_root(v)) continue;
        auto& slot = h[f.find_root(v)];
        slot = std::max(slot, d[v]);
    }
    return h;
}

/// True iff every vertex of `scope` is a root or a child of a root.
inline bool is_flat(const ParentForest& f, std::span<const vertex_t> scope) {
    for (vertex_t v : scope)
        if (!f.is_root(f.parent[v])) return false;
    return true;
}

inline bool is_flat(const ParentForest& f) {
    for (vertex_t v = 1; v <= f.n(); ++v)
        if (!f.is_root(f.parent[v])) return false;
    return true;
}

/// Shortcuts `scope` until it is flat.
inline void flatten(RunContext& ctx, std::span<const vertex_t> scope, ParentForest& f) {
    while (!is_flat(f, scope)) shortcut(ctx, scope, f);
}

inline std::vector<vertex_t> root_labels(const ParentForest& f) {
    std::vector<vertex_t> out(f.parent.size(), 0);
    for (vertex_t v = 1; v <= f.n(); ++v) out[v] = f.find_root(v);
    return out;
}

/// Overline-degree: degree of each vertex in the graph obtained by altering
/// `edges` once (a loop counts once). Read-only, nothing is altered.
inline std::vector<std::size_t> overline_degree(const ParentForest& f, const EdgeList& edges) {
    std::vector<std::size_t> d(f.parent.size(), 0);
    for (const auto& e : edges) {
        vertex_t a = f.parent[e.u], b = f.parent[e.v];
        ++d[a];
        if (b != a) ++d[b];
    }
    return d;
}

}  // namespace pramcc
