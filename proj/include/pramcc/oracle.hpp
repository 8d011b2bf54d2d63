#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <queue>
#include <vector>

#include "types.hpp"

namespace pramcc {

/// Sequential union-find with path halving and union by size.
class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        return true;
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
};

/// Label of each vertex = smallest id in its component. Index 0 is unused.
inline std::vector<vertex_t> oracle_components(const MultiGraph& g) {
    DisjointSets ds(g.n + 1);
    for (const auto& e : g.edges) ds.unite(e.u, e.v);
    std::vector<vertex_t> minimum(g.n + 1, 0);
    for (vertex_t v = 1; v <= g.n; ++v) {
        auto r = ds.find(v);
        if (minimum[r] == 0) minimum[r] = v;  // ascending sweep: first seen is the minimum
    }
    std::vector<vertex_t> label(g.n + 1, 0);
    for (vertex_t v = 1; v <= g.n; ++v) label[v] = minimum[ds.find(v)];
    return label;
}

/// Adjacency in CSR form; a loop is listed once.
struct Adjacency {
    std::vector<std::size_t> offset;
    std::vector<vertex_t> nbr;

    explicit Adjacency(const MultiGraph& g) : offset(g.n + 2, 0) {
        for (const auto& e : g.edges) {
            ++offset[e.u + 1];
            if (e.u != e.v) ++offset[e.v + 1];
        }
        for (std::size_t i = 1; i < offset.size(); ++i) offset[i] += offset[i - 1];
        nbr.resize(offset.back());
        std::vector<std::size_t> pos(offset.begin(), offset.end() - 1);
        for (const auto& e : g.edges) {
            nbr[pos[e.u]++] = e.v;
            if (e.u != e.v) nbr[pos[e.v]++] = e.u;
        }
    }

    template <class F>
    void for_each(vertex_t v, F&& fn) const {
        for (std::size_t i = offset[v]; i < offset[v + 1]; ++i) fn(nbr[i]);
    }
};

/// Independent second oracle: BFS labelling with the same canonical labels.
inline std::vector<vertex_t> bfs_components(const MultiGraph& g) {
    Adjacency adj(g);
    std::vector<vertex_t> label(g.n + 1, 0);
    std::vector<vertex_t> queue;
    for (vertex_t s = 1; s <= g.n; ++s) {
        if (label[s]) continue;
        label[s] = s;
        queue.assign(1, s);
        for (std::size_t h = 0; h < queue.size(); ++h)
            adj.for_each(queue[h], [&](vertex_t w) {
                if (!label[w]) {
                    label[w] = s;
                    queue.push_back(w);
                }
            });
    }
    return label;
}

inline std::size_t count_components(const std::vector<vertex_t>& label) {
    std::size_t c = 0;
    for (std::size_t v = 1; v < label.size(); ++v)
        if (label[v] == v) ++c;
    return c;
}

/// Canonical (min-id) labels from any labelling, e.g. forest roots.
inline std::vector<vertex_t> canonical_labels(const std::vector<vertex_t>& label) {
    std::vector<vertex_t> minimum(label.size(), 0), out(label.size(), 0);
    for (std::size_t v = 1; v < label.size(); ++v)
        if (minimum[label[v]] == 0) minimum[label[v]] = static_cast<vertex_t>(v);
    for (std::size_t v = 1; v < label.size(); ++v) out[v] = minimum[label[v]];
    return out;
}

/// First vertex whose canonical labels differ, or 0.
inline vertex_t first_mismatch(const std::vector<vertex_t>& a, const std::vector<vertex_t>& b) {
    auto ca = canonical_labels(a), cb = canonical_labels(b);
    for (std::size_t v = 1; v < ca.size() && v < cb.size(); ++v)
        if (ca[v] != cb[v]) return static_cast<vertex_t>(v);
    return ca.size() == cb.size() ? 0 : static_cast<vertex_t>(std::min(ca.size(), cb.size()));
}

/// Hop distances from s (~0u when unreachable).
inline std::vector<std::uint32_t> bfs_distances(const Adjacency& adj, vertex_t s) {
    constexpr std::uint32_t inf = ~std::uint32_t{0};
    std::vector<std::uint32_t> d(adj.offset.size() - 1, inf);
    std::vector<vertex_t> q{s};
    d[s] = 0;
    for (std::size_t h = 0; h < q.size(); ++h)
        adj.for_each(q[h], [&](vertex_t w) {
            if (d[w] == inf) {
                d[w] = d[q[h]] + 1;
                q.push_back(w);
            }
        });
    return d;
}

/// Exact largest component diameter, by BFS from every vertex.
inline std::uint32_t max_component_diameter(const MultiGraph& g) {
    Adjacency adj(g);
    std::uint32_t best = 0;
    for (vertex_t s = 1; s <= g.n; ++s) {
        auto d = bfs_distances(adj, s);
        for (vertex_t v = 1; v <= g.n; ++v)
            if (d[v] != ~std::uint32_t{0}) best = std::max(best, d[v]);
    }
    return best;
}

}  // namespace pramcc
