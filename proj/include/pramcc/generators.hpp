#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "random.hpp"
#include "types.hpp"

namespace pramcc::gen {

inline MultiGraph path(vertex_t n) {
    MultiGraph g(n);
    for (vertex_t v = 1; v < n; ++v) g.add_edge(v, v + 1);
    return g;
}

/// C_n; C_2 is a doubled edge and C_1 a single loop.
inline MultiGraph cycle(vertex_t n) {
    MultiGraph g(n);
    if (n == 0) return g;
    for (vertex_t v = 1; v <= n; ++v) g.add_edge(v, v % n + 1);
    if (n == 1) g.edges.resize(1);
    return g;
}

/// Configuration model. A stub pairing that lands on a loop is switched with
/// a random other pair, so every degree is exactly d; parallel edges stay.
inline MultiGraph random_regular(vertex_t n, unsigned d, std::uint64_t seed) {
    if ((static_cast<std::uint64_t>(n) * d) % 2 != 0) throw contract_error("random_regular: n*d must be even");
    if (n < 2 && d > 0) throw contract_error("random_regular: need n >= 2");
    Rng rng(seed);
    std::vector<vertex_t> stubs;
    stubs.reserve(static_cast<std::size_t>(n) * d);
    for (vertex_t v = 1; v <= n; ++v)
        for (unsigned k = 0; k < d; ++k) stubs.push_back(v);
    for (std::size_t i = stubs.size(); i > 1; --i) std::swap(stubs[i - 1], stubs[rng.below(i)]);
    const std::size_t pairs = stubs.size() / 2;
    for (std::size_t guard = 0;; ++guard) {
        bool clean = true;
        for (std::size_t i = 0; i < pairs; ++i) {
            if (stubs[2 * i] != stubs[2 * i + 1]) continue;
            clean = false;
            std::size_t j = rng.below(pairs);
            if (j == i || stubs[2 * j] == stubs[2 * i] || stubs[2 * j + 1] == stubs[2 * i]) continue;
            std::swap(stubs[2 * i + 1], stubs[2 * j]);
        }
        if (clean) break;
        if (guard > 1000) throw contract_error("random_regular: cannot remove loops (n too small for d?)");
    }
    MultiGraph g(n);
    for (std::size_t i = 0; i < pairs; ++i) g.add_edge(stubs[2 * i], stubs[2 * i + 1]);
    return g;
}

/// G(n, p) by geometric skipping over the n(n-1)/2 pairs.
inline MultiGraph gnp(vertex_t n, double p, std::uint64_t seed) {
    MultiGraph g(n);
    if (p <= 0 || n < 2) return g;
    Rng rng(seed);
    if (p >= 1) {
        for (vertex_t u = 1; u <= n; ++u)
            for (vertex_t v = u + 1; v <= n; ++v) g.add_edge(u, v);
        return g;
    }
    const double lq = std::log1p(-p);
    std::int64_t u = 2, v = 0;  // pair (v, u) with v < u, ids 1-based
    while (u <= static_cast<std::int64_t>(n)) {
        double r = rng.uniform();
        v += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-r) / lq));
        while (v >= u && u <= static_cast<std::int64_t>(n)) {
            v -= u - 1;
            ++u;
        }
        if (u <= static_cast<std::int64_t>(n)) g.add_edge(static_cast<vertex_t>(v), static_cast<vertex_t>(u));
    }
    return g;
}

/// Disjoint union; the i-th graph's ids are shifted past the previous ones.
inline MultiGraph disjoint_union(const std::vector<MultiGraph>& parts) {
    MultiGraph g;
    for (const auto& p : parts) {
        vertex_t off = g.n;
        g.n += p.n;
        for (const auto& e : p.edges) g.add_edge(e.u + off, e.v + off);
    }
    return g;
}

/// Renames vertices by a seeded random permutation.
inline MultiGraph shuffle_ids(const MultiGraph& g, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<vertex_t> perm(g.n + 1);
    std::iota(perm.begin(), perm.end(), vertex_t{0});
    for (std::size_t i = g.n; i > 1; --i) std::swap(perm[i], perm[1 + rng.below(i)]);
    MultiGraph out(g.n);
    for (const auto& e : g.edges) out.add_edge(perm[e.u], perm[e.v]);
    return out;
}

/// One C_n, or two disjoint C_{n/2}, with shuffled ids.
inline MultiGraph two_cycle(vertex_t n, bool two, std::uint64_t shuffle_seed) {
    if (two && n % 2 != 0) throw contract_error("two_cycle: n must be even for two cycles");
    MultiGraph g = two ? disjoint_union({cycle(n / 2), cycle(n / 2)}) : cycle(n);
    return shuffle_ids(g, shuffle_seed);
}

struct BlowupShape {
    vertex_t hub = 1;
    vertex_t paths = 0;       // k
    vertex_t path_length = 0; // L = ceil(log2 n)
    vertex_t band = 0;        // band width among the path ends
    std::vector<vertex_t> ends;  // z_1..z_k
};

/// Hub x with k paths of length L = ceil(log2 n) ending at z_1..z_k, plus
/// edges z_i z_j for |i - j| <= band, band = ceil(L^band_exp).
inline MultiGraph diameter_blowup(vertex_t n_target, double band_exp = 3.0, BlowupShape* shape = nullptr) {
    const double lg = std::log2(std::max<double>(n_target, 2));
    const vertex_t L = static_cast<vertex_t>(std::max(1.0, std::ceil(lg - 1e-12)));
    if (n_target < L + 1) throw contract_error("diameter_blowup: n_target too small for one path");
    const vertex_t k = (n_target - 1) / L;
    const vertex_t band = static_cast<vertex_t>(std::ceil(std::pow(static_cast<double>(L), band_exp) - 1e-9));
    MultiGraph g(1 + k * L);
    BlowupShape s;
    s.paths = k;
    s.path_length = L;
    s.band = band;
    for (vertex_t i = 0; i < k; ++i) {
        vertex_t prev = 1;
        for (vertex_t j = 0; j < L; ++j) {
            vertex_t v = 2 + i * L + j;
            g.add_edge(prev, v);
            prev = v;
        }
        s.ends.push_back(prev);
    }
    for (vertex_t i = 0; i < k; ++i)
        for (vertex_t j = i + 1; j < k && j - i <= band; ++j) g.add_edge(s.ends[i], s.ends[j]);
    if (shape) *shape = std::move(s);
    return g;
}

/// Each edge survives independently with probability p.
inline MultiGraph sample_edges(const MultiGraph& g, double p, std::uint64_t seed) {
    Rng rng(seed);
    MultiGraph out(g.n);
    for (const auto& e : g.edges)
        if (rng.bernoulli(p)) out.add_edge(e.u, e.v);
    return out;
}

}  // namespace pramcc::gen
