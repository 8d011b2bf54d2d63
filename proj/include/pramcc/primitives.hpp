#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <unordered_set>
#include <vector>

#include "ledger.hpp"
#include "profile.hpp"
#include "types.hpp"

namespace pramcc {

// The three charged primitives run exact sequential algorithms but are billed
// at their PRAM cost.

/// Moves the distinguished items of `array` into a dense output (length k <= 2k).
template <class T, class Pred>
std::vector<T> approximate_compaction(CostLedger& ledger, const std::vector<T>& array, Pred distinguished) {
    std::vector<T> out;
    for (const auto& x : array)
        if (distinguished(x)) out.push_back(x);
    ledger.charge(static_cast<std::uint64_t>(log_star(static_cast<double>(std::max<std::size_t>(array.size(), 2)))),
                  array.size());
    return out;
}

/// Stable sort by an integer key in [1, key_max] into a padded array: one empty
/// cell follows each run of equal keys, so the length is at most 2 * |items|.
template <class T, class Key>
std::vector<std::optional<T>> padded_sort(CostLedger& ledger, const std::vector<T>& items, std::uint64_t key_max, Key key) {
    std::vector<std::size_t> order(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
        std::uint64_t k = key(items[i]);
        if (k < 1 || k > key_max) throw contract_error("padded_sort: key out of range");
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(items[a]) < key(items[b]); });
    std::vector<std::optional<T>> out;
    out.reserve(2 * items.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        out.emplace_back(items[order[i]]);
        if (i + 1 == order.size() || key(items[order[i + 1]]) != key(items[order[i]])) out.emplace_back(std::nullopt);
    }
    std::uint64_t m = std::max<std::uint64_t>(items.size(), 2);
    ledger.charge(static_cast<std::uint64_t>(loglog(static_cast<double>(m))), m);
    return out;
}

inline std::uint64_t pair_key(vertex_t a, vertex_t b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

/// Distinct non-loop unordered pairs, first occurrence kept.
inline EdgeList perfect_hash_dedup(CostLedger& ledger, const EdgeList& edges) {
    EdgeList out;
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(edges.size() * 2 + 1);
    for (const auto& e : edges) {
        if (e.is_loop()) continue;
        if (seen.insert(pair_key(e.u, e.v)).second) out.push_back(e);
    }
    ledger.charge(static_cast<std::uint64_t>(log_star(static_cast<double>(std::max<std::size_t>(edges.size(), 2)))),
                  edges.size());
    return out;
}

}  // namespace pramcc
