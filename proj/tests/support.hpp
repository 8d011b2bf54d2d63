#pragma once

#include <pramcc/pramcc.hpp>

#include <string>
#include <vector>

namespace testing_support {

using namespace pramcc;

inline RunContext desk_ctx(std::size_t n, std::uint64_t seed = 1, WriteMode mode = WriteMode::seeded_random) {
    return RunContext(ConstantProfile::desk(n), WritePolicy{mode, seed}, seed);
}

inline MultiGraph graph(vertex_t n, std::initializer_list<std::pair<vertex_t, vertex_t>> es) {
    MultiGraph g(n);
    for (auto [u, v] : es) g.add_edge(u, v);
    return g;
}

/// Every root reachable from v lies in v's oracle component.
inline bool component_safe(const ParentForest& f, const std::vector<vertex_t>& oracle) {
    for (vertex_t v = 1; v <= f.n(); ++v)
        if (oracle[f.find_root(v)] != oracle[v]) return false;
    return true;
}

/// Checks forest invariants at every reported boundary.
struct BoundaryAudit {
    std::vector<vertex_t> oracle;
    std::size_t boundaries = 0;
    std::vector<std::string> violations;

    Observer observer() {
        return [this](const Boundary& b, const ParentForest& f) {
            ++boundaries;
            try {
                check_acyclic(f);
            } catch (const structural_violation&) {
                violations.push_back(std::string(b.name) + ": cycle");
                return;
            }
            if (!component_safe(f, oracle)) violations.push_back(std::string(b.name) + ": crosses components");
            if (b.flat_claim) {
                bool flat = b.scope ? is_flat(f, *b.scope) : is_flat(f);
                if (!flat) violations.push_back(std::string(b.name) + ": not flat");
            }
        };
    }
};

inline std::vector<vertex_t> iota_vertices(vertex_t n) {
    std::vector<vertex_t> v(n);
    for (vertex_t i = 0; i < n; ++i) v[i] = i + 1;
    return v;
}

}  // namespace testing_support
