#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pramcc {

/// Vertex ids are 1-based; id 0 is never a vertex.
using vertex_t = std::uint32_t;
using edge_id = std::uint32_t;

struct Edge {
    vertex_t u = 0;
    vertex_t v = 0;
    edge_id origin = 0;  ///< id of the input edge this copy descends from

    bool is_loop() const { return u == v; }
};

using EdgeList = std::vector<Edge>;

struct MultiGraph {
    vertex_t n = 0;
    EdgeList edges;

    MultiGraph() = default;
    explicit MultiGraph(vertex_t vertices) : n(vertices) {}

    edge_id add_edge(vertex_t u, vertex_t v) {
        auto id = static_cast<edge_id>(edges.size());
        edges.push_back(Edge{u, v, id});
        return id;
    }

    std::size_t m() const { return edges.size(); }

    /// Degree with a self-loop counted once.
    std::vector<std::size_t> degrees() const {
        std::vector<std::size_t> d(n + 1, 0);
        for (const auto& e : edges) {
            ++d[e.u];
            if (e.v != e.u) ++d[e.v];
        }
        return d;
    }
};

class contract_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An internal invariant was broken (cycle in the forest, level decrease, ...).
class structural_violation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A randomized step did not finish within its budget.
class instance_failed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class budget_exceeded : public instance_failed {
public:
    using instance_failed::instance_failed;
};

struct InstanceDiagnostic {
    std::size_t index = 0;
    std::uint64_t rounds = 0;
    std::uint64_t work = 0;
    std::string reason;
};

class retry_exhausted : public std::runtime_error {
public:
    retry_exhausted(const std::string& what, std::vector<InstanceDiagnostic> diag)
        : std::runtime_error(what), diagnostics(std::move(diag)) {}
    std::vector<InstanceDiagnostic> diagnostics;
};

class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& what, std::size_t line_no)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
    std::size_t line;
};

/// The requested input is beyond what the routine can handle.
class capability_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline void validate_graph(const MultiGraph& g) {
    for (const auto& e : g.edges) {
        if (e.u == 0 || e.v == 0 || e.u > g.n || e.v > g.n)
            throw contract_error("edge endpoint out of range [1, n]");
    }
}

}  // namespace pramcc
