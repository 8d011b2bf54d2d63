#pragma once

#include <charconv>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "types.hpp"

namespace pramcc {

namespace detail {

inline std::vector<std::string_view> fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

inline std::uint64_t number(std::string_view s, std::size_t line) {
    std::uint64_t x = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || p != s.data() + s.size()) throw parse_error("not a non-negative integer: '" + std::string(s) + "'", line);
    return x;
}

}  // namespace detail

/// Edge list: `n m`, then m lines `u v` with 1-based ids. `#` comments out the
/// rest of a line; blank lines are skipped.
inline MultiGraph read_edge_list(std::istream& in) {
    MultiGraph g;
    std::string raw;
    std::size_t line = 0, expected = 0;
    bool header = false;
    while (std::getline(in, raw)) {
        ++line;
        std::string_view s(raw);
        if (auto h = s.find('#'); h != std::string_view::npos) s = s.substr(0, h);
        auto f = detail::fields(s);
        if (f.empty()) continue;
        if (f.size() != 2) throw parse_error("expected two fields, got " + std::to_string(f.size()), line);
        std::uint64_t a = detail::number(f[0], line), b = detail::number(f[1], line);
        if (!header) {
            if (a > 0xfffffffeULL) throw parse_error("vertex count too large", line);
            g.n = static_cast<vertex_t>(a);
            expected = static_cast<std::size_t>(b);
            g.edges.reserve(expected);
            header = true;
            continue;
        }
        if (g.edges.size() == expected) throw parse_error("more edges than announced (" + std::to_string(expected) + ")", line);
        if (a < 1 || a > g.n || b < 1 || b > g.n) throw parse_error("vertex id out of range [1, " + std::to_string(g.n) + "]", line);
        g.add_edge(static_cast<vertex_t>(a), static_cast<vertex_t>(b));
    }
    if (!header) throw parse_error("missing header `n m`", line == 0 ? 1 : line);
    if (g.edges.size() != expected)
        throw parse_error("announced " + std::to_string(expected) + " edges, found " + std::to_string(g.edges.size()), line);
    return g;
}

inline void write_edge_list(std::ostream& out, const MultiGraph& g) {
    out << g.n << ' ' << g.m() << '\n';
    for (const auto& e : g.edges) out << e.u << ' ' << e.v << '\n';
}

}  // namespace pramcc
