#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ledger.hpp"
#include "random.hpp"

namespace pramcc {

enum class WriteMode { first_writer, last_writer, seeded_random };

/// Resolution rule for concurrent writes to one cell.
struct WritePolicy {
    WriteMode mode = WriteMode::seeded_random;
    std::uint64_t seed = 0;
};

inline std::string to_string(WriteMode m) {
    switch (m) {
        case WriteMode::first_writer: return "first-writer";
        case WriteMode::last_writer: return "last-writer";
        case WriteMode::seeded_random: return "seeded-random";
    }
    return "?";
}

inline WriteMode parse_write_mode(std::string_view s) {
    if (s == "first-writer" || s == "first") return WriteMode::first_writer;
    if (s == "last-writer" || s == "last") return WriteMode::last_writer;
    if (s == "seeded-random" || s == "random") return WriteMode::seeded_random;
    throw std::invalid_argument("unknown write policy: " + std::string(s));
}

/// Winner priority of `writer` on `cell`; the highest priority wins.
inline std::uint64_t write_priority(const WritePolicy& p, std::uint64_t salt, std::uint64_t cell, std::uint64_t writer) {
    switch (p.mode) {
        case WriteMode::first_writer: return ~writer;
        case WriteMode::last_writer: return writer;
        case WriteMode::seeded_random: return combine(combine(p.seed, salt), combine(cell, writer));
    }
    return writer;
}

/// Dense-cell arbitration for one synchronous step. Cells are small local
/// indices; writer ids must be distinct within a cell.
class Arbiter {
public:
    Arbiter(const WritePolicy& policy, std::uint64_t salt, std::size_t cells)
        : policy_(policy), salt_(salt), prio_(cells, 0), writer_(cells, 0), value_(cells, 0), has_(cells, 0) {}

    void write(std::size_t cell, std::uint64_t value, std::uint64_t writer) {
        std::uint64_t pr = write_priority(policy_, salt_, cell, writer);
        if (!has_[cell] || pr > prio_[cell] || (pr == prio_[cell] && writer > writer_[cell])) {
            has_[cell] = 1;
            prio_[cell] = pr;
            writer_[cell] = writer;
            value_[cell] = value;
        }
    }

    bool written(std::size_t cell) const { return has_[cell] != 0; }
    std::uint64_t value(std::size_t cell) const { return value_[cell]; }

private:
    WritePolicy policy_;
    std::uint64_t salt_;
    std::vector<std::uint64_t> prio_;
    std::vector<std::uint64_t> writer_;
    std::vector<std::uint64_t> value_;
    std::vector<std::uint8_t> has_;
};

struct CellWrite {
    std::uint64_t cell = 0;
    std::uint64_t value = 0;
    std::uint64_t writer = 0;
};

/// One CRCW step over arbitrary cell ids: exactly one value per written cell.
inline std::map<std::uint64_t, std::uint64_t> crcw_round(const std::vector<CellWrite>& writes, const WritePolicy& policy,
                                                         std::uint64_t salt = 0, CostLedger* ledger = nullptr) {
    struct Best {
        std::uint64_t prio, writer, value;
    };
    std::map<std::uint64_t, Best> best;
    for (const auto& w : writes) {
        std::uint64_t pr = write_priority(policy, salt, w.cell, w.writer);
        auto [it, fresh] = best.try_emplace(w.cell, Best{pr, w.writer, w.value});
        if (!fresh && (pr > it->second.prio || (pr == it->second.prio && w.writer > it->second.writer)))
            it->second = Best{pr, w.writer, w.value};
    }
    if (ledger) ledger->charge(1, writes.size());
    std::map<std::uint64_t, std::uint64_t> out;
    for (const auto& [cell, b] : best) out.emplace(cell, b.value);
    return out;
}

}  // namespace pramcc
