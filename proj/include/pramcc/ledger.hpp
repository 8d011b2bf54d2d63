#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "types.hpp"

namespace pramcc {

/// Synchronous-round (time) and processor-step (work) counters with a
/// per-label breakdown. Labels are "<prefix>/<innermost scope>", where the
/// prefix comes from phase scopes ("phase/3").
class CostLedger {
public:
    struct Entry {
        std::string label;
        std::uint64_t rounds = 0;
        std::uint64_t work = 0;
    };

    class Scope {
    public:
        Scope(CostLedger& l, std::string name, bool prefix) : ledger_(&l), prefix_(prefix) {
            if (prefix_)
                ledger_->prefix_.push_back(std::move(name));
            else
                ledger_->stack_.push_back(std::move(name));
            ledger_->refresh();
        }
        Scope(const Scope&) = delete;
        Scope& operator=(const Scope&) = delete;
        ~Scope() {
            if (prefix_)
                ledger_->prefix_.pop_back();
            else
                ledger_->stack_.pop_back();
            ledger_->refresh();
        }

    private:
        CostLedger* ledger_;
        bool prefix_;
    };

    CostLedger() { refresh(); }

    Scope scope(std::string name) { return Scope(*this, std::move(name), false); }
    Scope phase(std::string name) { return Scope(*this, std::move(name), true); }

    void set_limits(std::optional<std::uint64_t> round_limit, std::optional<std::uint64_t> work_limit) {
        round_limit_ = round_limit;
        work_limit_ = work_limit;
    }

    void charge(std::uint64_t rounds, std::uint64_t work) {
        rounds_ += rounds;
        work_ += work;
        entries_[current_].rounds += rounds;
        entries_[current_].work += work;
        if (round_limit_ && rounds_ > *round_limit_) throw budget_exceeded("round budget exceeded");
        if (work_limit_ && work_ > *work_limit_) throw budget_exceeded("work budget exceeded");
    }

    /// Adds another ledger's per-label totals under the same labels. When
    /// `rounds_too` is false only work is merged.
    void merge(const CostLedger& other, bool rounds_too) {
        for (const auto& e : other.entries_) {
            if (e.rounds == 0 && e.work == 0) continue;
            auto& mine = entries_[index_of(e.label)];
            mine.work += e.work;
            work_ += e.work;
            if (rounds_too) {
                mine.rounds += e.rounds;
                rounds_ += e.rounds;
            }
        }
        if (round_limit_ && rounds_ > *round_limit_) throw budget_exceeded("round budget exceeded");
        if (work_limit_ && work_ > *work_limit_) throw budget_exceeded("work budget exceeded");
    }

    std::uint64_t rounds() const { return rounds_; }
    std::uint64_t work() const { return work_; }
    const std::vector<Entry>& entries() const { return entries_; }
    const std::vector<std::string>& prefix() const { return prefix_; }
    const std::vector<std::string>& stack() const { return stack_; }

    /// A fresh ledger that labels its charges exactly like this one would.
    CostLedger child() const {
        CostLedger c;
        c.prefix_ = prefix_;
        c.stack_ = stack_;
        c.refresh();
        return c;
    }

    std::uint64_t rounds_with_prefix(const std::string& p) const {
        std::uint64_t r = 0;
        for (const auto& e : entries_)
            if (e.label.compare(0, p.size(), p) == 0) r += e.rounds;
        return r;
    }

    nlohmann::json to_json() const {
        nlohmann::json phases = nlohmann::json::array();
        for (const auto& e : entries_) {
            if (e.rounds == 0 && e.work == 0) continue;
            phases.push_back({{"label", e.label}, {"rounds", e.rounds}, {"work", e.work}});
        }
        return {{"rounds", rounds_}, {"work", work_}, {"phases", phases}};
    }

private:
    std::size_t index_of(const std::string& label) {
        auto it = index_.find(label);
        if (it != index_.end()) return it->second;
        index_.emplace(label, entries_.size());
        entries_.push_back(Entry{label, 0, 0});
        return entries_.size() - 1;
    }

    void refresh() {
        std::string label;
        for (const auto& p : prefix_) {
            label += p;
            label += '/';
        }
        label += stack_.empty() ? std::string("misc") : stack_.back();
        current_ = index_of(label);
    }

    std::uint64_t rounds_ = 0;
    std::uint64_t work_ = 0;
    std::vector<Entry> entries_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::string> prefix_;
    std::vector<std::string> stack_;
    std::size_t current_ = 0;
    std::optional<std::uint64_t> round_limit_;
    std::optional<std::uint64_t> work_limit_;
};

}  // namespace pramcc
