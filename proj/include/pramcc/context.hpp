#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ledger.hpp"
#include "policy.hpp"
#include "profile.hpp"
#include "random.hpp"
#include "types.hpp"

namespace pramcc {

/// Maps a sparse set of vertex ids to dense local slots 0..k-1 without
/// clearing an n-sized array between uses.
class LocalIndex {
public:
    static constexpr std::uint32_t npos = ~std::uint32_t{0};

    void reset(std::size_t universe) {
        if (stamp_.size() < universe + 1) {
            stamp_.resize(universe + 1, 0);
            slot_.resize(universe + 1, 0);
        }
        if (++gen_ == 0) {
            std::fill(stamp_.begin(), stamp_.end(), 0);
            gen_ = 1;
        }
        members_.clear();
    }

    std::uint32_t add(vertex_t v) {
        if (stamp_[v] == gen_) return slot_[v];
        stamp_[v] = gen_;
        slot_[v] = static_cast<std::uint32_t>(members_.size());
        members_.push_back(v);
        return slot_[v];
    }

    std::uint32_t find(vertex_t v) const { return (v < stamp_.size() && stamp_[v] == gen_) ? slot_[v] : npos; }
    bool contains(vertex_t v) const { return find(v) != npos; }
    std::size_t size() const { return members_.size(); }
    const std::vector<vertex_t>& members() const { return members_; }
    vertex_t member(std::uint32_t slot) const { return members_[slot]; }

private:
    std::vector<std::uint32_t> stamp_;
    std::vector<std::uint32_t> slot_;
    std::vector<vertex_t> members_;
    std::uint32_t gen_ = 0;
};

class IndexPool {
public:
    class Handle {
    public:
        Handle(IndexPool* pool, std::unique_ptr<LocalIndex> idx) : pool_(pool), idx_(std::move(idx)) {}
        Handle(Handle&&) = default;
        Handle& operator=(Handle&&) = default;
        ~Handle() {
            if (idx_) pool_->free_.push_back(std::move(idx_));
        }
        LocalIndex& operator*() { return *idx_; }
        LocalIndex* operator->() { return idx_.get(); }

    private:
        IndexPool* pool_;
        std::unique_ptr<LocalIndex> idx_;
    };

    Handle borrow(std::size_t universe) {
        std::unique_ptr<LocalIndex> idx;
        if (free_.empty()) {
            idx = std::make_unique<LocalIndex>();
        } else {
            idx = std::move(free_.back());
            free_.pop_back();
        }
        idx->reset(universe);
        return Handle(this, std::move(idx));
    }

private:
    std::vector<std::unique_ptr<LocalIndex>> free_;
};

class ParentForest;

/// A subroutine boundary reported to an observer. When `flat_claim` is set the
/// forest is expected to have height <= 1 on `scope` (all vertices if null).
struct Boundary {
    std::string_view name;
    bool flat_claim = false;
    const std::vector<vertex_t>* scope = nullptr;
};

using Observer = std::function<void(const Boundary&, const ParentForest&)>;

/// Everything a run threads through the algorithms: constants, arbitration,
/// cost ledger and seed derivation.
class RunContext {
public:
    RunContext(ConstantProfile profile, WritePolicy policy, std::uint64_t master_seed)
        : profile(std::move(profile)), policy(policy), master_seed(master_seed), pool_(std::make_shared<IndexPool>()) {}

    ConstantProfile profile;
    WritePolicy policy;
    CostLedger ledger;
    std::uint64_t master_seed = 0;
    /// Perturbs every stream except the isolated ones.
    std::uint64_t salt = 0;
    Observer observer;

    /// A fresh stream per (name, invocation).
    Rng stream(std::string_view name) {
        auto& c = counters_[std::string(name)];
        return Rng(combine(combine(combine(master_seed, salt), hash_name(name)), c++));
    }

    /// Depends on (master seed, name) only.
    Rng isolated_stream(std::string_view name) const { return Rng(combine(master_seed ^ 0x1d8e4e27c47d124fULL, hash_name(name))); }

    Arbiter arbiter(std::size_t cells) { return Arbiter(policy, combine(combine(master_seed, salt), ++arb_counter_), cells); }
    std::uint64_t arbitration_salt() { return combine(combine(master_seed, salt), ++arb_counter_); }

    IndexPool::Handle local_index(std::size_t universe) { return pool_->borrow(universe); }

    /// A copy for an independent instance: own ledger, own streams.
    RunContext fork(std::size_t instance) const {
        RunContext c(profile, policy, master_seed);
        c.salt = combine(salt, 0xa5a5a5a5ULL + instance);
        c.ledger = ledger.child();
        c.observer = observer;
        c.counters_ = counters_;
        c.arb_counter_ = arb_counter_;
        c.pool_ = pool_;
        return c;
    }

    void notify(const Boundary& b, const ParentForest& f) const {
        if (observer) observer(b, f);
    }

private:
    std::unordered_map<std::string, std::uint64_t> counters_;
    std::uint64_t arb_counter_ = 0;
    std::shared_ptr<IndexPool> pool_;
};

}  // namespace pramcc
