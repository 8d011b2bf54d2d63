#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "support.hpp"

using namespace pramcc;
using namespace testing_support;

TEST(CrcwRound, SoleWriterWins) {
    auto out = crcw_round({{9, 5, 1}}, WritePolicy{WriteMode::seeded_random, 3});
    EXPECT_EQ(out, (std::map<std::uint64_t, std::uint64_t>{{9, 5}}));
}

TEST(CrcwRound, FirstAndLastWriter) {
    std::vector<CellWrite> w{{9, 5, 1}, {9, 7, 2}};
    EXPECT_EQ(crcw_round(w, WritePolicy{WriteMode::first_writer, 0}).at(9), 5u);
    EXPECT_EQ(crcw_round(w, WritePolicy{WriteMode::last_writer, 0}).at(9), 7u);
}

TEST(CrcwRound, SeededRandomIsDeterministicAndVaries) {
    std::vector<CellWrite> w{{9, 5, 1}, {9, 7, 2}};
    std::set<std::uint64_t> seen;
    for (std::uint64_t s = 0; s < 64; ++s) {
        auto a = crcw_round(w, WritePolicy{WriteMode::seeded_random, s});
        auto b = crcw_round(w, WritePolicy{WriteMode::seeded_random, s});
        EXPECT_EQ(a, b);
        seen.insert(a.at(9));
    }
    EXPECT_EQ(seen.size(), 2u);
}

TEST(CrcwRound, ChargesOneRound) {
    CostLedger l;
    crcw_round({{1, 1, 1}, {1, 2, 2}, {3, 1, 3}}, WritePolicy{}, 0, &l);
    EXPECT_EQ(l.rounds(), 1u);
    EXPECT_EQ(l.work(), 3u);
}

TEST(Compaction, NoneDistinguished) {
    CostLedger l;
    std::vector<int> a(8, 0);
    EXPECT_TRUE(approximate_compaction(l, a, [](int x) { return x != 0; }).empty());
    EXPECT_EQ(l.work(), 8u);
}

TEST(Compaction, AllDistinguished) {
    CostLedger l;
    std::vector<int> a{1, 2, 3, 4, 5, 6, 7, 8};
    auto out = approximate_compaction(l, a, [](int) { return true; });
    EXPECT_LE(out.size(), 16u);
    EXPECT_EQ(std::multiset<int>(out.begin(), out.end()), std::multiset<int>(a.begin(), a.end()));
}

TEST(Compaction, SparseLargeArray) {
    CostLedger l;
    std::vector<std::uint32_t> a(1000000, 0);
    Rng rng(5);
    std::multiset<std::uint32_t> want;
    for (int i = 0; i < 1000; ++i) {
        auto pos = rng.below(a.size());
        while (a[pos]) pos = rng.below(a.size());
        a[pos] = i + 1;
        want.insert(i + 1);
    }
    auto out = approximate_compaction(l, a, [](std::uint32_t x) { return x != 0; });
    EXPECT_LE(out.size(), 2000u);
    EXPECT_EQ(std::multiset<std::uint32_t>(out.begin(), out.end()), want);
    EXPECT_EQ(l.rounds(), static_cast<std::uint64_t>(log_star(1e6)));
}

TEST(PaddedSort, Empty) {
    CostLedger l;
    EXPECT_TRUE(padded_sort(l, std::vector<int>{}, 4, [](int x) { return std::uint64_t(x); }).empty());
}

TEST(PaddedSort, SmallOrder) {
    CostLedger l;
    auto out = padded_sort(l, std::vector<int>{3, 1, 2}, 3, [](int x) { return std::uint64_t(x); });
    std::vector<int> keys;
    for (auto& c : out)
        if (c) keys.push_back(*c);
    EXPECT_EQ(keys, (std::vector<int>{1, 2, 3}));
    EXPECT_LE(out.size(), 6u);
}

TEST(PaddedSort, RandomMatchesReferenceAndIsStable) {
    CostLedger l;
    Rng rng(11);
    std::vector<std::pair<std::uint64_t, int>> items;
    for (int i = 0; i < 10000; ++i) items.emplace_back(1 + rng.below(500), i);
    auto out = padded_sort(l, items, 500, [](const auto& p) { return p.first; });
    std::vector<std::pair<std::uint64_t, int>> got;
    for (auto& c : out)
        if (c) got.push_back(*c);
    auto ref = items;
    std::stable_sort(ref.begin(), ref.end(), [](auto& a, auto& b) { return a.first < b.first; });
    EXPECT_EQ(got, ref);
    EXPECT_LE(out.size(), 2 * items.size());
    EXPECT_EQ(l.rounds(), static_cast<std::uint64_t>(loglog(10000)));
}

TEST(PaddedSort, KeyOutOfRange) {
    CostLedger l;
    EXPECT_THROW(padded_sort(l, std::vector<int>{0}, 4, [](int x) { return std::uint64_t(x); }), contract_error);
    EXPECT_THROW(padded_sort(l, std::vector<int>{5}, 4, [](int x) { return std::uint64_t(x); }), contract_error);
}

TEST(Dedup, RemovesLoopsAndParallels) {
    CostLedger l;
    auto out = perfect_hash_dedup(l, EdgeList{{1, 2, 0}, {2, 1, 1}, {1, 1, 2}});
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(pair_key(out[0].u, out[0].v), pair_key(1, 2));
}

TEST(Dedup, EmptyAndRandom) {
    CostLedger l;
    EXPECT_TRUE(perfect_hash_dedup(l, {}).empty());
    Rng rng(2);
    EdgeList e;
    std::set<std::uint64_t> ref;
    for (edge_id i = 0; i < 10000; ++i) {
        vertex_t u = 1 + rng.below(200), v = 1 + rng.below(200);
        e.push_back(Edge{u, v, i});
        if (u != v) ref.insert(pair_key(u, v));
    }
    auto out = perfect_hash_dedup(l, e);
    std::set<std::uint64_t> got;
    for (auto& x : out) got.insert(pair_key(x.u, x.v));
    EXPECT_EQ(got, ref);
    EXPECT_EQ(out.size(), ref.size());
}

TEST(BudgetedInstances, SingleValidCopy) {
    auto ctx = desk_ctx(8);
    int r = budgeted_instances(
        ctx, 1, 100, 100,
        [](RunContext& c, std::size_t) {
            c.ledger.charge(3, 10);
            return 42;
        },
        [](int) { return true; });
    EXPECT_EQ(r, 42);
    EXPECT_EQ(ctx.ledger.rounds(), 3u);
    EXPECT_EQ(ctx.ledger.work(), 10u);
}

TEST(BudgetedInstances, PicksOnlyValidCopy) {
    auto ctx = desk_ctx(8);
    std::size_t r = budgeted_instances(
        ctx, 3, 100, 100,
        [](RunContext& c, std::size_t i) {
            c.ledger.charge(i + 1, 5);
            return i;
        },
        [](std::size_t i) { return i == 1; });
    EXPECT_EQ(r, 1u);
    EXPECT_EQ(ctx.ledger.rounds(), 3u);   // longest instance
    EXPECT_EQ(ctx.ledger.work(), 15u);    // all instances
}

TEST(BudgetedInstances, AllOverBudget) {
    auto ctx = desk_ctx(8);
    try {
        budgeted_instances(
            ctx, 2, 0, 100,
            [](RunContext& c, std::size_t) {
                c.ledger.charge(1, 1);
                return 0;
            },
            [](int) { return true; });
        FAIL() << "expected retry_exhausted";
    } catch (const retry_exhausted& e) {
        ASSERT_EQ(e.diagnostics.size(), 2u);
        EXPECT_NE(e.diagnostics[0].reason.find("round"), std::string::npos);
    }
}

TEST(BudgetedInstances, ZeroCopiesIsContractError) {
    auto ctx = desk_ctx(8);
    EXPECT_THROW(budgeted_instances(
                     ctx, 0, 1, 1, [](RunContext&, std::size_t) { return 0; }, [](int) { return true; }),
                 contract_error);
}

TEST(Ledger, BreakdownSumsToTotals) {
    CostLedger l;
    {
        auto p = l.phase("phase/0");
        auto s = l.scope("stage1/matching");
        l.charge(2, 10);
    }
    {
        auto s = l.scope("stage3/ltz");
        l.charge(3, 7);
    }
    std::uint64_t r = 0, w = 0;
    bool found = false;
    for (auto& e : l.entries()) {
        r += e.rounds;
        w += e.work;
        found = found || e.label == "phase/0/stage1/matching";
    }
    EXPECT_TRUE(found);
    EXPECT_EQ(r, l.rounds());
    EXPECT_EQ(w, l.work());
    auto j = l.to_json();
    EXPECT_EQ(j["rounds"], 5);
    EXPECT_EQ(j["work"], 17);
    EXPECT_EQ(j["phases"].size(), 2u);
}

TEST(Profile, DeskDefaults) {
    auto p = ConstantProfile::desk(1 << 16);
    EXPECT_DOUBLE_EQ(std::exp2(p.log2_b(0)), 16.0);
    EXPECT_DOUBLE_EQ(p.phase_growth, 1.5);
    EXPECT_DOUBLE_EQ(std::exp2(p.log2_beta1), 4.0);
    EXPECT_DOUBLE_EQ(p.budget_growth, 1.5);
    EXPECT_DOUBLE_EQ(p.skeleton_high_threshold(4), 256.0);
    EXPECT_EQ(p.skeleton_table_size(4), 4096u);
    EXPECT_EQ(p.densify_rounds(4), 16);
    EXPECT_DOUBLE_EQ(p.filter_delete_prob, 1e-4);
    EXPECT_DOUBLE_EQ(p.stage3_sample_prob, 0.25);
    EXPECT_DOUBLE_EQ(p.small_graph_cutoff, 64);
    EXPECT_DOUBLE_EQ(p.aux_compaction_threshold, 32);
    EXPECT_EQ(p.phase_count, 4 * ceil_loglog(1 << 16));
    EXPECT_NEAR(p.level_up_prob(1), std::pow(4.0, -0.25), 1e-12);
}

TEST(Profile, BudgetLaw) {
    auto p = ConstantProfile::desk(1024);
    for (std::uint32_t l = 1; l < 8; ++l)
        EXPECT_NEAR(p.log2_beta(l), p.log2_beta1 * std::pow(p.budget_growth, l - 1.0), 1e-12);
}

TEST(Profile, LogHelpersHaveFloorOne) {
    EXPECT_EQ(loglog(2), 1);
    EXPECT_EQ(loglog(1 << 16), 4);
    EXPECT_EQ(log_star(1), 1);
    EXPECT_EQ(logloglog(16), 1);
}

TEST(Profile, ProbabilitiesInRange) {
    for (auto mode : {ProfileMode::desk, ProfileMode::paper}) {
        auto p = ConstantProfile::make(mode, 1 << 20);
        for (double q : {p.filter_delete_prob, p.matching_delete_prob, p.leader_prob, p.stage3_sample_prob, p.level_up_prob(1)}) {
            EXPECT_GT(q, 0.0);
            EXPECT_LE(q, 1.0);
        }
    }
}

TEST(Streams, IsolatedStreamIgnoresSaltAndCalls) {
    RunContext a(ConstantProfile::desk(8), WritePolicy{}, 99);
    RunContext b = a.fork(3);
    a.stream("x");
    EXPECT_EQ(a.isolated_stream("H1").next(), b.isolated_stream("H1").next());
    EXPECT_NE(a.stream("y").next(), b.stream("y").next());
}
