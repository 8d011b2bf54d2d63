#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "auxiliary.hpp"
#include "context.hpp"
#include "densify.hpp"
#include "forest.hpp"
#include "instances.hpp"
#include "primitives.hpp"
#include "stage1.hpp"
#include "stage3.hpp"
#include "types.hpp"

namespace pramcc {

/// Everything a run of the unknown-gap driver carries between phases.
struct OrchestratorState {
    std::vector<vertex_t> vg;      // V(G'): roots after Reduce
    EdgeList gp;                   // E(G'), on V(G') at the time of Reduce
    AuxiliaryArray aux;
    EdgeList h1, h2;
    std::vector<edge_id> h1_origins;  // sorted
    std::vector<vertex_t> active;  // active roots of V(G')
    bool remain_called = false;
    std::size_t remain_edges = 0;  // |E_remain| after dedup
    bool fallback_used = false;
};

struct PhaseOutcome {
    bool done = false;          // the phase signalled completion
    EdgeList e_filter;
    bool h1_contracted = false;
    std::size_t active_before = 0, active_after = 0;
};

struct ConnectivityReport {
    int phases_run = 0;
    double final_log2_b = 0;
    std::size_t components = 0;
    std::uint64_t rounds = 0;
    std::uint64_t work = 0;
    std::size_t remain_edges = 0;
    std::size_t vg_size = 0;
    bool remain_called = false;
    bool fallback_used = false;
};

/// Edges of `edges` whose origin is in the sorted set, or not in it.
inline EdgeList select_by_origin(const EdgeList& edges, const std::vector<edge_id>& sorted_origins, bool member) {
    EdgeList out;
    for (const auto& e : edges)
        if (std::binary_search(sorted_origins.begin(), sorted_origins.end(), e.origin) == member) out.push_back(e);
    return out;
}

/// Remain: solve what H1 has not covered. E_remain is chosen by origin id.
inline void remain(RunContext& ctx, OrchestratorState& st, ParentForest& f) {
    auto scope = ctx.ledger.scope("orchestrator/remain");
    EdgeList er = select_by_origin(st.gp, st.h1_origins, false);
    ctx.ledger.charge(1, st.gp.size());
    // E(G') is altered through full root lookups so no tree height matters.
    for (auto& e : er) {
        e.u = f.find_root(e.u);
        e.v = f.find_root(e.v);
    }
    ctx.ledger.charge(1, er.size());
    er = perfect_hash_dedup(ctx.ledger, er);
    st.remain_called = true;
    st.remain_edges = er.size();
    ltz_connectivity(ctx, std::move(er), f);
    flatten(ctx, st.vg, f);
}

/// One phase. Steps 2-3 run as budgeted instances on private copies of the
/// forest and H1; if an instance contracts H1 to loops its forest is adopted
/// and Remain finishes the job. Otherwise the phase filters E_filter.
inline PhaseOutcome interweave(RunContext& ctx, OrchestratorState& st, EdgeList e_filter, int phase, ParentForest& f) {
    const auto& prof = ctx.profile;
    const double log2b = prof.log2_b(phase);
    PhaseOutcome out;
    out.active_before = st.active.size();

    struct Attempt {
        ParentForest forest;
        EdgeList h1;
    };
    const std::uint64_t sz = st.vg.size() + st.gp.size() + st.h1.size() + 1;
    const std::uint64_t round_budget = static_cast<std::uint64_t>(
        prof.instance_round_factor * (prof.densify_rounds(log2b) + prof.densify_ltz_rounds + prof.interweave_ltz_rounds + 8));
    const std::uint64_t work_budget = static_cast<std::uint64_t>(prof.instance_work_factor * static_cast<double>(sz) *
                                                                 (prof.densify_rounds(log2b) + 4));
    std::optional<Attempt> adopted;
    try {
        auto scope = ctx.ledger.scope("orchestrator/increase_h1");
        adopted = budgeted_instances(
            ctx, static_cast<std::size_t>(prof.instance_copies), round_budget, work_budget,
            [&](RunContext& c, std::size_t) {
                Attempt a{f, st.h1};
                increase_sparse(c, st.aux, st.vg, st.active, a.h1, st.h2, log2b, a.forest);
                SkeletonGraph h;
                h.vertices = st.vg;
                h.edges = std::move(a.h1);
                for (int r = 0; r < prof.densify_rounds(log2b); ++r) {
                    expand_maxlink(c, h, a.forest, true);
                    c.ledger.charge(1, h.edges.size());
                    if (std::all_of(h.edges.begin(), h.edges.end(), [](const Edge& e) { return e.is_loop(); })) break;
                }
                ltz_connectivity(c, h.edges, a.forest, static_cast<std::uint64_t>(prof.interweave_ltz_rounds));
                alter_in_place(c, h.edges, a.forest, true);
                a.h1 = std::move(h.edges);
                return a;
            },
            [](const Attempt& a) {
                return std::all_of(a.h1.begin(), a.h1.end(), [](const Edge& e) { return e.is_loop(); });
            });
    } catch (const retry_exhausted&) {
        adopted.reset();
    }
    if (adopted) {
        f = std::move(adopted->forest);
        st.h1 = std::move(adopted->h1);
        out.h1_contracted = true;
        remain(ctx, st, f);
        out.done = true;
        ctx.notify(Boundary{"phase", true, &st.vg}, f);
        return out;
    }

    // Steps 6-7.
    const int rounds = prof.interweave_rounds(phase);
    Rng rng = ctx.stream("orchestrator/interweave");
    auto filter_rounds = [&](EdgeList& edges, bool with_shortcut) {
        for (int r = 0; r < rounds; ++r) {
            if (edges.empty()) {
                std::uint64_t idle = static_cast<std::uint64_t>(rounds - r);
                detail::charge_idle_matchings(ctx, idle);
                ctx.ledger.charge((with_shortcut ? 3 : 2) * idle, with_shortcut ? idle * st.vg.size() : 0);
                break;
            }
            matching(ctx, edges, f);
            if (with_shortcut) shortcut(ctx, st.vg, f);
            alter_in_place(ctx, edges, f, false);
            std::size_t keep = 0;
            for (const auto& e : edges)
                if (!rng.bernoulli(prof.filter_delete_prob)) edges[keep++] = e;
            ctx.ledger.charge(1, edges.size());
            edges.resize(keep);
        }
    };
    {
        auto scope = ctx.ledger.scope("orchestrator/filter");
        filter_rounds(e_filter, false);
        for (int r = 0; r < prof.interweave_shortcuts(phase); ++r) shortcut(ctx, st.vg, f);
    }
    alter_in_place(ctx, e_filter, f, false);

    // Step 8.
    EdgeList ep;
    {
        auto scope = ctx.ledger.scope("orchestrator/extract_low");
        auto in_filter = ctx.local_index(f.n());
        for (const auto& e : e_filter) {
            in_filter->add(e.u);
            in_filter->add(e.v);
        }
        ep = low_edge_extract(
            ctx, st.aux, [&](vertex_t u) { return !in_filter->contains(f.parent[u]); }, prof.interweave_wake_depth(log2b));
        alter_in_place(ctx, ep, f, false);
    }
    // Step 9.
    {
        auto scope = ctx.ledger.scope("orchestrator/low_rounds");
        filter_rounds(ep, true);
    }

    // Step 10.
    {
        auto vf = detail::endpoints(ctx, e_filter, f.n());
        reverse(ctx, vf, st.h2, f, st.vg);
        alter_in_place(ctx, e_filter, f, false);
        alter_in_place(ctx, ep, f, false);
    }

    // Active roots: ends of surviving edges.
    {
        auto act = ctx.local_index(f.n());
        for (const auto* es : {&e_filter, &ep})
            for (const auto& e : *es) {
                act->add(f.find_root(e.u));
                act->add(f.find_root(e.v));
            }
        st.active = act->members();
        std::sort(st.active.begin(), st.active.end());
        ctx.ledger.charge(1, e_filter.size() + ep.size());
    }
    out.active_after = st.active.size();
    out.e_filter = std::move(e_filter);
    out.done = out.e_filter.empty();
    ctx.notify(Boundary{"phase", true, &st.vg}, f);
    return out;
}

struct ConnectivityOptions {
    /// Called after every phase with the phase index and outcome.
    std::function<void(int, const PhaseOutcome&, const OrchestratorState&)> on_phase;
};

/// Connected components of g. On return v.p == w.p iff v and w are connected,
/// and every tree is flat.
inline ParentForest connectivity(RunContext& ctx, const MultiGraph& g, ConnectivityReport* report = nullptr,
                                 const ConnectivityOptions& opts = {}) {
    validate_graph(g);
    ParentForest f(g.n);
    OrchestratorState st;
    const auto& prof = ctx.profile;

    std::vector<vertex_t> all(g.n);
    for (vertex_t v = 1; v <= g.n; ++v) all[v - 1] = v;
    st.gp = g.edges;
    alter_in_place(ctx, st.gp, f, false);  // drops input loops
    st.vg = reduce(ctx, all, st.gp, prof.reduce_outer_k, f);
    st.aux = build_auxiliary(ctx, g.n, st.gp);

    // H1 and H2 are decided per origin by isolated coins.
    {
        auto scope = ctx.ledger.scope("orchestrator/sample");
        const std::uint64_t s1 = ctx.isolated_stream("H1").next();
        const std::uint64_t s2 = ctx.isolated_stream("H2").next();
        auto coin = [&](std::uint64_t seed, edge_id id) {
            return static_cast<double>(combine(seed, id) >> 11) * 0x1.0p-53 < prof.stage3_sample_prob;
        };
        for (const auto& e : st.gp) {
            if (coin(s1, e.origin)) {
                st.h1.push_back(e);
                st.h1_origins.push_back(e.origin);
            }
            if (coin(s2, e.origin)) st.h2.push_back(e);
        }
        std::sort(st.h1_origins.begin(), st.h1_origins.end());
        ctx.ledger.charge(1, 2 * st.gp.size());
    }
    st.active = st.vg;

    EdgeList e_filter = st.gp;
    int phases_run = 0;
    double final_log2b = prof.log2_b(0);
    bool finished = st.gp.empty();
    for (int i = 0; i < prof.phase_count && !finished; ++i) {
        auto scope = ctx.ledger.phase("phase/" + std::to_string(i));
        PhaseOutcome o = interweave(ctx, st, std::move(e_filter), i, f);
        ++phases_run;
        final_log2b = prof.log2_b(i);
        if (opts.on_phase) opts.on_phase(i, o, st);
        finished = o.done;
        e_filter = std::move(o.e_filter);
    }

    // Global shortcut, then a linear check against E(G); a leftover edge
    // (phase exhaustion, or an edge the filter deleted) goes through Remain.
    {
        auto scope = ctx.ledger.scope("orchestrator/final");
        while (!is_flat(f)) shortcut_all(ctx, f);
        bool clean = true;
        for (const auto& e : g.edges)
            if (f.parent[e.u] != f.parent[e.v]) {
                clean = false;
                break;
            }
        ctx.ledger.charge(1, g.edges.size());
        if (!clean) {
            st.fallback_used = true;
            // Empty H1 so that every input edge takes part; st.remain_edges
            // keeps describing the in-phase Remain.
            OrchestratorState fb;
            fb.vg = st.vg;
            fb.gp = g.edges;
            remain(ctx, fb, f);
            st.remain_called = true;
            while (!is_flat(f)) shortcut_all(ctx, f);
        }
    }
    ctx.notify(Boundary{"end", true, nullptr}, f);

    if (report) {
        report->phases_run = phases_run;
        report->final_log2_b = final_log2b;
        report->components = 0;
        for (vertex_t v = 1; v <= g.n; ++v)
            if (f.is_root(v)) ++report->components;
        report->rounds = ctx.ledger.rounds();
        report->work = ctx.ledger.work();
        report->remain_edges = st.remain_edges;
        report->vg_size = st.vg.size();
        report->remain_called = st.remain_called;
        report->fallback_used = st.fallback_used;
    }
    return f;
}

}  // namespace pramcc
