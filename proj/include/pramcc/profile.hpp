#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pramcc {

/// log* with base-2 logs, at least 1.
inline int log_star(double n) {
    int k = 0;
    while (n > 1.0) {
        n = std::log2(n);
        ++k;
    }
    return std::max(k, 1);
}

inline int floor_log2(double n) { return n < 2.0 ? 1 : std::max(1, static_cast<int>(std::floor(std::log2(n)))); }
inline int ceil_log2(double n) { return n < 2.0 ? 1 : std::max(1, static_cast<int>(std::ceil(std::log2(n) - 1e-12))); }

/// floor(log2 log2 n), at least 1.
inline int loglog(double n) {
    if (n < 4.0) return 1;
    return std::max(1, static_cast<int>(std::floor(std::log2(std::log2(n)))));
}

inline int logloglog(double n) {
    if (n < 16.0) return 1;
    return std::max(1, static_cast<int>(std::floor(std::log2(std::log2(std::log2(n))))));
}

inline int ceil_loglog(double n) {
    if (n < 4.0) return 1;
    return std::max(1, static_cast<int>(std::ceil(std::log2(std::log2(n)) - 1e-12)));
}

/// 2^x as an integer, at least 1 and saturating at 2^62.
inline std::uint64_t capped_pow2(double x) {
    if (!(x > 0.0)) return 1;
    if (x >= 62.0) return std::uint64_t{1} << 62;
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(std::exp2(x) - 1e-9)));
}

enum class ProfileMode { paper, desk };

inline std::string to_string(ProfileMode m) { return m == ProfileMode::paper ? "paper" : "desk"; }

inline ProfileMode parse_profile_mode(std::string_view s) {
    if (s == "paper") return ProfileMode::paper;
    if (s == "desk") return ProfileMode::desk;
    throw std::invalid_argument("unknown profile: " + std::string(s));
}

/// Every tunable constant of the pipeline. Quantities that are powers of b or
/// of log n are stored as base-2 exponents so the literal values stay finite.
struct ConstantProfile {
    ProfileMode mode = ProfileMode::desk;
    std::size_t n = 1;

    double filter_delete_prob = 1e-4;
    double matching_delete_prob = 0.5;
    int reduce_inner_k = 1;
    int reduce_outer_k = 2;

    double skeleton_high_exp = 2;    // high iff occupancy > b^high
    double skeleton_table_exp = 3;   // skeleton tables hold b^table cells
    double skeleton_sample_exp = 1;  // high-high edges survive w.p. b^-sample
    double log2_beta1 = 2;
    double budget_growth = 1.5;
    double level_up_exp = 0.25;  // level-up probability beta^-exp
    double densify_rounds_factor = 4;
    int densify_shortcut_reps = 2;
    int densify_ltz_rounds = 8;
    double head_threshold_factor = 2;
    double leader_prob = 0.5;
    int max_level = 48;

    double stage3_sample_prob = 0.25;
    double small_graph_cutoff = 64;

    double log2_b0 = 4;
    double phase_growth = 1.5;
    double aux_compaction_threshold = 32;
    double interweave_rounds_factor = 2;
    int phase_count = 8;
    int interweave_ltz_rounds = 8;
    double interweave_wake_factor = 3;
    int instance_copies = 1;
    double instance_round_factor = 64;
    double instance_work_factor = 64;

    double spectral_C = 4;

    static ConstantProfile desk(std::size_t n) {
        ConstantProfile p;
        p.mode = ProfileMode::desk;
        p.n = std::max<std::size_t>(n, 2);
        const double nn = static_cast<double>(p.n);
        const int ll = loglog(nn);
        p.reduce_inner_k = logloglog(nn);
        // Fixed: with filter deletions at 1e-4 an n-dependent k makes Reduce
        // cost Theta(m k) instead of the geometric decay the literal k relies on.
        p.reduce_outer_k = 12;
        p.densify_shortcut_reps = 2 * logloglog(nn);
        p.densify_ltz_rounds = 2 * ll;
        p.interweave_ltz_rounds = 2 * ll;
        p.phase_count = 4 * ceil_loglog(nn);
        return p;
    }

    /// Literal constants. Only tiny inputs finish in reasonable time.
    static ConstantProfile paper(std::size_t n) {
        ConstantProfile p;
        p.mode = ProfileMode::paper;
        p.n = std::max<std::size_t>(n, 2);
        const double nn = static_cast<double>(p.n);
        const double lg = std::max(1.0, std::log2(nn));
        const double log2lg = std::max(1.0, std::log2(lg));
        const int ll = loglog(nn);
        const int lll = logloglog(nn);
        p.filter_delete_prob = 1e-4;
        p.matching_delete_prob = 0.5;
        p.reduce_inner_k = 1000 * lll;
        p.reduce_outer_k = 1000000 * ll;
        p.skeleton_high_exp = 8;
        p.skeleton_table_exp = 9;
        p.skeleton_sample_exp = 1;
        p.log2_beta1 = 80 * log2lg;
        p.budget_growth = 1.01;
        p.level_up_exp = 0.06;
        p.densify_rounds_factor = 20;
        p.densify_shortcut_reps = 2 * lll;
        p.densify_ltz_rounds = 100 * ll;
        p.head_threshold_factor = 2;
        p.leader_prob = 0.5;
        p.max_level = 4096;
        p.stage3_sample_prob = std::pow(lg, -7.0);
        p.small_graph_cutoff = std::pow(nn, 0.1);
        p.log2_b0 = 100 * log2lg;
        p.phase_growth = 1.1;
        p.aux_compaction_threshold = std::pow(lg, 90.0);
        p.interweave_rounds_factor = 1e6;
        p.phase_count = 10 * ll;
        p.interweave_ltz_rounds = 10000 * ll;
        p.interweave_wake_factor = 9;
        p.instance_copies = ceil_log2(nn);
        p.instance_round_factor = 1e9;
        p.instance_work_factor = 1e9;
        return p;
    }

    static ConstantProfile make(ProfileMode m, std::size_t n) { return m == ProfileMode::paper ? paper(n) : desk(n); }

    int ll() const { return loglog(static_cast<double>(n)); }

    double log2_b(int phase) const { return log2_b0 * std::pow(phase_growth, phase); }

    std::uint64_t skeleton_table_size(double log2b) const { return capped_pow2(skeleton_table_exp * log2b); }
    double skeleton_high_threshold(double log2b) const { return std::exp2(std::min(1000.0, skeleton_high_exp * log2b)); }
    double skeleton_sample_prob(double log2b) const { return std::exp2(-skeleton_sample_exp * log2b); }
    double head_threshold(double log2b) const { return head_threshold_factor * std::exp2(std::min(1000.0, log2b)); }

    int densify_rounds(double log2b) const {
        return std::max(1, static_cast<int>(std::ceil(densify_rounds_factor * log2b - 1e-9)));
    }

    double log2_beta(std::uint32_t level) const { return log2_beta1 * std::pow(budget_growth, static_cast<double>(level) - 1.0); }
    /// |H(v)|: one of sqrt(beta) tables of size sqrt(beta).
    std::uint64_t table_size(std::uint32_t level) const { return capped_pow2(log2_beta(level) / 2.0); }
    double level_up_prob(std::uint32_t budget_level) const { return std::exp2(-level_up_exp * log2_beta(budget_level)); }

    int interweave_rounds(int phase) const {
        double r = interweave_rounds_factor * std::pow(phase_growth, phase) * ll();
        return std::max(1, static_cast<int>(std::ceil(r - 1e-9)));
    }
    int interweave_shortcuts(int phase) const { return phase + 2 * ll(); }
    int sparse_wake_depth(double log2b) const {
        return static_cast<int>(std::ceil(std::min(4096.0, skeleton_table_exp * log2b))) + 1;
    }
    int interweave_wake_depth(double log2b) const {
        return static_cast<int>(std::ceil(std::min(4096.0, interweave_wake_factor * log2b))) + 1;
    }
};

}  // namespace pramcc
