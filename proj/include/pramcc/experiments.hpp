#pragma once

// Experiment drivers shared by the CLI and the acceptance binary. Needs Eigen
// for the least-squares fits.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pramcc.hpp"

namespace pramcc::experiments {

/// Graph family used by the sweeps: "cycle", "path" or "expander" (8-regular).
inline MultiGraph family_graph(const std::string& family, vertex_t n, std::uint64_t seed) {
    if (family == "cycle") return gen::shuffle_ids(gen::cycle(n), seed);
    if (family == "path") return gen::shuffle_ids(gen::path(n), seed);
    if (family == "expander") return gen::random_regular(n, 8, seed);
    throw std::invalid_argument("unknown family: " + family);
}

struct SweepRow {
    std::string family;
    vertex_t n = 0;
    std::size_t m = 0;
    std::vector<std::uint64_t> seeds;
    std::vector<std::uint64_t> work, rounds;
    double mean_work = 0, mean_rounds = 0;
};

/// Full pipeline on family(2^k) for every k, one run per seed.
inline std::vector<SweepRow> sweep(const std::string& family, const std::vector<int>& log2_sizes,
                                   const std::vector<std::uint64_t>& seeds, ProfileMode mode = ProfileMode::desk,
                                   WriteMode policy = WriteMode::seeded_random) {
    std::vector<SweepRow> rows;
    for (int k : log2_sizes) {
        SweepRow row;
        row.family = family;
        row.n = vertex_t{1} << k;
        for (std::uint64_t s : seeds) {
            MultiGraph g = family_graph(family, row.n, s);
            row.m = g.m();
            RunContext ctx(ConstantProfile::make(mode, g.n), WritePolicy{policy, s}, s);
            ConnectivityReport rep;
            connectivity(ctx, g, &rep);
            row.seeds.push_back(s);
            row.work.push_back(rep.work);
            row.rounds.push_back(rep.rounds);
            row.mean_work += static_cast<double>(rep.work);
            row.mean_rounds += static_cast<double>(rep.rounds);
        }
        row.mean_work /= static_cast<double>(seeds.size());
        row.mean_rounds /= static_cast<double>(seeds.size());
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Rounds of the LTZ stand-in alone on P_{2^k}, ids shuffled.
inline std::uint64_t ltz_path_rounds(int k, std::uint64_t seed) {
    MultiGraph g = gen::shuffle_ids(gen::path(vertex_t{1} << k), seed);
    RunContext ctx(ConstantProfile::desk(g.n), WritePolicy{WriteMode::seeded_random, seed}, seed);
    ParentForest f(g.n);
    return ltz_connectivity(ctx, g.edges, f).rounds;
}

/// Least-squares polynomial fit y ~ sum c_j x^j. With `relative` each point is
/// weighted by 1/y, so the fit minimizes relative rather than absolute error.
struct PolyFit {
    std::vector<double> coef;
    std::vector<double> se;
    std::vector<double> t;
    double max_rel_residual = 0;  // max |y - yhat| / |y|
    double r2 = 0;
};

inline PolyFit fit_poly(const std::vector<double>& x, const std::vector<double>& y, int degree, bool relative = false) {
    const auto n = static_cast<Eigen::Index>(x.size());
    const Eigen::Index p = degree + 1;
    if (n <= p) throw std::invalid_argument("fit_poly: need more points than coefficients");
    Eigen::MatrixXd a(n, p);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double w = relative ? 1.0 / y[i] : 1.0;
        double v = 1;
        for (Eigen::Index j = 0; j < p; ++j, v *= x[i]) a(i, j) = v * w;
        b(i) = y[i] * w;
    }
    // Columns are scaled to unit norm so x^2 at 10^5 stays well conditioned.
    Eigen::VectorXd scale = a.colwise().norm().transpose();
    Eigen::MatrixXd as = a * scale.cwiseInverse().asDiagonal();
    auto qr = as.colPivHouseholderQr();
    Eigen::VectorXd cs = qr.solve(b);
    Eigen::VectorXd c = cs.cwiseQuotient(scale);
    Eigen::VectorXd resid = b - a * c;
    const double s2 = resid.squaredNorm() / static_cast<double>(n - p);
    Eigen::MatrixXd cov = s2 * (as.transpose() * as).inverse();

    PolyFit out;
    const double mean = b.mean();
    const double tss = (b.array() - mean).square().sum();
    out.r2 = tss > 0 ? 1.0 - resid.squaredNorm() / tss : 1.0;
    for (Eigen::Index j = 0; j < p; ++j) {
        out.coef.push_back(c(j));
        double se = std::sqrt(std::max(0.0, cov(j, j))) / scale(j);
        out.se.push_back(se);
        out.t.push_back(se > 0 ? c(j) / se : (c(j) == 0 ? 0.0 : INFINITY));
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        double yhat = 0, v = 1;
        for (Eigen::Index j = 0; j < p; ++j, v *= x[i]) yhat += c(j) * v;
        if (y[i] != 0) out.max_rel_residual = std::max(out.max_rel_residual, std::abs(y[i] - yhat) / std::abs(y[i]));
    }
    return out;
}

/// Two-sided 97.5% Student-t quantile for small degrees of freedom.
inline double t_critical_975(int df) {
    static const double table[] = {0, 12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
                                   2.201, 2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086};
    if (df < 1) throw std::invalid_argument("t_critical_975: df < 1");
    return df <= 20 ? table[df] : 1.96;
}

struct BlowupRow {
    vertex_t n = 0;
    vertex_t path_length = 0, paths = 0, band = 0;
    double p = 0;
    std::uint32_t original_diameter = 0;
    std::vector<std::uint64_t> seeds;
    std::vector<std::uint32_t> sampled_diameter;  // per seed, largest component
};

/// Builds the blowup graph, measures its diameter, then samples at p = 1/L.
inline BlowupRow diameter_blowup_experiment(vertex_t n_target, double band_exp, const std::vector<std::uint64_t>& seeds) {
    gen::BlowupShape shape;
    MultiGraph g = gen::diameter_blowup(n_target, band_exp, &shape);
    BlowupRow row;
    row.n = g.n;
    row.path_length = shape.path_length;
    row.paths = shape.paths;
    row.band = shape.band;
    row.p = 1.0 / shape.path_length;
    row.original_diameter = max_component_diameter(g);
    for (std::uint64_t s : seeds) {
        row.seeds.push_back(s);
        row.sampled_diameter.push_back(max_component_diameter(gen::sample_edges(g, row.p, s)));
    }
    return row;
}

}  // namespace pramcc::experiments
