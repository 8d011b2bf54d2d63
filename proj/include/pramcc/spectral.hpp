#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <vector>

#include "oracle.hpp"
#include "random.hpp"
#include "types.hpp"

namespace pramcc::spectral {

/// Normalized Laplacian, vertex v in row v-1. A self-loop adds 1 to w(v,v) and
/// counts once toward deg(v); isolated vertices get a zero row.
inline Eigen::MatrixXd normalized_laplacian(const MultiGraph& g) {
    const auto deg = g.degrees();
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(g.n, g.n);
    for (const auto& e : g.edges) {
        w(e.u - 1, e.v - 1) += 1;
        if (e.u != e.v) w(e.v - 1, e.u - 1) += 1;
    }
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(g.n, g.n);
    for (vertex_t i = 0; i < g.n; ++i) {
        if (deg[i + 1] == 0) continue;
        for (vertex_t j = 0; j < g.n; ++j) {
            if (w(i, j) == 0 || deg[j + 1] == 0) continue;
            lap(i, j) = -w(i, j) / std::sqrt(static_cast<double>(deg[i + 1]) * static_cast<double>(deg[j + 1]));
        }
        lap(i, i) += 1.0;
    }
    return lap;
}

inline Eigen::VectorXd eigenvalues(const Eigen::MatrixXd& sym) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

/// Induced subgraph on `vs`, renumbered 1..|vs| in the given order.
inline MultiGraph induced(const MultiGraph& g, const std::vector<vertex_t>& vs) {
    std::vector<vertex_t> id(g.n + 1, 0);
    for (std::size_t i = 0; i < vs.size(); ++i) id[vs[i]] = static_cast<vertex_t>(i + 1);
    MultiGraph h(static_cast<vertex_t>(vs.size()));
    for (const auto& e : g.edges)
        if (id[e.u] && id[e.v]) h.add_edge(id[e.u], id[e.v]);
    return h;
}

/// Vertex lists of the components, in order of smallest id.
inline std::vector<std::vector<vertex_t>> components(const MultiGraph& g) {
    auto label = oracle_components(g);
    std::map<vertex_t, std::vector<vertex_t>> by;
    for (vertex_t v = 1; v <= g.n; ++v) by[label[v]].push_back(v);
    std::vector<std::vector<vertex_t>> out;
    for (auto& [k, vs] : by) out.push_back(std::move(vs));
    return out;
}

struct GapResult {
    double gap = 0;
    bool converged = true;
    double residual = 0;
};

/// Second smallest eigenvalue of a connected graph's normalized Laplacian by
/// Lanczos on I + D^-1/2 A D^-1/2 with the sqrt(deg) vector deflated and full
/// reorthogonalization.
inline GapResult lanczos_gap(const MultiGraph& g, double tol = 1e-6, int max_iter = 400) {
    const vertex_t n = g.n;
    const auto deg = g.degrees();
    Adjacency adj(g);
    Eigen::VectorXd s(n);
    for (vertex_t v = 0; v < n; ++v) s(v) = std::sqrt(static_cast<double>(deg[v + 1]));
    s.normalize();
    auto apply = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd y = x;  // identity part
        for (vertex_t v = 1; v <= n; ++v) {
            if (deg[v] == 0) {  // zero Laplacian row
                y(v - 1) += x(v - 1);
                continue;
            }
            double acc = 0;
            adj.for_each(v, [&](vertex_t w) { acc += x(w - 1) / std::sqrt(static_cast<double>(deg[w])); });
            y(v - 1) += acc / std::sqrt(static_cast<double>(deg[v]));
        }
        y -= s * s.dot(y);
        return y;
    };
    const int m = std::min<int>(max_iter, static_cast<int>(n) - 1);
    Eigen::MatrixXd q(n, m + 1);
    std::vector<double> alpha, beta;
    Rng rng(0x5eedULL + n);
    Eigen::VectorXd v(n);
    for (vertex_t i = 0; i < n; ++i) v(i) = rng.uniform() - 0.5;
    v -= s * s.dot(v);
    v.normalize();
    q.col(0) = v;
    GapResult res;
    double prev = -1;
    for (int j = 0; j < m; ++j) {
        Eigen::VectorXd w = apply(q.col(j));
        double a = q.col(j).dot(w);
        alpha.push_back(a);
        w -= q.leftCols(j + 1) * (q.leftCols(j + 1).transpose() * w);
        w -= q.leftCols(j + 1) * (q.leftCols(j + 1).transpose() * w);
        double b = w.norm();
        int k = j + 1;
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
        for (int i = 0; i < k; ++i) {
            t(i, i) = alpha[i];
            if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        double top = es.eigenvalues()(k - 1);
        double resid = std::abs(b * es.eigenvectors()(k - 1, k - 1));
        res.gap = 2.0 - top;
        res.residual = resid;
        if (resid < tol * std::max(1.0, std::abs(top)) || b < 1e-12) {
            res.converged = true;
            return res;
        }
        if (prev >= 0 && std::abs(top - prev) < 1e-14 && resid < 1e-4) {
            res.converged = true;
            return res;
        }
        prev = top;
        beta.push_back(b);
        q.col(j + 1) = w / b;
    }
    res.converged = res.residual < tol;
    return res;
}

/// Shift-invert Lanczos on (L + sigma I)^-1 with the kernel deflated. Used when
/// the gap is too small for the plain iteration to resolve, as on long cycles.
/// Needs a sparse LDLT of L, so it suits graphs with little fill-in.
inline GapResult shift_invert_gap(const MultiGraph& g, double tol = 1e-10, int max_iter = 200) {
    const vertex_t n = g.n;
    const auto deg = g.degrees();
    const double sigma = 1e-9;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(2 * g.m() + n);
    for (vertex_t v = 1; v <= n; ++v) trip.emplace_back(v - 1, v - 1, (deg[v] ? 1.0 : 0.0) + sigma);
    for (const auto& e : g.edges) {
        const double w = -1.0 / std::sqrt(static_cast<double>(deg[e.u]) * static_cast<double>(deg[e.v]));
        trip.emplace_back(e.u - 1, e.v - 1, w);
        if (e.u != e.v) trip.emplace_back(e.v - 1, e.u - 1, w);
    }
    Eigen::SparseMatrix<double> lap(n, n);
    lap.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(lap);
    GapResult res;
    if (ldlt.info() != Eigen::Success) {
        res.converged = false;
        return res;
    }
    Eigen::VectorXd s(n);
    for (vertex_t v = 0; v < n; ++v) s(v) = std::sqrt(static_cast<double>(deg[v + 1]));
    s.normalize();
    auto deflate = [&](Eigen::VectorXd x) {
        x -= s * s.dot(x);
        return x;
    };
    const int m = std::min<int>(max_iter, static_cast<int>(n) - 1);
    Eigen::MatrixXd q(n, m + 1);
    std::vector<double> alpha, beta;
    Rng rng(0x51f7ULL + n);
    Eigen::VectorXd v(n);
    for (vertex_t i = 0; i < n; ++i) v(i) = rng.uniform() - 0.5;
    q.col(0) = deflate(v).normalized();
    for (int j = 0; j < m; ++j) {
        Eigen::VectorXd w = deflate(ldlt.solve(Eigen::VectorXd(q.col(j))));
        alpha.push_back(q.col(j).dot(w));
        w -= q.leftCols(j + 1) * (q.leftCols(j + 1).transpose() * w);
        w -= q.leftCols(j + 1) * (q.leftCols(j + 1).transpose() * w);
        w = deflate(w);
        const double b = w.norm();
        const int k = j + 1;
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
        for (int i = 0; i < k; ++i) {
            t(i, i) = alpha[i];
            if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        const double theta = es.eigenvalues()(k - 1);
        res.residual = std::abs(b * es.eigenvectors()(k - 1, k - 1)) / theta;
        res.gap = 1.0 / theta - sigma;
        if (res.residual < tol || b < 1e-14 * theta) {
            res.converged = true;
            return res;
        }
        beta.push_back(b);
        q.col(j + 1) = w / b;
    }
    res.converged = res.residual < 1e-6;
    return res;
}

struct ComponentGap {
    std::vector<vertex_t> vertices;
    std::size_t edges = 0;
    GapResult result;
};

struct GapReport {
    std::vector<ComponentGap> components;  // size >= 2 only
    double min_gap = 0;                    // over those; 0 when there are none
    bool all_converged = true;
};

inline GapResult component_gap(const MultiGraph& h, std::size_t dense_limit = 2000) {
    if (h.n <= dense_limit) {
        auto ev = eigenvalues(normalized_laplacian(h));
        return GapResult{ev(1), true, 0.0};
    }
    // A short plain run overestimates the gap, so a small estimate means the
    // plain iteration would not reach 1e-6 relative error: switch to shift-invert.
    GapResult probe = lanczos_gap(h, 1e-6, 60);
    if (probe.converged && probe.gap >= 1e-2) return probe;
    if (probe.gap < 1e-2) {
        GapResult si = shift_invert_gap(h);
        if (si.converged) return si;
    }
    return lanczos_gap(h);
}

inline GapReport spectral_gap(const MultiGraph& g, std::size_t dense_limit = 2000) {
    GapReport rep;
    bool first = true;
    for (auto& vs : components(g)) {
        if (vs.size() < 2) continue;
        ComponentGap c;
        MultiGraph h = induced(g, vs);
        c.edges = h.m();
        c.result = component_gap(h, dense_limit);
        c.vertices = std::move(vs);
        rep.all_converged = rep.all_converged && c.result.converged;
        rep.min_gap = first ? c.result.gap : std::min(rep.min_gap, c.result.gap);
        first = false;
        rep.components.push_back(std::move(c));
    }
    return rep;
}

/// Exact conductance by enumerating subsets. Needs n <= 20 and at least one edge.
inline double conductance_bruteforce(const MultiGraph& g) {
    if (g.n > 20) throw capability_error("conductance_bruteforce: more than 20 vertices");
    const auto deg = g.degrees();
    double vol_all = 0;
    for (vertex_t v = 1; v <= g.n; ++v) vol_all += static_cast<double>(deg[v]);
    if (vol_all == 0) throw capability_error("conductance_bruteforce: graph has no edges");
    double best = std::numeric_limits<double>::infinity();
    const std::uint32_t full = (1u << g.n) - 1;
    for (std::uint32_t mask = 1; mask < full; ++mask) {
        double vol = 0;
        for (vertex_t v = 1; v <= g.n; ++v)
            if (mask >> (v - 1) & 1) vol += static_cast<double>(deg[v]);
        if (vol == 0 || vol > vol_all / 2) continue;
        double cut = 0;
        for (const auto& e : g.edges)
            if (((mask >> (e.u - 1)) & 1) != ((mask >> (e.v - 1)) & 1)) cut += 1;
        best = std::min(best, cut / vol);
    }
    return best;
}

/// Merges w into v: edges at w move to v, so v-w edges become loops.
inline MultiGraph contract_pair(const MultiGraph& g, vertex_t v, vertex_t w) {
    MultiGraph h(g.n - 1);
    auto id = [&](vertex_t x) {
        if (x == w) x = v;
        return x > w ? x - 1 : x;
    };
    for (const auto& e : g.edges) h.add_edge(id(e.u), id(e.v));
    return h;
}

struct SamplingRow {
    std::size_t n = 0;
    double p = 0;
    double delta = 0;
    double bound = 0;
    double max_dev = 0;
    double frac_within = 0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    bool precondition_ok = true;
};

/// Samples each edge with probability p, `trials` times, and compares the gap
/// of every G-component with that of its sampled counterpart.
inline SamplingRow sampling_concentration_experiment(const MultiGraph& g, double p, std::size_t trials, double delta,
                                                     std::uint64_t seed, double C = 4.0) {
    SamplingRow row;
    row.n = g.n;
    row.p = p;
    row.delta = delta;
    row.trials = trials;
    row.seed = seed;
    const auto deg = g.degrees();
    std::size_t dmin = ~std::size_t{0};
    for (vertex_t v = 1; v <= g.n; ++v) dmin = std::min(dmin, deg[v]);
    if (g.n == 0) dmin = 0;
    row.precondition_ok = p * static_cast<double>(dmin) >= C * std::log(static_cast<double>(std::max<vertex_t>(g.n, 2)));
    row.bound = 13.0 * std::sqrt(std::log(4.0 * g.n / delta) / (p * static_cast<double>(std::max<std::size_t>(dmin, 1))));

    struct Comp {
        std::vector<vertex_t> vs;
        std::vector<vertex_t> id;
        double gap;
    };
    std::vector<Comp> comps;
    for (auto& vs : components(g)) {
        if (vs.size() < 2) continue;
        Comp c;
        c.gap = component_gap(induced(g, vs)).gap;
        c.vs = std::move(vs);
        comps.push_back(std::move(c));
    }
    std::vector<vertex_t> comp_of(g.n + 1, 0);
    for (std::size_t i = 0; i < comps.size(); ++i)
        for (vertex_t v : comps[i].vs) comp_of[v] = static_cast<vertex_t>(i + 1);

    std::size_t within = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng(combine(seed, t));
        std::vector<MultiGraph> parts(comps.size());
        std::vector<std::vector<vertex_t>> local(comps.size());
        std::vector<vertex_t> lid(g.n + 1, 0);
        for (std::size_t i = 0; i < comps.size(); ++i) {
            parts[i].n = static_cast<vertex_t>(comps[i].vs.size());
            for (std::size_t k = 0; k < comps[i].vs.size(); ++k) lid[comps[i].vs[k]] = static_cast<vertex_t>(k + 1);
        }
        for (const auto& e : g.edges) {
            if (!rng.bernoulli(p)) continue;
            vertex_t c = comp_of[e.u];
            if (c) parts[c - 1].add_edge(lid[e.u], lid[e.v]);
        }
        double dev = 0;
        for (std::size_t i = 0; i < comps.size(); ++i) {
            // A disconnected sample has a zero gap; the generic solve handles it.
            double gs = component_gap(parts[i]).gap;
            dev = std::max(dev, std::abs(gs - comps[i].gap));
        }
        row.max_dev = std::max(row.max_dev, dev);
        if (dev <= row.bound) ++within;
    }
    row.frac_within = trials ? static_cast<double>(within) / static_cast<double>(trials) : 1.0;
    return row;
}

}  // namespace pramcc::spectral
