#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <pramcc/experiments.hpp>
#include <pramcc/pramcc.hpp>
#include <pramcc/spectral.hpp>

using namespace pramcc;
using nlohmann::json;

namespace {

MultiGraph load(const std::string& path) {
    if (path == "-") return read_edge_list(std::cin);
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_edge_list(in);
}

void emit(const json& j, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << j.dump(2) << '\n';
}

std::vector<std::uint64_t> seed_range(std::uint64_t first, std::size_t count) {
    std::vector<std::uint64_t> s(count);
    for (std::size_t i = 0; i < count; ++i) s[i] = first + i;
    return s;
}

struct RunOptions {
    std::string profile = "desk";
    std::uint64_t seed = 1;
    std::string policy = "seeded-random";
};

void add_run_options(CLI::App* app, RunOptions& o) {
    app->add_option("--profile", o.profile, "constant profile")->check(CLI::IsMember({"desk", "paper"}));
    app->add_option("--seed", o.seed, "master seed");
    app->add_option("--policy", o.policy, "concurrent-write policy")
        ->check(CLI::IsMember({"first-writer", "last-writer", "seeded-random", "first", "last", "random"}));
}

struct Outcome {
    ParentForest forest;
    ConnectivityReport report;
    json ledger;
    double seconds = 0;
};

Outcome solve(const MultiGraph& g, const RunOptions& o) {
    const WriteMode mode = parse_write_mode(o.policy);
    RunContext ctx(ConstantProfile::make(parse_profile_mode(o.profile), g.n), WritePolicy{mode, o.seed}, o.seed);
    Outcome out;
    auto t0 = std::chrono::steady_clock::now();
    out.forest = connectivity(ctx, g, &out.report);
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.ledger = ctx.ledger.to_json();
    return out;
}

std::string triple(const RunOptions& o) {
    return "seed=" + std::to_string(o.seed) + " profile=" + o.profile + " policy=" + to_string(parse_write_mode(o.policy));
}

MultiGraph generate(const std::string& kind, vertex_t n, unsigned d, double p, std::uint64_t seed, double band_exp) {
    if (kind == "path") return gen::path(n);
    if (kind == "cycle") return gen::cycle(n);
    if (kind == "regular") return gen::random_regular(n, d, seed);
    if (kind == "gnp") return gen::gnp(n, p, seed);
    if (kind == "two-cycle-one") return gen::two_cycle(n, false, seed);
    if (kind == "two-cycle-two") return gen::two_cycle(n, true, seed);
    if (kind == "blowup") return gen::diameter_blowup(n, band_exp);
    if (kind == "union") {
        // Four expanders, two cycles and singletons, about n vertices in all.
        vertex_t part = std::max<vertex_t>(n / 8, 16);
        std::vector<MultiGraph> parts;
        for (int i = 0; i < 4; ++i) parts.push_back(gen::random_regular(part, d, seed + i));
        parts.push_back(gen::cycle(part * 2));
        parts.push_back(gen::cycle(part));
        parts.push_back(MultiGraph(std::max<vertex_t>(n / 100, 1)));
        return gen::shuffle_ids(gen::disjoint_union(parts), seed);
    }
    throw std::invalid_argument("unknown kind: " + kind);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PRAM connectivity simulator"};
    app.require_subcommand(1);

    // gen
    std::string kind = "path", gen_out;
    vertex_t gen_n = 1000;
    unsigned gen_d = 8;
    double gen_p = 0.001, band_exp = 3.0;
    std::uint64_t gen_seed = 1;
    auto* gen_cmd = app.add_subcommand("gen", "emit an edge list");
    gen_cmd->add_option("kind", kind, "path|cycle|regular|gnp|union|two-cycle-one|two-cycle-two|blowup")->required();
    gen_cmd->add_option("-n", gen_n, "vertex count");
    gen_cmd->add_option("-d", gen_d, "degree (regular, union)");
    gen_cmd->add_option("-p", gen_p, "edge probability (gnp)");
    gen_cmd->add_option("--band-exp", band_exp, "band exponent (blowup)");
    gen_cmd->add_option("--seed", gen_seed, "generator seed");
    gen_cmd->add_option("-o,--out", gen_out, "output file (default stdout)");

    // run
    RunOptions run_opts;
    std::string run_in, stats_out, labels_out;
    auto* run_cmd = app.add_subcommand("run", "connected components of an edge list");
    run_cmd->add_option("input", run_in, "edge list file, - for stdin")->required();
    add_run_options(run_cmd, run_opts);
    run_cmd->add_option("--stats", stats_out, "write completion report and ledger as JSON");
    run_cmd->add_option("--labels", labels_out, "write one `v root` line per vertex");

    // verify
    RunOptions ver_opts;
    std::string ver_in;
    auto* ver_cmd = app.add_subcommand("verify", "run and compare against the sequential oracle");
    ver_cmd->add_option("input", ver_in, "edge list file, - for stdin")->required();
    add_run_options(ver_cmd, ver_opts);

    // experiment
    std::string which, exp_out, family = "cycle";
    std::uint64_t exp_seed = 1;
    std::size_t exp_seeds = 5, trials = 100;
    int kmin = 10, kmax = 15;
    vertex_t exp_n = 1024;
    double exp_p = 0.5, delta = 0.1, exp_band = 2.0;
    auto* exp_cmd = app.add_subcommand("experiment", "emit experiment rows as JSON");
    exp_cmd->add_option("name", which, "sampling-gap|diameter-blowup|work-sweep|round-sweep")
        ->required()
        ->check(CLI::IsMember({"sampling-gap", "diameter-blowup", "work-sweep", "round-sweep"}));
    exp_cmd->add_option("--seed", exp_seed, "first seed");
    exp_cmd->add_option("--seeds", exp_seeds, "number of seeds");
    exp_cmd->add_option("--family", family, "cycle|path|expander (sweeps)");
    exp_cmd->add_option("--kmin", kmin, "smallest log2 n (sweeps)");
    exp_cmd->add_option("--kmax", kmax, "largest log2 n (sweeps)");
    exp_cmd->add_option("-n", exp_n, "vertex count (sampling-gap, diameter-blowup)");
    exp_cmd->add_option("-p", exp_p, "sampling probability (sampling-gap)");
    exp_cmd->add_option("--delta", delta, "failure probability (sampling-gap)");
    exp_cmd->add_option("--trials", trials, "trials (sampling-gap)");
    exp_cmd->add_option("--band-exp", exp_band, "band exponent (diameter-blowup)");
    exp_cmd->add_option("-o,--out", exp_out, "output file (default stdout)");

    // spectral
    std::string spec_in;
    auto* spec_cmd = app.add_subcommand("spectral", "spectral gap of every component");
    spec_cmd->add_option("input", spec_in, "edge list file, - for stdin")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen_cmd->parsed()) {
            MultiGraph g = generate(kind, gen_n, gen_d, gen_p, gen_seed, band_exp);
            std::cerr << "# gen " << kind << " seed=" << gen_seed << " n=" << g.n << " m=" << g.m() << '\n';
            if (gen_out.empty()) {
                write_edge_list(std::cout, g);
            } else {
                std::ofstream f(gen_out);
                if (!f) throw std::runtime_error("cannot write " + gen_out);
                write_edge_list(f, g);
            }
            return 0;
        }

        if (run_cmd->parsed()) {
            MultiGraph g = load(run_in);
            Outcome o = solve(g, run_opts);
            std::cout << triple(run_opts) << '\n'
                      << "n=" << g.n << " m=" << g.m() << " components=" << o.report.components
                      << " phases_run=" << o.report.phases_run << " rounds=" << o.report.rounds
                      << " work=" << o.report.work << " seconds=" << o.seconds << '\n';
            if (!stats_out.empty()) {
                json j = {{"phases_run", o.report.phases_run},
                          {"final_b", std::exp2(o.report.final_log2_b)},
                          {"components", o.report.components},
                          {"rounds", o.report.rounds},
                          {"work", o.report.work},
                          {"seed", run_opts.seed},
                          {"profile", run_opts.profile},
                          {"policy", to_string(parse_write_mode(run_opts.policy))},
                          {"ledger", o.ledger}};
                emit(j, stats_out);
            }
            if (!labels_out.empty()) {
                std::ofstream f(labels_out);
                for (vertex_t v = 1; v <= g.n; ++v) f << v << ' ' << o.forest.parent[v] << '\n';
            }
            return 0;
        }

        if (ver_cmd->parsed()) {
            MultiGraph g = load(ver_in);
            Outcome o = solve(g, ver_opts);
            auto oracle = oracle_components(g);
            vertex_t bad = first_mismatch(root_labels(o.forest), oracle);
            std::cout << triple(ver_opts) << '\n';
            if (bad != 0) {
                std::cout << "MISMATCH at vertex " << bad << ": root " << o.forest.find_root(bad) << ", oracle label "
                          << oracle[bad] << '\n';
                return 1;
            }
            std::cout << "OK components=" << count_components(oracle) << '\n';
            return 0;
        }

        if (exp_cmd->parsed()) {
            auto seeds = seed_range(exp_seed, exp_seeds);
            json rows = json::array();
            std::cerr << "# experiment " << which << " first seed " << exp_seed << '\n';
            if (which == "sampling-gap") {
                MultiGraph g = gen::random_regular(exp_n, 64, exp_seed);
                auto r = spectral::sampling_concentration_experiment(g, exp_p, trials, delta, exp_seed);
                rows.push_back({{"n", r.n}, {"p", r.p}, {"delta", r.delta}, {"bound", r.bound}, {"max_dev", r.max_dev},
                                {"frac_within", r.frac_within}, {"seeds", json::array({exp_seed})},
                                {"trials", r.trials}, {"precondition_ok", r.precondition_ok}});
            } else if (which == "diameter-blowup") {
                auto r = experiments::diameter_blowup_experiment(exp_n, exp_band, seeds);
                rows.push_back({{"n", r.n}, {"p", r.p}, {"path_length", r.path_length}, {"band", r.band},
                                {"original_diameter", r.original_diameter}, {"sampled_diameter", r.sampled_diameter},
                                {"seeds", r.seeds}});
            } else {
                std::vector<int> ks;
                for (int k = kmin; k <= kmax; ++k) ks.push_back(k);
                auto sw = experiments::sweep(family, ks, seeds);
                std::vector<double> x, y;
                for (const auto& r : sw) {
                    rows.push_back({{"family", r.family}, {"n", r.n}, {"m", r.m}, {"mean_work", r.mean_work},
                                    {"mean_rounds", r.mean_rounds}, {"work", r.work}, {"rounds", r.rounds},
                                    {"seeds", r.seeds}});
                    if (which == "work-sweep") {
                        x.push_back(static_cast<double>(r.n + r.m));
                        y.push_back(r.mean_work);
                    } else {
                        x.push_back(std::log2(static_cast<double>(r.n)));
                        y.push_back(r.mean_rounds);
                    }
                }
                if (x.size() > 2) {
                    auto fit = experiments::fit_poly(x, y, 1);
                    std::cerr << "# fit: " << (which == "work-sweep" ? "work ~ a + b(m+n)" : "rounds ~ a + b log2 n")
                              << " a=" << fit.coef[0] << " b=" << fit.coef[1]
                              << " max_rel_residual=" << fit.max_rel_residual << '\n';
                }
            }
            emit(rows, exp_out);
            return 0;
        }

        if (spec_cmd->parsed()) {
            MultiGraph g = load(spec_in);
            auto rep = spectral::spectral_gap(g);
            json comps = json::array();
            for (const auto& c : rep.components)
                comps.push_back({{"vertices", c.vertices.size()}, {"edges", c.edges}, {"gap", c.result.gap},
                                 {"converged", c.result.converged}, {"residual", c.result.residual}});
            emit({{"min_gap", rep.min_gap}, {"all_converged", rep.all_converged}, {"components", comps}}, "");
            return 0;
        }
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
