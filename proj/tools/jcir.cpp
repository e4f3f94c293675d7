// Command-line front end: configuration-driven simulation, density tables,
// estimation, limit-theorem experiments and Skorohod-weight diagnostics.
// Exit codes: 0 success / gates passed, 2 gates failed, 1 execution error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "jcir/config.hpp"
#include "jcir/density.hpp"
#include "jcir/flows.hpp"
#include "jcir/inference.hpp"
#include "jcir/io.hpp"
#include "jcir/malliavin.hpp"
#include "jcir/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonArgs {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out_dir;
    unsigned threads = 0;
    bool threads_set = false;
    bool allow_outside_a3 = false;
};

jcir::RunConfig load_config(const CommonArgs& args, jcir::Command expected) {
    jcir::RunConfig cfg =
        jcir::parse_config(jcir::io::read_file(args.config_path), args.allow_outside_a3);
    if (cfg.command != expected)
        throw std::invalid_argument("config command does not match the CLI subcommand");
    if (args.seed_set) cfg.seed = args.seed;
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    if (args.threads_set) cfg.threads = args.threads;
    return cfg;
}

fs::path artifact_path(const jcir::RunConfig& cfg, const std::string& stem, const std::string& ext) {
    return fs::path(cfg.out_dir) / (stem + "-" + std::to_string(cfg.seed) + "." + ext);
}

int run_simulate(const jcir::RunConfig& cfg) {
    const auto path = jcir::simulate_path(cfg.params, cfg.simulate.T, cfg.simulate.steps,
                                          cfg.simulate.scheme, cfg.seed);
    std::ostringstream csv;
    jcir::write_path_csv(path, csv);
    const auto file = artifact_path(cfg, "simulate", "csv");
    jcir::io::atomic_write(file, csv.str());
    std::cout << "simulate: " << path.y.size() << " grid points, Y_T=" << path.y.back()
              << ", jumps=" << path.marks.size() << " -> " << file.string() << "\n";
    return 0;
}

int run_density(const jcir::RunConfig& cfg) {
    const auto& d = cfg.density;
    std::vector<double> ygrid(d.y_count);
    for (std::size_t i = 0; i < d.y_count; ++i)
        ygrid[i] = d.y_lo + (d.y_hi - d.y_lo) * static_cast<double>(i) /
                                static_cast<double>(d.y_count - 1);
    const auto grid = jcir::density_grid(cfg.params, d.t, d.x, ygrid, true);
    std::ostringstream csv;
    csv.precision(17);
    csv << "y,p,dp_db\n";
    for (std::size_t i = 0; i < grid.y.size(); ++i)
        csv << grid.y[i] << ',' << grid.p[i] << ',' << grid.dp_db[i] << '\n';
    const auto file = artifact_path(cfg, "density", "csv");
    jcir::io::atomic_write(file, csv.str());

    if (d.char_trace) {
        std::ostringstream trace;
        trace.precision(17);
        trace << "v,re,im,abs\n";
        const int count = 512;
        for (int i = 0; i <= count; ++i) {
            const double v = d.char_v_max * static_cast<double>(i) / count;
            const jcir::cplx c = jcir::affine::char_fn(cfg.params, d.t, d.x, jcir::cplx(0.0, v));
            trace << v << ',' << c.real() << ',' << c.imag() << ',' << std::abs(c) << '\n';
        }
        jcir::io::atomic_write(artifact_path(cfg, "char-trace", "csv"), trace.str());
    }
    std::cout << "density: " << grid.y.size() << " points, U_max=" << grid.u_max
              << ", nodes=" << grid.nodes << " -> " << file.string() << "\n";
    return 0;
}

int run_estimate(const jcir::RunConfig& cfg) {
    const auto& e = cfg.estimate;
    std::ostringstream csv;
    csv.precision(17);
    csv << "seed,b_hat,U,I,loglik\n";

    auto emit_row = [&](std::uint64_t seed, const jcir::SamplePath& path) {
        const double T = path.horizon();
        double b_hat = 0.0, loglik = 0.0;
        if (!e.discrete) {
            b_hat = jcir::mle_continuous(path, cfg.params.a, cfg.params.sigma).b_hat;
            loglik = jcir::loglik_ratio_continuous(path, cfg.params.b, b_hat, cfg.params.a,
                                                   cfg.params.sigma);
        } else {
            jcir::DiscreteObs obs;
            if (path.dt == e.delta) {
                obs.dt = path.dt;
                obs.y = path.y;
            } else {
                obs = jcir::subsample(path, e.substeps);
            }
            jcir::MleResult r;
            if (e.search_lo < e.search_hi)
                r = jcir::mle_discrete(obs, cfg.params, e.search_lo, e.search_hi);
            else
                r = jcir::mle_discrete_auto(obs, cfg.params);
            b_hat = r.b_hat;
            loglik = r.objective;
        }
        const auto si =
            jcir::score_info(path, cfg.params.a, cfg.params.sigma, cfg.params.b, 1.0 / std::sqrt(T));
        csv << seed << ',' << b_hat << ',' << si.score << ',' << si.info << ',' << loglik << '\n';
    };

    if (!e.input_csv.empty()) {
        std::ifstream in(e.input_csv);
        if (!in) throw std::runtime_error("estimate: cannot open " + e.input_csv);
        emit_row(cfg.seed, jcir::read_path_csv(in));
    } else {
        for (std::size_t i = 0; i < e.replications; ++i) {
            const std::uint64_t seed = jcir::rng::derive_seed(cfg.seed, "estimate", i);
            const double T = e.discrete ? e.delta * static_cast<double>(e.n) : e.T;
            const std::size_t steps = e.discrete ? e.n * e.substeps : e.steps;
            emit_row(seed, jcir::simulate_path(cfg.params, T, steps,
                                               jcir::Scheme::ExactBetweenJumps, seed));
        }
    }
    const auto file = artifact_path(cfg, "estimate", "csv");
    jcir::io::atomic_write(file, csv.str());
    std::cout << "estimate: "
              << (e.input_csv.empty() ? e.replications : std::size_t{1}) << " row(s) -> "
              << file.string() << "\n";
    return 0;
}

int run_experiment(const jcir::RunConfig& cfg) {
    const auto& x = cfg.experiment;
    jcir::ExperimentConfig ec;
    ec.params = cfg.params;
    ec.discrete = jcir::experiment_is_discrete(x.kind);
    ec.u = x.u;
    ec.T = x.T;
    ec.path_dt = x.path_dt;
    ec.n = x.n;
    ec.delta = x.delta;
    ec.substeps = x.substeps;
    ec.replications = x.replications;
    ec.limit_replications = x.limit_replications;
    ec.seed = cfg.seed;
    ec.threads = cfg.threads;
    ec.gates = x.gates;

    jcir::TestReport report;
    switch (x.kind) {
        case jcir::ExperimentKind::ContinuousLan:
        case jcir::ExperimentKind::DiscreteLan:
            report = jcir::run_lan(ec);
            break;
        case jcir::ExperimentKind::ContinuousLaq:
        case jcir::ExperimentKind::DiscreteLaq:
            report = jcir::run_laq(ec);
            break;
        case jcir::ExperimentKind::ContinuousLamn:
        case jcir::ExperimentKind::DiscreteLamn:
            report = jcir::run_lamn(ec);
            break;
        case jcir::ExperimentKind::Girsanov:
            report = jcir::girsanov_unit_mean(ec, x.b_tilde);
            break;
        case jcir::ExperimentKind::Ergodic:
            report = jcir::ergodic_check(ec);
            break;
        case jcir::ExperimentKind::StableClt:
            report = jcir::stable_clt_check(ec);
            break;
        case jcir::ExperimentKind::VLaw:
            report = jcir::v_law_check(ec, x.u_list);
            break;
    }

    json j = jcir::report_to_json(report);
    j["config"] = json::parse(jcir::emit_config(cfg));
    jcir::io::atomic_write(artifact_path(cfg, "experiment", "json"), j.dump(2) + "\n");
    jcir::io::atomic_write(artifact_path(cfg, "experiment-samples", "csv"),
                           jcir::samples_csv(report));
    std::cout << jcir::one_line_summary(report) << "\n";
    return report.pass ? 0 : 2;
}

int run_malliavin(const jcir::RunConfig& cfg) {
    const auto& m = cfg.malliavin;
    json j;
    j["schema_version"] = 1;
    bool pass = true;
    if (m.ibp) {
        const auto rep = jcir::ibp_check(cfg.params, m.x, m.delta, m.test_function, m.replications,
                                         cfg.seed, m.refine, cfg.threads);
        pass = std::abs(rep.z) < 3.0;
        j["mode"] = "ibp";
        j["test_function"] = jcir::ibp_test_function_name(m.test_function);
        j["lhs"] = rep.lhs;
        j["rhs"] = rep.rhs;
        j["se_lhs"] = rep.se_lhs;
        j["se_rhs"] = rep.se_rhs;
        j["z"] = rep.z;
        j["pass"] = pass;
        std::cout << "malliavin ibp: z=" << rep.z << " -> " << (pass ? "PASS" : "FAIL") << "\n";
    } else {
        const auto rep = jcir::h_moment_scan(cfg.params, m.x, m.deltas, m.replications, cfg.seed,
                                             m.refine, cfg.threads);
        std::ostringstream csv;
        csv.precision(17);
        csv << "delta,mean_H,se,m2_H,slope\n";
        for (const auto& pt : rep.points) {
            csv << pt.delta << ',' << pt.mean_h << ',' << pt.se << ',' << pt.m2 << ','
                << rep.slope << '\n';
            pass = pass && std::abs(pt.mean_h) < 3.0 * pt.se;
        }
        pass = pass && rep.slope >= 3.0;
        jcir::io::atomic_write(artifact_path(cfg, "malliavin-scan", "csv"), csv.str());
        j["mode"] = "h-scan";
        j["slope"] = rep.slope;
        j["pass"] = pass;
        std::cout << "malliavin h-scan: slope=" << rep.slope << " -> " << (pass ? "PASS" : "FAIL")
                  << "\n";
    }
    jcir::io::atomic_write(artifact_path(cfg, "malliavin", "json"), j.dump(2) + "\n");
    return pass ? 0 : 2;
}

void add_common(CLI::App* sub, CommonArgs& args) {
    sub->add_option("--config", args.config_path, "run configuration file (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", args.seed, "override the configured seed")
        ->each([&args](const std::string&) { args.seed_set = true; });
    sub->add_option("--out", args.out_dir, "override the output directory");
    sub->add_option("--threads", args.threads, "replication pool size (0 = hardware)")
        ->each([&args](const std::string&) { args.threads_set = true; });
    sub->add_flag("--allow-outside-a3", args.allow_outside_a3,
                  "demote the (A3) ratio check from error to warning");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"jump-type CIR simulation and growth-rate inference laboratory"};
    app.require_subcommand(1);
    CommonArgs args;
    auto* sim = app.add_subcommand("simulate", "simulate a trajectory and write it as CSV");
    auto* den = app.add_subcommand("density", "tabulate the transition density and its b-derivative");
    auto* est = app.add_subcommand("estimate", "run the continuous/discrete MLE");
    auto* exp = app.add_subcommand("experiment", "run a limit-theorem Monte Carlo experiment");
    auto* mal = app.add_subcommand("malliavin", "Skorohod-weight diagnostics");
    for (auto* sub : {sim, den, est, exp, mal}) add_common(sub, args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return run_simulate(load_config(args, jcir::Command::Simulate));
        if (den->parsed()) return run_density(load_config(args, jcir::Command::Density));
        if (est->parsed()) return run_estimate(load_config(args, jcir::Command::Estimate));
        if (exp->parsed()) return run_experiment(load_config(args, jcir::Command::Experiment));
        if (mal->parsed()) return run_malliavin(load_config(args, jcir::Command::Malliavin));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
