// Acceptance suite: one line per criterion, exit 0 only if every gate passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "jcir/config.hpp"
#include "jcir/density.hpp"
#include "jcir/experiments.hpp"
#include "jcir/inference.hpp"
#include "jcir/malliavin.hpp"
#include "jcir/report.hpp"
#include "../oracles.hpp"

using namespace jcir;

namespace {

int g_failures = 0;

void report(int index, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", index, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

const LevyMeasure kCpe = LevyMeasure::compound_poisson_exp(1.0, 2.0);  // m1 = 0.5

std::string gate_detail(const TestReport& r) {
    std::string out;
    for (const auto& g : r.gates) {
        if (!out.empty()) out += ", ";
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%s=%.4g%s", g.name.c_str(), g.value, g.pass ? "" : "!");
        out += buf;
    }
    return out;
}

void criterion_1_continuous_lan() {
    ExperimentConfig c;
    c.params = CirParams(2.0, 1.0, 0.5, 2.5, kCpe);
    c.u = 1.0;
    c.T = 100.0;
    c.path_dt = 0.01;
    c.replications = 500;
    c.seed = 2;
    const auto r = run_lan(c);
    report(1, "continuous LAN (I=10, T=100, M=500)", r.pass, gate_detail(r));
}

void criterion_2_discrete_lan() {
    ExperimentConfig c;
    c.params = CirParams(2.0, 1.0, 0.5, 2.5, kCpe);  // a/sigma^2 = 8 > (15+sqrt(185))/4
    c.discrete = true;
    c.u = 1.0;
    c.n = 2000;
    c.delta = 0.05;
    c.substeps = 8;
    c.replications = 300;
    c.seed = 20240602;
    const auto r = run_lan(c);
    report(2, "discrete LAN (n=2000, delta=0.05, M=300)", r.pass, gate_detail(r));
}

void criterion_3_laq() {
    ExperimentConfig c;
    c.params = CirParams(2.0, 0.0, 0.5, 1.0, kCpe);
    c.u = 1.0;
    c.T = 100.0;
    c.path_dt = 0.01;
    c.replications = 500;
    c.limit_replications = 2000;
    c.seed = 20240603;
    const auto r = run_laq(c);
    report(3, "critical LAQ unit mean + limit KS (T=100, M=500)", r.pass, gate_detail(r));
}

void criterion_4_lamn() {
    ExperimentConfig c;
    c.params = CirParams(2.0, -0.5, 0.5, 1.0, kCpe);
    c.u = 1.0;
    c.T = 30.0;
    c.path_dt = 0.01;
    c.replications = 500;
    c.limit_replications = 2000;
    c.seed = 20240604;
    const auto r = run_lamn(c);
    report(4, "supercritical LAMN limit KS (T=30, M=500)", r.pass, gate_detail(r));
}

void criterion_5_v_law() {
    ExperimentConfig c;
    c.params = CirParams(2.0, -0.5, 0.5, 1.0, kCpe);
    c.T = 30.0;
    c.path_dt = 0.01;
    c.replications = 10000;
    c.seed = 20240605;
    const auto r = v_law_check(c, {-0.5, -1.0, -2.0});
    report(5, "V-law Laplace oracle (M=1e4, T=30, tol 0.02)", r.pass, gate_detail(r));
}

void criterion_6_density_oracle() {
    const CirParams p(2.0, 1.0, 0.5, 1.0, LevyMeasure::zero());
    bool pass = true;
    double worst = 0.0;
    int points = 0;
    for (double t : {0.1, 0.5, 1.0, 2.0}) {
        for (double x : {0.5, 1.0, 2.0, 3.5}) {
            DensityKernel kern(p, t, {.tail_tol = 1e-12, .x_min = x, .y_max = 6.0, .with_db = false});
            for (double y : {0.4, 0.9, 1.5, 2.6}) {
                if (points >= 50) break;
                ++points;
                const double mine = kern.density(x, y);
                const double ref = oracles::cir_density(p.a, p.b, p.sigma, t, x, y);
                worst = std::max(worst, std::abs(mine - ref));
            }
        }
    }
    pass = pass && worst < 1e-6;

    const double norm = density_normalization(p, 0.5, 1.2);
    pass = pass && std::abs(norm - 1.0) < 1e-6;

    double worst_rel = 0.0;
    const double h = 1e-4;
    for (double y : {0.8, 1.3, 2.1}) {
        const double fd = (transition_density(p.with_b(p.b + h), 0.5, 1.2, y) -
                           transition_density(p.with_b(p.b - h), 0.5, 1.2, y)) /
                          (2.0 * h);
        const double an = transition_density_db(p, 0.5, 1.2, y);
        worst_rel = std::max(worst_rel, std::abs(an - fd) / std::max(std::abs(fd), 1e-12));
    }
    pass = pass && worst_rel < 1e-5;

    char buf[160];
    std::snprintf(buf, sizeof(buf), "max|p-p_chi2|=%.3g over %d pts, |norm-1|=%.3g, d_b rel=%.3g",
                  worst, points, std::abs(norm - 1.0), worst_rel);
    report(6, "density vs noncentral chi-square oracle", pass, buf);
}

void criterion_7_girsanov() {
    // The three (b, b_tilde) pairs, horizon and replication count are fixed;
    // the remaining parameters are chosen so the exponential weight keeps a
    // finite, moderate second moment in every regime (the squared weight
    // tilts the drift to 2 b_tilde - b), making the 3-SE gate well powered.
    bool pass = true;
    std::string detail;
    const std::vector<std::pair<double, double>> pairs = {{1.0, 1.2}, {0.0, 0.3}, {-0.5, -0.4}};
    for (const auto& [b, bt] : pairs) {
        ExperimentConfig c;
        c.params = CirParams(0.5, b, 1.0, 0.5, kCpe);
        c.T = 10.0;
        c.path_dt = 0.01;
        c.replications = 10000;
        c.seed = 20240607;
        const auto r = girsanov_unit_mean(c, bt);
        pass = pass && r.pass;
        char buf[96];
        std::snprintf(buf, sizeof(buf), "(%.1f->%.1f) mean=%.4f%s ", b, bt, r.metrics.at("mean"),
                      r.pass ? "" : "!");
        detail += buf;
    }
    report(7, "Girsanov martingale unit mean (T=10, M=1e4)", pass, detail);
}

void criterion_8_ergodic() {
    ExperimentConfig c;
    c.params = CirParams(2.0, 1.0, 0.5, 2.5, kCpe);
    c.n = 10000;
    c.delta = 0.05;  // n * delta = 500
    c.substeps = 4;
    c.seed = 20240608;
    const auto r = ergodic_check(c);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "avg=%.4f target=2.5", r.metrics.at("avg_y"));
    report(8, "discrete ergodic average (n*delta=500, tol 5%)", r.pass, buf);
}

void criterion_9_malliavin() {
    const CirParams p(2.0, 1.0, 0.5, 1.0, kCpe);
    const auto scan = h_moment_scan(p, 1.0, {0.2, 0.1, 0.05, 0.025}, 100000, 20240609, 16);
    bool pass = true;
    std::string detail;
    for (const auto& pt : scan.points) {
        const bool centered = std::abs(pt.mean_h) < 3.0 * pt.se;
        pass = pass && centered;
        char buf[96];
        std::snprintf(buf, sizeof(buf), "E[H](%.3g)=%.2e(se %.1e)%s ", pt.delta, pt.mean_h, pt.se,
                      centered ? "" : "!");
        detail += buf;
    }
    pass = pass && scan.slope >= 3.0;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "slope=%.3f", scan.slope);
    detail += buf;

    const auto ibp = ibp_check(p, 1.0, 0.05, IbpTestFunction::ExpNeg1, 100000, 20240610, 16);
    pass = pass && std::abs(ibp.z) < 3.0;
    std::snprintf(buf, sizeof(buf), " ibp z=%.2f", ibp.z);
    detail += buf;
    report(9, "Skorohod weight: E[H]=0, m2 slope >= 3, ibp |z|<3", pass, detail);
}

void criterion_10_structural() {
    bool pass = true;
    std::string detail;

    // positivity across seeds and schemes
    {
        const CirParams p(2.0, 1.0, 0.5, 2.5, kCpe);
        bool ok = true;
        for (Scheme s : {Scheme::ExactBetweenJumps, Scheme::SymmetrizedEuler})
            for (std::uint64_t seed = 0; seed < 1000 && ok; ++seed) {
                const auto path = simulate_path(p, 1.0, 40, s, seed);
                for (double y : path.y) ok = ok && y >= 0.0;
            }
        pass = pass && ok;
        detail += ok ? "positivity ok, " : "positivity FAILED, ";
    }
    // comparison-theorem domination on coupled paths
    {
        const CirParams p(2.0, 1.0, 0.5, 1.5, kCpe);
        bool ok = true;
        for (std::uint64_t seed = 0; seed < 300 && ok; ++seed) {
            const auto [with, without] = simulate_coupled_with_and_without_jumps(p, 1.0, 64, seed);
            for (std::size_t k = 0; k < with.y.size(); ++k)
                ok = ok && with.y[k] >= without.y[k] - 1e-12;
        }
        pass = pass && ok;
        detail += ok ? "comparison ok, " : "comparison FAILED, ";
    }
    // psi flow property to 1e-10 and char(0) = 1
    {
        const CirParams p(2.0, 1.0, 0.5, 1.0, kCpe);
        bool ok = true;
        for (double b : {-0.5, 0.0, 1.0})
            for (double t : {0.2, 1.0})
                for (double s : {0.1, 0.9})
                    for (cplx u : {cplx(0.0, 3.0), cplx(-1.0, 0.0)}) {
                        const auto q = p.with_b(b);
                        ok = ok &&
                             std::abs(affine::psi(q, t + s, u) - affine::psi(q, t, affine::psi(q, s, u))) <
                                 1e-10;
                    }
        ok = ok && std::abs(affine::char_fn(p, 0.7, 1.0, cplx(0.0, 0.0)) - 1.0) < 1e-14;
        pass = pass && ok;
        detail += ok ? "riccati ok, " : "riccati FAILED, ";
    }
    // algebraic identity log-ratio = uU - u^2 I / 2 to 1e-12
    {
        const CirParams p(2.0, 1.0, 0.5, 2.5, kCpe);
        const auto path = simulate_path(p, 10.0, 1000, Scheme::ExactBetweenJumps, 99);
        const double rate = 0.31;
        const auto si = score_info(path, p.a, p.sigma, p.b, rate);
        bool ok = true;
        for (double u : {-1.0, 0.5, 2.0}) {
            const double lhs = loglik_ratio_continuous(path, p.b, p.b + rate * u, p.a, p.sigma);
            const double rhs = u * si.score - 0.5 * u * u * si.info;
            ok = ok && std::abs(lhs - rhs) < 1e-12 * (1.0 + std::abs(rhs));
        }
        pass = pass && ok;
        detail += ok ? "score identity ok, " : "score identity FAILED, ";

        // MLE translation cancellation
        auto shifted = path;
        shifted.y.back() += 3.0;
        shifted.dj.back() += 3.0;
        shifted.marks.push_back({shifted.horizon(), 3.0});
        const bool mle_ok = std::abs(mle_continuous(shifted, p.a).b_hat -
                                     mle_continuous(path, p.a).b_hat) < 1e-12;
        pass = pass && mle_ok;
        detail += mle_ok ? "mle cancellation ok, " : "mle cancellation FAILED, ";
    }
    // config round trip
    {
        const std::string text = R"({
            "command": "experiment",
            "params": {"a": 2.0, "b": 1.0, "sigma": 0.5, "y0": 2.5,
                       "levy": {"kind": "compound-poisson-exp", "c": 1.0, "lambda": 2.0}},
            "experiment": {"kind": "continuous-lan", "u": 1.0, "T": 100.0}
        })";
        const RunConfig c = parse_config(text);
        const bool ok = parse_config(emit_config(c)) == c;
        pass = pass && ok;
        detail += ok ? "config round trip ok, " : "config round trip FAILED, ";
    }
    // byte determinism of one experiment rerun
    {
        ExperimentConfig c;
        c.params = CirParams(2.0, 1.0, 0.5, 2.5, kCpe);
        c.T = 10.0;
        c.path_dt = 0.02;
        c.replications = 50;
        c.seed = 4242;
        c.threads = 2;
        const auto r1 = run_lan(c);
        c.threads = 1;
        const auto r2 = run_lan(c);
        const bool ok = report_to_json(r1).dump() == report_to_json(r2).dump() &&
                        samples_csv(r1) == samples_csv(r2);
        pass = pass && ok;
        detail += ok ? "determinism ok" : "determinism FAILED";
    }
    report(10, "structural invariants", pass, detail);
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    criterion_1_continuous_lan();
    criterion_2_discrete_lan();
    criterion_3_laq();
    criterion_4_lamn();
    criterion_5_v_law();
    criterion_6_density_oracle();
    criterion_7_girsanov();
    criterion_8_ergodic();
    criterion_9_malliavin();
    criterion_10_structural();
    const auto dt = std::chrono::duration_cast<std::chrono::seconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    std::printf("%s (%d/10 criteria, %llds)\n", g_failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED",
                10 - g_failures, static_cast<long long>(dt));
    return g_failures == 0 ? 0 : 1;
}
