#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "jcir/flows.hpp"
#include "jcir/parallel.hpp"
#include "jcir/path.hpp"
#include "jcir/riccati.hpp"
#include "jcir/rng.hpp"
#include "jcir/stats.hpp"

namespace jcir {

// Term-by-term decomposition of the Skorohod weight
//   delta = main + (h1 + h2 + h3) - h4 - h5 - h6
// evaluated on one simulated interval with the driving noise retained. With
// x = X_0 the algebraic identity main - h4 - h5 - h6 = -(Delta/sigma) sqrt(x) * B_Delta
// holds exactly in the stored quantities.
struct SkorohodTerms {
    double main = 0.0;
    double h1 = 0.0, h2 = 0.0, h3 = 0.0;
    double h4 = 0.0, h5 = 0.0, h6 = 0.0;

    double h() const { return h1 + h2 + h3; }
    double total() const { return main + h() - h4 - h5 - h6; }
};

// Fine path over one interval: symmetrized Euler from x with `refine` steps,
// true Gaussian increments (required by the stochastic integrals below).
inline SamplePath simulate_interval(const CirParams& p, double x, double delta, std::size_t refine,
                                    std::uint64_t seed) {
    CirParams q = p;
    q.y0 = x;
    return simulate_path(q, delta, refine, Scheme::SymmetrizedEuler, seed);
}

// The anticipating integrand of h3 is the derivative of the end-of-interval
// sensitivity ratio with respect to each Brownian increment. It is evaluated
// as the exact pathwise derivative of the Euler recursion (the discrete
// counterpart of the explicit chain-rule formula; identical continuum limit),
// which keeps the zero-mean identity of H exact at every refinement instead
// of only in the fine-grid limit.
inline SkorohodTerms skorohod_terms(const SamplePath& path, const CirParams& p) {
    const std::size_t n = path.steps();
    if (n < 1) throw std::invalid_argument("skorohod_terms: empty interval");
    for (double y : path.y)
        if (!(y > 0.0)) throw std::runtime_error("skorohod_terms: nonpositive state");

    const double x = path.y.front();
    const double sigma = p.sigma;
    const double s2 = sigma * sigma;
    const double delta = path.horizon();
    const double dt = path.dt;
    const double sqrt_x = std::sqrt(x);

    // one-step factors and the discrete flow D_j = dX_j / dX_0
    std::vector<double> g(n), flow(n + 1);
    flow[0] = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double xj = path.y[j];
        const double pre_reflection =
            xj + (p.a - p.b * xj) * dt + sigma * std::sqrt(xj) * path.dw[j] + path.dj[j];
        if (!(pre_reflection > 0.0))
            throw std::runtime_error("skorohod_terms: path reflected inside the interval");
        g[j] = 1.0 - p.b * dt + 0.5 * sigma * path.dw[j] / std::sqrt(xj);
        flow[j + 1] = flow[j] * g[j];
    }

    // sensitivity ratio F = d_b X_N / d_x X_N = -dt sum_m X_m / D_{m+1}
    double ratio_b = 0.0;
    for (std::size_t m = 0; m < n; ++m) ratio_b -= path.y[m] / flow[m + 1] * dt;

    SkorohodTerms t;
    double stoch = 0.0;  // sum D_j/(sigma sqrt(X_j)) dB_j
    double h1_sum = 0.0, h4_sum = 0.0, h5_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double xj = path.y[j];
        const double sq = std::sqrt(xj);
        stoch += flow[j] / (sigma * sq) * path.dw[j];
        h1_sum += (flow[j] / sq - 1.0 / sqrt_x) * path.dw[j];
        h4_sum += (xj - x) * dt;
        h5_sum += (sq - sqrt_x) * path.dw[j];
    }
    t.h1 = -delta * x / sigma * h1_sum;
    t.h2 = (ratio_b + delta * x) * stoch;
    t.h4 = delta / s2 * p.b * h4_sum;
    t.h5 = -delta / sigma * h5_sum;
    double jump_mass = 0.0;
    for (double dj : path.dj) jump_mass += dj;
    t.h6 = -delta / s2 * jump_mass;
    t.main = -delta / s2 * (path.y.back() - x - (p.a - p.b * x) * delta);

    // h3 = -dt sum_j h_j dF/dB_j with h_j = D_j/(sigma sqrt(X_j)):
    //   dX_m/dB_j = sigma sqrt(X_j) D_m / D_{j+1},  m > j
    //   (1/D_{m+1}) dD_{m+1}/dB_j
    //       = sigma/(2 sqrt(X_j) G_j)
    //         - (sigma^2 sqrt(X_j)/(4 D_{j+1})) sum_{k=j+1}^m dB_k D_k/(G_k X_k^{3/2})
    double h3_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double xj = path.y[j];
        const double sqj = std::sqrt(xj);
        const double dj1 = flow[j + 1];
        const double lead = 0.5 * sigma / (sqj * g[j]);
        double inner = 0.0;  // sum_{k<=m} dB_k D_k / (G_k X_k^{3/2})
        // term m = j: only D_{j+1} depends on dB_j
        double dF = (path.y[j] / dj1) * lead;
        for (std::size_t m = j + 1; m < n; ++m) {
            const double xm = path.y[m];
            inner += path.dw[m] * flow[m] / (g[m] * xm * std::sqrt(xm));
            const double q = lead - 0.25 * s2 * sqj / dj1 * inner;
            dF -= sigma * sqj * flow[m] / (dj1 * flow[m + 1]);
            dF += (xm / flow[m + 1]) * q;
        }
        dF *= dt;
        h3_sum += flow[j] / (sigma * sqj) * dF * dt;
    }
    t.h3 = -h3_sum;
    return t;
}

enum class IbpTestFunction { ExpNeg1, ExpNeg2, Bump };

inline const char* ibp_test_function_name(IbpTestFunction f) {
    switch (f) {
        case IbpTestFunction::ExpNeg1: return "exp(-y)";
        case IbpTestFunction::ExpNeg2: return "exp(-2y)";
        case IbpTestFunction::Bump: return "bump";
    }
    return "?";
}

struct IbpReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double se_lhs = 0.0;
    double se_rhs = 0.0;
    double z = 0.0;
    std::size_t replications = 0;
};

namespace detail {

struct BumpSpec {
    double center;
    double width;
    double operator()(double y) const {
        const double s = (y - center) / width;
        if (std::abs(s) >= 1.0) return 0.0;
        return std::exp(1.0 - 1.0 / (1.0 - s * s));
    }
};

inline BumpSpec make_bump(const CirParams& p, double x, double delta) {
    const double center = x * std::exp(-p.b * delta) +
                          (p.a + first_moment(p.m)) * special::growth_kernel(p.b, delta);
    const double width = std::max(4.0 * p.sigma * std::sqrt(std::max(x, 1e-6) * delta), 0.5);
    return {center, width};
}

}  // namespace detail

// Monte Carlo check of the integration-by-parts identity
//   (1/Delta) E[ f(X_Delta) delta ] = d/db E[ f(X_Delta) ].
// The right side is analytic for exponential test functions (d/db of the
// Laplace transform); for the bump it is a central difference on common
// random numbers.
inline IbpReport ibp_check(const CirParams& p, double x, double delta, IbpTestFunction fkind,
                           std::size_t replications, std::uint64_t seed, std::size_t refine = 16,
                           unsigned threads = 0) {
    if (replications < 1000) throw std::invalid_argument("ibp_check: need at least 1e3 replications");
    if (!strictly_positive_regime(p)) throw std::invalid_argument("ibp_check: needs 2a > sigma^2");
    if (threads == 0) threads = par::default_threads();

    const detail::BumpSpec bump = detail::make_bump(p, x, delta);
    auto f = [&](double y) {
        switch (fkind) {
            case IbpTestFunction::ExpNeg1: return std::exp(-y);
            case IbpTestFunction::ExpNeg2: return std::exp(-2.0 * y);
            case IbpTestFunction::Bump: return bump(y);
        }
        return 0.0;
    };

    std::vector<double> weighted(replications);
    par::parallel_for(replications, threads, [&](std::size_t i) {
        const SamplePath path = simulate_interval(p, x, delta, refine, rng::derive_seed(seed, "ibp", i));
        const SkorohodTerms t = skorohod_terms(path, p);
        weighted[i] = f(path.y.back()) * t.total() / delta;
    });
    const auto lhs = stats::moments(weighted);

    IbpReport rep;
    rep.replications = replications;
    rep.lhs = lhs.mean;
    rep.se_lhs = lhs.se_mean;

    if (fkind == IbpTestFunction::Bump) {
        const double h = 1e-3;
        std::vector<double> diff(replications);
        par::parallel_for(replications, threads, [&](std::size_t i) {
            const std::uint64_t s = rng::derive_seed(seed, "ibp-fd", i);
            const SamplePath up = simulate_interval(p.with_b(p.b + h), x, delta, refine, s);
            const SamplePath dn = simulate_interval(p.with_b(p.b - h), x, delta, refine, s);
            diff[i] = (f(up.y.back()) - f(dn.y.back())) / (2.0 * h);
        });
        const auto fd = stats::moments(diff);
        rep.rhs = fd.mean;
        rep.se_rhs = fd.se_mean;
    } else {
        const double u = fkind == IbpTestFunction::ExpNeg1 ? -1.0 : -2.0;
        rep.rhs = affine::char_fn_db(p, delta, x, cplx(u, 0.0)).real();
        rep.se_rhs = 0.0;
    }
    rep.z = (rep.lhs - rep.rhs) / std::sqrt(rep.se_lhs * rep.se_lhs + rep.se_rhs * rep.se_rhs);
    return rep;
}

struct HScanPoint {
    double delta = 0.0;
    double mean_h = 0.0;
    double se = 0.0;
    double m2 = 0.0;
    double se_m2 = 0.0;
};

struct HScanReport {
    std::vector<HScanPoint> points;
    double slope = 0.0;  // log m2 vs log delta
};

// Estimates E[H] and E[H^2] over a grid of interval lengths and fits the
// scaling exponent of the second moment.
inline HScanReport h_moment_scan(const CirParams& p, double x, const std::vector<double>& deltas,
                                 std::size_t replications, std::uint64_t seed,
                                 std::size_t refine = 16, unsigned threads = 0) {
    if (deltas.size() < 2) throw std::invalid_argument("h_moment_scan: need at least two deltas");
    if (threads == 0) threads = par::default_threads();
    HScanReport report;
    std::vector<double> log_d, log_m2;
    for (std::size_t di = 0; di < deltas.size(); ++di) {
        const double delta = deltas[di];
        std::vector<double> h(replications), h2(replications);
        par::parallel_for(replications, threads, [&](std::size_t i) {
            const SamplePath path = simulate_interval(
                p, x, delta, refine, rng::derive_seed(seed, "h-scan-" + std::to_string(di), i));
            const SkorohodTerms t = skorohod_terms(path, p);
            h[i] = t.h();
            h2[i] = t.h() * t.h();
        });
        const auto mh = stats::moments(h);
        const auto mh2 = stats::moments(h2);
        HScanPoint pt;
        pt.delta = delta;
        pt.mean_h = mh.mean;
        pt.se = mh.se_mean;
        pt.m2 = mh2.mean;
        pt.se_m2 = mh2.se_mean;
        report.points.push_back(pt);
        log_d.push_back(std::log(delta));
        log_m2.push_back(std::log(std::max(pt.m2, 1e-300)));
    }
    report.slope = stats::fit_line(log_d, log_m2).slope;
    return report;
}

}  // namespace jcir
