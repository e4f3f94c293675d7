#pragma once

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "jcir/process.hpp"
#include "jcir/rng.hpp"

namespace jcir {

enum class Scheme {
    ExactBetweenJumps,  // exact noncentral-chi-square diffusion step, jump at step end
    SymmetrizedEuler,   // |Y + (a-bY)dt + sigma sqrt(Y) dW + dJ|
};

inline const char* scheme_name(Scheme s) {
    return s == Scheme::ExactBetweenJumps ? "exact-between-jumps" : "symmetrized-euler";
}

struct JumpMark {
    double t;
    double size;
};

// Uniform-grid trajectory with the driving noise retained. dw holds true
// Gaussian increments for SymmetrizedEuler; for ExactBetweenJumps it holds the
// increment implied by the Euler-form identity (the exact step has no
// associated Brownian draw), flagged via true_brownian.
struct SamplePath {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<double> y;   // size steps + 1
    std::vector<double> dw;  // size steps
    std::vector<double> dj;  // size steps, aggregate jump mass per step
    std::vector<JumpMark> marks;
    Scheme scheme = Scheme::ExactBetweenJumps;
    std::uint64_t seed = 0;
    bool true_brownian = false;

    std::size_t steps() const { return dw.size(); }
    double horizon() const { return dt * static_cast<double>(steps()); }
    double t_at(std::size_t k) const { return t0 + dt * static_cast<double>(k); }
    double jump_total() const {
        double s = 0.0;
        for (const auto& m : marks) s += m.size;
        return s;
    }
};

// Exact one-step transition of the diffusion part (noncentral chi-square as a
// Poisson mixture of gammas). Handles y = 0 and a = 0 (zero shape stays at 0).
inline double exact_cir_step(const CirParams& p, double y, double dt, std::mt19937_64& eng) {
    const double s2 = p.sigma * p.sigma;
    const double c = 0.25 * s2 * special::growth_kernel(p.b, dt);
    const double df = 4.0 * p.a / s2;
    const double lambda_nc = y * std::exp(-p.b * dt) / c;
    std::poisson_distribution<long> poisson(0.5 * lambda_nc);
    const long n = lambda_nc > 0.0 ? poisson(eng) : 0;
    const double shape = 0.5 * df + static_cast<double>(n);
    if (shape <= 0.0) return 0.0;
    std::gamma_distribution<double> gamma(shape, 2.0);
    return c * gamma(eng);
}

namespace detail {

inline double implied_brownian_increment(const CirParams& p, double y, double y_next, double dj,
                                         double dt) {
    if (y <= 0.0) return 0.0;
    return (y_next - y - (p.a - p.b * y) * dt - dj) / (p.sigma * std::sqrt(y));
}

}  // namespace detail

// Simulates on the uniform grid of `steps` steps over [0, T]. Both schemes
// keep the state nonnegative for every seed.
inline SamplePath simulate_path(const CirParams& p, double T, std::size_t steps, Scheme scheme,
                                std::uint64_t seed) {
    if (steps < 1) throw std::invalid_argument("simulate_path: steps must be >= 1");
    if (!(T > 0.0)) throw std::invalid_argument("simulate_path: T must be > 0");
    SamplePath path;
    path.dt = T / static_cast<double>(steps);
    path.scheme = scheme;
    path.seed = seed;
    path.true_brownian = (scheme == Scheme::SymmetrizedEuler);
    path.y.resize(steps + 1);
    path.dw.resize(steps);
    path.dj.resize(steps);
    path.y[0] = p.y0;

    auto eng = rng::make_engine(seed, "path");
    SubordinatorSampler jumps(p.m, path.dt);
    std::normal_distribution<double> normal(0.0, std::sqrt(path.dt));
    std::vector<SubordinatorJump> step_marks;

    for (std::size_t k = 0; k < steps; ++k) {
        step_marks.clear();
        const double y = path.y[k];
        const double dj = jumps.sample(eng, &step_marks);
        double y_next = 0.0;
        if (scheme == Scheme::ExactBetweenJumps) {
            y_next = exact_cir_step(p, y, path.dt, eng) + dj;
            path.dw[k] = detail::implied_brownian_increment(p, y, y_next, dj, path.dt);
        } else {
            const double dw = normal(eng);
            path.dw[k] = dw;
            y_next = std::abs(y + (p.a - p.b * y) * path.dt + p.sigma * std::sqrt(y) * dw + dj);
        }
        path.y[k + 1] = y_next;
        path.dj[k] = dj;
        const double base = path.t_at(k);
        for (const auto& jm : step_marks) path.marks.push_back({base + jm.t, jm.size});
    }
    return path;
}

// Symmetrized Euler recursion driven by caller-supplied noise; used for
// coupled comparisons and finite-difference re-simulation on identical noise.
inline SamplePath simulate_path_with_noise(const CirParams& p, double dt,
                                           const std::vector<double>& dw,
                                           const std::vector<double>& dj) {
    if (dw.size() != dj.size() || dw.empty())
        throw std::invalid_argument("simulate_path_with_noise: noise arrays must match and be nonempty");
    SamplePath path;
    path.dt = dt;
    path.scheme = Scheme::SymmetrizedEuler;
    path.true_brownian = true;
    path.dw = dw;
    path.dj = dj;
    path.y.resize(dw.size() + 1);
    path.y[0] = p.y0;
    for (std::size_t k = 0; k < dw.size(); ++k) {
        const double y = path.y[k];
        path.y[k + 1] =
            std::abs(y + (p.a - p.b * y) * dt + p.sigma * std::sqrt(y) * dw[k] + dj[k]);
        if (dj[k] > 0.0) path.marks.push_back({path.t_at(k + 1), dj[k]});
    }
    return path;
}

// Same Brownian increments, one path with the jump measure and one with the
// zero measure; the jump path dominates pointwise.
inline std::pair<SamplePath, SamplePath> simulate_coupled_with_and_without_jumps(
    const CirParams& p, double T, std::size_t steps, std::uint64_t seed) {
    const double dt = T / static_cast<double>(steps);
    auto eng = rng::make_engine(seed, "coupled-path");
    std::normal_distribution<double> normal(0.0, std::sqrt(dt));
    SubordinatorSampler jumps(p.m, dt);
    std::vector<double> dw(steps), dj(steps), zero(steps, 0.0);
    for (std::size_t k = 0; k < steps; ++k) {
        dw[k] = normal(eng);
        dj[k] = jumps.sample(eng);
    }
    SamplePath with = simulate_path_with_noise(p, dt, dw, dj);
    CirParams diffusion_only = p;
    diffusion_only.m = LevyMeasure::zero();
    SamplePath without = simulate_path_with_noise(diffusion_only, dt, dw, zero);
    with.seed = without.seed = seed;
    return {std::move(with), std::move(without)};
}

// Left-Riemann (1/T) integral of the path.
inline double time_average(const SamplePath& path) {
    if (path.y.empty()) throw std::invalid_argument("time_average: empty path");
    if (path.steps() == 0) return path.y[0];
    double s = 0.0;
    for (std::size_t k = 0; k < path.steps(); ++k) s += path.y[k];
    return s / static_cast<double>(path.steps());
}

// Left-Riemann integral of Y over [0, T].
inline double integral_y(const SamplePath& path) {
    return time_average(path) * path.horizon();
}

// Trapezoidal integral of Y with each step's end-of-step jump mass kept on
// the boundary (the scheme places jumps there; averaging them into the step
// would overcount). The likelihood objects use this rule: the left-point rule
// leaves an O(b^2 dt) integral error that the supercritical e^{bT/2} scaling
// amplifies into an O(1) score bias.
inline double integral_y_likelihood(const SamplePath& path) {
    double s = 0.0;
    for (std::size_t k = 0; k < path.steps(); ++k) {
        const double dj = k < path.dj.size() ? path.dj[k] : 0.0;
        s += 0.5 * (path.y[k] + path.y[k + 1] - dj);
    }
    return s * path.dt;
}

inline void write_path_csv(const SamplePath& path, std::ostream& out) {
    out << "t,Y,dW,dJ\n";
    out << std::setprecision(17);
    for (std::size_t k = 0; k < path.y.size(); ++k) {
        out << path.t_at(k) << ',' << path.y[k] << ',';
        if (k < path.steps())
            out << path.dw[k] << ',' << path.dj[k];
        else
            out << 0.0 << ',' << 0.0;
        out << '\n';
    }
}

inline SamplePath read_path_csv(std::istream& in) {
    SamplePath path;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_path_csv: empty input");
    std::vector<double> t;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        double vals[4];
        char comma;
        for (int i = 0; i < 4; ++i) {
            if (!(row >> vals[i])) throw std::runtime_error("read_path_csv: malformed row: " + line);
            if (i < 3 && !(row >> comma)) throw std::runtime_error("read_path_csv: malformed row: " + line);
        }
        t.push_back(vals[0]);
        path.y.push_back(vals[1]);
        path.dw.push_back(vals[2]);
        path.dj.push_back(vals[3]);
    }
    if (path.y.size() < 2) throw std::runtime_error("read_path_csv: need at least two grid points");
    path.dw.pop_back();
    path.dj.pop_back();
    path.t0 = t.front();
    path.dt = t[1] - t[0];
    path.true_brownian = false;
    for (std::size_t k = 0; k < path.dj.size(); ++k)
        if (path.dj[k] > 0.0) path.marks.push_back({path.t_at(k + 1), path.dj[k]});
    return path;
}

}  // namespace jcir
