#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "jcir/parallel.hpp"
#include "jcir/path.hpp"
#include "jcir/rng.hpp"

namespace jcir {

// Samples of the limiting (score, information) couple of the local experiment.
//  - Subcritical: score ~ N(0, I), information constant I = (a + m1)/(sigma^2 b).
//  - Critical: both built from one diffusion CIR path started at 0 with drift
//    a + m1 on [0,1].
//  - Supercritical: information -V/(sigma^2 b) from the long-horizon limit of
//    e^{bT} Y_T, score = sqrt(information) * independent standard normal.
struct LimitLaw {
    Criticality regime = Criticality::Subcritical;
    double fisher_info = 0.0;  // deterministic value in the subcritical case
    std::vector<double> score;
    std::vector<double> info;

    std::vector<double> loglr_samples(double u) const {
        std::vector<double> out(score.size());
        for (std::size_t i = 0; i < score.size(); ++i)
            out[i] = u * score[i] - 0.5 * u * u * info[i];
        return out;
    }
};

struct LimitLawOptions {
    std::size_t critical_steps = 1000;    // grid on [0,1] for the critical limit path
    double v_tail = 1e-4;                 // e^{bT} cutoff for the V horizon
    double v_dt = 0.01;                   // simulation step for the V sampler
    unsigned threads = 0;
};

inline double v_sampling_horizon(double b, double tail = 1e-4) {
    if (!(b < 0.0)) throw std::invalid_argument("v_sampling_horizon: requires b < 0");
    return std::log(1.0 / tail) / (-b);
}

inline LimitLaw sample_limit_law(Criticality regime, const CirParams& p, std::size_t replications,
                                 std::uint64_t seed, LimitLawOptions opt = {}) {
    if (replications < 1000) throw std::invalid_argument("sample_limit_law: need at least 1e3 samples");
    if (regime != classify(p)) throw std::invalid_argument("sample_limit_law: regime/params mismatch");
    const unsigned threads = opt.threads == 0 ? par::default_threads() : opt.threads;
    LimitLaw law;
    law.regime = regime;
    law.score.resize(replications);
    law.info.resize(replications);
    const double s2 = p.sigma * p.sigma;
    const double m1 = first_moment(p.m);

    switch (regime) {
        case Criticality::Subcritical: {
            const double fisher = (p.a + m1) / (s2 * p.b);
            if (!(fisher > 0.0))
                throw std::invalid_argument("sample_limit_law: needs a > 0 or a jump measure");
            law.fisher_info = fisher;
            auto eng = rng::make_engine(seed, "limit-subcritical");
            std::normal_distribution<double> normal(0.0, std::sqrt(fisher));
            for (std::size_t i = 0; i < replications; ++i) {
                law.score[i] = normal(eng);
                law.info[i] = fisher;
            }
            break;
        }
        case Criticality::Critical: {
            require_positive_time_integral(p);
            const double drift = p.a + m1;
            const CirParams limit_params(drift, 0.0, p.sigma, 0.0, LevyMeasure::zero());
            par::parallel_for(replications, threads, [&](std::size_t i) {
                const SamplePath path =
                    simulate_path(limit_params, 1.0, opt.critical_steps, Scheme::ExactBetweenJumps,
                                  rng::derive_seed(seed, "limit-critical", i));
                law.score[i] = (drift - path.y.back()) / s2;
                law.info[i] = integral_y(path) / s2;
            });
            break;
        }
        case Criticality::Supercritical: {
            const double T = v_sampling_horizon(p.b, opt.v_tail);
            const auto steps = static_cast<std::size_t>(std::ceil(T / opt.v_dt));
            par::parallel_for(replications, threads, [&](std::size_t i) {
                const SamplePath path = simulate_path(p, T, steps, Scheme::ExactBetweenJumps,
                                                      rng::derive_seed(seed, "limit-v", i));
                const double v = std::exp(p.b * T) * path.y.back();
                auto eng = rng::make_engine(seed, "limit-z", i);
                std::normal_distribution<double> normal(0.0, 1.0);
                const double info = -v / (s2 * p.b);
                law.info[i] = info;
                law.score[i] = std::sqrt(std::max(info, 0.0)) * normal(eng);
            });
            break;
        }
    }
    return law;
}

// Direct draws of the supercritical limit variable V.
inline std::vector<double> sample_v(const CirParams& p, double T, std::size_t replications,
                                    std::uint64_t seed, double dt = 0.01, unsigned threads = 0) {
    if (!(p.b < 0.0)) throw std::invalid_argument("sample_v: requires b < 0");
    if (threads == 0) threads = par::default_threads();
    const auto steps = static_cast<std::size_t>(std::ceil(T / dt));
    std::vector<double> v(replications);
    par::parallel_for(replications, threads, [&](std::size_t i) {
        const SamplePath path =
            simulate_path(p, T, steps, Scheme::ExactBetweenJumps, rng::derive_seed(seed, "v-sample", i));
        v[i] = std::exp(p.b * T) * path.y.back();
    });
    return v;
}

}  // namespace jcir
