#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "jcir/density.hpp"
#include "jcir/path.hpp"
#include "jcir/stats.hpp"

namespace jcir {

struct ScoreInfo {
    double score = 0.0;  // U
    double info = 0.0;   // I, >= 0
    double rate = 0.0;   // scaling factor used
};

struct MleResult {
    double b_hat = 0.0;
    int iterations = 0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    double objective = 0.0;
};

struct DiscreteObs {
    double dt = 0.0;
    std::vector<double> y;

    std::size_t n() const { return y.empty() ? 0 : y.size() - 1; }
};

inline DiscreteObs subsample(const SamplePath& path, std::size_t every) {
    if (every == 0 || path.steps() % every != 0)
        throw std::invalid_argument("subsample: stride must divide the step count");
    DiscreteObs obs;
    obs.dt = path.dt * static_cast<double>(every);
    obs.y.reserve(path.steps() / every + 1);
    for (std::size_t k = 0; k < path.y.size(); k += every) obs.y.push_back(path.y[k]);
    return obs;
}

// Total jump mass on the path. Uses stored marks; the threshold rule (for
// imported, mark-free data) counts increments above c sqrt(dt) (1 + Y_k) as
// jumps, an approximation only.
inline double jump_sum(const SamplePath& path) { return path.jump_total(); }

inline double jump_sum_threshold(const SamplePath& path, double c = 4.0) {
    double total = 0.0;
    const double root_dt = std::sqrt(path.dt);
    for (std::size_t k = 0; k < path.steps(); ++k) {
        const double inc = path.y[k + 1] - path.y[k];
        if (inc > c * root_dt * (1.0 + path.y[k])) total += inc;
    }
    return total;
}

// Continuous-observation MLE
//   b_hat = -(Y_T - y0 - aT - J_T) / int_0^T Y ds.
// Neither sigma nor the jump measure enters; sigma is accepted to make that
// property testable.
inline MleResult mle_continuous(const SamplePath& path, double a, [[maybe_unused]] double sigma = 1.0) {
    const double iy = integral_y_likelihood(path);
    if (!(iy > 0.0)) throw std::runtime_error("mle_continuous: time integral of Y is zero");
    const double T = path.horizon();
    MleResult r;
    r.b_hat = -(path.y.back() - path.y.front() - a * T - jump_sum(path)) / iy;
    r.objective = 0.0;
    return r;
}

// log dP^{b_tilde}/dP^{b} of the continuous observation:
//   -((bt - b)/sigma^2)(Y_T - y0 - aT - J_T) - ((bt^2 - b^2)/(2 sigma^2)) int Y ds
inline double loglik_ratio_continuous(const SamplePath& path, double b, double b_tilde, double a,
                                      double sigma) {
    const double s2 = sigma * sigma;
    const double T = path.horizon();
    const double martingale_part = path.y.back() - path.y.front() - a * T - jump_sum(path);
    const double iy = integral_y_likelihood(path);
    return -(b_tilde - b) / s2 * martingale_part - (b_tilde * b_tilde - b * b) / (2.0 * s2) * iy;
}

// Scaled score/information pair at b0 with scaling factor `rate`:
//   U = -(rate/sigma^2)(Y_T - y0 - aT + b0 int Y ds - J_T),  I = rate^2/sigma^2 int Y ds.
// The identity log-ratio(b0 -> b0 + rate*u) = u U - u^2 I / 2 holds exactly in
// the stored quantities.
inline ScoreInfo score_info(const SamplePath& path, double a, double sigma, double b0, double rate) {
    const double s2 = sigma * sigma;
    const double T = path.horizon();
    const double iy = integral_y_likelihood(path);
    ScoreInfo si;
    si.rate = rate;
    si.score = -(rate / s2) * (path.y.back() - path.y.front() - a * T + b0 * iy - jump_sum(path));
    si.info = rate * rate / s2 * iy;
    return si;
}

// Shared Fourier kernels for a block of transitions at one (params, dt).
// Observations are bucketed dyadically by the conditioning state so that the
// truncation/resolution of each kernel matches the states it serves.
class DiscreteLoglik {
public:
    DiscreteLoglik(DiscreteObs obs, CirParams base) : obs_(std::move(obs)), base_(std::move(base)) {
        if (obs_.n() < 1) throw std::invalid_argument("DiscreteLoglik: need at least one transition");
        if (!strictly_positive_regime(base_))
            throw std::invalid_argument("density inversion outside proven regime (needs 2a > sigma^2)");
        for (std::size_t k = 0; k <= obs_.n(); ++k)
            if (!(obs_.y[k] > 0.0))
                throw std::runtime_error("DiscreteLoglik: nonpositive observation at index " +
                                         std::to_string(k));
        bucket_.resize(obs_.n());
        for (std::size_t k = 0; k < obs_.n(); ++k) {
            const int b = bucket_of(obs_.y[k]);
            bucket_[k] = b;
            auto& info = buckets_[b];
            info.x_min = std::min(info.x_min, obs_.y[k]);
            info.y_max = std::max(info.y_max, obs_.y[k + 1]);
        }
    }

    double loglik(double b) const {
        auto kernels = build_kernels(b, false);
        std::vector<double> terms(obs_.n());
        for (std::size_t k = 0; k < obs_.n(); ++k) {
            const double pk = kernels.at(bucket_[k])->density(obs_.y[k], obs_.y[k + 1]);
            if (!(pk > 0.0))
                throw std::runtime_error("loglik_discrete: density evaluation failed at transition " +
                                         std::to_string(k));
            terms[k] = std::log(pk);
        }
        return stats::pairwise_sum(terms);
    }

    double dloglik_db(double b) const {
        auto kernels = build_kernels(b, true);
        std::vector<double> terms(obs_.n());
        for (std::size_t k = 0; k < obs_.n(); ++k) {
            const auto& kern = kernels.at(bucket_[k]);
            const double pk = kern->density(obs_.y[k], obs_.y[k + 1]);
            if (!(pk > 0.0))
                throw std::runtime_error("dloglik_db: density evaluation failed at transition " +
                                         std::to_string(k));
            terms[k] = kern->density_db(obs_.y[k], obs_.y[k + 1]) / pk;
        }
        return stats::pairwise_sum(terms);
    }

private:
    static int bucket_of(double x) { return static_cast<int>(std::floor(std::log2(x))); }

    struct BucketInfo {
        double x_min = std::numeric_limits<double>::infinity();
        double y_max = 0.0;
    };

    std::map<int, std::unique_ptr<DensityKernel>> build_kernels(double b, bool with_db) const {
        std::map<int, std::unique_ptr<DensityKernel>> out;
        const CirParams p = base_.with_b(b);
        for (const auto& [id, info] : buckets_) {
            out.emplace(id, std::make_unique<DensityKernel>(
                                p, obs_.dt,
                                DensityKernel::Options{.tail_tol = 1e-12,
                                                       .x_min = info.x_min,
                                                       .y_max = info.y_max,
                                                       .with_db = with_db}));
        }
        return out;
    }

    DiscreteObs obs_;
    CirParams base_;
    std::vector<int> bucket_;
    std::map<int, BucketInfo> buckets_;
};

// Sum over transitions of log p^b(dt, Y_k, Y_{k+1}).
inline double loglik_discrete(const DiscreteObs& obs, const CirParams& params_with_b) {
    DiscreteLoglik eval(obs, params_with_b);
    return eval.loglik(params_with_b.b);
}

// loglik(b0 + u/rate) - loglik(b0).
inline double loglik_ratio_discrete(const DiscreteObs& obs, const CirParams& base, double b0,
                                    double u, double rate) {
    DiscreteLoglik eval(obs, base);
    if (u == 0.0) return 0.0;
    return eval.loglik(b0 + u / rate) - eval.loglik(b0);
}

// 1-D maximization of the discrete log-likelihood: derivative-sign bracketing
// then golden-section, tolerance 1e-6 in b.
inline MleResult mle_discrete(const DiscreteObs& obs, const CirParams& base, double lo, double hi,
                              double tol = 1e-6) {
    if (!(lo < hi)) throw std::invalid_argument("mle_discrete: empty search interval");
    DiscreteLoglik eval(obs, base);
    const double d_lo = eval.dloglik_db(lo);
    const double d_hi = eval.dloglik_db(hi);
    if (!(d_lo > 0.0) || !(d_hi < 0.0))
        throw std::runtime_error("mle_discrete: maximizer not bracketed by [" + std::to_string(lo) +
                                 ", " + std::to_string(hi) + "]");
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = eval.loglik(c);
    double fd = eval.loglik(d);
    int iters = 0;
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = eval.loglik(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = eval.loglik(d);
        }
        ++iters;
        if (iters > 200) throw std::runtime_error("mle_discrete: golden section failed to converge");
    }
    MleResult r;
    r.b_hat = 0.5 * (a + b);
    r.iterations = iters;
    r.bracket_lo = lo;
    r.bracket_hi = hi;
    r.objective = eval.loglik(r.b_hat);
    return r;
}

// default search interval around the continuous pilot estimator
inline MleResult mle_discrete_auto(const DiscreteObs& obs, const CirParams& base, double tol = 1e-6) {
    SamplePath as_path;
    as_path.dt = obs.dt;
    as_path.y = obs.y;
    as_path.dw.assign(obs.n(), 0.0);
    as_path.dj.assign(obs.n(), 0.0);
    const double pilot = mle_continuous(as_path, base.a).b_hat;
    return mle_discrete(obs, base, pilot - 2.0, pilot + 2.0, tol);
}

}  // namespace jcir
