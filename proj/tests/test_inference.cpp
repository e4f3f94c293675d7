#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "jcir/inference.hpp"
#include "jcir/parallel.hpp"
#include "jcir/rng.hpp"
#include "jcir/stats.hpp"
#include "oracles.hpp"

using namespace jcir;

namespace {
const LevyMeasure kCpe = LevyMeasure::compound_poisson_exp(1.0, 2.0);
const CirParams kSub(2.0, 1.0, 0.5, 2.5, kCpe);

SamplePath ode_path(const CirParams& p, double T, std::size_t steps) {
    std::vector<double> zero(steps, 0.0);
    return simulate_path_with_noise(p, T / static_cast<double>(steps), zero, zero);
}
}  // namespace

TEST_CASE("jump sum") {
    const CirParams diff(2.0, 1.0, 0.5, 2.0, LevyMeasure::zero());
    CHECK(jump_sum(simulate_path(diff, 1.0, 100, Scheme::ExactBetweenJumps, 3)) == 0.0);

    SamplePath injected = simulate_path(diff, 1.0, 100, Scheme::ExactBetweenJumps, 3);
    injected.marks.push_back({0.5, 3.0});
    CHECK(jump_sum(injected) == Catch::Approx(3.0));

    // Poisson LLN: jump_sum / T -> rate * size
    const CirParams dirac(2.0, 1.0, 0.5, 2.0, LevyMeasure::dirac(0.9, 1.0));
    const double T = 400.0;
    const auto path = simulate_path(dirac, T, 8000, Scheme::ExactBetweenJumps, 17);
    const double rate_hat = jump_sum(path) / T;
    const double se = std::sqrt(0.9 / T);  // Poisson variance per unit time
    CHECK(std::abs(rate_hat - 0.9) < 4.0 * se);
}

TEST_CASE("continuous MLE on the noise-free path recovers b") {
    for (double b : {-0.5, 0.0, 1.2}) {
        const CirParams p(2.0, b, 0.5, 2.0, LevyMeasure::zero());
        const auto path = ode_path(p, 5.0, 4000);
        const auto r = mle_continuous(path, p.a);
        INFO("b=" << b);
        CHECK(r.b_hat == Catch::Approx(b).margin(5e-3));
    }
}

TEST_CASE("continuous MLE is asymptotically efficient at desk scale") {
    const double T = 100.0;
    const std::size_t reps = 600;
    std::vector<double> scaled(reps);
    par::parallel_for(reps, par::default_threads(), [&](std::size_t i) {
        const auto path = simulate_path(kSub, T, 5000, Scheme::ExactBetweenJumps,
                                        rng::derive_seed(31, "mle", i));
        scaled[i] = std::sqrt(T) * (mle_continuous(path, kSub.a).b_hat - kSub.b);
    });
    const auto m = stats::moments(scaled);
    const double fisher = (kSub.a + first_moment(kSub.m)) / (kSub.sigma * kSub.sigma * kSub.b);
    CHECK(std::abs(m.mean) < 4.0 * m.se_mean + 0.05);
    CHECK(m.var == Catch::Approx(1.0 / fisher).epsilon(0.15));
}

TEST_CASE("MLE jump-translation cancellation and sigma independence") {
    auto path = simulate_path(kSub, 10.0, 1000, Scheme::ExactBetweenJumps, 5);
    const double before = mle_continuous(path, kSub.a).b_hat;
    // a jump at the terminal point shifts Y_T and J_T equally and drops out
    // of the likelihood time integral: b_hat cancels it exactly
    const double size = 2.7;
    path.y.back() += size;
    path.dj.back() += size;
    path.marks.push_back({path.horizon(), size});
    CHECK(mle_continuous(path, kSub.a).b_hat == Catch::Approx(before).epsilon(1e-14));
    // a mid-path jump still cancels in the numerator
    auto shifted = path;
    for (std::size_t k = shifted.y.size() / 2; k < shifted.y.size(); ++k) shifted.y[k] += size;
    shifted.marks.push_back({shifted.horizon() / 2.0, size});
    const double numer = [&](const SamplePath& q) {
        return q.y.back() - q.y.front() - kSub.a * q.horizon() - jump_sum(q);
    }(path) - [&](const SamplePath& q) {
        return q.y.back() - q.y.front() - kSub.a * q.horizon() - jump_sum(q);
    }(shifted);
    CHECK(numer == Catch::Approx(0.0).margin(1e-12));
    CHECK(mle_continuous(path, kSub.a, 0.5).b_hat == mle_continuous(path, kSub.a, 5.0).b_hat);
}

TEST_CASE("log likelihood ratio identities") {
    const auto path = simulate_path(kSub, 5.0, 500, Scheme::ExactBetweenJumps, 8);
    CHECK(loglik_ratio_continuous(path, 1.0, 1.0, kSub.a, kSub.sigma) == 0.0);
    const double fwd = loglik_ratio_continuous(path, 1.0, 1.4, kSub.a, kSub.sigma);
    const double bwd = loglik_ratio_continuous(path, 1.4, 1.0, kSub.a, kSub.sigma);
    CHECK(fwd == Catch::Approx(-bwd).epsilon(1e-12));

    // exact algebraic identity with the score/information pair
    const double rate = 1.0 / std::sqrt(path.horizon());
    const auto si = score_info(path, kSub.a, kSub.sigma, kSub.b, rate);
    CHECK(si.info >= 0.0);
    for (double u : {-1.0, 0.5, 2.0}) {
        const double lhs = loglik_ratio_continuous(path, kSub.b, kSub.b + rate * u, kSub.a, kSub.sigma);
        const double rhs = u * si.score - 0.5 * u * u * si.info;
        CHECK(lhs == Catch::Approx(rhs).margin(1e-12 * (1.0 + std::abs(rhs))));
    }
}

TEST_CASE("girsanov weights have unit mean") {
    // light version of the acceptance gate
    const double T = 5.0;
    const std::size_t reps = 4000;
    for (auto [b, bt] : {std::pair{1.0, 1.2}, {0.0, 0.3}, {-0.5, -0.4}}) {
        const CirParams p(2.0, b, 0.5, 2.5, kCpe);
        std::vector<double> w(reps);
        par::parallel_for(reps, par::default_threads(), [&](std::size_t i) {
            const auto path = simulate_path(p, T, static_cast<std::size_t>(T / 0.01),
                                            Scheme::ExactBetweenJumps, rng::derive_seed(13, "gir", i));
            w[i] = std::exp(loglik_ratio_continuous(path, b, bt, p.a, p.sigma));
        });
        const auto m = stats::moments(w);
        INFO("b=" << b << " bt=" << bt << " mean=" << m.mean);
        CHECK(std::abs(m.mean - 1.0) < 3.0 * m.se_mean);
    }
}

TEST_CASE("score variance matches the Fisher information") {
    const double T = 100.0;
    const std::size_t reps = 1000;
    std::vector<double> scores(reps);
    par::parallel_for(reps, par::default_threads(), [&](std::size_t i) {
        const auto path = simulate_path(kSub, T, 5000, Scheme::ExactBetweenJumps,
                                        rng::derive_seed(77, "score", i));
        scores[i] = score_info(path, kSub.a, kSub.sigma, kSub.b, 1.0 / std::sqrt(T)).score;
    });
    const double fisher = (kSub.a + first_moment(kSub.m)) / (kSub.sigma * kSub.sigma * kSub.b);
    CHECK(stats::moments(scores).var == Catch::Approx(fisher).epsilon(0.15));
}

TEST_CASE("discrete log likelihood equals the chi-square oracle without jumps") {
    const CirParams p(2.0, 1.0, 0.5, 1.0, LevyMeasure::zero());
    DiscreteObs obs;
    obs.dt = 0.25;
    obs.y = {1.0, 1.4, 1.9};
    const double mine = loglik_discrete(obs, p);
    const double ref = oracles::cir_log_density(p.a, p.b, p.sigma, 0.25, 1.0, 1.4) +
                       oracles::cir_log_density(p.a, p.b, p.sigma, 0.25, 1.4, 1.9);
    CHECK(mine == Catch::Approx(ref).margin(1e-8));

    // additivity over blocks
    DiscreteObs head, tail;
    head.dt = tail.dt = 0.25;
    head.y = {1.0, 1.4};
    tail.y = {1.4, 1.9};
    CHECK(loglik_discrete(head, p) + loglik_discrete(tail, p) == Catch::Approx(mine).margin(1e-10));
}

TEST_CASE("discrete log likelihood derivative matches a finite difference") {
    const CirParams p(2.0, 1.0, 0.5, 2.5, kCpe);
    const auto path = simulate_path(p, 5.0, 800, Scheme::ExactBetweenJumps, 4);
    const auto obs = subsample(path, 8);
    DiscreteLoglik eval(obs, p);
    const double h = 1e-5;
    const double fd = (eval.loglik(p.b + h) - eval.loglik(p.b - h)) / (2.0 * h);
    const double an = eval.dloglik_db(p.b);
    CHECK(an == Catch::Approx(fd).epsilon(1e-5));
}

TEST_CASE("discrete ratio conventions") {
    const CirParams p(2.0, 1.0, 0.5, 2.5, kCpe);
    const auto path = simulate_path(p, 4.0, 640, Scheme::ExactBetweenJumps, 6);
    const auto obs = subsample(path, 8);
    CHECK(loglik_ratio_discrete(obs, p, p.b, 0.0, 10.0) == 0.0);
    // telescoping on the same data
    DiscreteLoglik eval(obs, p);
    const double rate = 10.0;
    const double direct = eval.loglik(p.b + 0.8 / rate) - eval.loglik(p.b);
    const double step1 = eval.loglik(p.b + 0.3 / rate) - eval.loglik(p.b);
    const double step2 = eval.loglik(p.b + 0.8 / rate) - eval.loglik(p.b + 0.3 / rate);
    CHECK(step1 + step2 == Catch::Approx(direct).margin(1e-10));
}

TEST_CASE("discrete MLE sits at a local maximum and matches the oracle route") {
    const CirParams p(2.0, 1.0, 0.5, 2.5, LevyMeasure::zero());
    const auto path = simulate_path(p, 50.0, 8000, Scheme::ExactBetweenJumps, 12);
    const auto obs = subsample(path, 8);  // n = 1000, dt = 0.05
    const auto r = mle_discrete(obs, p, 0.2, 2.5);
    DiscreteLoglik eval(obs, p);
    CHECK(r.objective >= eval.loglik(r.b_hat + 0.01));
    CHECK(r.objective >= eval.loglik(r.b_hat - 0.01));

    // independent golden section over the closed-form chi-square likelihood
    auto oracle_loglik = [&](double b) {
        double s = 0.0;
        for (std::size_t k = 0; k + 1 < obs.y.size(); ++k)
            s += oracles::cir_log_density(p.a, b, p.sigma, obs.dt, obs.y[k], obs.y[k + 1]);
        return s;
    };
    double a = 0.2, bb = 2.5;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = bb - inv_phi * (bb - a), d = a + inv_phi * (bb - a);
    double fc = oracle_loglik(c), fdv = oracle_loglik(d);
    while (bb - a > 1e-8) {
        if (fc > fdv) {
            bb = d; d = c; fdv = fc; c = bb - inv_phi * (bb - a); fc = oracle_loglik(c);
        } else {
            a = c; c = d; fc = fdv; d = a + inv_phi * (bb - a); fdv = oracle_loglik(d);
        }
    }
    CHECK(r.b_hat == Catch::Approx(0.5 * (a + bb)).margin(1e-4));
}

TEST_CASE("discrete MLE approaches the continuous one as the step shrinks") {
    const CirParams p(2.0, 1.0, 0.5, 2.5, LevyMeasure::zero());
    const auto path = simulate_path(p, 50.0, 16000, Scheme::ExactBetweenJumps, 19);
    const double cont = mle_continuous(path, p.a).b_hat;
    std::vector<double> gaps;
    for (std::size_t every : {32, 16, 8}) {  // dt = 0.1, 0.05, 0.025
        const auto obs = subsample(path, every);
        gaps.push_back(std::abs(mle_discrete(obs, p, cont - 1.5, cont + 1.5).b_hat - cont));
    }
    CHECK(gaps.back() < gaps.front());
}

TEST_CASE("bracketing failure is reported") {
    const CirParams p(2.0, 1.0, 0.5, 2.5, LevyMeasure::zero());
    const auto path = simulate_path(p, 20.0, 3200, Scheme::ExactBetweenJumps, 23);
    const auto obs = subsample(path, 8);
    CHECK_THROWS_WITH(mle_discrete(obs, p, 4.0, 6.0),
                      Catch::Matchers::ContainsSubstring("not bracketed"));
}

TEST_CASE("threshold jump identification on mark-free data") {
    const CirParams diff(2.0, 1.0, 0.5, 2.0, LevyMeasure::zero());
    auto path = simulate_path(diff, 10.0, 200, Scheme::ExactBetweenJumps, 29);
    CHECK(jump_sum_threshold(path) == 0.0);
    // one big artificial jump is caught (the rule reports the raw increment,
    // so the diffusion move of that step rides along)
    path.y[100] += 5.0;
    CHECK(jump_sum_threshold(path) >= 4.0);
    CHECK(jump_sum_threshold(path) <= 6.0);
}
