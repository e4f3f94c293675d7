#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "jcir/quadrature.hpp"
#include "jcir/special.hpp"

namespace jcir {

using cplx = std::complex<double>;

// Catalog of subordinator Levy measures on (0, inf). Every member must have a
// finite first moment and finite p-th moments (conditions the inference and
// experiment layers rely on).
struct ZeroMeasure {};

struct DiracAtom {
    double rate;  // mass of the atom
    double z;     // location, > 0
};

// m(dz) = c * lambda * exp(-lambda z) dz; compound Poisson with rate c and
// exponential jump sizes.
struct CompoundPoissonExp {
    double c;
    double lambda;
};

// m(dz) = gamma * z^{-1} * exp(-lambda z) dz (infinite activity).
struct GammaProcess {
    double gamma;
    double lambda;
};

// m(dz) proportional to z^{alpha-1} exp(-lambda z) dz with alpha in (-1,0) u (0,inf).
// For alpha > 0 the normalization is the gamma probability density (total mass 1,
// finite activity); for alpha < 0 the measure has infinite total mass and the
// coefficient lambda^alpha / |Gamma(alpha)| keeps it positive.
struct GammaDensity {
    double alpha;
    double lambda;
};

// m(dz) = delta / sqrt(2 pi z^3) * exp(-gamma^2 z / 2) dz.
struct InverseGaussianMeasure {
    double delta;
    double gamma;
};

// User-supplied density with integrability metadata. tail_rate is an
// exponential tail bound rate: density(z) decays at least like exp(-tail_rate z).
// Sampling additionally needs the normalized jump-size quantile function and
// the finite total mass.
struct CustomDensity {
    std::function<double(double)> density;
    double tail_rate = 1.0;
    std::function<double(double)> jump_quantile;  // optional inverse CDF on (0,1)
    double total_mass = std::numeric_limits<double>::quiet_NaN();
};

class LevyMeasure {
public:
    using Variant = std::variant<ZeroMeasure, DiracAtom, CompoundPoissonExp, GammaProcess,
                                 GammaDensity, InverseGaussianMeasure, CustomDensity>;

    LevyMeasure() : v_(ZeroMeasure{}) {}
    explicit LevyMeasure(Variant v) : v_(std::move(v)) { check(); }

    static LevyMeasure zero() { return LevyMeasure(ZeroMeasure{}); }
    static LevyMeasure dirac(double rate, double z) { return LevyMeasure(DiracAtom{rate, z}); }
    static LevyMeasure compound_poisson_exp(double c, double lambda) {
        return LevyMeasure(CompoundPoissonExp{c, lambda});
    }
    static LevyMeasure gamma_process(double gamma, double lambda) {
        return LevyMeasure(GammaProcess{gamma, lambda});
    }
    static LevyMeasure gamma_density(double alpha, double lambda) {
        return LevyMeasure(GammaDensity{alpha, lambda});
    }
    static LevyMeasure inverse_gaussian(double delta, double gamma) {
        return LevyMeasure(InverseGaussianMeasure{delta, gamma});
    }
    static LevyMeasure custom(CustomDensity d) { return LevyMeasure(Variant(std::move(d))); }

    const Variant& v() const { return v_; }

    bool is_zero() const { return std::holds_alternative<ZeroMeasure>(v_); }

    std::string kind_name() const {
        struct Name {
            std::string operator()(const ZeroMeasure&) const { return "zero"; }
            std::string operator()(const DiracAtom&) const { return "dirac"; }
            std::string operator()(const CompoundPoissonExp&) const { return "compound-poisson-exp"; }
            std::string operator()(const GammaProcess&) const { return "gamma-process"; }
            std::string operator()(const GammaDensity&) const { return "gamma-density"; }
            std::string operator()(const InverseGaussianMeasure&) const { return "inverse-gaussian"; }
            std::string operator()(const CustomDensity&) const { return "custom"; }
        };
        return std::visit(Name{}, v_);
    }

private:
    void check() const {
        std::visit(
            [](const auto& m) {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, DiracAtom>) {
                    if (!(m.rate >= 0.0)) throw std::invalid_argument("DiracAtom: rate must be >= 0");
                    if (!(m.z > 0.0)) throw std::invalid_argument("DiracAtom: location must be > 0");
                } else if constexpr (std::is_same_v<T, CompoundPoissonExp>) {
                    if (!(m.c > 0.0) || !(m.lambda > 0.0))
                        throw std::invalid_argument("CompoundPoissonExp: c and lambda must be > 0");
                } else if constexpr (std::is_same_v<T, GammaProcess>) {
                    if (!(m.gamma > 0.0) || !(m.lambda > 0.0))
                        throw std::invalid_argument("GammaProcess: gamma and lambda must be > 0");
                } else if constexpr (std::is_same_v<T, GammaDensity>) {
                    if (!(m.alpha > -1.0) || m.alpha == 0.0)
                        throw std::invalid_argument("GammaDensity: alpha must be in (-1,0) or (0,inf)");
                    if (!(m.lambda > 0.0)) throw std::invalid_argument("GammaDensity: lambda must be > 0");
                } else if constexpr (std::is_same_v<T, InverseGaussianMeasure>) {
                    if (!(m.delta > 0.0) || !(m.gamma > 0.0))
                        throw std::invalid_argument("InverseGaussian: delta and gamma must be > 0");
                } else if constexpr (std::is_same_v<T, CustomDensity>) {
                    if (!m.density) throw std::invalid_argument("CustomDensity: density required");
                    if (!(m.tail_rate > 0.0))
                        throw std::invalid_argument("CustomDensity: tail_rate must be > 0");
                }
            },
            v_);
    }

    Variant v_;
};

namespace detail {

inline double gamma_density_coef(const GammaDensity& g) {
    const double coef = std::pow(g.lambda, g.alpha) / std::tgamma(g.alpha);
    return g.alpha > 0.0 ? coef : -coef;  // Gamma(alpha) < 0 on (-1,0)
}

template <class F>
double custom_integral(const CustomDensity& m, F&& weight, const char* what) {
    double value = quad::integrate_semi_infinite(
        [&](double z) { return z > 0.0 ? weight(z) * m.density(z) : 0.0; }, m.tail_rate, what, 1e-13,
        1e-11);
    if (!std::isfinite(value)) throw std::runtime_error(std::string(what) + ": divergent integral");
    return value;
}

}  // namespace detail

// integral z m(dz); condition (A1) requires this to be finite and >= 0.
inline double first_moment(const LevyMeasure& m) {
    return std::visit(
        [](const auto& mm) -> double {
            using T = std::decay_t<decltype(mm)>;
            if constexpr (std::is_same_v<T, ZeroMeasure>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, DiracAtom>) {
                return mm.rate * mm.z;
            } else if constexpr (std::is_same_v<T, CompoundPoissonExp>) {
                return mm.c / mm.lambda;
            } else if constexpr (std::is_same_v<T, GammaProcess>) {
                return mm.gamma / mm.lambda;
            } else if constexpr (std::is_same_v<T, GammaDensity>) {
                return detail::gamma_density_coef(mm) * std::tgamma(1.0 + mm.alpha) /
                       std::pow(mm.lambda, 1.0 + mm.alpha);
            } else if constexpr (std::is_same_v<T, InverseGaussianMeasure>) {
                return mm.delta / mm.gamma;
            } else {
                try {
                    return detail::custom_integral(mm, [](double z) { return z; }, "first_moment");
                } catch (const std::exception& e) {
                    throw std::runtime_error(std::string("first_moment: violates (A1): ") + e.what());
                }
            }
        },
        m.v());
}

// integral z^p m(dz) for p > 1; condition (A2).
inline double pth_moment(const LevyMeasure& m, double p) {
    if (!(p > 1.0)) throw std::invalid_argument("pth_moment: p must be > 1");
    return std::visit(
        [p](const auto& mm) -> double {
            using T = std::decay_t<decltype(mm)>;
            if constexpr (std::is_same_v<T, ZeroMeasure>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, DiracAtom>) {
                return mm.rate * std::pow(mm.z, p);
            } else if constexpr (std::is_same_v<T, CompoundPoissonExp>) {
                return mm.c * std::tgamma(p + 1.0) / std::pow(mm.lambda, p);
            } else if constexpr (std::is_same_v<T, GammaProcess>) {
                return mm.gamma * std::tgamma(p) / std::pow(mm.lambda, p);
            } else if constexpr (std::is_same_v<T, GammaDensity>) {
                return detail::gamma_density_coef(mm) * std::tgamma(p + mm.alpha) /
                       std::pow(mm.lambda, p + mm.alpha);
            } else if constexpr (std::is_same_v<T, InverseGaussianMeasure>) {
                const double c = 0.5 * mm.gamma * mm.gamma;
                return mm.delta / std::sqrt(2.0 * M_PI) * std::tgamma(p - 0.5) *
                       std::pow(c, 0.5 - p);
            } else {
                try {
                    return detail::custom_integral(mm, [p](double z) { return std::pow(z, p); },
                                                   "pth_moment");
                } catch (const std::exception& e) {
                    throw std::runtime_error(std::string("pth_moment: violates (A2): ") + e.what());
                }
            }
        },
        m.v());
}

// Total mass, possibly infinite (infinite-activity members).
inline double total_mass(const LevyMeasure& m) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return std::visit(
        [inf](const auto& mm) -> double {
            using T = std::decay_t<decltype(mm)>;
            if constexpr (std::is_same_v<T, ZeroMeasure>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, DiracAtom>) {
                return mm.rate;
            } else if constexpr (std::is_same_v<T, CompoundPoissonExp>) {
                return mm.c;
            } else if constexpr (std::is_same_v<T, GammaProcess>) {
                return inf;
            } else if constexpr (std::is_same_v<T, GammaDensity>) {
                return mm.alpha > 0.0 ? 1.0 : inf;
            } else if constexpr (std::is_same_v<T, InverseGaussianMeasure>) {
                return inf;
            } else {
                if (std::isfinite(mm.total_mass)) return mm.total_mass;
                try {
                    return detail::custom_integral(mm, [](double) { return 1.0; }, "total_mass");
                } catch (const std::exception&) {
                    return inf;
                }
            }
        },
        m.v());
}

inline void validate(const LevyMeasure& m) {
    const double m1 = first_moment(m);
    if (!(m1 >= 0.0) || !std::isfinite(m1)) throw std::runtime_error("levy: violates (A1)");
    for (double p : {2.0, 4.0, 8.0}) {
        const double mp = pth_moment(m, p);
        if (!std::isfinite(mp)) throw std::runtime_error("levy: violates (A2)");
    }
}

// Small/big decomposition at threshold upsilon.
struct JumpSplit {
    double threshold = 0.0;
    double big_rate = 0.0;        // m({z > threshold})
    double small_mean = 0.0;      // integral of z over {z <= threshold}
    double small_var_bound = 0.0; // integral of z^2 over {z <= threshold}
};

inline JumpSplit split(const LevyMeasure& m, double upsilon) {
    if (!(upsilon > 0.0)) throw std::invalid_argument("split: threshold must be > 0");
    JumpSplit s;
    s.threshold = upsilon;
    std::visit(
        [&](const auto& mm) {
            using T = std::decay_t<decltype(mm)>;
            if constexpr (std::is_same_v<T, ZeroMeasure>) {
                // all zero
            } else if constexpr (std::is_same_v<T, DiracAtom>) {
                if (mm.z > upsilon) {
                    s.big_rate = mm.rate;
                } else {
                    s.small_mean = mm.rate * mm.z;
                    s.small_var_bound = mm.rate * mm.z * mm.z;
                }
            } else if constexpr (std::is_same_v<T, CompoundPoissonExp>) {
                const double e = std::exp(-mm.lambda * upsilon);
                s.big_rate = mm.c * e;
                s.small_mean = mm.c * ((1.0 - e) / mm.lambda - upsilon * e);
                s.small_var_bound =
                    mm.c * (2.0 / (mm.lambda * mm.lambda) -
                            e * (upsilon * upsilon + 2.0 * upsilon / mm.lambda +
                                 2.0 / (mm.lambda * mm.lambda)));
            } else if constexpr (std::is_same_v<T, GammaProcess>) {
                const double lu = mm.lambda * upsilon;
                const double e = std::exp(-lu);
                s.big_rate = mm.gamma * special::expint_e1(lu);
                s.small_mean = mm.gamma * (1.0 - e) / mm.lambda;
                s.small_var_bound = mm.gamma * (1.0 - e * (1.0 + lu)) / (mm.lambda * mm.lambda);
            } else if constexpr (std::is_same_v<T, InverseGaussianMeasure>) {
                const double c = 0.5 * mm.gamma * mm.gamma;
                const double x = mm.gamma * std::sqrt(0.5 * upsilon);
                s.big_rate = mm.delta * (std::sqrt(2.0 / (M_PI * upsilon)) * std::exp(-c * upsilon) -
                                         mm.gamma * std::erfc(x));
                s.big_rate = std::max(s.big_rate, 0.0);
                s.small_mean = mm.delta / mm.gamma * std::erf(x);
                const double cu = c * upsilon;
                s.small_var_bound = mm.delta / std::sqrt(2.0 * M_PI) *
                                    (0.5 * std::sqrt(M_PI) * std::erf(std::sqrt(cu)) -
                                     std::sqrt(cu) * std::exp(-cu)) /
                                    std::pow(c, 1.5);
            } else if constexpr (std::is_same_v<T, GammaDensity>) {
                const double coef = detail::gamma_density_coef(mm);
                const double zmax =
                    std::max(2.0 * upsilon, upsilon - std::log(1e-15) / mm.lambda);
                auto dens = [&](double z) { return std::pow(z, mm.alpha - 1.0) * std::exp(-mm.lambda * z); };
                s.big_rate = coef * quad::integrate_or_throw(dens, upsilon, zmax, "split: big_rate");
                s.small_mean = coef * quad::integrate_or_throw(
                                          [&](double z) { return z * dens(z); }, 0.0, upsilon,
                                          "split: small_mean");
                s.small_var_bound = coef * quad::integrate_or_throw(
                                               [&](double z) { return z * z * dens(z); }, 0.0,
                                               upsilon, "split: small_var_bound");
            } else {
                const double zmax = std::max(2.0 * upsilon, upsilon - std::log(1e-15) / mm.tail_rate);
                s.big_rate = quad::integrate_or_throw([&](double z) { return mm.density(z); }, upsilon,
                                                      zmax, "split: big_rate");
                s.small_mean = quad::integrate_or_throw(
                    [&](double z) { return z * mm.density(z); }, 0.0, upsilon, "split: small_mean");
                s.small_var_bound =
                    quad::integrate_or_throw([&](double z) { return z * z * mm.density(z); }, 0.0,
                                             upsilon, "split: small_var_bound");
            }
        },
        m.v());
    if (!std::isfinite(s.big_rate)) throw std::runtime_error("split: infinite big-jump rate");
    return s;
}

// integral (e^{u z} - 1) m(dz) for complex u with Re u <= 0. Closed forms for
// the catalog; quadrature for CustomDensity.
inline cplx jump_transform(const LevyMeasure& m, cplx u) {
    if (u.real() > 1e-12) throw std::invalid_argument("jump_transform: requires Re u <= 0");
    return std::visit(
        [u](const auto& mm) -> cplx {
            using T = std::decay_t<decltype(mm)>;
            if constexpr (std::is_same_v<T, ZeroMeasure>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, DiracAtom>) {
                return mm.rate * (std::exp(u * mm.z) - 1.0);
            } else if constexpr (std::is_same_v<T, CompoundPoissonExp>) {
                return mm.c * u / (mm.lambda - u);
            } else if constexpr (std::is_same_v<T, GammaProcess>) {
                return -mm.gamma * std::log(1.0 - u / mm.lambda);
            } else if constexpr (std::is_same_v<T, GammaDensity>) {
                const cplx w = std::exp(-mm.alpha * std::log(1.0 - u / mm.lambda)) - 1.0;
                return mm.alpha > 0.0 ? w : -w;
            } else if constexpr (std::is_same_v<T, InverseGaussianMeasure>) {
                return mm.delta * (mm.gamma - std::sqrt(cplx(mm.gamma * mm.gamma) - 2.0 * u));
            } else {
                auto f = [&](double z) -> cplx {
                    return z > 0.0 ? (std::exp(u * z) - 1.0) * mm.density(z) : cplx(0.0);
                };
                double zmax = std::max(1.0, -std::log(1e-14) / mm.tail_rate);
                return quad::integrate_or_throw(f, 0.0, zmax, "jump_transform", 1e-13, 1e-11);
            }
        },
        m.v());
}

// integral z e^{u z} m(dz); derivative of jump_transform in u.
inline cplx jump_transform_deriv(const LevyMeasure& m, cplx u) {
    if (u.real() > 1e-12) throw std::invalid_argument("jump_transform_deriv: requires Re u <= 0");
    return std::visit(
        [u](const auto& mm) -> cplx {
            using T = std::decay_t<decltype(mm)>;
            if constexpr (std::is_same_v<T, ZeroMeasure>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, DiracAtom>) {
                return mm.rate * mm.z * std::exp(u * mm.z);
            } else if constexpr (std::is_same_v<T, CompoundPoissonExp>) {
                const cplx d = mm.lambda - u;
                return mm.c * mm.lambda / (d * d);
            } else if constexpr (std::is_same_v<T, GammaProcess>) {
                return mm.gamma / (mm.lambda - u);
            } else if constexpr (std::is_same_v<T, GammaDensity>) {
                return std::abs(mm.alpha) * std::pow(mm.lambda, mm.alpha) *
                       std::exp(-(mm.alpha + 1.0) * std::log(mm.lambda - u));
            } else if constexpr (std::is_same_v<T, InverseGaussianMeasure>) {
                return mm.delta / std::sqrt(cplx(mm.gamma * mm.gamma) - 2.0 * u);
            } else {
                auto f = [&](double z) -> cplx {
                    return z > 0.0 ? z * std::exp(u * z) * mm.density(z) : cplx(0.0);
                };
                double zmax = std::max(1.0, -std::log(1e-14) / mm.tail_rate);
                return quad::integrate_or_throw(f, 0.0, zmax, "jump_transform_deriv", 1e-13, 1e-11);
            }
        },
        m.v());
}

struct SubordinatorJump {
    double t;  // offset within the step, in (0, dt]
    double size;
};

// Draws increments of the subordinator over steps of length dt.
// Exact increment laws where known (gamma, inverse Gaussian, compound
// Poisson); otherwise splits at the threshold: big jumps exactly, small jumps
// replaced by their compensator drift dt * small_mean (L2 bias per step
// bounded by dt * small_var_bound).
class SubordinatorSampler {
public:
    SubordinatorSampler(LevyMeasure m, double dt, double upsilon)
        : m_(std::move(m)), dt_(dt), upsilon_(upsilon) {
        if (!(dt > 0.0)) throw std::invalid_argument("SubordinatorSampler: dt must be > 0");
        if (!(upsilon > 0.0)) throw std::invalid_argument("SubordinatorSampler: threshold must be > 0");
        setup();
    }
    SubordinatorSampler(LevyMeasure m, double dt)
        : SubordinatorSampler(std::move(m), dt, std::sqrt(dt)) {}

    double dt() const { return dt_; }
    double compensator_drift() const { return strategy_ == Strategy::Split ? dt_ * split_.small_mean : 0.0; }

    // One increment J_{t+dt} - J_t; optionally appends jump marks (aggregate
    // increments count as one end-of-step mark).
    double sample(std::mt19937_64& eng, std::vector<SubordinatorJump>* marks = nullptr) {
        switch (strategy_) {
            case Strategy::Zero:
                return 0.0;
            case Strategy::CompoundPoisson: {
                const int n = poisson_(eng);
                double total = 0.0;
                for (int i = 0; i < n; ++i) {
                    const double size = draw_jump_size(eng);
                    const double at = uniform_(eng) * dt_;
                    total += size;
                    if (marks && size > 0.0) marks->push_back({at, size});
                }
                return total;
            }
            case Strategy::GammaIncrement: {
                const double inc = gamma_(eng);
                if (marks && inc > 0.0) marks->push_back({dt_, inc});
                return inc;
            }
            case Strategy::InverseGaussianIncrement: {
                const double inc = sample_ig(eng);
                if (marks && inc > 0.0) marks->push_back({dt_, inc});
                return inc;
            }
            case Strategy::Split: {
                double total = dt_ * split_.small_mean;
                const int n = poisson_(eng);
                for (int i = 0; i < n; ++i) {
                    const double size = draw_big_jump(eng);
                    const double at = uniform_(eng) * dt_;
                    total += size;
                    if (marks && size > 0.0) marks->push_back({at, size});
                }
                if (marks && split_.small_mean > 0.0) marks->push_back({dt_, dt_ * split_.small_mean});
                return total;
            }
        }
        return 0.0;
    }

private:
    enum class Strategy { Zero, CompoundPoisson, GammaIncrement, InverseGaussianIncrement, Split };

    void setup() {
        std::visit(
            [&](const auto& mm) {
                using T = std::decay_t<decltype(mm)>;
                if constexpr (std::is_same_v<T, ZeroMeasure>) {
                    strategy_ = Strategy::Zero;
                } else if constexpr (std::is_same_v<T, DiracAtom>) {
                    if (mm.rate == 0.0) {
                        strategy_ = Strategy::Zero;
                        return;
                    }
                    strategy_ = Strategy::CompoundPoisson;
                    poisson_ = std::poisson_distribution<int>(mm.rate * dt_);
                } else if constexpr (std::is_same_v<T, CompoundPoissonExp>) {
                    strategy_ = Strategy::CompoundPoisson;
                    poisson_ = std::poisson_distribution<int>(mm.c * dt_);
                    exp_ = std::exponential_distribution<double>(mm.lambda);
                } else if constexpr (std::is_same_v<T, GammaProcess>) {
                    strategy_ = Strategy::GammaIncrement;
                    gamma_ = std::gamma_distribution<double>(mm.gamma * dt_, 1.0 / mm.lambda);
                } else if constexpr (std::is_same_v<T, InverseGaussianMeasure>) {
                    strategy_ = Strategy::InverseGaussianIncrement;
                    ig_mu_ = mm.delta * dt_ / mm.gamma;
                    ig_shape_ = mm.delta * mm.delta * dt_ * dt_;
                } else if constexpr (std::is_same_v<T, GammaDensity>) {
                    if (mm.alpha > 0.0) {
                        strategy_ = Strategy::CompoundPoisson;
                        poisson_ = std::poisson_distribution<int>(dt_);  // total mass 1
                        gamma_ = std::gamma_distribution<double>(mm.alpha, 1.0 / mm.lambda);
                    } else {
                        strategy_ = Strategy::Split;
                        split_ = jcir::split(LevyMeasure::gamma_density(mm.alpha, mm.lambda), upsilon_);
                        poisson_ = std::poisson_distribution<int>(split_.big_rate * dt_);
                        exp_ = std::exponential_distribution<double>(mm.lambda);
                        reject_exponent_ = mm.alpha - 1.0;
                    }
                } else {
                    if (!mm.jump_quantile || !std::isfinite(mm.total_mass))
                        throw std::runtime_error(
                            "SubordinatorSampler: CustomDensity without inverse-CDF metadata");
                    strategy_ = Strategy::CompoundPoisson;
                    poisson_ = std::poisson_distribution<int>(mm.total_mass * dt_);
                    custom_quantile_ = mm.jump_quantile;
                }
            },
            m_.v());
    }

    double draw_jump_size(std::mt19937_64& eng) {
        if (custom_quantile_) {
            double q = uniform_(eng);
            while (q <= 0.0 || q >= 1.0) q = uniform_(eng);
            return custom_quantile_(q);
        }
        if (const auto* d = std::get_if<DiracAtom>(&m_.v())) return d->z;
        if (std::holds_alternative<CompoundPoissonExp>(m_.v())) return exp_(eng);
        return gamma_(eng);  // GammaDensity alpha > 0
    }

    // jump sizes conditioned on z > upsilon for the split strategy;
    // proposal upsilon + Exp(lambda), acceptance (z/upsilon)^{alpha-1}
    double draw_big_jump(std::mt19937_64& eng) {
        for (int tries = 0; tries < 100000; ++tries) {
            const double z = upsilon_ + exp_(eng);
            const double accept = std::pow(z / upsilon_, reject_exponent_);
            if (uniform_(eng) <= accept) return z;
        }
        throw std::runtime_error("SubordinatorSampler: big-jump rejection failed");
    }

    double sample_ig(std::mt19937_64& eng) {
        const double nu = normal_(eng);
        const double y = nu * nu;
        const double mu = ig_mu_, lam = ig_shape_;
        double x = mu + mu * mu * y / (2.0 * lam) -
                   mu / (2.0 * lam) * std::sqrt(4.0 * mu * lam * y + mu * mu * y * y);
        if (x <= 0.0) x = std::numeric_limits<double>::min();
        if (uniform_(eng) <= mu / (mu + x)) return x;
        return mu * mu / x;
    }

    LevyMeasure m_;
    double dt_;
    double upsilon_;
    Strategy strategy_ = Strategy::Zero;
    JumpSplit split_{};
    double reject_exponent_ = 0.0;
    double ig_mu_ = 0.0, ig_shape_ = 0.0;
    std::function<double(double)> custom_quantile_;
    std::poisson_distribution<int> poisson_{1.0};
    std::exponential_distribution<double> exp_{1.0};
    std::gamma_distribution<double> gamma_{1.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

inline std::vector<double> sample_increments(const LevyMeasure& m, double dt, int count,
                                             double upsilon, std::mt19937_64& eng) {
    if (count < 1) throw std::invalid_argument("sample_increments: count must be >= 1");
    SubordinatorSampler sampler(m, dt, upsilon);
    std::vector<double> out(static_cast<std::size_t>(count));
    for (auto& v : out) v = sampler.sample(eng);
    return out;
}

}  // namespace jcir
