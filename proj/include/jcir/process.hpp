#pragma once

#include <cmath>
#include <stdexcept>

#include "jcir/levy.hpp"
#include "jcir/special.hpp"

namespace jcir {

// Model of dY = (a - b Y) dt + sigma sqrt(Y) dW + dJ with J a subordinator.
struct CirParams {
    double a = 0.0;      // drift level, >= 0
    double b = 0.0;      // growth rate, free sign (the inference target)
    double sigma = 1.0;  // volatility, > 0
    double y0 = 0.0;     // initial state, >= 0
    LevyMeasure m;

    CirParams() = default;
    CirParams(double a_, double b_, double sigma_, double y0_, LevyMeasure m_ = LevyMeasure::zero())
        : a(a_), b(b_), sigma(sigma_), y0(y0_), m(std::move(m_)) {
        if (!(a >= 0.0)) throw std::invalid_argument("CirParams: a must be >= 0");
        if (!(sigma > 0.0)) throw std::invalid_argument("CirParams: sigma must be > 0");
        if (!(y0 >= 0.0)) throw std::invalid_argument("CirParams: y0 must be >= 0");
    }

    CirParams with_b(double new_b) const {
        CirParams q = *this;
        q.b = new_b;
        return q;
    }
};

enum class Criticality { Subcritical, Critical, Supercritical };

inline Criticality classify(const CirParams& p) {
    if (p.b > 0.0) return Criticality::Subcritical;
    if (p.b < 0.0) return Criticality::Supercritical;
    return Criticality::Critical;
}

inline const char* criticality_name(Criticality c) {
    switch (c) {
        case Criticality::Subcritical: return "subcritical";
        case Criticality::Critical: return "critical";
        case Criticality::Supercritical: return "supercritical";
    }
    return "?";
}

// E[Y_t], continuous across b = 0.
inline double mean_at(const CirParams& p, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("mean_at: t must be >= 0");
    const double drift = p.a + first_moment(p.m);
    if (p.b == 0.0) return p.y0 + drift * t;
    return p.y0 * std::exp(-p.b * t) + drift * special::growth_kernel(p.b, t);
}

// a / sigma^2 > (15 + sqrt(185)) / 4, required by the discrete-observation
// moment machinery.
inline double a3_bound() { return (15.0 + std::sqrt(185.0)) / 4.0; }

inline bool satisfies_a3(const CirParams& p) { return p.a / (p.sigma * p.sigma) > a3_bound(); }

// 2a > sigma^2: the density-inversion / flow-derivative regime.
inline bool strictly_positive_regime(const CirParams& p) { return 2.0 * p.a > p.sigma * p.sigma; }

inline void require_positive_time_integral(const CirParams& p) {
    if (!(p.y0 + p.a > 0.0))
        throw std::invalid_argument("requires y0 + a > 0 so the time integral of Y is positive");
}

}  // namespace jcir
