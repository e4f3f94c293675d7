#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace jcir::special {

// Exponential integral E1(x) for x > 0. Series for small x, continued
// fraction (modified Lentz) otherwise. Abramowitz & Stegun 5.1.
inline double expint_e1(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("expint_e1: x must be > 0");
    constexpr double euler_gamma = 0.57721566490153286060651209;
    if (x <= 1.0) {
        double sum = 0.0, term = 1.0;
        for (int k = 1; k <= 60; ++k) {
            term *= -x / k;
            const double add = term / k;
            sum += add;
            if (std::abs(add) < 1e-18 * (std::abs(sum) + 1e-30)) break;
        }
        return -euler_gamma - std::log(x) - sum;
    }
    const double tiny = 1e-300;
    double b = x + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int k = 1; k <= 200; ++k) {
        const double ak = -static_cast<double>(k) * k;
        b += 2.0;
        d = ak * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + ak / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-15) break;
    }
    return h * std::exp(-x);
}

// -expm1(-b t)/b, the continuous extension of (1 - e^{-bt})/b across b = 0.
inline double growth_kernel(double b, double t) {
    if (b == 0.0) return t;
    return -std::expm1(-b * t) / b;
}

// d/db of growth_kernel; series branch removes the 0/0 cancellation near b=0.
inline double growth_kernel_db(double b, double t) {
    const double bt = b * t;
    if (std::abs(bt) < 1e-4) {
        return t * t * (-0.5 + bt / 3.0 - bt * bt / 8.0 + bt * bt * bt / 30.0);
    }
    return (t * std::exp(-bt) - growth_kernel(b, t)) / b;
}

}  // namespace jcir::special
