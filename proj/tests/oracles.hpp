#pragma once

// Test-only reference computations, deliberately independent of the library
// implementation paths they check: GSL special functions and integration.

#include <cmath>
#include <functional>
#include <stdexcept>

#include <gsl/gsl_cdf.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_bessel.h>

#include "jcir/process.hpp"

namespace oracles {

inline void quiet_gsl() {
    static bool done = false;
    if (!done) {
        gsl_set_error_handler_off();
        done = true;
    }
}

// Closed-form diffusion-CIR (no jumps) transition log-density via the
// noncentral chi-square representation with scaled Bessel I.
inline double cir_log_density(double a, double b, double sigma, double t, double x, double y) {
    quiet_gsl();
    const double s2 = sigma * sigma;
    const double g = (b == 0.0) ? t : -std::expm1(-b * t) / b;
    const double c = 2.0 / (s2 * g);
    const double q = 2.0 * a / s2 - 1.0;
    const double u = c * x * std::exp(-b * t);
    const double v = c * y;
    if (u < 1e-12) {
        // gamma limit of the noncentral family
        return std::log(c) + q * std::log(v) - v - std::lgamma(q + 1.0);
    }
    const double z = 2.0 * std::sqrt(u * v);
    const double scaled = gsl_sf_bessel_Inu_scaled(q, z);
    if (!(scaled > 0.0)) throw std::runtime_error("cir_log_density: Bessel evaluation failed");
    return std::log(c) - u - v + 0.5 * q * (std::log(v) - std::log(u)) + std::log(scaled) + z;
}

inline double cir_density(double a, double b, double sigma, double t, double x, double y) {
    return std::exp(cir_log_density(a, b, sigma, t, x, y));
}

// Adaptive quadrature on (0, hi) via GSL QAGS.
inline double integrate(const std::function<double(double)>& f, double lo, double hi,
                        double tol = 1e-12) {
    quiet_gsl();
    struct Ctx {
        const std::function<double(double)>* f;
    } ctx{&f};
    gsl_function gf;
    gf.function = [](double x, void* p) { return (*static_cast<Ctx*>(p)->f)(x); };
    gf.params = &ctx;
    gsl_integration_workspace* ws = gsl_integration_workspace_alloc(4000);
    double result = 0.0, abserr = 0.0;
    const int status = gsl_integration_qags(&gf, lo, hi, tol, tol, 4000, ws, &result, &abserr);
    gsl_integration_workspace_free(ws);
    if (status != 0 && std::abs(abserr) > 1e-8 * (std::abs(result) + 1.0))
        throw std::runtime_error("oracle integrate: GSL quadrature failed");
    return result;
}

// integral z^p m(dz) for the analytic catalog densities, by quadrature only.
inline double moment_by_quadrature(const jcir::LevyMeasure& m, double p) {
    auto density = [&](double z) -> double {
        double out = 0.0;
        std::visit(
            [&](const auto& mm) {
                using T = std::decay_t<decltype(mm)>;
                if constexpr (std::is_same_v<T, jcir::CompoundPoissonExp>) {
                    out = mm.c * mm.lambda * std::exp(-mm.lambda * z);
                } else if constexpr (std::is_same_v<T, jcir::GammaProcess>) {
                    out = mm.gamma / z * std::exp(-mm.lambda * z);
                } else if constexpr (std::is_same_v<T, jcir::GammaDensity>) {
                    const double coef = std::abs(std::pow(mm.lambda, mm.alpha) / std::tgamma(mm.alpha));
                    out = coef * std::pow(z, mm.alpha - 1.0) * std::exp(-mm.lambda * z);
                } else if constexpr (std::is_same_v<T, jcir::InverseGaussianMeasure>) {
                    out = mm.delta / std::sqrt(2.0 * M_PI * z * z * z) *
                          std::exp(-0.5 * mm.gamma * mm.gamma * z);
                } else {
                    throw std::invalid_argument("moment_by_quadrature: no density for this kind");
                }
            },
            m.v());
        return out;
    };
    const double hi = 400.0;  // all catalog tails are exponential
    return integrate([&](double z) { return std::pow(z, p) * density(z); }, 0.0, hi, 1e-13);
}

inline double gamma_cdf(double x, double shape, double rate) {
    quiet_gsl();
    return gsl_cdf_gamma_P(x, shape, 1.0 / rate);
}

}  // namespace oracles
