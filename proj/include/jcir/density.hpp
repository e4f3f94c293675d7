#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <stdexcept>
#include <vector>

#include "jcir/riccati.hpp"

namespace jcir {

// Fourier inversion of the exponential-affine characteristic function:
//   p(t, x, y) = (1/pi) Re integral_0^Umax e^{-i y v} exp(phi(t,iv) + x psi(t,iv)) dv.
// psi/phi are precomputed on fixed Gauss-Legendre panels so that one kernel
// serves many (x, y) evaluations at the same (params, t). Umax is found by
// scanning the modulus decay at the smallest conditioning state the kernel
// must serve; panel width tracks the fastest e^{-iyv} oscillation.
class DensityKernel {
public:
    struct Options {
        double tail_tol = 1e-12;   // |char| threshold for truncation
        double x_min = 1.0;        // smallest conditioning state served
        double y_max = 1.0;        // largest |y| served (oscillation rate)
        bool with_db = false;      // also precompute d/db data
    };

    DensityKernel(const CirParams& p, double t, Options opt) : p_(p), t_(t), opt_(opt) {
        if (!(t > 0.0)) throw std::invalid_argument("DensityKernel: t must be > 0");
        if (!strictly_positive_regime(p))
            throw std::invalid_argument("density inversion outside proven regime (needs 2a > sigma^2)");
        build();
    }

    double u_max() const { return u_max_; }
    std::size_t node_count() const { return v_.size(); }
    double estimated_tail() const { return tail_estimate_; }

    // density value; quadrature negatives in (-1e-12, 0) are clamped to 0,
    // anything more negative means the resolution was insufficient
    double density(double x, double y) const {
        if (!(x >= 0.0)) throw std::invalid_argument("density: x must be >= 0");
        double acc = 0.0;
        for (std::size_t j = 0; j < v_.size(); ++j) {
            const cplx e = std::exp(exponent_[j] + x * psi_[j] - cplx(0.0, y * v_[j]));
            acc += w_[j] * e.real();
        }
        double val = acc / M_PI;
        if (val < 0.0) {
            if (val > -1e-12) return 0.0;
            throw std::runtime_error("density: negative value beyond quadrature floor, refine kernel");
        }
        return val;
    }

    double density_db(double x, double y) const {
        if (!with_db_) throw std::logic_error("DensityKernel: built without d/db data");
        double acc = 0.0;
        for (std::size_t j = 0; j < v_.size(); ++j) {
            const cplx e = std::exp(exponent_[j] + x * psi_[j] - cplx(0.0, y * v_[j]));
            const cplx d = (phi_db_[j] + x * psi_db_[j]) * e;
            acc += w_[j] * d.real();
        }
        return acc / M_PI;
    }

private:
    void build() {
        const double x_ref = std::max(opt_.x_min, 0.0);
        auto char_mod = [&](double v) {
            const cplx u(0.0, v);
            return std::abs(affine::char_fn(p_, t_, x_ref, u));
        };
        // scan for the truncation point by doubling, then bisect a little
        double lo = 1.0, hi = 1.0;
        const double tol = opt_.tail_tol;
        while (char_mod(hi) > tol) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e8) throw std::runtime_error("DensityKernel: characteristic function decays too slowly");
        }
        for (int i = 0; i < 12; ++i) {
            const double mid = 0.5 * (lo + hi);
            (char_mod(mid) > tol ? lo : hi) = mid;
        }
        u_max_ = hi * 1.25;
        tail_estimate_ = char_mod(u_max_) * u_max_;  // crude tail-mass bound

        const double y_rate = std::max(opt_.y_max, 1.0);
        const double panel_width = std::min(u_max_ / 12.0, 3.0 / y_rate);
        const std::size_t panels =
            static_cast<std::size_t>(std::ceil(u_max_ / panel_width));
        if (panels > 300000) throw std::runtime_error("DensityKernel: panel budget exceeded");
        auto grid = quad::gl16_panels(0.0, u_max_, panels);
        v_ = std::move(grid.nodes);
        w_ = std::move(grid.weights);
        psi_.resize(v_.size());
        exponent_.resize(v_.size());
        with_db_ = opt_.with_db;
        if (with_db_) {
            psi_db_.resize(v_.size());
            phi_db_.resize(v_.size());
        }
        for (std::size_t j = 0; j < v_.size(); ++j) {
            const cplx u(0.0, v_[j]);
            psi_[j] = affine::psi(p_, t_, u);
            exponent_[j] = affine::phi(p_, t_, u);
            if (with_db_) {
                psi_db_[j] = affine::psi_db(p_, t_, u);
                phi_db_[j] = affine::phi_db(p_, t_, u);
            }
        }
    }

    CirParams p_;
    double t_;
    Options opt_;
    double u_max_ = 0.0;
    double tail_estimate_ = 0.0;
    bool with_db_ = false;
    std::vector<double> v_, w_;
    std::vector<cplx> psi_, exponent_, psi_db_, phi_db_;
};

// One-off transition density p^b(t, x, y).
inline double transition_density(const CirParams& p, double t, double x, double y) {
    if (!(y > 0.0)) throw std::invalid_argument("transition_density: y must be > 0");
    DensityKernel k(p, t, {.tail_tol = 1e-12, .x_min = x, .y_max = std::abs(y), .with_db = false});
    return k.density(x, y);
}

// d/db of the transition density via the differentiated inversion integrand.
inline double transition_density_db(const CirParams& p, double t, double x, double y) {
    if (!(y > 0.0)) throw std::invalid_argument("transition_density_db: y must be > 0");
    DensityKernel k(p, t, {.tail_tol = 1e-12, .x_min = x, .y_max = std::abs(y), .with_db = true});
    return k.density_db(x, y);
}

struct DensityGrid {
    double t = 0.0;
    double x = 0.0;
    std::vector<double> y;
    std::vector<double> p;
    std::vector<double> dp_db;
    double u_max = 0.0;
    std::size_t nodes = 0;
    double tail_estimate = 0.0;
};

inline DensityGrid density_grid(const CirParams& p, double t, double x, std::vector<double> ygrid,
                                bool with_db = true) {
    if (ygrid.empty()) throw std::invalid_argument("density_grid: empty y grid");
    double ymax = 0.0;
    for (double y : ygrid) {
        if (!(y > 0.0)) throw std::invalid_argument("density_grid: y values must be > 0");
        ymax = std::max(ymax, y);
    }
    DensityKernel k(p, t, {.tail_tol = 1e-12, .x_min = x, .y_max = ymax, .with_db = with_db});
    DensityGrid g;
    g.t = t;
    g.x = x;
    g.y = std::move(ygrid);
    g.p.resize(g.y.size());
    if (with_db) g.dp_db.resize(g.y.size());
    for (std::size_t i = 0; i < g.y.size(); ++i) {
        g.p[i] = k.density(x, g.y[i]);
        if (with_db) g.dp_db[i] = k.density_db(x, g.y[i]);
    }
    g.u_max = k.u_max();
    g.nodes = k.node_count();
    g.tail_estimate = k.estimated_tail();
    return g;
}

namespace detail {

// Discovers [0, y_hi] capturing all density mass, then integrates f(y)p(y)dy.
template <class Weight>
double integrate_against_density(const CirParams& p, double t, double x, Weight&& f, double tol) {
    // conditional mean started from x
    const double m = x * std::exp(-p.b * t) + (p.a + first_moment(p.m)) * special::growth_kernel(p.b, t);
    double y_hi = std::max(4.0 * m + 1.0, x + 1.0);
    double y_cap = 8.0 * y_hi;
    std::unique_ptr<DensityKernel> k;
    for (;;) {
        k = std::make_unique<DensityKernel>(
            p, t, DensityKernel::Options{.tail_tol = 1e-13, .x_min = x, .y_max = y_cap, .with_db = false});
        while (y_hi < y_cap && k->density(x, y_hi) > 1e-14) y_hi *= 2.0;
        if (y_hi < y_cap || y_cap > 1e7) break;
        y_cap *= 8.0;
    }
    auto integrand = [&](double y) { return y > 0.0 ? f(y) * k->density(x, y) : 0.0; };
    double total = 0.0;
    // peak region then dyadic tail pieces
    double a0 = 0.0, b0 = std::min(y_hi, 2.0 * m + x + 1.0);
    total += quad::integrate_or_throw(integrand, a0, b0, "integrate_against_density", tol, tol, 8000);
    while (b0 < y_hi) {
        const double b1 = std::min(2.0 * b0, y_hi);
        total += quad::integrate_or_throw(integrand, b0, b1, "integrate_against_density", tol, tol, 8000);
        b0 = b1;
    }
    return total;
}

}  // namespace detail

// integral p(t,x,y) dy; equals 1 up to quadrature error.
inline double density_normalization(const CirParams& p, double t, double x, double tol = 1e-9) {
    return detail::integrate_against_density(p, t, x, [](double) { return 1.0; }, tol);
}

// integral y p(t,x,y) dy; equals the closed-form conditional mean.
inline double density_mean(const CirParams& p, double t, double x, double tol = 1e-9) {
    return detail::integrate_against_density(p, t, x, [](double y) { return y; }, tol);
}

// integral d/db p(t,x,y) dy; zero for a normalized family.
inline double density_db_integral(const CirParams& p, double t, double x, double tol = 1e-9) {
    const double m = x * std::exp(-p.b * t) + (p.a + first_moment(p.m)) * special::growth_kernel(p.b, t);
    double y_hi = std::max(8.0 * m + 2.0, x + 2.0);
    const double y_cap = 4.0 * y_hi;
    DensityKernel k(p, t, {.tail_tol = 1e-13, .x_min = x, .y_max = y_cap, .with_db = true});
    while (y_hi < y_cap && k.density(x, y_hi) > 1e-15) y_hi *= 1.5;
    auto integrand = [&](double y) { return y > 0.0 ? k.density_db(x, y) : 0.0; };
    double total = 0.0;
    double a0 = 0.0;
    const double piece = std::max(2.0 * m, 1.0);
    while (a0 < y_hi) {
        const double b0 = std::min(a0 + piece, y_hi);
        total += quad::integrate_or_throw(integrand, a0, b0, "density_db_integral", tol, 0.0, 8000);
        a0 = b0;
    }
    return total;
}

namespace detail {
// jump_transform(v)/v extended through v = 0 (value: first moment).
inline double jump_transform_ratio(const LevyMeasure& m, double v, double m1, double m2) {
    if (std::abs(v) < 1e-7) return m1 + 0.5 * m2 * v;
    return jump_transform(m, cplx(v, 0.0)).real() / v;
}
}  // namespace detail

// Laplace transform of the stationary law (subcritical only):
//   exp( integral_u^0 F(v)/R(v) dv ), u <= 0.
// F(v)/R(v) = (a + jump_transform(v)/v) / (sigma^2 v/2 - b): the v -> 0
// endpoint is removable and handled by the series for jump_transform(v)/v.
inline double stationary_laplace(const CirParams& p, double u) {
    if (!(p.b > 0.0)) throw std::invalid_argument("stationary_laplace: requires b > 0");
    if (!(u <= 0.0)) throw std::invalid_argument("stationary_laplace: requires u <= 0");
    if (u == 0.0) return 1.0;
    const double m1 = first_moment(p.m);
    const double m2 = pth_moment(p.m, 2.0);
    auto integrand = [&](double v) {
        const double q = detail::jump_transform_ratio(p.m, v, m1, m2);
        return (p.a + q) / (0.5 * p.sigma * p.sigma * v - p.b);
    };
    const double integral = quad::integrate_or_throw(integrand, u, 0.0, "stationary_laplace", 1e-12, 1e-11);
    return std::exp(integral);
}

// Laplace transform of the supercritical limit variable V (b < 0, u <= 0):
// start factor, diffusion factor, and the jump factor reduced to a proper
// integral on (0,1] by the substitution s = e^{b y}.
inline double v_laplace(const CirParams& p, double u) {
    if (!(p.b < 0.0)) throw std::invalid_argument("v_laplace: requires b < 0");
    if (!(u <= 0.0)) throw std::invalid_argument("v_laplace: requires u <= 0");
    if (u == 0.0) return 1.0;
    const double r = 0.5 * p.sigma * p.sigma * u / p.b;  // >= 0 here
    const double denom0 = 1.0 + r;
    if (!(denom0 > 0.0)) throw std::runtime_error("v_laplace: outside validity (1 + sigma^2 u / 2b <= 0)");
    const double start_factor = std::exp(u * p.y0 / denom0);
    const double diffusion_factor = std::pow(denom0, -2.0 * p.a / (p.sigma * p.sigma));
    double jump_factor = 1.0;
    if (!p.m.is_zero()) {
        const double m1 = first_moment(p.m);
        const double m2 = pth_moment(p.m, 2.0);
        auto integrand = [&](double s) {
            const double w = u * s / (1.0 + r * s);
            const double q = detail::jump_transform_ratio(p.m, w, m1, m2);
            return q * u / ((1.0 + r * s) * (-p.b));
        };
        const double integral =
            quad::integrate_or_throw(integrand, 0.0, 1.0, "v_laplace", 1e-12, 1e-11);
        jump_factor = std::exp(integral);
    }
    return start_factor * diffusion_factor * jump_factor;
}

}  // namespace jcir
