#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "jcir/process.hpp"
#include "jcir/quadrature.hpp"
#include "jcir/special.hpp"

namespace jcir::affine {

// Branching mechanism R(u) = sigma^2 u^2 / 2 - b u.
inline cplx branching(const CirParams& p, cplx u) {
    return 0.5 * p.sigma * p.sigma * u * u - p.b * u;
}

// Immigration mechanism F(u) = a u + integral (e^{uz} - 1) m(dz).
inline cplx immigration(const CirParams& p, cplx u) { return p.a * u + jump_transform(p.m, u); }

// F'(u) = a + integral z e^{uz} m(dz).
inline cplx immigration_deriv(const CirParams& p, cplx u) {
    return p.a + jump_transform_deriv(p.m, u);
}

namespace detail {
inline void require_left_halfplane(cplx u, const char* what) {
    if (u.real() > 1e-12) throw std::invalid_argument(std::string(what) + ": requires Re u <= 0");
}
}  // namespace detail

// Flow solution of d/dt psi = R(psi), psi(0,u) = u:
//   psi(t,u) = u e^{-bt} / (1 - (sigma^2 u / 2) * g(b,t)),  g = (1-e^{-bt})/b.
// The expm1-based g is stable through b = 0.
inline cplx psi(const CirParams& p, double t, cplx u) {
    detail::require_left_halfplane(u, "psi");
    if (!(t >= 0.0)) throw std::invalid_argument("psi: t must be >= 0");
    const double g = special::growth_kernel(p.b, t);
    const cplx denom = 1.0 - 0.5 * p.sigma * p.sigma * u * g;
    if (std::abs(denom) < 1e-300) throw std::runtime_error("psi: vanishing denominator");
    return u * std::exp(-p.b * t) / denom;
}

// d/db of psi by the quotient rule; the g'(b) cancellation near b = 0 is
// handled by the series branch in growth_kernel_db.
inline cplx psi_db(const CirParams& p, double t, cplx u) {
    detail::require_left_halfplane(u, "psi_db");
    const double g = special::growth_kernel(p.b, t);
    const double gp = special::growth_kernel_db(p.b, t);
    const double ebt = std::exp(-p.b * t);
    const cplx numer = u * ebt;
    const cplx numer_db = -u * t * ebt;
    const cplx denom = 1.0 - 0.5 * p.sigma * p.sigma * u * g;
    const cplx denom_db = -0.5 * p.sigma * p.sigma * u * gp;
    return (numer_db * denom - numer * denom_db) / (denom * denom);
}

// phi(t,u) = integral_0^t F(psi(s,u)) ds by adaptive quadrature.
inline cplx phi(const CirParams& p, double t, cplx u) {
    detail::require_left_halfplane(u, "phi");
    if (t == 0.0) return 0.0;
    auto integrand = [&](double s) { return immigration(p, psi(p, s, u)); };
    return quad::integrate_or_throw(integrand, 0.0, t, "phi", 1e-13, 1e-12);
}

// d/db phi(t,u) = integral_0^t F'(psi) * d/db psi ds.
inline cplx phi_db(const CirParams& p, double t, cplx u) {
    detail::require_left_halfplane(u, "phi_db");
    if (t == 0.0) return 0.0;
    auto integrand = [&](double s) {
        const cplx ps = psi(p, s, u);
        return immigration_deriv(p, ps) * psi_db(p, s, u);
    };
    return quad::integrate_or_throw(integrand, 0.0, t, "phi_db", 1e-13, 1e-12);
}

// E_x[e^{u X_t}] = exp(phi(t,u) + x psi(t,u)).
inline cplx char_fn(const CirParams& p, double t, double x, cplx u) {
    return std::exp(phi(p, t, u) + x * psi(p, t, u));
}

// d/db of the characteristic function.
inline cplx char_fn_db(const CirParams& p, double t, double x, cplx u) {
    const cplx base = std::exp(phi(p, t, u) + x * psi(p, t, u));
    return (phi_db(p, t, u) + x * psi_db(p, t, u)) * base;
}

}  // namespace jcir::affine
