#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace jcir::quad {

namespace detail {

// Gauss-Kronrod 7-15 pair on [-1, 1].
inline constexpr std::array<double, 8> kronrod_nodes = {
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
};
inline constexpr std::array<double, 8> kronrod_weights = {
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
};
inline constexpr std::array<double, 4> gauss_weights = {
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
};

inline double vnorm(double x) { return std::abs(x); }
inline double vnorm(const std::complex<double>& x) { return std::abs(x); }

template <class F>
auto gk15(F&& f, double a, double b, double& err) {
    using V = decltype(f(a));
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    V fc = f(c);
    V kron = kronrod_weights[0] * fc;
    V gauss = gauss_weights[0] * fc;
    for (int i = 1; i < 8; ++i) {
        const double dx = h * kronrod_nodes[static_cast<std::size_t>(i)];
        V fsum = f(c - dx) + f(c + dx);
        kron += kronrod_weights[static_cast<std::size_t>(i)] * fsum;
        if (i % 2 == 0) gauss += gauss_weights[static_cast<std::size_t>(i / 2)] * fsum;
    }
    kron *= h;
    gauss *= h;
    err = vnorm(kron - gauss);
    // standard GK error sharpening
    err = std::pow(200.0 * err, 1.5);
    if (!std::isfinite(err)) err = vnorm(kron - gauss);
    return kron;
}

}  // namespace detail

template <class V>
struct Result {
    V value{};
    double error = 0.0;
    std::size_t panels = 0;
    bool converged = false;
};

// Globally adaptive Gauss-Kronrod on a finite interval. Works for double and
// complex integrands.
template <class F>
auto integrate(F&& f, double a, double b, double abs_tol = 1e-12, double rel_tol = 1e-12,
               std::size_t max_panels = 4000) {
    using V = decltype(f(a));
    struct Seg {
        double a, b, err;
        V val;
        bool operator<(const Seg& o) const { return err < o.err; }
    };
    Result<V> out;
    if (a == b) {
        out.converged = true;
        return out;
    }
    std::priority_queue<Seg> segs;
    double err0 = 0.0;
    V v0 = detail::gk15(f, a, b, err0);
    segs.push({a, b, err0, v0});
    V total = v0;
    double total_err = err0;
    std::size_t n = 1;
    while (n < max_panels) {
        const double tol = std::max(abs_tol, rel_tol * detail::vnorm(total));
        if (total_err <= tol) break;
        Seg worst = segs.top();
        segs.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid == worst.a || mid == worst.b) {  // cannot split further
            segs.push(worst);
            break;
        }
        double e1 = 0.0, e2 = 0.0;
        V v1 = detail::gk15(f, worst.a, mid, e1);
        V v2 = detail::gk15(f, mid, worst.b, e2);
        total += (v1 + v2) - worst.val;
        total_err += (e1 + e2) - worst.err;
        segs.push({worst.a, mid, e1, v1});
        segs.push({mid, worst.b, e2, v2});
        ++n;
    }
    out.value = total;
    out.error = total_err;
    out.panels = n;
    out.converged = total_err <= std::max(abs_tol, rel_tol * detail::vnorm(total));
    return out;
}

template <class F>
auto integrate_or_throw(F&& f, double a, double b, const char* what, double abs_tol = 1e-12,
                        double rel_tol = 1e-12, std::size_t max_panels = 4000) {
    auto r = integrate(f, a, b, abs_tol, rel_tol, max_panels);
    if (!r.converged) {
        throw std::runtime_error(std::string(what) + ": quadrature failed to converge (" +
                                 std::to_string(r.panels) + " panels, err=" + std::to_string(r.error) + ")");
    }
    return r.value;
}

// Integral over (0, inf) of an integrand with exponential tail decay
// ~ exp(-tail_rate * z). Truncates where the tail bound drops below tail_tol.
template <class F>
double integrate_semi_infinite(F&& f, double tail_rate, const char* what, double abs_tol = 1e-12,
                               double rel_tol = 1e-12, double tail_tol = 1e-14) {
    if (!(tail_rate > 0.0)) throw std::invalid_argument(std::string(what) + ": tail rate must be > 0");
    double z_max = std::max(1.0, -std::log(tail_tol) / tail_rate);
    // split (0, 1] and [1, z_max]: catalog densities may be singular at 0
    double total = 0.0;
    total += integrate_or_throw(f, 0.0, std::min(1.0, z_max), what, abs_tol, rel_tol);
    if (z_max > 1.0) total += integrate_or_throw(f, 1.0, z_max, what, abs_tol, rel_tol);
    return total;
}

// Fixed Gauss-Legendre 16 nodes/weights on [-1,1]; used for the precomputed
// Fourier-inversion panels where the node set must be static.
inline constexpr std::array<double, 8> gl16_nodes = {
    0.0950125098376374401853193, 0.2816035507792589132304605, 0.4580167776572273863424194,
    0.6178762444026437484466718, 0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884, 0.9894009349916499325961542,
};
inline constexpr std::array<double, 8> gl16_weights = {
    0.1894506104550684962853967, 0.1826034150449235888667637, 0.1691565193950025381893121,
    0.1495959888165767320815017, 0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806,
};

struct PanelGrid {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline PanelGrid gl16_panels(double a, double b, std::size_t panel_count) {
    PanelGrid g;
    g.nodes.reserve(panel_count * 16);
    g.weights.reserve(panel_count * 16);
    const double h = (b - a) / static_cast<double>(panel_count);
    for (std::size_t p = 0; p < panel_count; ++p) {
        const double c = a + (static_cast<double>(p) + 0.5) * h;
        for (int i = 7; i >= 0; --i) {
            g.nodes.push_back(c - 0.5 * h * gl16_nodes[static_cast<std::size_t>(i)]);
            g.weights.push_back(0.5 * h * gl16_weights[static_cast<std::size_t>(i)]);
        }
        for (int i = 0; i < 8; ++i) {
            g.nodes.push_back(c + 0.5 * h * gl16_nodes[static_cast<std::size_t>(i)]);
            g.weights.push_back(0.5 * h * gl16_weights[static_cast<std::size_t>(i)]);
        }
    }
    return g;
}

}  // namespace jcir::quad
