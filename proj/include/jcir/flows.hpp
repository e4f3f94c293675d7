#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "jcir/path.hpp"

namespace jcir {

// Pathwise sensitivities on a window [anchor, end] of the path grid, anchored
// at x = Y_anchor:
//   d/dx X_t = exp{ -b(t-t_a) - (sigma^2/8) int du/X + (sigma/2) int dB/sqrt(X) }
//   d/db X_t = - int_{t_a}^t X_r (d/dx X_t)(d/dx X_r)^{-1} dr
// Stochastic and time integrals use the stored increments with left-point
// evaluation.
struct FlowDerivatives {
    std::size_t anchor = 0;
    std::vector<double> dx;  // dx[j] = d/dx X at grid point anchor + j
    std::vector<double> db;  // db[j] = d/db X at grid point anchor + j
};

inline FlowDerivatives flow_derivatives(const SamplePath& path, const CirParams& p,
                                        std::size_t anchor, std::size_t end) {
    if (end <= anchor || end >= path.y.size())
        throw std::invalid_argument("flow_derivatives: bad window");
    for (std::size_t k = anchor; k <= end; ++k)
        if (!(path.y[k] > 0.0)) throw std::runtime_error("flow derivative undefined: nonpositive state");

    const std::size_t n = end - anchor;
    FlowDerivatives f;
    f.anchor = anchor;
    f.dx.resize(n + 1);
    f.db.resize(n + 1);
    f.dx[0] = 1.0;
    f.db[0] = 0.0;

    double time_int = 0.0;   // int du / X
    double stoch_int = 0.0;  // int dB / sqrt(X)
    double drift_int = 0.0;  // int X_r / dxX_r dr
    const double s2 = p.sigma * p.sigma;
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t k = anchor + j;
        const double x = path.y[k];
        time_int += path.dt / x;
        stoch_int += path.dw[k] / std::sqrt(x);
        drift_int += x / f.dx[j] * path.dt;
        const double elapsed = path.dt * static_cast<double>(j + 1);
        f.dx[j + 1] = std::exp(-p.b * elapsed - 0.125 * s2 * time_int + 0.5 * p.sigma * stoch_int);
        f.db[j + 1] = -f.dx[j + 1] * drift_int;
    }
    return f;
}

}  // namespace jcir
