#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace jcir::stats {

struct Moments {
    std::size_t n = 0;
    double mean = 0.0;
    double var = 0.0;  // unbiased
    double se_mean = 0.0;
};

// Pairwise summation, deterministic and accurate independent of data size.
inline double pairwise_sum(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n <= 8) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(x.subspan(0, half)) + pairwise_sum(x.subspan(half));
}

inline Moments moments(std::span<const double> x) {
    Moments m;
    m.n = x.size();
    if (m.n == 0) return m;
    m.mean = pairwise_sum(x) / static_cast<double>(m.n);
    if (m.n < 2) return m;
    double ss = 0.0;
    for (double v : x) {
        const double d = v - m.mean;
        ss += d * d;
    }
    m.var = ss / static_cast<double>(m.n - 1);
    m.se_mean = std::sqrt(m.var / static_cast<double>(m.n));
    return m;
}

// Raw kurtosis m4/m2^2 (normal = 3).
inline double kurtosis(std::span<const double> x) {
    if (x.size() < 4) throw std::invalid_argument("kurtosis: need at least 4 samples");
    const Moments m = moments(x);
    double m2 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = v - m.mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= static_cast<double>(x.size());
    m4 /= static_cast<double>(x.size());
    if (m2 <= 0.0) throw std::runtime_error("kurtosis: degenerate sample");
    return m4 / (m2 * m2);
}

inline double median(std::vector<double> x) {
    if (x.empty()) throw std::invalid_argument("median: empty sample");
    const std::size_t mid = x.size() / 2;
    std::nth_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(mid), x.end());
    double hi = x[mid];
    if (x.size() % 2 == 1) return hi;
    std::nth_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(mid) - 1, x.end());
    return 0.5 * (hi + x[mid - 1]);
}

inline double quantile(std::vector<double> x, double q) {
    if (x.empty()) throw std::invalid_argument("quantile: empty sample");
    std::sort(x.begin(), x.end());
    const double pos = q * static_cast<double>(x.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, x.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return x[lo] * (1.0 - frac) + x[hi] * frac;
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Asymptotic Kolmogorov distribution tail: P(sup |B(t)| > lambda).
inline double kolmogorov_tail(double lambda) {
    if (lambda <= 0.0) return 1.0;
    double p = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        p += (k % 2 == 1 ? 2.0 : -2.0) * term;
        if (term < 1e-16) break;
    }
    return std::clamp(p, 0.0, 1.0);
}

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

// One-sample KS against a continuous CDF. Stephens' small-sample correction.
template <class Cdf>
KsResult ks_one_sample(std::vector<double> x, Cdf&& cdf) {
    if (x.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
    std::sort(x.begin(), x.end());
    const auto n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = cdf(x[i]);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max({d, std::abs(f - lo), std::abs(hi - f)});
    }
    const double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
    return {d, kolmogorov_tail(lambda)};
}

inline KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double ne = na * nb / (na + nb);
    const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
    return {d, kolmogorov_tail(lambda)};
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: bad input");
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::runtime_error("fit_line: degenerate abscissae");
    LineFit f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

}  // namespace jcir::stats
