#pragma once
// Reference computations used only by the tests. Each one takes a route
// independent of the library code it checks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

/// Plain bisection for a decreasing function f on [lo, hi] with f(lo) > 0 > f(hi).
inline double bisect_decreasing(const std::function<double(double)>& f, double lo, double hi,
                                int iters = 200) {
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (f(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Binomial point mass by direct multiplication in long double.
inline double binomial_mass(std::size_t n, std::size_t k, double c) {
    long double log_choose = 0.0L;
    for (std::size_t i = 1; i <= k; ++i) {
        log_choose += std::log(static_cast<long double>(n - k + i)) -
                      std::log(static_cast<long double>(i));
    }
    const long double lc = static_cast<long double>(c);
    return static_cast<double>(std::exp(log_choose + static_cast<long double>(k) * std::log(lc) +
                                        static_cast<long double>(n - k) * std::log1p(-lc)));
}

/// Steck's determinant: P{a_i < U_(i) <= b_i, i = 1..n} for n uniforms.
/// Exact for small n; used with n <= 20.
inline double steck(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    std::vector<long double> m(n * n, 0.0L);
    std::vector<long double> fact(n + 2, 1.0L);
    for (std::size_t i = 1; i < fact.size(); ++i) fact[i] = fact[i - 1] * static_cast<long double>(i);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const long e = static_cast<long>(j) - static_cast<long>(i) + 1;
            if (e < 0) continue;
            if (e == 0) {
                m[i * n + j] = 1.0L;
                continue;
            }
            const long double d = std::max(0.0L, static_cast<long double>(b[i]) - a[j]);
            m[i * n + j] = std::pow(d, static_cast<long double>(e)) / fact[static_cast<std::size_t>(e)];
        }
    }
    // Gaussian elimination with partial pivoting.
    long double det = 1.0L;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(m[r * n + col]) > std::abs(m[piv * n + col])) piv = r;
        }
        if (m[piv * n + col] == 0.0L) return 0.0;
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m[piv * n + j], m[col * n + j]);
            det = -det;
        }
        det *= m[col * n + col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const long double f = m[r * n + col] / m[col * n + col];
            for (std::size_t j = col; j < n; ++j) m[r * n + j] -= f * m[col * n + j];
        }
    }
    return static_cast<double>(det * fact[n]);
}

/// Fraction of samples with U_(k) <= c[k-1] for some k, estimated from
/// `reps` sorted uniform samples of size n (plain sort, no spacings).
inline std::vector<double> mc_crossing(std::size_t n, const std::vector<std::vector<double>>& cs,
                                       std::size_t reps, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::size_t> hits(cs.size(), 0);
    std::vector<double> s(n);
    for (std::size_t r = 0; r < reps; ++r) {
        for (auto& v : s) v = u(rng);
        std::sort(s.begin(), s.end());
        for (std::size_t b = 0; b < cs.size(); ++b) {
            for (std::size_t k = 0; k < n; ++k) {
                if (s[k] <= cs[b][k]) {
                    ++hits[b];
                    break;
                }
            }
        }
    }
    std::vector<double> out(cs.size());
    for (std::size_t b = 0; b < cs.size(); ++b) {
        out[b] = static_cast<double>(hits[b]) / static_cast<double>(reps);
    }
    return out;
}

/// Beta(a, b) upper-tail-free CDF by composite Simpson on a fine grid.
inline double beta_cdf_simpson(double x, double a, double b, int panels = 20000) {
    const double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    auto f = [&](double t) {
        if (t <= 0.0 || t >= 1.0) return 0.0;
        return std::exp((a - 1.0) * std::log(t) + (b - 1.0) * std::log1p(-t) - lbeta);
    };
    const double h = x / panels;
    double s = f(0.0) + f(x);
    for (int i = 1; i < panels; ++i) s += f(i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace oracle
