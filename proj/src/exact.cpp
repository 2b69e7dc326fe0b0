#include "hicrit/exact.hpp"

#include <algorithm>
#include <cmath>

#include "hicrit/error.hpp"
#include "hicrit/special.hpp"

namespace hicrit {

namespace {

void validate(const BandSpec& band) {
    const std::size_t n = band.lower.size();
    if (band.upper.size() != n) throw DomainError("band: lower/upper length mismatch");
    if (n > kMaxExactN) throw SizeError("band: n exceeds exact recursion limit");
    for (std::size_t k = 0; k < n; ++k) {
        const double a = band.lower[k];
        const double b = band.upper[k];
        if (!(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0)) {
            throw DomainError("band: bounds must lie in [0,1]");
        }
        if (a > b) throw DomainError("band: lower bound above upper bound");
        if (k > 0 && (a < band.lower[k - 1] || b < band.upper[k - 1])) {
            throw DomainError("band: bounds must be nondecreasing");
        }
    }
}

}  // namespace

double noncrossing_probability(const BandSpec& band) {
    validate(band);
    const std::size_t n = band.n();
    if (n == 0) return 1.0;

    // Partition points: every band edge plus 1.
    std::vector<double> pts;
    pts.reserve(2 * n + 1);
    pts.insert(pts.end(), band.lower.begin(), band.lower.end());
    pts.insert(pts.end(), band.upper.begin(), band.upper.end());
    pts.push_back(1.0);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    const std::vector<double> log_fact = special::log_factorials(n);

    // state[i] = P{exactly i points in [0, t] and all constraints up to t hold}.
    std::vector<double> state(n + 1, 0.0);
    std::vector<double> next(n + 1, 0.0);
    std::vector<special::CompensatedSum> acc(n + 1);
    state[0] = 1.0;
    std::size_t lo_count = 0;
    std::size_t hi_count = 0;
    double prev = 0.0;
    std::size_t upper_done = 0;
    std::size_t lower_done = 0;

    for (double t : pts) {
        // Count needed at t: #{k: upper_k <= t} points must lie in [0,t];
        // at most (min{k: lower_k >= t} - 1) may.
        while (upper_done < n && band.upper[upper_done] <= t) ++upper_done;
        while (lower_done < n && band.lower[lower_done] < t) ++lower_done;
        const std::size_t need = upper_done;
        const std::size_t allow = lower_done;  // lower_k >= t for k > lower_done

        const double width = t - prev;
        if (width > 0.0) {
            const double q = width / (1.0 - prev);
            const double log_q = std::log(q);
            const double log_1mq = q < 1.0 ? std::log1p(-q) : 0.0;
            for (auto& a : acc) a = special::CompensatedSum{};
            for (std::size_t l = lo_count; l <= hi_count; ++l) {
                const double s = state[l];
                if (s == 0.0) continue;
                const std::size_t r = n - l;
                if (q >= 1.0) {
                    acc[n].add(s);
                    continue;
                }
                const std::size_t j_max = std::min(r, allow >= l ? allow - l : 0);
                if (allow < l) continue;
                const std::size_t j_min = need > l ? need - l : 0;
                for (std::size_t j = j_min; j <= j_max; ++j) {
                    const double lp = log_fact[r] - log_fact[j] - log_fact[r - j] +
                                      static_cast<double>(j) * log_q +
                                      static_cast<double>(r - j) * log_1mq;
                    acc[l + j].add(s * std::exp(lp));
                }
            }
            for (std::size_t i = 0; i <= n; ++i) next[i] = acc[i].value();
            state.swap(next);
            prev = t;
        }
        // Enforce the counting constraints at t.
        for (std::size_t i = 0; i <= n; ++i) {
            if (i < need || i > allow) state[i] = 0.0;
        }
        lo_count = need;
        hi_count = std::min(allow, n);
        if (lo_count > hi_count) return 0.0;
    }
    return std::clamp(state[n], 0.0, 1.0);
}

double crossing_probability(std::size_t n, const BoundaryVector& boundary) {
    if (boundary.k0 < 1 || boundary.k0 + boundary.size() - 1 > n) {
        throw DomainError("crossing_probability: boundary indices must lie in [1, n]");
    }
    if (n > kMaxExactN) throw SizeError("crossing_probability: n exceeds exact recursion limit");
    // U_(k) > a_j for all j <= k is implied by the order, so the running
    // maximum of the lower bounds describes the same event.
    BandSpec band;
    band.lower.assign(n, 0.0);
    band.upper.assign(n, 1.0);
    double running = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        if (k >= boundary.k0 && k < boundary.k0 + boundary.size()) {
            running = std::max(running, std::clamp(boundary.c[k - boundary.k0], 0.0, 1.0));
        }
        band.lower[k - 1] = running;
    }
    return std::clamp(1.0 - noncrossing_probability(band), 0.0, 1.0);
}

}  // namespace hicrit
