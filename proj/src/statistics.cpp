#include "hicrit/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hicrit/boundary.hpp"
#include "hicrit/error.hpp"

namespace hicrit {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_values(const std::vector<double>& values) {
    if (values.empty()) throw InputError("p-value sample is empty");
    for (double v : values) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw InputError("p-value outside [0,1]: " + std::to_string(v));
        }
    }
}
}  // namespace

PValueSample PValueSample::from_values(std::vector<double> values) {
    validate_values(values);
    std::stable_sort(values.begin(), values.end());
    return PValueSample(std::move(values));
}

PValueSample PValueSample::from_sorted(std::vector<double> sorted) {
    validate_values(sorted);
    if (!std::is_sorted(sorted.begin(), sorted.end())) {
        throw InputError("p-values are not sorted");
    }
    return PValueSample(std::move(sorted));
}

IndexRange resolve_range(const StatisticSpec& spec, std::size_t n) {
    const std::size_t k1 = spec.k1 == 0 ? std::max(spec.k0, n / 2) : spec.k1;
    if (!(spec.k0 >= 1 && spec.k0 <= k1 && k1 <= n)) {
        throw DomainError("statistic index range must satisfy 1 <= k0 <= k1 <= n");
    }
    return {spec.k0, k1};
}

double statistic_term(CurveKind kind, std::size_t n, std::size_t k, double p) {
    const double nn = static_cast<double>(n);
    const double x = static_cast<double>(k) / nn;
    switch (kind) {
        case CurveKind::MHC:
            if (p < 1.0 / nn) return -kInf;
            [[fallthrough]];
        case CurveKind::HC: {
            if (p <= 0.0) return kInf;
            if (p >= 1.0) return x >= 1.0 ? 0.0 : -kInf;
            return std::sqrt(nn) * (x - p) / std::sqrt(p * (1.0 - p));
        }
        case CurveKind::BJ: {
            if (!(p < x)) return -kInf;
            if (p <= 0.0) return kInf;
            const double upper = x >= 1.0 ? 0.0 : (1.0 - x) * (std::log1p(-x) - std::log1p(-p));
            const double inner = x * std::log(x / p) + upper;
            return std::sqrt(2.0 * nn) * std::sqrt(std::max(inner, 0.0));
        }
        case CurveKind::MBJ: {
            if (!(p < x)) return 0.0;
            if (p <= 0.0) return kInf;
            const double inner = x * std::log(x / p) - (x - p);
            return std::sqrt(2.0 * nn) * std::sqrt(std::max(inner, 0.0));
        }
        case CurveKind::JW: {
            const double d = std::sqrt(x) - std::sqrt(p);
            return d > 0.0 ? std::sqrt(nn) * d : 0.0;
        }
    }
    return -kInf;
}

StatisticResult evaluate(const StatisticSpec& spec, const PValueSample& sample, bool keep_terms) {
    const std::size_t n = sample.size();
    const IndexRange r = resolve_range(spec, n);
    const bool hc_type = spec.kind == CurveKind::HC || spec.kind == CurveKind::MHC;
    StatisticResult out;
    out.value = hc_type ? -kInf : 0.0;
    out.argmax_k = r.k0;
    if (keep_terms) out.per_k.reserve(r.k1 - r.k0 + 1);
    bool seen = false;
    double best = -kInf;
    for (std::size_t k = r.k0; k <= r.k1; ++k) {
        const double t = statistic_term(spec.kind, n, k, sample.order(k));
        if (keep_terms) out.per_k.push_back(t);
        if (t == -kInf) continue;
        if (!seen || t > best) {
            best = t;
            out.argmax_k = k;
            seen = true;
        }
    }
    if (seen) out.value = hc_type ? best : std::max(best, 0.0);
    return out;
}

ExceedanceChecker::ExceedanceChecker(CurveKind kind, std::size_t n, double b, std::size_t k0,
                                     std::size_t k1)
    : kind_(kind), n_(n), k0_(k0), k1_(k1), b_(b) {
    const BoundaryVector bv = boundary_vector(kind, n, b, k0, k1);
    c_ = bv.c;
    const double nn = static_cast<double>(n);
    floor_ = kind == CurveKind::MHC ? 1.0 / nn : 0.0;
    if (kind == CurveKind::JW) {
        const double xi = b / std::sqrt(nn);
        for (std::size_t k = k0; k <= k1; ++k) {
            if (std::sqrt(static_cast<double>(k) / nn) < xi) c_[k - k0] = -1.0;
        }
    }
}

ExceedanceChecker::ExceedanceChecker(const StatisticSpec& spec, std::size_t n, double b)
    : ExceedanceChecker(spec.kind, n, b, resolve_range(spec, n).k0, resolve_range(spec, n).k1) {}

bool ExceedanceChecker::operator()(std::span<const double> sorted) const {
    const double* p = sorted.data() + (k0_ - 1);
    const double* c = c_.data();
    const std::size_t m = c_.size();
    if (floor_ > 0.0) {
        for (std::size_t i = 0; i < m; ++i) {
            if (p[i] <= c[i] && p[i] >= floor_) return true;
        }
        return false;
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (p[i] <= c[i]) return true;
    }
    return false;
}

bool exceeds(const StatisticSpec& spec, const PValueSample& sample, double b) {
    return ExceedanceChecker(spec, sample.size(), b)(sample.sorted());
}

}  // namespace hicrit
