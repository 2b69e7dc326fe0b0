#include "hicrit/boundary.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "hicrit/error.hpp"
#include "hicrit/parallel.hpp"

namespace hicrit {

std::string_view to_string(CurveKind kind) {
    switch (kind) {
        case CurveKind::HC: return "hc";
        case CurveKind::MHC: return "mhc";
        case CurveKind::BJ: return "bj";
        case CurveKind::MBJ: return "mbj";
        case CurveKind::JW: return "jw";
    }
    return "unknown";
}

CurveKind parse_curve_kind(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (lower == "hc") return CurveKind::HC;
    if (lower == "mhc") return CurveKind::MHC;
    if (lower == "bj") return CurveKind::BJ;
    if (lower == "mbj") return CurveKind::MBJ;
    if (lower == "jw") return CurveKind::JW;
    throw InputError("unknown statistic kind '" + std::string(text) + "'");
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_args(double x, double xi) {
    if (!(x > 0.0 && x <= 1.0)) throw DomainError("curve: x must lie in (0,1]");
    if (!(xi >= 0.0) || !std::isfinite(xi)) throw DomainError("curve: xi must be >= 0");
}

// Root of an increasing function on [0, hi] that is negative at 0.
template <class F>
double solve_increasing(F f, double hi) {
    double f_hi = f(hi);
    int guard = 0;
    while (f_hi <= 0.0) {
        hi *= 2.0;
        f_hi = f(hi);
        if (++guard > 200) throw NumericError("curve: failed to bracket root");
    }
    std::uintmax_t iters = 300;
    const auto tol = boost::math::tools::eps_tolerance<double>(52);
    const auto [lo, up] = boost::math::tools::toms748_solve(f, 0.0, hi, f(0.0), f_hi, tol, iters);
    return 0.5 * (lo + up);
}

// v = log(x/c) for the MBJ curve: v - 1 + exp(-v) = xi^2 / (2x).
double mbj_log_ratio(double x, double xi) {
    const double t = xi * xi / (2.0 * x);
    auto g = [t](double v) { return v + std::expm1(-v) - t; };
    return solve_increasing(g, t + 1.0);
}

// v = log(x/c) for the BJ curve.
double bj_log_ratio(double x, double xi) {
    const double target = 0.5 * xi * xi;
    if (x >= 1.0) return target;
    const double l1mx = std::log1p(-x);
    auto g = [x, l1mx, target](double v) {
        const double c = x * std::exp(-v);
        return x * v + (1.0 - x) * (l1mx - std::log1p(-c)) - target;
    };
    return solve_increasing(g, std::max(1.0, target / x));
}

double hc_slope(double x, double xi) {
    const double xi2 = xi * xi;
    return 1.0 / (1.0 + xi2) -
           xi * (1.0 - 2.0 * x) / ((1.0 + xi2) * std::sqrt(xi2 + 4.0 * x * (1.0 - x)));
}

double mbj_slope_from_ratio(double v) {
    if (v <= 0.0) return 1.0;
    return v / std::expm1(v);
}

double bj_slope(double x, double c, double v) {
    if (v < 1e-7) return 1.0;
    if (x >= 1.0) return c * v;
    const double num = v - (std::log1p(-x) - std::log1p(-c));
    const double den = std::exp(v) - (1.0 - x) / (1.0 - c);
    return num / den;
}

}  // namespace

BoundaryPoint curve_point(CurveKind kind, double x, double xi) {
    check_args(x, xi);
    BoundaryPoint pt;
    pt.x = x;
    pt.xi = xi;
    if (xi == 0.0) {
        pt.c = x;
        pt.log_c = std::log(x);
        pt.c_prime = 1.0;
        return pt;
    }
    switch (kind) {
        case CurveKind::HC:
        case CurveKind::MHC: {
            // Smaller root of (1+xi^2)c^2 - (2x+xi^2)c + x^2 = 0, written
            // without cancellation.
            const double xi2 = xi * xi;
            const double denom = (2.0 * x + xi2) + xi * std::sqrt(xi2 + 4.0 * x * (1.0 - x));
            pt.c = 2.0 * x * x / denom;
            pt.log_c = std::log(2.0) + 2.0 * std::log(x) - std::log(denom);
            pt.c_prime = hc_slope(x, xi);
            break;
        }
        case CurveKind::MBJ: {
            const double v = mbj_log_ratio(x, xi);
            pt.log_c = std::log(x) - v;
            pt.c = std::exp(pt.log_c);
            pt.c_prime = mbj_slope_from_ratio(v);
            break;
        }
        case CurveKind::BJ: {
            const double v = bj_log_ratio(x, xi);
            pt.log_c = std::log(x) - v;
            pt.c = std::exp(pt.log_c);
            pt.c_prime = bj_slope(x, pt.c, v);
            break;
        }
        case CurveKind::JW: {
            const double s = std::sqrt(x) - xi;
            if (s <= 0.0) {
                pt.c = 0.0;
                pt.log_c = kNegInf;
                pt.c_prime = 0.0;
            } else {
                pt.c = s * s;
                pt.log_c = 2.0 * std::log(s);
                pt.c_prime = 1.0 - xi / std::sqrt(x);
            }
            break;
        }
    }
    return pt;
}

double curve_value(CurveKind kind, double x, double xi) { return curve_point(kind, x, xi).c; }

double curve_defining_function(CurveKind kind, double x, double c) {
    switch (kind) {
        case CurveKind::HC:
        case CurveKind::MHC:
            return (x - c) / std::sqrt(c * (1.0 - c));
        case CurveKind::MBJ:
            return x * std::log(x / c) - (x - c);
        case CurveKind::BJ: {
            const double upper = x >= 1.0 ? 0.0 : (1.0 - x) * (std::log1p(-x) - std::log1p(-c));
            return x * std::log(x / c) + upper;
        }
        case CurveKind::JW:
            return std::sqrt(x) - std::sqrt(c);
    }
    return 0.0;
}

double curve_target(CurveKind kind, double xi) {
    switch (kind) {
        case CurveKind::BJ:
        case CurveKind::MBJ:
            return 0.5 * xi * xi;
        default:
            return xi;
    }
}

double curve_derivative(CurveKind kind, double x, double xi, double c) {
    check_args(x, xi);
    if (xi == 0.0) {
        if (c != x) throw DomainError("curve_derivative: c must equal x when xi = 0");
        return 1.0;
    }
    if (kind == CurveKind::JW && c <= 0.0) {
        if (std::sqrt(x) > xi) throw DomainError("curve_derivative: inconsistent (x, c)");
        return 0.0;
    }
    if (!(c > 0.0 && c < x)) throw DomainError("curve_derivative: c must lie in (0, x)");
    const double target = curve_target(kind, xi);
    const double residual = curve_defining_function(kind, x, c) - target;
    if (std::abs(residual) > 1e-8 * std::max(1.0, target)) {
        throw DomainError("curve_derivative: (x, c) does not lie on the curve");
    }
    switch (kind) {
        case CurveKind::HC:
        case CurveKind::MHC:
            return hc_slope(x, xi);
        case CurveKind::MBJ:
            return mbj_slope_from_ratio(std::log(x / c));
        case CurveKind::BJ:
            return bj_slope(x, c, std::log(x / c));
        case CurveKind::JW:
            return 1.0 - xi / std::sqrt(x);
    }
    return 0.0;
}

BoundaryVector boundary_vector(CurveKind kind, std::size_t n, double b, std::size_t k0,
                               std::size_t k1) {
    if (!(k0 >= 1 && k0 <= k1 && k1 <= n)) {
        throw DomainError("boundary_vector: need 1 <= k0 <= k1 <= n");
    }
    if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("boundary_vector: b must be > 0");
    BoundaryVector out;
    out.n = n;
    out.b = b;
    out.k0 = k0;
    out.k1 = k1;
    const std::size_t m = k1 - k0 + 1;
    out.c.resize(m);
    out.log_c.resize(m);
    out.c_prime.resize(m);
    const double nn = static_cast<double>(n);
    const double xi = b / std::sqrt(nn);
    parallel_for(
        static_cast<std::int64_t>(m),
        [&](std::int64_t i) {
            const double x = static_cast<double>(k0 + static_cast<std::size_t>(i)) / nn;
            const BoundaryPoint pt = curve_point(kind, x, xi);
            out.c[i] = pt.c;
            out.log_c[i] = pt.log_c;
            out.c_prime[i] = pt.c_prime;
        },
        m > 2048);
    return out;
}

bool is_convex(const BoundaryVector& boundary, double tol) {
    const auto& c = boundary.c;
    for (std::size_t i = 1; i + 1 < c.size(); ++i) {
        if (c[i + 1] - 2.0 * c[i] + c[i - 1] < -tol) return false;
    }
    return true;
}

}  // namespace hicrit
