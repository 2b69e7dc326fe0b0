#include "hicrit/tail_approx.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "hicrit/error.hpp"
#include "hicrit/special.hpp"

namespace hicrit {

namespace detail {

double binomial_factor(std::size_t n, std::size_t k, double c, double log_c) {
    if (c <= 0.0 && !std::isfinite(log_c)) return 0.0;
    return std::exp(special::log_binomial_pmf(n, k, log_c, std::log1p(-c)));
}

double beta_density_factor(std::size_t n, std::size_t k, double c) {
    const double kk = static_cast<double>(k);
    return special::beta_pdf(c, kk, static_cast<double>(n) + 1.0 - kk) * c / kk;
}

double theorem_bracket(std::size_t n, std::size_t k, double c, double c_prime) {
    const double nn = static_cast<double>(n);
    const double v = 1.0 - (nn - static_cast<double>(k) + 1.0) * c_prime / (nn * (1.0 - c));
    return std::clamp(v, 0.0, 1.0);
}

double heuristic_bracket(std::size_t n, std::size_t k, double c, double c_prime) {
    const double x = static_cast<double>(k) / static_cast<double>(n);
    return std::clamp(1.0 - (1.0 - x) * c_prime / (1.0 - c), 0.0, 1.0);
}

}  // namespace detail

namespace {

TailApproxResult finish(std::vector<double> terms, bool convex) {
    special::CompensatedSum sum;
    for (double t : terms) sum.add(t);
    TailApproxResult out;
    out.raw_sum = sum.value();
    out.clipped = out.raw_sum > 1.0;
    out.p_value = std::min(1.0, out.raw_sum);
    out.terms = std::move(terms);
    out.boundary_convex = convex;
    return out;
}

}  // namespace

TailApproxResult tail_pvalue(CurveKind kind, std::size_t n, double b, std::size_t k0,
                             std::size_t k1) {
    if (!(b > 0.0)) throw DomainError("tail_pvalue: b must be > 0");
    if (!(k0 >= 1 && k0 <= k1 && k1 + 1 <= n)) {
        throw DomainError("tail_pvalue: need 1 <= k0 <= k1 <= n-1");
    }
    const BoundaryVector bv = boundary_vector(kind, n, b, k0, k1);
    const double nn = static_cast<double>(n);
    const double inv_n = 1.0 / nn;
    const double log_inv_n = -std::log(nn);
    std::vector<double> terms(bv.size(), 0.0);
    for (std::size_t i = 0; i < bv.size(); ++i) {
        const std::size_t k = k0 + i;
        const double c = bv.c[i];
        if (!(c > 0.0) && !std::isfinite(bv.log_c[i])) continue;
        double mass = detail::binomial_factor(n, k, c, bv.log_c[i]);
        if (kind == CurveKind::MHC) {
            if (c <= inv_n) continue;
            mass -= detail::binomial_factor(n, k, inv_n, log_inv_n) * std::max(nn * c, 1.0);
            mass = std::max(mass, 0.0);
        }
        terms[i] = detail::theorem_bracket(n, k, c, bv.c_prime[i]) * mass;
    }
    return finish(std::move(terms), is_convex(bv));
}

TailApproxResult tail_pvalue_generic(std::size_t n, const BoundaryVector& boundary) {
    if (boundary.size() == 0 || boundary.k0 < 1 || boundary.k0 + boundary.size() - 1 > n) {
        throw DomainError("tail_pvalue_generic: boundary indices must lie in [1, n]");
    }
    if (boundary.c_prime.size() != boundary.size()) {
        throw DomainError("tail_pvalue_generic: slope vector length mismatch");
    }
    const bool have_logs = boundary.log_c.size() == boundary.size();
    std::vector<double> terms(boundary.size(), 0.0);
    double last = 0.0;
    for (std::size_t i = 0; i < boundary.size(); ++i) {
        const double c = boundary.c[i];
        if (!(c > 0.0)) continue;
        if (c >= 1.0) throw DomainError("tail_pvalue_generic: boundary entries must be < 1");
        if (c < last) throw DomainError("tail_pvalue_generic: boundary is not monotone");
        if (boundary.c_prime[i] < 0.0) {
            throw DomainError("tail_pvalue_generic: slopes must be >= 0");
        }
        last = c;
        const std::size_t k = boundary.k0 + i;
        const double log_c = have_logs ? boundary.log_c[i] : std::log(c);
        terms[i] = detail::theorem_bracket(n, k, c, boundary.c_prime[i]) *
                   detail::binomial_factor(n, k, c, log_c);
    }
    return finish(std::move(terms), is_convex(boundary));
}

double threshold(CurveKind kind, std::size_t n, double alpha, std::size_t k0, std::size_t k1) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("threshold: alpha must lie in (0,1)");
    auto excess = [&](double b) { return tail_pvalue(kind, n, b, k0, k1).raw_sum / alpha - 1.0; };

    // Geometric grid; keep the last grid point still at or above alpha so the
    // bracket sits on the decreasing branch (the sum also vanishes as b -> 0).
    double lo = 0.0;
    double f_lo = -1.0;
    double hi = 0.0;
    double f_hi = 0.0;
    for (double b = 0.25; b <= 4096.0; b *= 2.0) {
        const double f = excess(b);
        if (f >= 0.0) {
            lo = b;
            f_lo = f;
            hi = 0.0;
        } else if (lo > 0.0 && hi == 0.0) {
            hi = b;
            f_hi = f;
        }
    }
    if (lo == 0.0) throw NumericError("threshold: alpha not attainable");
    if (hi == 0.0) throw NumericError("threshold: failed to bracket from above");
    std::uintmax_t iters = 200;
    const auto tol = boost::math::tools::eps_tolerance<double>(44);
    const auto [a, c] = boost::math::tools::toms748_solve(excess, lo, hi, f_lo, f_hi, tol, iters);
    if (iters >= 200) throw NumericError("threshold: root solve did not converge");
    return 0.5 * (a + c);
}

OUApproxResult ou_pvalue(double b, double tau0, double tau1) {
    if (!(0.0 < tau0 && tau0 < tau1 && tau1 < 1.0)) {
        throw DomainError("ou_pvalue: need 0 < tau0 < tau1 < 1");
    }
    if (!(b > 0.0)) throw DomainError("ou_pvalue: b must be > 0");
    OUApproxResult out;
    out.t0 = 0.5 * std::log(tau1 * (1.0 - tau0) / (tau0 * (1.0 - tau1)));
    out.p_value = std::clamp(out.t0 * b * special::normal_pdf(b), 0.0, 1.0);
    return out;
}

double darling_erdos_pvalue(double b, std::size_t n) {
    if (!(b > 0.0)) throw DomainError("darling_erdos_pvalue: b must be > 0");
    if (n < 3) throw DomainError("darling_erdos_pvalue: n must be >= 3");
    const double ll = std::log(std::log(static_cast<double>(n)));
    const double lll = std::log(ll);
    const double a_n = std::sqrt(2.0 * ll);
    const double x = a_n * b - 2.0 * ll - 0.5 * lll + 0.5 * std::log(4.0 * std::numbers::pi);
    return -std::expm1(-std::exp(-x));
}

}  // namespace hicrit
