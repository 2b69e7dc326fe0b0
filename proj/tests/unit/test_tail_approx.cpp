#include <doctest.h>

#include <cmath>
#include <vector>

#include "hicrit/boundary.hpp"
#include "hicrit/error.hpp"
#include "hicrit/exact.hpp"
#include "hicrit/tail_approx.hpp"
#include "oracles.hpp"

using namespace hicrit;

TEST_CASE("binomial factor matches a direct product and the Beta-density form") {
    for (std::size_t n : {5u, 40u, 400u, 1000u}) {
        for (std::size_t k = 1; k < n; k += std::max<std::size_t>(1, n / 9)) {
            for (double c : {1e-6, 0.001, 0.02, 0.3, 0.7}) {
                const double direct = oracle::binomial_mass(n, k, c);
                if (direct < 1e-280) continue;
                const double lib = detail::binomial_factor(n, k, c, std::log(c));
                const double beta_form = detail::beta_density_factor(n, k, c);
                CAPTURE(n);
                CAPTURE(k);
                CAPTURE(c);
                CHECK(lib == doctest::Approx(direct).epsilon(1e-10));
                CHECK(beta_form == doctest::Approx(lib).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("binomial factor from log c alone survives underflow of c") {
    const double log_c = -1000.0;
    const double v = detail::binomial_factor(10, 1, 0.0, log_c);
    CHECK(v == 0.0);
    CHECK(detail::binomial_factor(10, 1, std::exp(-20.0), -20.0) ==
          doctest::Approx(10.0 * std::exp(-20.0)).epsilon(1e-6));
}

TEST_CASE("level values at tabulated thresholds") {
    CHECK(tail_pvalue(CurveKind::HC, 400, 4.83, 1, 200).p_value == doctest::Approx(0.05).epsilon(0.1));
    CHECK(tail_pvalue(CurveKind::BJ, 1000, 3.50, 1, 500).p_value == doctest::Approx(0.01).epsilon(0.1));
    CHECK(tail_pvalue(CurveKind::MBJ, 30000, 3.56, 1, 15000).p_value ==
          doctest::Approx(0.01).epsilon(0.1));
    CHECK(tail_pvalue(CurveKind::MHC, 1000, 4.97, 1, 500).p_value ==
          doctest::Approx(0.001).epsilon(0.1));
    CHECK(tail_pvalue(CurveKind::JW, 1000, 40.0, 1, 500).p_value == 0.0);
}

TEST_CASE("decreasing in b, increasing in k1") {
    for (CurveKind kind : {CurveKind::HC, CurveKind::MHC, CurveKind::BJ, CurveKind::MBJ, CurveKind::JW}) {
        double prev = 2.0;
        for (double b = 1.5; b <= 8.0; b += 0.25) {
            const double p = tail_pvalue(kind, 500, b, 1, 250).raw_sum;
            CAPTURE(to_string(kind));
            CAPTURE(b);
            CHECK(p <= prev);
            prev = p;
        }
        CHECK(tail_pvalue(kind, 500, 3.0, 1, 100).raw_sum <= tail_pvalue(kind, 500, 3.0, 1, 250).raw_sum);
        CHECK(tail_pvalue(kind, 500, 3.0, 5, 250).raw_sum <= tail_pvalue(kind, 500, 3.0, 1, 250).raw_sum);
    }
}

TEST_CASE("threshold inverts the tail approximation") {
    struct Row {
        CurveKind kind;
        std::size_t n;
        double alpha;
        double expected;
    };
    const Row rows[] = {{CurveKind::MHC, 400, 0.01, 3.91},
                        {CurveKind::MBJ, 1000, 0.001, 4.04},
                        {CurveKind::JW, 1000, 0.01, 1.54},
                        {CurveKind::HC, 400, 0.05, 4.83}};
    for (const Row& r : rows) {
        const double b = threshold(r.kind, r.n, r.alpha, 1, r.n / 2);
        CAPTURE(to_string(r.kind));
        CHECK(b == doctest::Approx(r.expected).epsilon(0.01));
        CHECK(std::abs(tail_pvalue(r.kind, r.n, b, 1, r.n / 2).p_value - r.alpha) < 1e-6 * r.alpha + 1e-12);
    }
    CHECK_THROWS(threshold(CurveKind::HC, 400, 0.0, 1, 200));
    CHECK_THROWS(threshold(CurveKind::HC, 400, 1.5, 1, 200));
}

TEST_CASE("generic summation over the same boundary") {
    const BoundaryVector bv = boundary_vector(CurveKind::HC, 400, 4.83, 1, 200);
    const double a = tail_pvalue(CurveKind::HC, 400, 4.83, 1, 200).p_value;
    CHECK(tail_pvalue_generic(400, bv).p_value == doctest::Approx(a).epsilon(1e-14));
    BoundaryVector zero = bv;
    std::fill(zero.c.begin(), zero.c.end(), 0.0);
    CHECK(tail_pvalue_generic(400, zero).p_value == 0.0);
}

TEST_CASE("single flat index against the exact Beta tail") {
    // With zero slope the bracket is one and the term is Bin(n, k, c), the
    // leading part of P{U_(k) <= c} when c is well below k/n.
    const std::size_t n = 200;
    for (std::size_t k : {3u, 10u, 40u, 90u}) {
        const double c = 0.1 * static_cast<double>(k) / n;
        BoundaryVector bv;
        bv.n = n;
        bv.k0 = bv.k1 = k;
        bv.c = {c};
        bv.log_c = {std::log(c)};
        bv.c_prime = {0.0};
        const double approx = tail_pvalue_generic(n, bv).p_value;
        const double exact = oracle::beta_cdf_simpson(c, static_cast<double>(k),
                                                      static_cast<double>(n - k + 1));
        CAPTURE(k);
        CHECK(approx <= exact);
        CHECK(std::abs(approx - exact) <= 0.15 * exact);
    }
}

TEST_CASE("sloped single index discounts later crossings") {
    const BoundaryVector bv = boundary_vector(CurveKind::HC, 200, 3.0, 10, 10);
    const double term = tail_pvalue_generic(200, bv).p_value;
    const double mass = oracle::binomial_mass(200, 10, bv.c[0]);
    CHECK(term < mass);
    CHECK(term == doctest::Approx(detail::theorem_bracket(200, 10, bv.c[0], bv.c_prime[0]) * mass).epsilon(1e-10));
}

TEST_CASE("small-n agreement with the exact crossing probability") {
    for (std::size_t n : {8u, 12u, 16u, 20u}) {
        for (double b : {2.5, 3.0, 3.5}) {
            const BoundaryVector bv = boundary_vector(CurveKind::MBJ, n, b, 1, n - 1);
            const double approx = tail_pvalue_generic(n, bv).p_value;
            if (approx > 0.05) continue;
            const double exact = crossing_probability(n, bv);
            CAPTURE(n);
            CAPTURE(b);
            CHECK(std::abs(approx - exact) < 0.2 * exact);
        }
    }
}

TEST_CASE("reference approximations") {
    CHECK(darling_erdos_pvalue(3.13, 400) == doctest::Approx(0.036).epsilon(0.03));
    CHECK(darling_erdos_pvalue(3.91, 400) == doctest::Approx(0.008).epsilon(0.07));
    CHECK(darling_erdos_pvalue(60.0, 400) < 1e-12);
    CHECK(ou_pvalue(2.90, 1.0 / 400, 0.5).p_value == doctest::Approx(0.052).epsilon(0.02));
    CHECK(ou_pvalue(60.0, 1.0 / 400, 0.5).p_value == 0.0);
    // linear in T0 before clipping
    const OUApproxResult narrow = ou_pvalue(4.0, 0.01, 0.5);
    const OUApproxResult wide = ou_pvalue(4.0, 1e-4, 0.5);
    CHECK(wide.t0 > narrow.t0);
    CHECK(wide.p_value / narrow.p_value == doctest::Approx(wide.t0 / narrow.t0).epsilon(1e-12));
    CHECK_THROWS(darling_erdos_pvalue(3.0, 2));
}
