#include <doctest.h>

#include <cmath>
#include <vector>

#include "hicrit/boundary.hpp"
#include "hicrit/error.hpp"
#include "hicrit/parallel.hpp"
#include "hicrit/power.hpp"
#include "hicrit/simulation.hpp"
#include "hicrit/tail_approx.hpp"

using namespace hicrit;

namespace {

MixtureModel fixed(double p, double delta) {
    MixtureModel m;
    m.p = p;
    m.mu = delta;
    return m;
}

double normal_sf(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("transformed boundary reduces to the null curve") {
    const BoundaryVector bv = boundary_vector(CurveKind::HC, 1000, 4.0, 1, 500);
    for (const MixtureModel& m : {fixed(0.0, 3.0), fixed(0.05, 0.0)}) {
        const auto d = transform_boundary(CurveKind::HC, 1000, 4.0, 1, 500, m);
        REQUIRE(d.size() == bv.size());
        for (std::size_t i = 0; i < d.size(); ++i) CHECK(d[i] == doctest::Approx(bv.c[i]).epsilon(1e-12));
    }
}

TEST_CASE("transformed boundary lies above the null curve for positive shifts") {
    const double b = threshold(CurveKind::HC, 1000, 0.01, 1, 500);
    const BoundaryVector bv = boundary_vector(CurveKind::HC, 1000, b, 1, 500);
    const auto d = transform_boundary(CurveKind::HC, 1000, b, 1, 500, fixed(0.02, 2.5));
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double c = bv.c[i];
        // invert the normal tail by bisection
        double lo = -40.0;
        double hi = 40.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (normal_sf(mid) > c ? lo : hi) = mid;
        }
        const double z = 0.5 * (lo + hi);
        const double want = 0.98 * c + 0.02 * normal_sf(z - 2.5);
        CHECK(d[i] > c);
        CHECK(d[i] == doctest::Approx(want).epsilon(1e-8));
    }
}

TEST_CASE("convex split index") {
    const std::vector<double> convex{1, 2, 4, 7, 11};
    CHECK(convex_split_index(convex, 1, 5) == 1);
    const std::vector<double> bent{1, 3, 4, 4.5, 5.5, 7};
    CHECK(convex_split_index(bent, 3, 8) == 6);
}

TEST_CASE("suffix boundary at x = 0") {
    const std::vector<double> d{0.01, 0.02, 0.04, 0.07, 0.11};
    const BoundaryVector s = suffix_boundary(d, 1, 2, 10, 0.0);
    CHECK(s.n == 8);
    REQUIRE(s.size() == 3);
    CHECK(s.c[0] == doctest::Approx(0.04));
    CHECK(s.c[2] == doctest::Approx(0.11));
    CHECK(s.c_prime[0] == doctest::Approx(8 * 0.03));
    CHECK(s.c_prime[2] == s.c_prime[1]);
    const BoundaryVector half = suffix_boundary(d, 1, 2, 10, 0.02);
    CHECK(half.c[0] == doctest::Approx(0.02 / 0.98));
}

TEST_CASE("analytic power at the null is close to the level") {
    for (CurveKind kind : {CurveKind::HC, CurveKind::MBJ, CurveKind::BJ}) {
        const double b = threshold(kind, 1000, 0.01, 1, 500);
        const PowerResult r = analytic_power(kind, 1000, b, 1, 500, fixed(0.0, 2.0));
        CAPTURE(to_string(kind));
        CHECK(r.power == doctest::Approx(0.01).epsilon(0.15));
    }
}

TEST_CASE("analytic power is nondecreasing in delta and p") {
    const double b = threshold(CurveKind::MBJ, 1000, 0.01, 1, 500);
    double prev = 0.0;
    for (double delta : {0.5, 1.5, 2.5, 3.5}) {
        const double v = analytic_power(CurveKind::MBJ, 1000, b, 1, 500, fixed(0.01, delta)).power;
        CHECK(v >= prev - 1e-4);
        prev = v;
    }
    prev = 0.0;
    for (double p : {0.002, 0.005, 0.01, 0.02}) {
        const double v = analytic_power(CurveKind::MBJ, 1000, b, 1, 500, fixed(p, 2.5)).power;
        CHECK(v >= prev - 1e-4);
        prev = v;
    }
}

TEST_CASE("analytic power against Monte Carlo") {
    struct Case {
        CurveKind kind;
        double p;
        double delta;
    };
    for (const Case& c : {Case{CurveKind::HC, 0.02, 2.5}, Case{CurveKind::MBJ, 0.005, 4.0}}) {
        const double b = threshold(c.kind, 1000, 0.01, 1, 500);
        MixtureModel m = fixed(c.p, c.delta);
        const double a = analytic_power(c.kind, 1000, b, 1, 500, m).power;
        const PowerResult mc = mc_power({c.kind, 1, 500}, 1000, b, m, 10000, 42);
        CAPTURE(to_string(c.kind));
        CHECK(std::abs(a - mc.power) <= 3.0 * mc.se);
    }
}

TEST_CASE("analytic path rejects unsupported models") {
    MixtureModel two = fixed(0.01, 2.0);
    two.sided = Sidedness::Two;
    CHECK_THROWS_AS(analytic_power(CurveKind::HC, 1000, 4.0, 1, 500, two), DomainError);
    MixtureModel spread = fixed(0.01, 2.0);
    spread.delta_sd = 0.1;
    CHECK_THROWS_AS(analytic_power(CurveKind::HC, 1000, 4.0, 1, 500, spread), DomainError);
    CHECK_THROWS_AS(analytic_power(CurveKind::MHC, 1000, 4.0, 1, 500, fixed(0.01, 2.0)), DomainError);
    CHECK_THROWS_AS(analytic_power(CurveKind::HC, 1000, 4.0, 1, 1000, fixed(0.01, 2.0)), DomainError);
}

TEST_CASE("mixture draws") {
    Rng rng = make_stream(1, 0);
    std::vector<double> out;
    MixtureModel m = fixed(0.1, 8.0);
    m.count_mode = CountMode::Deterministic;
    draw_mixture_pvalues(1000, m, rng, out);
    REQUIRE(out.size() == 1000);
    std::size_t tiny = 0;
    for (double v : out) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        tiny += v < 1e-6;
    }
    CHECK(tiny >= 90);
    CHECK(tiny <= 110);
}

TEST_CASE("null power equals the level") {
    const StatisticSpec spec{CurveKind::MBJ, 1, 0};
    const double b = threshold(CurveKind::MBJ, 400, 0.05, 1, 200);
    const PowerResult r = mc_power(spec, 400, b, fixed(0.0, 3.0), 20000, 8);
    CHECK(r.power <= 0.05 + 3.0 * r.se);
    CHECK(r.power >= 0.03);
}

TEST_CASE("fixed count is at least as powerful as binomial count") {
    MixtureModel bin;
    bin.p = 0.01;
    bin.mu = 4.0;
    bin.delta_sd = 0.1;
    bin.sided = Sidedness::Two;
    MixtureModel det = bin;
    det.count_mode = CountMode::Deterministic;
    const StatisticSpec spec{CurveKind::BJ, 1, 0};
    const PowerResult a = mc_power(spec, 1000, 3.50, bin, 10000, 3);
    const PowerResult d = mc_power(spec, 1000, 3.50, det, 10000, 3);
    CHECK(d.power >= a.power - 3.0 * std::hypot(a.se, d.se));
}

TEST_CASE("Monte Carlo power ignores the thread count") {
    MixtureModel m = fixed(0.01, 3.0);
    m.sided = Sidedness::Two;
    m.delta_sd = 0.1;
    const StatisticSpec spec{CurveKind::HC, 1, 0};
    const PowerResult ref = mc_power_serial(spec, 500, 4.5, m, 3000, 77);
    for (int t : {1, 2, 3, 8}) {
        set_num_threads(t);
        const PowerResult r = mc_power(spec, 500, 4.5, m, 3000, 77);
        CHECK(r.power == ref.power);
    }
    set_num_threads(0);
}
