#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "hicrit/bounds.hpp"
#include "hicrit/error.hpp"
#include "hicrit/parallel.hpp"
#include "hicrit/simulation.hpp"

using namespace hicrit;

namespace {

// Membership of lambda in the BJ set, written from the definition: some
// order statistic has (F - l) log[(F - l)/((1 - l) t)] - [(F - l) - (1 - l) t] > gamma
// with F - l >= (1 - l) t.
bool bj_member(const std::vector<double>& p, double gamma, double lambda) {
    const double n = static_cast<double>(p.size());
    for (std::size_t k = 1; k <= p.size(); ++k) {
        const double f = k / n - lambda;
        const double g = (1.0 - lambda) * p[k - 1];
        if (f < g || f <= 0.0) continue;
        const double v = g > 0.0 ? f * std::log(f / g) - (f - g) : INFINITY;
        if (v > gamma) return true;
    }
    return false;
}

double bj_grid_oracle(const std::vector<double>& p, double gamma) {
    const int grid = 4096;
    int last = -1;
    for (int i = 0; i < grid; ++i) {
        if (bj_member(p, gamma, static_cast<double>(i) / grid)) last = i;
    }
    if (last < 0) return 0.0;
    double lo = static_cast<double>(last) / grid;
    double hi = static_cast<double>(last + 1) / grid;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (bj_member(p, gamma, mid) ? lo : hi) = mid;
    }
    return lo;
}

std::vector<double> mixture_sample(std::size_t n, double lambda, double mu, std::uint64_t seed) {
    Rng rng = make_stream(seed, 0);
    MixtureModel m;
    m.p = lambda;
    m.mu = mu;
    m.count_mode = CountMode::Deterministic;
    std::vector<double> v;
    draw_mixture_pvalues(n, m, rng, v);
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TEST_CASE("bounding sequence") {
    const BoundingSequence s = bounding_sequence(400, 0.05);
    CHECK(s.gamma > 0.0);
    CHECK(s.beta > 0.0);
    const BoundingSequence t = bounding_sequence(400, 0.01);
    CHECK(t.gamma > s.gamma);
    CHECK(t.beta > s.beta);
    CHECK_THROWS_AS(bounding_sequence(1, 0.05), DomainError);
    CHECK_THROWS_AS(bounding_sequence(400, 0.0), DomainError);
}

TEST_CASE("BJ bound against a lambda-grid oracle") {
    const BoundingSequence seq = bounding_sequence(400, 0.05);
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        const double lambda = 0.05 * static_cast<double>(seed % 6);
        const auto p = mixture_sample(400, lambda, 2.5, seed);
        const LowerBoundResult r = lower_bound_bj(PValueSample::from_sorted(p), seq);
        CAPTURE(seed);
        CHECK(r.lambda_hat == doctest::Approx(bj_grid_oracle(p, seq.gamma)).epsilon(1e-6).scale(1.0));
        CHECK(r.lambda_hat >= 0.0);
        CHECK(r.lambda_hat < 1.0);
    }
}

TEST_CASE("HC bound written out directly") {
    const BoundingSequence seq = bounding_sequence(400, 0.05);
    const auto p = mixture_sample(400, 0.2, 3.0, 5);
    double want = 0.0;
    for (std::size_t k = 1; k <= p.size(); ++k) {
        const double t = p[k - 1];
        if (t < 1.0 / 400 || t >= 1.0) continue;
        want = std::max(want, (k / 400.0 - t - seq.beta * std::sqrt(t * (1 - t))) / (1 - t));
    }
    CHECK(lower_bound_hc(PValueSample::from_sorted(p), seq).lambda_hat == doctest::Approx(want));
    CHECK(want > 0.0);
}

TEST_CASE("evenly spread null sample gives zero") {
    std::vector<double> p(400);
    for (std::size_t k = 1; k <= 400; ++k) p[k - 1] = (k - 0.5) / 400.0;
    const auto s = PValueSample::from_sorted(p);
    CHECK(lower_bound_bj(s, 0.05).lambda_hat == 0.0);
    CHECK(lower_bound_hc(s, 0.05).lambda_hat == 0.0);
}

TEST_CASE("tiny p-values push the bound towards one") {
    const auto s = PValueSample::from_sorted(std::vector<double>(400, 1e-300));
    const double v = lower_bound_bj(s, 0.05).lambda_hat;
    CHECK(v > 0.95);
    CHECK(v < 1.0);
}

TEST_CASE("adding signal never lowers the BJ bound; larger gamma never raises it") {
    const BoundingSequence seq = bounding_sequence(200, 0.05);
    const BoundingSequence strict = bounding_sequence(200, 0.005);
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<std::size_t> pick(0, 199);
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        auto p = mixture_sample(200, 0.1, 2.0, seed);
        const double before = lower_bound_bj(PValueSample::from_sorted(p), seq).lambda_hat;
        CHECK(lower_bound_bj(PValueSample::from_sorted(p), strict).lambda_hat <= before);
        const std::size_t i = pick(rng);
        p[i] = i == 0 ? 0.1 * p[0] : p[i - 1];
        CHECK(lower_bound_bj(PValueSample::from_sorted(p), seq).lambda_hat >= before);
    }
}

TEST_CASE("null coverage at small scale") {
    BoundsModel null_model;
    const CoverageResult mbj = coverage_check(CurveKind::MBJ, 200, 0.05, null_model, 4000, 9);
    const CoverageResult mhc = coverage_check(CurveKind::MHC, 200, 0.05, null_model, 4000, 9);
    CHECK(mbj.rate <= 0.05 + 3.0 * mbj.se);
    CHECK(mhc.rate <= 0.05 + 3.0 * mhc.se);
    CHECK_THROWS_AS(coverage_check(CurveKind::HC, 200, 0.05, null_model, 10, 1), DomainError);
}

TEST_CASE("comparison is thread-invariant and matches the serial reference") {
    BoundsModel m{0.2, 3.0};
    const BoundsComparison ref = compare_bounds_serial(200, 0.05, m, 500, 21);
    for (int t : {1, 2, 5}) {
        set_num_threads(t);
        const BoundsComparison r = compare_bounds(200, 0.05, m, 500, 21);
        CHECK(r.p_hc_greater == ref.p_hc_greater);
        CHECK(r.p_hc_less == ref.p_hc_less);
        CHECK(r.rel_l2_hc == ref.rel_l2_hc);
        CHECK(r.rel_l2_bj == ref.rel_l2_bj);
    }
    set_num_threads(0);
    CHECK(ref.p_hc_greater + ref.p_hc_less <= 1.0);
}

TEST_CASE("sequence size mismatch") {
    const BoundingSequence seq = bounding_sequence(10, 0.05);
    const auto s = PValueSample::from_values({0.1, 0.2});
    CHECK_THROWS_AS(lower_bound_bj(s, seq), DomainError);
}
