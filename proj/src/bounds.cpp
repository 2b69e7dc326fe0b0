#include "hicrit/bounds.hpp"

#include <algorithm>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <vector>

#include "hicrit/error.hpp"
#include "hicrit/parallel.hpp"
#include "hicrit/simulation.hpp"
#include "hicrit/tail_approx.hpp"

namespace hicrit {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("bounds: alpha must lie in (0,1)");
}

void check_sequence(const PValueSample& sample, const BoundingSequence& seq) {
    if (seq.n != sample.size()) throw DomainError("bounds: sequence built for a different n");
}

// (a - l) log[(a - l) / ((1 - l) p)] - [(a - l) - (1 - l) p]
double bj_criterion(double a, double p, double lambda) {
    const double f = a - lambda;
    const double g = (1.0 - lambda) * p;
    if (f <= g) return 0.0;
    return f * std::log(f / g) - (f - g);
}

BoundsModel validated(const BoundsModel& model) {
    if (!(model.lambda >= 0.0 && model.lambda < 1.0)) {
        throw DomainError("bounds model: lambda must lie in [0,1)");
    }
    return model;
}

MixtureModel as_mixture(const BoundsModel& model) {
    MixtureModel m;
    m.p = model.lambda;
    m.mu = model.mu;
    m.sided = model.sided;
    m.count_mode = model.count_mode;
    return m;
}

struct PairDraw {
    double hc;
    double bj;
};

PairDraw draw_pair(std::size_t n, const BoundingSequence& seq, const MixtureModel& model,
                   std::uint64_t seed, std::uint64_t r, std::vector<double>& buf) {
    Rng rng = make_stream(seed, r);
    draw_mixture_pvalues(n, model, rng, buf);
    const PValueSample s = PValueSample::from_values(buf);
    return {lower_bound_hc(s, seq).lambda_hat, lower_bound_bj(s, seq).lambda_hat};
}

struct ComparisonAcc {
    std::size_t greater = 0;
    std::size_t less = 0;
    double sq_hc = 0.0;
    double sq_bj = 0.0;

    void add(const PairDraw& d, double lambda) {
        greater += d.hc > d.bj ? 1 : 0;
        less += d.hc < d.bj ? 1 : 0;
        sq_hc += (lambda - d.hc) * (lambda - d.hc);
        sq_bj += (lambda - d.bj) * (lambda - d.bj);
    }
};

BoundsComparison summarize(const ComparisonAcc& acc, double lambda, std::size_t reps) {
    BoundsComparison out;
    out.replicates = reps;
    if (reps == 0) return out;
    const double r = static_cast<double>(reps);
    out.p_hc_greater = static_cast<double>(acc.greater) / r;
    out.p_hc_less = static_cast<double>(acc.less) / r;
    if (lambda > 0.0) {
        out.rel_l2_hc = std::sqrt(acc.sq_hc / r) / lambda;
        out.rel_l2_bj = std::sqrt(acc.sq_bj / r) / lambda;
    }
    return out;
}

}  // namespace

BoundingSequence bounding_sequence(std::size_t n, double alpha) {
    check_alpha(alpha);
    if (n < 2) throw DomainError("bounding_sequence: n must be >= 2");
    // The bounds take their sup over every order statistic, so the null
    // quantiles are calibrated over the same index range.
    const std::size_t k1 = n - 1;
    BoundingSequence seq;
    seq.n = n;
    seq.alpha = alpha;
    const double b_mbj = threshold(CurveKind::MBJ, n, alpha, 1, k1);
    seq.gamma = b_mbj * b_mbj / (2.0 * static_cast<double>(n));
    seq.beta = threshold(CurveKind::MHC, n, alpha, 1, k1) / std::sqrt(static_cast<double>(n));
    return seq;
}

LowerBoundResult lower_bound_bj(const PValueSample& sample, const BoundingSequence& seq) {
    check_sequence(sample, seq);
    const std::size_t n = sample.size();
    const double nn = static_cast<double>(n);
    const double gamma = seq.gamma;
    LowerBoundResult out;
    out.kind = CurveKind::MBJ;
    for (std::size_t k = 1; k <= n; ++k) {
        const double a = static_cast<double>(k) / nn;
        const double p = sample.order(k);
        if (!(p < a)) continue;
        double lam;
        if (p == 0.0) {
            lam = a;
        } else {
            // The criterion falls from its value at 0 to 0 at r = (a-p)/(1-p).
            const double r = (a - p) / (1.0 - p);
            if (r <= out.lambda_hat) continue;
            if (bj_criterion(a, p, 0.0) <= gamma) continue;
            auto f = [&](double l) { return bj_criterion(a, p, l) - gamma; };
            boost::uintmax_t iters = 200;
            const auto root = boost::math::tools::toms748_solve(
                f, 0.0, r, f(0.0), -gamma, boost::math::tools::eps_tolerance<double>(50), iters);
            lam = 0.5 * (root.first + root.second);
        }
        if (lam > out.lambda_hat) {
            out.lambda_hat = lam;
            out.active_k = k;
            out.active_t = p;
        }
    }
    return out;
}

LowerBoundResult lower_bound_bj(const PValueSample& sample, double alpha) {
    return lower_bound_bj(sample, bounding_sequence(sample.size(), alpha));
}

LowerBoundResult lower_bound_hc(const PValueSample& sample, const BoundingSequence& seq) {
    check_sequence(sample, seq);
    const std::size_t n = sample.size();
    const double nn = static_cast<double>(n);
    const double floor = 1.0 / nn;
    LowerBoundResult out;
    out.kind = CurveKind::MHC;
    for (std::size_t k = 1; k <= n; ++k) {
        const double t = sample.order(k);
        if (t < floor || t >= 1.0) continue;
        const double v =
            (static_cast<double>(k) / nn - t - seq.beta * std::sqrt(t * (1.0 - t))) / (1.0 - t);
        if (v > out.lambda_hat) {
            out.lambda_hat = v;
            out.active_k = k;
            out.active_t = t;
        }
    }
    return out;
}

LowerBoundResult lower_bound_hc(const PValueSample& sample, double alpha) {
    return lower_bound_hc(sample, bounding_sequence(sample.size(), alpha));
}

CoverageResult coverage_check(CurveKind kind, std::size_t n, double alpha,
                              const BoundsModel& model, std::size_t replicates,
                              std::uint64_t seed) {
    if (kind != CurveKind::MBJ && kind != CurveKind::MHC) {
        throw DomainError("coverage_check: kind must be MBJ or MHC");
    }
    const MixtureModel mix = as_mixture(validated(model));
    const BoundingSequence seq = bounding_sequence(n, alpha);
    std::size_t misses = 0;
    const auto count = static_cast<std::int64_t>(replicates);
#pragma omp parallel num_threads(num_threads()) reduction(+ : misses)
    {
        std::vector<double> buf;
#pragma omp for schedule(static)
        for (std::int64_t r = 0; r < count; ++r) {
            Rng rng = make_stream(seed, static_cast<std::uint64_t>(r));
            draw_mixture_pvalues(n, mix, rng, buf);
            std::sort(buf.begin(), buf.end());
            const PValueSample s = PValueSample::from_sorted(buf);
            const double lam = kind == CurveKind::MBJ ? lower_bound_bj(s, seq).lambda_hat
                                                      : lower_bound_hc(s, seq).lambda_hat;
            misses += lam > model.lambda ? 1 : 0;
        }
    }
    CoverageResult out;
    out.replicates = replicates;
    out.rate = replicates == 0 ? 0.0 : static_cast<double>(misses) / static_cast<double>(replicates);
    out.se = binomial_se(out.rate, replicates);
    return out;
}

BoundsComparison compare_bounds_serial(std::size_t n, double alpha, const BoundsModel& model,
                                       std::size_t replicates, std::uint64_t seed) {
    const MixtureModel mix = as_mixture(validated(model));
    const BoundingSequence seq = bounding_sequence(n, alpha);
    ComparisonAcc acc;
    std::vector<double> buf;
    for (std::size_t r = 0; r < replicates; ++r) {
        acc.add(draw_pair(n, seq, mix, seed, r, buf), model.lambda);
    }
    return summarize(acc, model.lambda, replicates);
}

BoundsComparison compare_bounds(std::size_t n, double alpha, const BoundsModel& model,
                                std::size_t replicates, std::uint64_t seed) {
    const MixtureModel mix = as_mixture(validated(model));
    const BoundingSequence seq = bounding_sequence(n, alpha);
    // Per-replicate draws are stored and reduced in index order so the
    // floating-point sums match the serial path exactly.
    std::vector<PairDraw> draws(replicates);
    const auto count = static_cast<std::int64_t>(replicates);
#pragma omp parallel num_threads(num_threads())
    {
        std::vector<double> buf;
#pragma omp for schedule(static)
        for (std::int64_t r = 0; r < count; ++r) {
            draws[static_cast<std::size_t>(r)] =
                draw_pair(n, seq, mix, seed, static_cast<std::uint64_t>(r), buf);
        }
    }
    ComparisonAcc acc;
    for (const auto& d : draws) acc.add(d, model.lambda);
    return summarize(acc, model.lambda, replicates);
}

}  // namespace hicrit
