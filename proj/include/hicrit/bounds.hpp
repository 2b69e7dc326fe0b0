#pragma once

#include <cstddef>
#include <cstdint>

#include "hicrit/curve_kind.hpp"
#include "hicrit/power.hpp"
#include "hicrit/statistics.hpp"

namespace hicrit {

/// Null quantiles of the bound-defining functionals at level alpha.
/// gamma = b_MBJ^2 / (2n); beta = b_MHC / sqrt(n).
struct BoundingSequence {
    std::size_t n = 0;
    double alpha = 0.0;
    double gamma = 0.0;
    double beta = 0.0;
};

BoundingSequence bounding_sequence(std::size_t n, double alpha);

struct LowerBoundResult {
    double lambda_hat = 0.0;
    /// Index k of the order statistic attaining the bound, 0 if lambda_hat = 0.
    std::size_t active_k = 0;
    /// p_(active_k), or 0.
    double active_t = 0.0;
    CurveKind kind = CurveKind::MBJ;
};

/// Sup of the set of lambda for which the MBJ-type functional exceeds gamma.
LowerBoundResult lower_bound_bj(const PValueSample& sample, const BoundingSequence& seq);
LowerBoundResult lower_bound_bj(const PValueSample& sample, double alpha);

/// max(0, sup_t [F_n(t) - t - beta sqrt(t(1-t))] / (1-t)) over t = p_(k) >= 1/n.
LowerBoundResult lower_bound_hc(const PValueSample& sample, const BoundingSequence& seq);
LowerBoundResult lower_bound_hc(const PValueSample& sample, double alpha);

/// Data model for the bound simulations: round(n*lambda) observations with
/// mean mu, the rest N(0,1); p-values one-sided unless `sided` says otherwise.
struct BoundsModel {
    double lambda = 0.0;
    double mu = 0.0;
    Sidedness sided = Sidedness::One;
    CountMode count_mode = CountMode::Deterministic;
};

struct CoverageResult {
    double rate = 0.0;
    double se = 0.0;
    std::size_t replicates = 0;
};

/// Fraction of replicates with lambda_hat > lambda. `kind` is MBJ or MHC.
CoverageResult coverage_check(CurveKind kind, std::size_t n, double alpha,
                              const BoundsModel& model, std::size_t replicates,
                              std::uint64_t seed);

struct BoundsComparison {
    double p_hc_greater = 0.0;
    double p_hc_less = 0.0;
    /// sqrt(mean (lambda - lambda_hat)^2) / lambda.
    double rel_l2_hc = 0.0;
    double rel_l2_bj = 0.0;
    std::size_t replicates = 0;
};

BoundsComparison compare_bounds(std::size_t n, double alpha, const BoundsModel& model,
                                std::size_t replicates, std::uint64_t seed);
/// Single-threaded reference for compare_bounds.
BoundsComparison compare_bounds_serial(std::size_t n, double alpha, const BoundsModel& model,
                                       std::size_t replicates, std::uint64_t seed);

}  // namespace hicrit
