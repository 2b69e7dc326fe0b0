#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hicrit/curve_kind.hpp"

namespace hicrit {

/// Nondecreasing p-values in [0,1], n >= 1.
class PValueSample {
public:
    /// Validates and stable-sorts. Throws InputError on NaN or values
    /// outside [0,1], or on an empty input.
    static PValueSample from_values(std::vector<double> values);
    /// Validates order instead of sorting.
    static PValueSample from_sorted(std::vector<double> sorted);

    std::size_t size() const { return p_.size(); }
    /// p_(k), 1-based.
    double order(std::size_t k) const { return p_[k - 1]; }
    std::span<const double> sorted() const { return p_; }

private:
    explicit PValueSample(std::vector<double> p) : p_(std::move(p)) {}
    std::vector<double> p_;
};

struct StatisticSpec {
    CurveKind kind = CurveKind::HC;
    std::size_t k0 = 1;
    /// 0 selects floor(n/2) (at least k0) once bound to a sample.
    std::size_t k1 = 0;
};

struct IndexRange {
    std::size_t k0;
    std::size_t k1;
};

/// Resolves the default k1 and checks 1 <= k0 <= k1 <= n.
IndexRange resolve_range(const StatisticSpec& spec, std::size_t n);

struct StatisticResult {
    double value = 0.0;
    std::size_t argmax_k = 0;
    /// Term values for k0..k1, filled only on request; excluded terms are -inf.
    std::vector<double> per_k;
};

/// Single term of the statistic at index k (1-based) for p = p_(k).
/// Returns -inf when the term is excluded (MHC below 1/n, BJ above k/n).
double statistic_term(CurveKind kind, std::size_t n, std::size_t k, double p);

StatisticResult evaluate(const StatisticSpec& spec, const PValueSample& sample,
                         bool keep_terms = false);

/// Precomputed crossing test: p_(k) <= C(k/n, b/sqrt(n)) for some admissible
/// k in [k0, k1]. Equivalent to evaluate(...).value >= b away from ties.
class ExceedanceChecker {
public:
    ExceedanceChecker(CurveKind kind, std::size_t n, double b, std::size_t k0, std::size_t k1);
    ExceedanceChecker(const StatisticSpec& spec, std::size_t n, double b);

    /// sorted must hold at least k1 ascending values.
    bool operator()(std::span<const double> sorted) const;

    CurveKind kind() const { return kind_; }
    std::size_t n() const { return n_; }
    std::size_t k0() const { return k0_; }
    std::size_t k1() const { return k1_; }
    double b() const { return b_; }
    /// Boundary for k0..k1; inactive JW indices hold -1.
    const std::vector<double>& boundary() const { return c_; }
    /// Smallest admissible p-value (1/n for MHC, else 0).
    double floor() const { return floor_; }

private:
    CurveKind kind_;
    std::size_t n_;
    std::size_t k0_;
    std::size_t k1_;
    double b_;
    double floor_;
    std::vector<double> c_;
};

bool exceeds(const StatisticSpec& spec, const PValueSample& sample, double b);

}  // namespace hicrit
