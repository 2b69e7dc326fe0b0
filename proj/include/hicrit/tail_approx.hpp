#pragma once

// Analytic null tail probabilities P{statistic >= b}. Each index k in
// [k0, k1] contributes the probability that U_(k) is the last order
// statistic below the boundary:
//
//   term_k = [1 - (n-k+1) C'(k/n) / (n (1 - C(k/n)))] * Bin(n, k, C(k/n))
//
// with the bracket clamped to [0,1] and the binomial mass evaluated in log
// space. MHC drops indices with C(k/n) <= 1/n and replaces the binomial
// mass by Bin(n,k,C) - Bin(n,k,1/n) * nC.

#include <cstddef>
#include <vector>

#include "hicrit/boundary.hpp"
#include "hicrit/curve_kind.hpp"

namespace hicrit {

struct TailApproxResult {
    /// min(1, sum of terms).
    double p_value = 0.0;
    double raw_sum = 0.0;
    /// Per-index contributions for k0..k1, all >= 0.
    std::vector<double> terms;
    bool clipped = false;
    /// Numerical convexity of the boundary over the index range.
    bool boundary_convex = true;
};

struct OUApproxResult {
    double p_value = 0.0;
    double t0 = 0.0;
};

/// Requires b > 0 and 1 <= k0 <= k1 <= n-1.
TailApproxResult tail_pvalue(CurveKind kind, std::size_t n, double b, std::size_t k0,
                             std::size_t k1);

/// Same summation over a caller-supplied boundary. Entries <= 0 contribute
/// nothing; positive entries must be nondecreasing and below 1, slopes >= 0.
TailApproxResult tail_pvalue_generic(std::size_t n, const BoundaryVector& boundary);

/// Inverts tail_pvalue in b on its decreasing branch.
double threshold(CurveKind kind, std::size_t n, double alpha, std::size_t k0, std::size_t k1);

/// Ornstein-Uhlenbeck approximation T0 b phi(b) over [tau0, tau1].
OUApproxResult ou_pvalue(double b, double tau0, double tau1);

/// Classical Darling-Erdos normalisation
///   x = a_n b - 2 log log n - 0.5 log log log n + 0.5 log(4 pi),
///   a_n = sqrt(2 log log n),  p = 1 - exp(-exp(-x)).
/// Requires n >= 3 so that log log log n is defined.
double darling_erdos_pvalue(double b, std::size_t n);

namespace detail {
/// Bin(n, k, c) computed from log c.
double binomial_factor(std::size_t n, std::size_t k, double c, double log_c);
/// Beta(k, n+1-k) density at c times c/k; identical to binomial_factor.
double beta_density_factor(std::size_t n, std::size_t k, double c);
/// Bracket of the summed form, clamped to [0,1].
double theorem_bracket(std::size_t n, std::size_t k, double c, double c_prime);
/// Bracket of the single-term heuristic: 1 - (1 - k/n) c' / (1 - c), clamped.
double heuristic_bracket(std::size_t n, std::size_t k, double c, double c_prime);
}  // namespace detail

}  // namespace hicrit
