#pragma once

// Exact finite-n band probabilities for uniform order statistics by Noe's
// recursion over the partition of [0,1] induced by all band edges.

#include <cstddef>
#include <vector>

#include "hicrit/boundary.hpp"

namespace hicrit {

inline constexpr std::size_t kMaxExactN = 5000;

/// lower[k-1] < U_(k) <= upper[k-1]. Both nondecreasing, lower <= upper,
/// entries in [0,1].
struct BandSpec {
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t n() const { return lower.size(); }
};

/// P{lower_k < U_(k) <= upper_k for all k}. O(n^3).
/// Throws DomainError on a malformed band, SizeError when n > kMaxExactN.
double noncrossing_probability(const BandSpec& band);

/// P{U_(k) <= c_k for some k in [k0, k1]} for n uniforms.
double crossing_probability(std::size_t n, const BoundaryVector& boundary);

}  // namespace hicrit
