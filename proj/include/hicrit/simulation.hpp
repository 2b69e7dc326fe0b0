#pragma once

// Seeded Monte Carlo plumbing shared by the power, bounds and scan
// harnesses. Every replicate owns a generator derived from (seed, index),
// so results do not depend on scheduling or thread count.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "hicrit/statistics.hpp"

namespace hicrit {

using Rng = std::mt19937_64;

/// Generator for replicate `stream` of a run seeded with `seed`.
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

/// Fills `out` with U_(1..m) of n iid uniforms using exponential spacings:
/// U_(k) = G_k / G_{n+1}, with the tail sum drawn as one Gamma variate.
void uniform_order_prefix(std::size_t n, std::size_t m, Rng& rng, std::vector<double>& out);

struct NullSimResult {
    double rate = 0.0;
    double se = 0.0;
    std::size_t replicates = 0;
    std::size_t exceedances = 0;
};

/// Empirical P0{statistic >= b} under the global null.
NullSimResult simulate_null(const StatisticSpec& spec, std::size_t n, double b,
                            std::size_t replicates, std::uint64_t seed);
/// Single-threaded reference for simulate_null; identical output.
NullSimResult simulate_null_serial(const StatisticSpec& spec, std::size_t n, double b,
                                   std::size_t replicates, std::uint64_t seed);

/// Binomial standard error sqrt(p(1-p)/r).
double binomial_se(double rate, std::size_t replicates);

}  // namespace hicrit
