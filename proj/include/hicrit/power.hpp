#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hicrit/boundary.hpp"
#include "hicrit/curve_kind.hpp"
#include "hicrit/simulation.hpp"
#include "hicrit/statistics.hpp"

namespace hicrit {

enum class Sidedness { One, Two };
enum class CountMode { Binomial, Deterministic };

/// Mixture (1-p) N(0,1) + p N(delta, 1) with delta ~ N(mu, delta_sd^2).
struct MixtureModel {
    double p = 0.0;
    double mu = 0.0;
    double delta_sd = 0.0;
    Sidedness sided = Sidedness::One;
    CountMode count_mode = CountMode::Binomial;
};

enum class PowerMethod { Analytic, MonteCarlo };

struct PowerResult {
    double power = 0.0;
    PowerMethod method = PowerMethod::Analytic;
    /// Convex split index (analytic only).
    std::size_t j0 = 0;
    /// Standard error (Monte Carlo only).
    double se = 0.0;
    std::size_t replicates = 0;
};

/// d_k = (1-p) C(k/n) + p [1 - Phi(Phi^{-1}(1 - C(k/n)) - delta)], k0..k1.
/// Requires a one-sided model with fixed delta (delta_sd == 0).
std::vector<double> transform_boundary(CurveKind kind, std::size_t n, double b, std::size_t k0,
                                       std::size_t k1, const MixtureModel& model);

/// Smallest k >= k0 such that d has nonnegative second differences (within
/// 1e-12) at every j in [k, k1-1]. `d` holds k0..k1.
std::size_t convex_split_index(const std::vector<double>& d, std::size_t k0, std::size_t k1);

/// Suffix boundary given U_(j0) = x: e_i = (d_{j0+i} - x) / (1 - x) for
/// i = 1..k1-j0 over m = n - j0 uniforms, slopes m (e_{i+1} - e_i) with the
/// last slope repeated.
BoundaryVector suffix_boundary(const std::vector<double>& d, std::size_t k0, std::size_t j0,
                               std::size_t n, double x);

/// Hybrid exact/approximate power: exact prefix below the convex split,
/// tail approximation above it, integrated over the law of U_(j0).
PowerResult analytic_power(CurveKind kind, std::size_t n, double b, std::size_t k0,
                           std::size_t k1, const MixtureModel& model);

/// Draws n p-values from the mixture into `out` (unsorted).
void draw_mixture_pvalues(std::size_t n, const MixtureModel& model, Rng& rng,
                          std::vector<double>& out);

PowerResult mc_power(const StatisticSpec& spec, std::size_t n, double b, const MixtureModel& model,
                     std::size_t replicates, std::uint64_t seed);
/// Single-threaded reference; bit-identical to mc_power.
PowerResult mc_power_serial(const StatisticSpec& spec, std::size_t n, double b,
                            const MixtureModel& model, std::size_t replicates,
                            std::uint64_t seed);

}  // namespace hicrit
