#pragma once

// Rejection-boundary curves. For each statistic the event
// "statistic >= b" is equivalent to p_(k) <= C(k/n, b/sqrt(n)) for some k
// in the index range, where C(x, xi) < x solves the per-kind defining
// equation below.
//
//   HC/MHC  (x - c) / sqrt(c (1 - c))                 = xi
//   BJ      x log(x/c) + (1-x) log((1-x)/(1-c))       = xi^2 / 2
//   MBJ     x log(x/c) - (x - c)                      = xi^2 / 2
//   JW      sqrt(x) - sqrt(c)                         = xi   (c = 0 below)

#include <cstddef>
#include <vector>

#include "hicrit/curve_kind.hpp"

namespace hicrit {

struct BoundaryPoint {
    double x = 0.0;
    double xi = 0.0;
    double c = 0.0;
    /// log(c); stays finite when c itself underflows.
    double log_c = 0.0;
    double c_prime = 0.0;
};

/// Boundary c_k = C(k/n, b/sqrt(n)) and slopes c'_k for k in [k0, k1].
/// Vectors are indexed from 0, entry i belongs to k = k0 + i.
struct BoundaryVector {
    std::size_t n = 0;
    double b = 0.0;
    std::size_t k0 = 1;
    std::size_t k1 = 1;
    std::vector<double> c;
    std::vector<double> log_c;
    std::vector<double> c_prime;

    std::size_t size() const { return c.size(); }
    double at_k(std::size_t k) const { return c[k - k0]; }
};

/// Solves for C(x, xi). Throws DomainError unless 0 < x <= 1 and xi >= 0.
double curve_value(CurveKind kind, double x, double xi);

/// Value, log-value and slope in one pass.
BoundaryPoint curve_point(CurveKind kind, double x, double xi);

/// C'(x, xi) given c = C(x, xi). Throws DomainError when (x, c) does not
/// satisfy the defining equation to within solver tolerance.
double curve_derivative(CurveKind kind, double x, double xi, double c);

/// Left-hand side of the defining equation and its right-hand target,
/// exposed for back-substitution checks.
double curve_defining_function(CurveKind kind, double x, double c);
double curve_target(CurveKind kind, double xi);

/// Requires 1 <= k0 <= k1 <= n and b > 0.
BoundaryVector boundary_vector(CurveKind kind, std::size_t n, double b, std::size_t k0,
                               std::size_t k1);

/// True when second differences of c over k are all >= -tol.
bool is_convex(const BoundaryVector& boundary, double tol = 1e-12);

}  // namespace hicrit
