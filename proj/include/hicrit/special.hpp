#pragma once

// Thin wrappers over Boost.Math plus the log-space helpers the tail
// formulas need.

#include <cstddef>
#include <cmath>
#include <vector>

namespace hicrit::special {

double normal_pdf(double z);
double normal_cdf(double z);
/// Upper tail 1 - Phi(z), accurate far into the tail.
double normal_sf(double z);
/// Inverse of normal_sf: returns z with 1 - Phi(z) = q. q in (0,1).
double normal_isf(double q);

/// log C(n,k) + k log c + (n-k) log(1-c), with log c and log(1-c) supplied.
double log_binomial_pmf(std::size_t n, std::size_t k, double log_c, double log1m_c);
double binomial_pmf(std::size_t n, std::size_t k, double c);

double beta_pdf(double x, double a, double b);
double beta_cdf(double x, double a, double b);
/// Upper quantile: x with P{Beta(a,b) > x} = q.
double beta_isf(double q, double a, double b);

/// Table of log(i!) for i = 0..n.
std::vector<double> log_factorials(std::size_t n);

/// Neumaier compensated accumulator.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace hicrit::special
