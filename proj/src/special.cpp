#include "hicrit/special.hpp"

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "hicrit/error.hpp"

namespace hicrit::special {

namespace {
const boost::math::normal_distribution<double> kStdNormal{0.0, 1.0};
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
}  // namespace

double normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double normal_isf(double q) {
    if (!(q > 0.0 && q < 1.0)) {
        throw DomainError("normal_isf: q must lie in (0,1)");
    }
    return boost::math::quantile(boost::math::complement(kStdNormal, q));
}

double log_binomial_pmf(std::size_t n, std::size_t k, double log_c, double log1m_c) {
    const double nn = static_cast<double>(n);
    const double kk = static_cast<double>(k);
    const double log_choose =
        std::lgamma(nn + 1.0) - std::lgamma(kk + 1.0) - std::lgamma(nn - kk + 1.0);
    // 0 * log(0) terms are zero by convention.
    const double a = k == 0 ? 0.0 : kk * log_c;
    const double b = k == n ? 0.0 : (nn - kk) * log1m_c;
    return log_choose + a + b;
}

double binomial_pmf(std::size_t n, std::size_t k, double c) {
    if (c <= 0.0) return k == 0 ? 1.0 : 0.0;
    if (c >= 1.0) return k == n ? 1.0 : 0.0;
    return std::exp(log_binomial_pmf(n, k, std::log(c), std::log1p(-c)));
}

double beta_pdf(double x, double a, double b) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return boost::math::pdf(boost::math::beta_distribution<double>(a, b), x);
}

double beta_cdf(double x, double a, double b) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return boost::math::ibeta(a, b, x);
}

double beta_isf(double q, double a, double b) {
    return boost::math::quantile(
        boost::math::complement(boost::math::beta_distribution<double>(a, b), q));
}

std::vector<double> log_factorials(std::size_t n) {
    std::vector<double> out(n + 1, 0.0);
    for (std::size_t i = 2; i <= n; ++i) {
        out[i] = std::lgamma(static_cast<double>(i) + 1.0);
    }
    return out;
}

}  // namespace hicrit::special
