#include "hicrit/power.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "hicrit/error.hpp"
#include "hicrit/exact.hpp"
#include "hicrit/parallel.hpp"
#include "hicrit/special.hpp"
#include "hicrit/tail_approx.hpp"

namespace hicrit {

namespace {

void require_analytic_model(const MixtureModel& model) {
    if (!(model.p >= 0.0 && model.p < 1.0)) throw DomainError("mixture: p must lie in [0,1)");
    if (model.sided != Sidedness::One || model.delta_sd != 0.0) {
        throw DomainError("analytic power needs a one-sided model with fixed delta");
    }
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

// Composite adaptive Simpson: `panels` equal panels, each refined to
// tol / panels.
double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                 int panels, int max_depth) {
    std::vector<double> parts(static_cast<std::size_t>(panels), 0.0);
    const double h = (b - a) / panels;
    parallel_for_dynamic(panels, [&](std::int64_t i) {
        const double lo = a + h * static_cast<double>(i);
        const double hi = i + 1 == panels ? b : lo + h;
        const double flo = f(lo);
        const double fhi = f(hi);
        const double fmid = f(0.5 * (lo + hi));
        const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        parts[static_cast<std::size_t>(i)] =
            adaptive_simpson(f, lo, hi, flo, fmid, fhi, whole, tol / panels, max_depth);
    });
    special::CompensatedSum sum;
    for (double v : parts) sum.add(v);
    return sum.value();
}

bool mc_replicate(const ExceedanceChecker& check, const MixtureModel& model, std::uint64_t seed,
                  std::uint64_t r, std::vector<double>& buf) {
    Rng rng = make_stream(seed, r);
    draw_mixture_pvalues(check.n(), model, rng, buf);
    const auto mid = buf.begin() + static_cast<std::ptrdiff_t>(check.k1());
    if (check.k1() < buf.size()) std::nth_element(buf.begin(), mid, buf.end());
    std::sort(buf.begin(), mid);
    return check(buf);
}

PowerResult mc_summary(std::size_t hits, std::size_t replicates) {
    PowerResult out;
    out.method = PowerMethod::MonteCarlo;
    out.replicates = replicates;
    out.power = replicates == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(replicates);
    out.se = binomial_se(out.power, replicates);
    return out;
}

void validate_mixture(const MixtureModel& model) {
    if (!(model.p >= 0.0 && model.p < 1.0)) throw DomainError("mixture: p must lie in [0,1)");
    if (!(model.delta_sd >= 0.0)) throw DomainError("mixture: delta_sd must be >= 0");
}

}  // namespace

std::vector<double> transform_boundary(CurveKind kind, std::size_t n, double b, std::size_t k0,
                                       std::size_t k1, const MixtureModel& model) {
    require_analytic_model(model);
    const BoundaryVector bv = boundary_vector(kind, n, b, k0, k1);
    std::vector<double> d(bv.size());
    const double p = model.p;
    for (std::size_t i = 0; i < bv.size(); ++i) {
        const double c = bv.c[i];
        if (!(c > 0.0)) {
            d[i] = 0.0;
            continue;
        }
        const double shifted = c >= 1.0 ? 1.0 : special::normal_sf(special::normal_isf(c) - model.mu);
        d[i] = (1.0 - p) * c + p * shifted;
    }
    return d;
}

std::size_t convex_split_index(const std::vector<double>& d, std::size_t k0, std::size_t k1) {
    if (d.size() != k1 - k0 + 1) throw DomainError("convex_split_index: length mismatch");
    // Walk down from the top; the split sits just above the last concave point.
    for (std::size_t j = k1 - 1; j > k0; --j) {
        const std::size_t i = j - k0;
        if (d[i + 1] - 2.0 * d[i] + d[i - 1] < -1e-12) return j + 1;
    }
    return k0;
}

BoundaryVector suffix_boundary(const std::vector<double>& d, std::size_t k0, std::size_t j0,
                               std::size_t n, double x) {
    const std::size_t k1 = k0 + d.size() - 1;
    if (!(j0 >= k0 && j0 < k1 && j0 < n)) throw DomainError("suffix_boundary: bad split index");
    const std::size_t m = n - j0;
    const std::size_t len = k1 - j0;
    BoundaryVector out;
    out.n = m;
    out.k0 = 1;
    out.k1 = len;
    out.c.resize(len);
    out.c_prime.resize(len);
    const double scale = 1.0 - x;
    for (std::size_t i = 1; i <= len; ++i) {
        out.c[i - 1] = (d[j0 + i - k0] - x) / scale;
    }
    const double mm = static_cast<double>(m);
    for (std::size_t i = 0; i + 1 < len; ++i) out.c_prime[i] = mm * (out.c[i + 1] - out.c[i]);
    out.c_prime[len - 1] = len >= 2 ? out.c_prime[len - 2] : 0.0;
    return out;
}

PowerResult analytic_power(CurveKind kind, std::size_t n, double b, std::size_t k0,
                           std::size_t k1, const MixtureModel& model) {
    require_analytic_model(model);
    if (kind == CurveKind::MHC) {
        throw DomainError("analytic power is not available for MHC");
    }
    if (!(k0 >= 1 && k0 <= k1 && k1 + 1 <= n)) {
        throw DomainError("analytic_power: need 1 <= k0 <= k1 <= n-1");
    }
    const std::vector<double> d = transform_boundary(kind, n, b, k0, k1, model);
    const std::size_t j0 = convex_split_index(d, k0, k1);
    if (j0 >= k1) throw NumericError("analytic_power: boundary has no convex tail");

    const double a_shape = static_cast<double>(j0);
    const double b_shape = static_cast<double>(n - j0 + 1);
    const double d_split = d[j0 - k0];

    auto conditional = [&](double x) {
        double g1 = 0.0;
        if (j0 > k0) {
            BandSpec band;
            band.lower.assign(j0 - 1, 0.0);
            band.upper.assign(j0 - 1, 1.0);
            for (std::size_t k = k0; k < j0; ++k) {
                band.lower[k - 1] = std::min(d[k - k0] / x, 1.0);
            }
            g1 = 1.0 - noncrossing_probability(band);
        }
        const double g2 = tail_pvalue_generic(n - j0, suffix_boundary(d, k0, j0, n, x)).p_value;
        return g1 + g2 - g1 * g2;
    };
    auto integrand = [&](double x) {
        if (x <= 0.0 || x >= 1.0) return 0.0;
        const double dens = special::beta_pdf(x, a_shape, b_shape);
        if (dens == 0.0) return 0.0;
        return dens * conditional(x);
    };

    PowerResult out;
    out.method = PowerMethod::Analytic;
    out.j0 = j0;
    double power = special::beta_cdf(d_split, a_shape, b_shape);
    const double upper = special::beta_isf(1e-7, a_shape, b_shape);
    if (upper > d_split) power += integrate(integrand, d_split, upper, 1e-4, 32, 30);
    out.power = std::clamp(power, 0.0, 1.0);
    return out;
}

void draw_mixture_pvalues(std::size_t n, const MixtureModel& model, Rng& rng,
                          std::vector<double>& out) {
    out.resize(n);
    std::size_t signals = 0;
    if (model.p > 0.0) {
        if (model.count_mode == CountMode::Deterministic) {
            signals = static_cast<std::size_t>(std::llround(static_cast<double>(n) * model.p));
        } else {
            std::binomial_distribution<std::size_t> count(n, model.p);
            signals = count(rng);
        }
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t i = 0; i < signals; ++i) {
        const double delta = model.mu + model.delta_sd * normal(rng);
        const double x = delta + normal(rng);
        out[i] = model.sided == Sidedness::Two ? std::erfc(std::abs(x) / std::sqrt(2.0))
                                               : special::normal_sf(x);
    }
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t i = signals; i < n; ++i) out[i] = unif(rng);
}

PowerResult mc_power_serial(const StatisticSpec& spec, std::size_t n, double b,
                            const MixtureModel& model, std::size_t replicates,
                            std::uint64_t seed) {
    validate_mixture(model);
    const ExceedanceChecker check(spec, n, b);
    std::vector<double> buf;
    std::size_t hits = 0;
    for (std::size_t r = 0; r < replicates; ++r) {
        hits += mc_replicate(check, model, seed, r, buf) ? 1 : 0;
    }
    return mc_summary(hits, replicates);
}

PowerResult mc_power(const StatisticSpec& spec, std::size_t n, double b, const MixtureModel& model,
                     std::size_t replicates, std::uint64_t seed) {
    validate_mixture(model);
    const ExceedanceChecker check(spec, n, b);
    std::size_t hits = 0;
    const auto count = static_cast<std::int64_t>(replicates);
#pragma omp parallel num_threads(num_threads()) reduction(+ : hits)
    {
        std::vector<double> buf;
#pragma omp for schedule(static)
        for (std::int64_t r = 0; r < count; ++r) {
            hits += mc_replicate(check, model, seed, static_cast<std::uint64_t>(r), buf) ? 1 : 0;
        }
    }
    return mc_summary(hits, replicates);
}

}  // namespace hicrit
