#include "hicrit/simulation.hpp"

#include <cmath>

#include "hicrit/error.hpp"
#include "hicrit/parallel.hpp"

namespace hicrit {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

bool null_replicate(const ExceedanceChecker& check, std::uint64_t seed, std::uint64_t r,
                    std::vector<double>& buf) {
    Rng rng = make_stream(seed, r);
    uniform_order_prefix(check.n(), check.k1(), rng, buf);
    return check(buf);
}

NullSimResult summarize(std::size_t hits, std::size_t replicates) {
    NullSimResult out;
    out.replicates = replicates;
    out.exceedances = hits;
    out.rate = replicates == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(replicates);
    out.se = binomial_se(out.rate, replicates);
    return out;
}

}  // namespace

Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL)));
}

void uniform_order_prefix(std::size_t n, std::size_t m, Rng& rng, std::vector<double>& out) {
    if (m > n) throw DomainError("uniform_order_prefix: m must not exceed n");
    out.resize(m);
    std::exponential_distribution<double> expo(1.0);
    double g = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        g += expo(rng);
        out[k] = g;
    }
    // Remaining n + 1 - m spacings sum to a Gamma(n + 1 - m) variate.
    std::gamma_distribution<double> tail(static_cast<double>(n + 1 - m), 1.0);
    const double total = g + tail(rng);
    for (double& v : out) v /= total;
}

double binomial_se(double rate, std::size_t replicates) {
    if (replicates == 0) return 0.0;
    return std::sqrt(rate * (1.0 - rate) / static_cast<double>(replicates));
}

NullSimResult simulate_null_serial(const StatisticSpec& spec, std::size_t n, double b,
                                   std::size_t replicates, std::uint64_t seed) {
    const ExceedanceChecker check(spec, n, b);
    std::vector<double> buf;
    std::size_t hits = 0;
    for (std::size_t r = 0; r < replicates; ++r) {
        hits += null_replicate(check, seed, r, buf) ? 1 : 0;
    }
    return summarize(hits, replicates);
}

NullSimResult simulate_null(const StatisticSpec& spec, std::size_t n, double b,
                            std::size_t replicates, std::uint64_t seed) {
    const ExceedanceChecker check(spec, n, b);
    std::size_t hits = 0;
    const auto count = static_cast<std::int64_t>(replicates);
#pragma omp parallel num_threads(num_threads()) reduction(+ : hits)
    {
        std::vector<double> buf;
#pragma omp for schedule(static)
        for (std::int64_t r = 0; r < count; ++r) {
            hits += null_replicate(check, seed, static_cast<std::uint64_t>(r), buf) ? 1 : 0;
        }
    }
    return summarize(hits, replicates);
}

}  // namespace hicrit
