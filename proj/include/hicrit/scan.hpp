#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hicrit/curve_kind.hpp"
#include "hicrit/statistics.hpp"

namespace hicrit {

/// Half-open run of positions [begin, begin + length), 0-based.
struct Interval {
    std::size_t begin = 0;
    std::size_t length = 0;

    std::size_t end() const { return begin + length; }
    bool overlaps(const Interval& o) const { return begin < o.end() && o.begin < end(); }
};

struct TruthInterval {
    Interval interval;
    std::vector<std::size_t> carriers;
    double mu = 0.0;
};

/// N sequences of length T, stored row-major (sequence-major).
struct ScanDataset {
    std::size_t n_seq = 0;
    std::size_t length = 0;
    std::vector<double> y;
    std::vector<double> sigma;
    std::vector<TruthInterval> truth;

    const double* row(std::size_t i) const { return y.data() + i * length; }
};

enum class Centering { Mean, Median };

struct ScanConfig {
    std::size_t max_length = 20;
    double alpha = 0.05;
    CurveKind kind = CurveKind::MBJ;
    /// 0 picks 4 for HC and 1 otherwise.
    std::size_t k0 = 0;
    /// 0 picks floor(N/2).
    std::size_t k1 = 0;
    Centering centering = Centering::Mean;
};

struct Detection {
    Interval interval;
    double value = 0.0;
};

struct ScanResult {
    std::vector<Detection> detections;
    /// Statistic threshold at level alpha / (T L).
    double threshold = 0.0;
    std::size_t candidates = 0;
    /// Candidates at or above the threshold before overlap pruning.
    std::size_t exceedances = 0;
};

constexpr std::size_t kMaxScanCandidates = 100'000'000;

/// Checks the dataset shape and scales. Throws InputError.
void validate(const ScanDataset& data);

/// Per-sequence centers under the chosen rule.
std::vector<double> sequence_centers(const ScanDataset& data, Centering centering);

/// Two-sided p-values of the centered interval means, one per sequence.
PValueSample interval_pvalues(const ScanDataset& data, const Interval& interval,
                              Centering centering = Centering::Mean);

/// Resolved (k0, k1) for a scan over N sequences.
IndexRange scan_range(const ScanConfig& config, std::size_t n_seq);

/// Per-interval threshold: threshold(kind, N, alpha / (T L), k0, k1).
double scan_threshold(const ScanConfig& config, std::size_t n_seq, std::size_t length);

/// Number of (begin, length) pairs with 1 <= length <= L inside [0, T).
std::size_t candidate_count(std::size_t length, std::size_t max_length);

ScanResult scan(const ScanDataset& data, const ScanConfig& config);
/// Single-threaded reference for scan; identical output.
ScanResult scan_serial(const ScanDataset& data, const ScanConfig& config);

struct SynthConfig {
    std::size_t n_seq = 674;
    std::size_t length = 40929;
    std::size_t max_length = 20;
    double p = 0.0;
    double mu = 0.0;
    std::uint64_t seed = 0;
    /// (interval length, count) pairs.
    std::vector<std::pair<std::size_t, std::size_t>> layout{{3, 75}, {4, 50}, {7, 25}, {10, 5}};
    /// Minimum number of signal-free positions between truth intervals.
    /// 0 picks max_length.
    std::size_t gap = 0;
};

/// Places the layout at random with the required gaps and draws carrier sets.
/// Carrier counts are Binomial(N, p) conditioned on at least one carrier
/// (none when p = 0).
std::vector<TruthInterval> synthesize_truth(const SynthConfig& config, std::uint64_t stream);

/// Unit-variance Gaussian noise plus the shifts of synthesize_truth. Each
/// stream is an independent dataset for the same seed.
ScanDataset synthesize(const SynthConfig& config, std::uint64_t stream = 0);

enum class ScanPowerMode { Full, Windowed };

struct ScanPowerConfig {
    SynthConfig synth;
    /// Statistics compared on shared data; each config's own alpha and k0 apply.
    std::vector<ScanConfig> scans;
    std::size_t replicates = 0;
    std::uint64_t seed = 0;
    ScanPowerMode mode = ScanPowerMode::Windowed;
};

struct ScanPowerRow {
    CurveKind kind = CurveKind::MBJ;
    double threshold = 0.0;
    double power = 0.0;
    double se = 0.0;
    std::size_t detected = 0;
    std::size_t total = 0;
};

/// Fraction of truth intervals overlapped by a detection. Full mode runs the
/// whole scan; windowed mode simulates only the positions whose candidates
/// can touch a truth interval, with the centering drawn from its exact law.
std::vector<ScanPowerRow> scan_power(const ScanPowerConfig& config);

}  // namespace hicrit
