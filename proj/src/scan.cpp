#include "hicrit/scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "hicrit/error.hpp"
#include "hicrit/parallel.hpp"
#include "hicrit/simulation.hpp"
#include "hicrit/special.hpp"
#include "hicrit/tail_approx.hpp"

namespace hicrit {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// |z| for lengths 1..lmax starting at column `pos` of a position-major block
// (cells[t * n + i]); out is lmax blocks of n values.
void abs_z(const double* cells, std::size_t n, std::size_t pos, std::size_t lmax,
           const double* center, const double* inv_sigma, const std::vector<double>& inv_sqrt,
           std::vector<double>& sums, double* out) {
    sums.assign(n, 0.0);
    for (std::size_t l = 1; l <= lmax; ++l) {
        const double* col = cells + (pos + l - 1) * n;
        const double len = static_cast<double>(l);
        const double scale = inv_sqrt[l];
        double* dst = out + (l - 1) * n;
        for (std::size_t i = 0; i < n; ++i) {
            sums[i] += col[i];
            dst[i] = std::abs(sums[i] - len * center[i]) * inv_sigma[i] * scale;
        }
    }
}

// Copies columns [lo, hi) of the row-major matrix into position-major order.
void transpose_block(const ScanDataset& data, std::size_t lo, std::size_t hi,
                     std::vector<double>& block) {
    const std::size_t n = data.n_seq;
    block.resize((hi - lo) * n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = data.row(i);
        for (std::size_t t = lo; t < hi; ++t) block[(t - lo) * n + i] = row[t];
    }
}

// Crossing test phrased on |z|: p_(k) <= c_k iff at least k values have
// |z| >= Phi^{-1}(1 - c_k/2). The |z| pass is a conservative prefilter; a
// positive answer is confirmed on the actual p-values.
class IntervalTester {
public:
    IntervalTester(const ScanConfig& config, std::size_t n_seq, double b)
        : check_(config.kind, n_seq, b, scan_range(config, n_seq).k0,
                 scan_range(config, n_seq).k1),
          spec_{config.kind, check_.k0(), check_.k1()} {
        const auto& c = check_.boundary();
        zc_.resize(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (!(c[i] > 0.0)) {
                zc_[i] = std::numeric_limits<double>::infinity();
            } else if (c[i] >= 1.0) {
                zc_[i] = 0.0;
            } else {
                zc_[i] = special::normal_isf(0.5 * c[i]) * (1.0 - 1e-9);
            }
        }
        // Make the thresholds nonincreasing so a binary search applies; taking
        // the running minimum from the right only loosens the prefilter.
        for (std::size_t i = zc_.size() - 1; i-- > 0;) zc_[i] = std::max(zc_[i], zc_[i + 1]);
        build_lookup();
        z_floor_ = check_.floor() > 0.0
                       ? special::normal_isf(0.5 * check_.floor()) * (1.0 + 1e-9) + 1e-9
                       : std::numeric_limits<double>::infinity();
    }

    bool maybe(const double* a, std::size_t n, std::vector<double>& keep,
               std::vector<std::uint32_t>& hist) const {
        // Branch-free compaction of the values that clear the lowest threshold.
        keep.resize(n);
        std::size_t kept = 0;
        for (std::size_t i = 0; i < n; ++i) {
            keep[kept] = a[i];
            kept += a[i] >= lut_lo_ ? 1 : 0;
        }
        if (kept < check_.k0()) return false;
        const std::size_t m = zc_.size();
        hist.assign(m, 0);
        std::size_t below_floor = 0;
        for (std::size_t i = 0; i < kept; ++i) {
            const double v = keep[i];
            ++hist[slot(v)];
            below_floor += v > z_floor_ ? 1 : 0;
        }
        std::size_t cum = 0;
        for (std::size_t j = 0; j < m; ++j) {
            cum += hist[j];
            const std::size_t k = check_.k0() + j;
            if (cum >= k && below_floor < k) return true;
        }
        return false;
    }

    bool confirm(const double* a, std::size_t n, std::vector<double>& p) const {
        to_pvalues(a, n, p);
        const auto mid = p.begin() + static_cast<std::ptrdiff_t>(check_.k1());
        if (check_.k1() < n) std::nth_element(p.begin(), mid, p.end());
        std::sort(p.begin(), mid);
        return check_(p);
    }

    double value(const double* a, std::size_t n, std::vector<double>& p) const {
        to_pvalues(a, n, p);
        return evaluate(spec_, PValueSample::from_values(p)).value;
    }

    CurveKind kind() const { return check_.kind(); }
    double threshold() const { return check_.b(); }

private:
    static void to_pvalues(const double* a, std::size_t n, std::vector<double>& p) {
        p.resize(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = std::erfc(a[i] * kInvSqrt2);
    }

    // First index j with zc_[j] <= v, for v >= zc_.back().
    std::size_t slot(double v) const {
        const double t = std::min((v - lut_lo_) * lut_scale_, lut_top_);
        std::size_t j = lut_[static_cast<std::size_t>(t) + 1];
        while (j > 0 && zc_[j - 1] <= v) --j;
        return j;
    }

    // lut_[i + 1] is the slot at the left edge of bin i, an upper bound
    // inside the bin. lut_[0] is unused padding.
    void build_lookup() {
        constexpr std::size_t kBins = 4096;
        lut_lo_ = zc_.back();
        double hi = lut_lo_;
        for (double z : zc_) {
            if (std::isfinite(z)) hi = std::max(hi, z);
        }
        hi += 1e-9;
        lut_scale_ = static_cast<double>(kBins) / (hi - lut_lo_);
        lut_top_ = static_cast<double>(kBins);
        lut_.resize(kBins + 2);
        lut_[0] = zc_.size();
        for (std::size_t i = 0; i <= kBins; ++i) {
            const double v = lut_lo_ + static_cast<double>(i) / lut_scale_;
            const auto it = std::partition_point(zc_.begin(), zc_.end(),
                                                 [v](double z) { return z > v; });
            lut_[i + 1] = static_cast<std::size_t>(it - zc_.begin());
        }
    }

    ExceedanceChecker check_;
    StatisticSpec spec_;
    std::vector<double> zc_;
    std::vector<std::size_t> lut_;
    double lut_lo_ = 0.0;
    double lut_scale_ = 1.0;
    double lut_top_ = 0.0;
    double z_floor_;
};

std::vector<double> inv_sqrt_table(std::size_t lmax) {
    std::vector<double> t(lmax + 1, 0.0);
    for (std::size_t l = 1; l <= lmax; ++l) t[l] = 1.0 / std::sqrt(static_cast<double>(l));
    return t;
}

std::vector<double> inverse(const std::vector<double>& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = 1.0 / v[i];
    return out;
}

void check_config(const ScanConfig& config) {
    if (config.max_length < 1) throw InputError("scan: max length must be >= 1");
    if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
        throw InputError("scan: alpha must lie in (0,1)");
    }
}

struct BeginHits {
    std::vector<Detection> hits;
};

struct Scratch {
    std::vector<double> block;
    std::vector<double> sums;
    std::vector<double> z;
    std::vector<double> p;
    std::vector<double> keep;
    std::vector<std::uint32_t> hist;
};

// Tests every length at `pos`; `block` holds columns from `block_lo` on.
void scan_begin(const ScanDataset& data, const ScanConfig& config, const IntervalTester& tester,
                const std::vector<double>& centers, const std::vector<double>& inv_sigma,
                const std::vector<double>& inv_sqrt, std::size_t pos, std::size_t block_lo,
                Scratch& s, std::vector<Detection>& out) {
    const std::size_t n = data.n_seq;
    const std::size_t lmax = std::min(config.max_length, data.length - pos);
    s.z.resize(lmax * n);
    abs_z(s.block.data(), n, pos - block_lo, lmax, centers.data(), inv_sigma.data(), inv_sqrt,
          s.sums, s.z.data());
    for (std::size_t l = 1; l <= lmax; ++l) {
        const double* a = s.z.data() + (l - 1) * n;
        if (!tester.maybe(a, n, s.keep, s.hist)) continue;
        if (!tester.confirm(a, n, s.p)) continue;
        out.push_back({Interval{pos, l}, tester.value(a, n, s.p)});
    }
}

ScanResult finish_scan(std::vector<std::vector<Detection>> per_begin, double b,
                       std::size_t candidates) {
    ScanResult out;
    out.threshold = b;
    out.candidates = candidates;
    std::vector<Detection> hits;
    for (auto& v : per_begin) hits.insert(hits.end(), v.begin(), v.end());
    out.exceedances = hits.size();
    std::stable_sort(hits.begin(), hits.end(),
                     [](const Detection& x, const Detection& y) { return x.value > y.value; });
    for (const auto& h : hits) {
        const bool clash = std::any_of(out.detections.begin(), out.detections.end(),
                                       [&](const Detection& d) { return d.interval.overlaps(h.interval); });
        if (!clash) out.detections.push_back(h);
    }
    std::sort(out.detections.begin(), out.detections.end(),
              [](const Detection& x, const Detection& y) {
                  return x.interval.begin < y.interval.begin;
              });
    return out;
}

ScanResult run_scan(const ScanDataset& data, const ScanConfig& config, bool parallel) {
    validate(data);
    check_config(config);
    const std::size_t candidates = candidate_count(data.length, config.max_length);
    const double b = scan_threshold(config, data.n_seq, data.length);
    const IntervalTester tester(config, data.n_seq, b);
    const std::vector<double> centers = sequence_centers(data, config.centering);
    const std::vector<double> inv_sigma = inverse(data.sigma);
    const std::vector<double> inv_sqrt = inv_sqrt_table(config.max_length);

    std::vector<std::vector<Detection>> per_begin(data.length);
    constexpr std::int64_t kChunk = 64;
    const auto chunks = static_cast<std::int64_t>((data.length + kChunk - 1) / kChunk);
    parallel_for_dynamic(
        chunks,
        [&](std::int64_t c) {
            Scratch s;
            const auto lo = static_cast<std::size_t>(c * kChunk);
            const std::size_t hi = std::min(data.length, lo + kChunk);
            transpose_block(data, lo, std::min(data.length, hi + config.max_length - 1), s.block);
            for (std::size_t pos = lo; pos < hi; ++pos) {
                scan_begin(data, config, tester, centers, inv_sigma, inv_sqrt, pos, lo, s,
                           per_begin[pos]);
            }
        },
        parallel);
    return finish_scan(std::move(per_begin), b, candidates);
}

std::size_t draw_carrier_count(std::size_t n, double p, Rng& rng) {
    if (p <= 0.0) return 0;
    std::binomial_distribution<std::size_t> count(n, p);
    for (int attempt = 0; attempt < 10'000'000; ++attempt) {
        const std::size_t c = count(rng);
        if (c > 0) return c;
    }
    throw NumericError("synthesize: carrier probability too small to condition on a carrier");
}

std::size_t resolved_gap(const SynthConfig& config) {
    return config.gap == 0 ? config.max_length : config.gap;
}

// Generates one truth window: n values per position over [w0, w1) with the
// interval's shift applied, and the per-sequence centers implied by the
// unseen remainder of each sequence.
struct Window {
    std::size_t w0 = 0;
    std::size_t w1 = 0;
    std::vector<double> cells;
    std::vector<double> centers;
};

Window draw_window(const SynthConfig& synth, const TruthInterval& t,
                   const std::vector<double>& shift_cells, Rng& rng) {
    const std::size_t L = synth.max_length;
    const std::size_t T = synth.length;
    const std::size_t n = synth.n_seq;
    Window w;
    w.w0 = t.interval.begin >= L - 1 ? t.interval.begin - (L - 1) : 0;
    w.w1 = std::min(T, t.interval.end() + L - 1);
    const std::size_t width = w.w1 - w.w0;
    w.cells.resize(n * width);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& v : w.cells) v = normal(rng);
    for (std::size_t s = t.interval.begin; s < t.interval.end(); ++s) {
        double* col = w.cells.data() + (s - w.w0) * n;
        for (std::size_t c : t.carriers) col[c] += t.mu;
    }
    std::vector<double> own(n, 0.0);
    for (std::size_t s = 0; s < width; ++s) {
        const double* col = w.cells.data() + s * n;
        for (std::size_t i = 0; i < n; ++i) own[i] += col[i];
    }
    std::vector<char> carrier(n, 0);
    for (std::size_t c : t.carriers) carrier[c] = 1;
    const double rest_sd = std::sqrt(static_cast<double>(T - width));
    const auto len = static_cast<double>(t.interval.length);
    w.centers.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double elsewhere = shift_cells[i] - (carrier[i] ? len : 0.0);
        const double rest = rest_sd * normal(rng) + t.mu * elsewhere;
        w.centers[i] = (own[i] + rest) / static_cast<double>(T);
    }
    return w;
}

std::vector<std::size_t> windowed_replicate(const ScanPowerConfig& config,
                                            const std::vector<IntervalTester>& testers,
                                            const std::vector<double>& inv_sqrt,
                                            std::uint64_t r) {
    const SynthConfig& synth = config.synth;
    const std::size_t n = synth.n_seq;
    const std::vector<TruthInterval> truth = synthesize_truth(synth, r);
    std::vector<double> shift_cells(n, 0.0);
    for (const auto& t : truth) {
        for (std::size_t c : t.carriers) shift_cells[c] += static_cast<double>(t.interval.length);
    }
    Rng rng = make_stream(config.seed, 2 * r + 1);
    const std::vector<double> ones(n, 1.0);
    std::vector<std::size_t> detected(testers.size(), 0);
    Scratch s;
    std::vector<char> hit(testers.size());
    for (const auto& t : truth) {
        const Window w = draw_window(synth, t, shift_cells, rng);
        std::fill(hit.begin(), hit.end(), 0);
        std::size_t remaining = testers.size();
        for (std::size_t pos = w.w0; pos < t.interval.end() && remaining > 0; ++pos) {
            const std::size_t lmax = std::min(synth.max_length, w.w1 - pos);
            const std::size_t lmin = pos < t.interval.begin ? t.interval.begin - pos + 1 : 1;
            if (lmin > lmax) continue;
            s.z.resize(lmax * n);
            abs_z(w.cells.data(), n, pos - w.w0, lmax, w.centers.data(), ones.data(), inv_sqrt,
                  s.sums, s.z.data());
            for (std::size_t l = lmin; l <= lmax && remaining > 0; ++l) {
                const double* a = s.z.data() + (l - 1) * n;
                for (std::size_t k = 0; k < testers.size(); ++k) {
                    if (hit[k]) continue;
                    if (testers[k].maybe(a, n, s.keep, s.hist) && testers[k].confirm(a, n, s.p)) {
                        hit[k] = 1;
                        --remaining;
                    }
                }
            }
        }
        for (std::size_t s = 0; s < testers.size(); ++s) detected[s] += hit[s] ? 1 : 0;
    }
    return detected;
}

std::vector<std::size_t> full_replicate(const ScanPowerConfig& config, std::uint64_t r) {
    const ScanDataset data = synthesize(config.synth, r);
    std::vector<std::size_t> detected(config.scans.size(), 0);
    for (std::size_t s = 0; s < config.scans.size(); ++s) {
        const ScanResult res = scan_serial(data, config.scans[s]);
        for (const auto& t : data.truth) {
            const bool found = std::any_of(res.detections.begin(), res.detections.end(),
                                           [&](const Detection& d) { return d.interval.overlaps(t.interval); });
            detected[s] += found ? 1 : 0;
        }
    }
    return detected;
}

}  // namespace

void validate(const ScanDataset& data) {
    if (data.n_seq < 2 || data.length < 1) throw InputError("scan: need N >= 2 and T >= 1");
    if (data.y.size() != data.n_seq * data.length) throw InputError("scan: matrix size mismatch");
    if (data.sigma.size() != data.n_seq) throw InputError("scan: sigma length must equal N");
    for (double s : data.sigma) {
        if (!(s > 0.0) || !std::isfinite(s)) throw InputError("scan: sigma must be positive");
    }
    for (double v : data.y) {
        if (!std::isfinite(v)) throw InputError("scan: non-finite observation");
    }
}

std::vector<double> sequence_centers(const ScanDataset& data, Centering centering) {
    std::vector<double> out(data.n_seq);
    std::vector<double> buf;
    for (std::size_t i = 0; i < data.n_seq; ++i) {
        const double* row = data.row(i);
        if (centering == Centering::Mean) {
            special::CompensatedSum s;
            for (std::size_t t = 0; t < data.length; ++t) s.add(row[t]);
            out[i] = s.value() / static_cast<double>(data.length);
        } else {
            buf.assign(row, row + data.length);
            const std::size_t mid = buf.size() / 2;
            std::nth_element(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(mid), buf.end());
            double med = buf[mid];
            if (buf.size() % 2 == 0) {
                med = 0.5 * (med + *std::max_element(buf.begin(),
                                                     buf.begin() + static_cast<std::ptrdiff_t>(mid)));
            }
            out[i] = med;
        }
    }
    return out;
}

PValueSample interval_pvalues(const ScanDataset& data, const Interval& interval,
                              Centering centering) {
    validate(data);
    if (interval.length < 1 || interval.end() > data.length) {
        throw InputError("interval_pvalues: interval outside [0, T)");
    }
    const std::vector<double> centers = sequence_centers(data, centering);
    const std::vector<double> inv_sigma = inverse(data.sigma);
    std::vector<double> block;
    std::vector<double> sums;
    transpose_block(data, interval.begin, interval.end(), block);
    std::vector<double> z(interval.length * data.n_seq);
    abs_z(block.data(), data.n_seq, 0, interval.length, centers.data(), inv_sigma.data(),
          inv_sqrt_table(interval.length), sums, z.data());
    std::vector<double> p(data.n_seq);
    const double* a = z.data() + (interval.length - 1) * data.n_seq;
    for (std::size_t i = 0; i < data.n_seq; ++i) p[i] = std::erfc(a[i] * kInvSqrt2);
    return PValueSample::from_values(std::move(p));
}

IndexRange scan_range(const ScanConfig& config, std::size_t n_seq) {
    StatisticSpec spec;
    spec.kind = config.kind;
    spec.k0 = config.k0 != 0 ? config.k0 : (config.kind == CurveKind::HC ? 4 : 1);
    spec.k1 = config.k1;
    return resolve_range(spec, n_seq);
}

double scan_threshold(const ScanConfig& config, std::size_t n_seq, std::size_t length) {
    check_config(config);
    const std::size_t candidates = candidate_count(length, config.max_length);
    if (candidates == 0) throw InputError("scan: no candidate intervals");
    if (length > kMaxScanCandidates / config.max_length) {
        throw SizeError("scan: T*L exceeds " + std::to_string(kMaxScanCandidates));
    }
    const IndexRange r = scan_range(config, n_seq);
    const double level = config.alpha / static_cast<double>(length * config.max_length);
    return threshold(config.kind, n_seq, level, r.k0, r.k1);
}

std::size_t candidate_count(std::size_t length, std::size_t max_length) {
    std::size_t total = 0;
    for (std::size_t l = 1; l <= std::min(length, max_length); ++l) total += length - l + 1;
    return total;
}

ScanResult scan(const ScanDataset& data, const ScanConfig& config) {
    return run_scan(data, config, true);
}

ScanResult scan_serial(const ScanDataset& data, const ScanConfig& config) {
    return run_scan(data, config, false);
}

std::vector<TruthInterval> synthesize_truth(const SynthConfig& config, std::uint64_t stream) {
    if (config.n_seq < 2 || config.length < 1 || config.max_length < 1) {
        throw InputError("synthesize: need N >= 2, T >= 1, L >= 1");
    }
    if (!(config.p >= 0.0 && config.p <= 1.0)) throw InputError("synthesize: p must lie in [0,1]");
    if (!std::isfinite(config.mu)) throw InputError("synthesize: mu must be finite");
    Rng rng = make_stream(config.seed, 2 * stream);
    std::vector<std::size_t> lengths;
    for (const auto& [len, count] : config.layout) {
        if (len < 1 || len > config.max_length) {
            throw InputError("synthesize: interval lengths must lie in [1, L]");
        }
        lengths.insert(lengths.end(), count, len);
    }
    for (std::size_t i = lengths.size(); i > 1; --i) {
        std::uniform_int_distribution<std::size_t> pick(0, i - 1);
        std::swap(lengths[i - 1], lengths[pick(rng)]);
    }
    const std::size_t m = lengths.size();
    const std::size_t gap = resolved_gap(config);
    const std::size_t used =
        std::accumulate(lengths.begin(), lengths.end(), std::size_t{0}) + (m > 0 ? gap * (m - 1) : 0);
    if (used > config.length) throw InputError("synthesize: intervals cannot be packed into T");
    const std::size_t slack = config.length - used;
    std::vector<std::size_t> offsets(m);
    std::uniform_int_distribution<std::size_t> off(0, slack);
    for (auto& o : offsets) o = off(rng);
    std::sort(offsets.begin(), offsets.end());

    std::vector<TruthInterval> truth(m);
    std::vector<std::size_t> pool(config.n_seq);
    std::size_t cursor = 0;
    for (std::size_t i = 0; i < m; ++i) {
        truth[i].interval = Interval{cursor + offsets[i], lengths[i]};
        truth[i].mu = config.mu;
        cursor += lengths[i] + gap;
        const std::size_t count = draw_carrier_count(config.n_seq, config.p, rng);
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        for (std::size_t j = 0; j < count; ++j) {
            std::uniform_int_distribution<std::size_t> pick(j, config.n_seq - 1);
            std::swap(pool[j], pool[pick(rng)]);
        }
        truth[i].carriers.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count));
        std::sort(truth[i].carriers.begin(), truth[i].carriers.end());
    }
    return truth;
}

ScanDataset synthesize(const SynthConfig& config, std::uint64_t stream) {
    ScanDataset data;
    data.truth = synthesize_truth(config, stream);
    data.n_seq = config.n_seq;
    data.length = config.length;
    data.sigma.assign(config.n_seq, 1.0);
    data.y.resize(config.n_seq * config.length);
    Rng rng = make_stream(config.seed, 2 * stream + 1);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& v : data.y) v = normal(rng);
    for (const auto& t : data.truth) {
        for (std::size_t c : t.carriers) {
            double* row = data.y.data() + c * data.length;
            for (std::size_t s = t.interval.begin; s < t.interval.end(); ++s) row[s] += t.mu;
        }
    }
    return data;
}

std::vector<ScanPowerRow> scan_power(const ScanPowerConfig& config) {
    if (config.scans.empty()) throw InputError("scan_power: no statistics requested");
    if (config.replicates < 1) throw InputError("scan_power: replicates must be >= 1");
    const SynthConfig& synth = config.synth;
    std::vector<IntervalTester> testers;
    std::vector<ScanPowerRow> rows;
    for (const auto& sc : config.scans) {
        if (sc.max_length != synth.max_length) {
            throw InputError("scan_power: scan and synthesis must share L");
        }
        const double b = scan_threshold(sc, synth.n_seq, synth.length);
        testers.emplace_back(sc, synth.n_seq, b);
        ScanPowerRow row;
        row.kind = sc.kind;
        row.threshold = b;
        rows.push_back(row);
    }
    if (config.mode == ScanPowerMode::Windowed) {
        for (const auto& sc : config.scans) {
            if (sc.centering != Centering::Mean) {
                throw InputError("scan_power: windowed mode supports mean centering only");
            }
        }
        if (resolved_gap(synth) + 1 < synth.max_length) {
            throw InputError("scan_power: windowed mode needs gap >= L - 1");
        }
    }
    const std::vector<double> inv_sqrt = inv_sqrt_table(synth.max_length);
    SynthConfig truth_cfg = synth;
    truth_cfg.seed = config.seed;
    ScanPowerConfig local = config;
    local.synth = truth_cfg;

    std::vector<std::vector<std::size_t>> per_rep(config.replicates);
    parallel_for_dynamic(static_cast<std::int64_t>(config.replicates), [&](std::int64_t r) {
        const auto rr = static_cast<std::uint64_t>(r);
        per_rep[static_cast<std::size_t>(r)] = config.mode == ScanPowerMode::Windowed
                                                   ? windowed_replicate(local, testers, inv_sqrt, rr)
                                                   : full_replicate(local, rr);
    });

    const std::size_t truth_per_rep = synthesize_truth(truth_cfg, 0).size();
    const double reps = static_cast<double>(config.replicates);
    for (std::size_t s = 0; s < rows.size(); ++s) {
        double sum = 0.0;
        double sum_sq = 0.0;
        std::size_t detected = 0;
        for (const auto& v : per_rep) {
            detected += v[s];
            const double frac =
                truth_per_rep == 0 ? 0.0 : static_cast<double>(v[s]) / static_cast<double>(truth_per_rep);
            sum += frac;
            sum_sq += frac * frac;
        }
        auto& row = rows[s];
        row.detected = detected;
        row.total = truth_per_rep * config.replicates;
        row.power = row.total == 0 ? 0.0 : static_cast<double>(detected) / static_cast<double>(row.total);
        const double mean = sum / reps;
        const double var = config.replicates > 1 ? (sum_sq - reps * mean * mean) / (reps - 1.0) : 0.0;
        row.se = std::sqrt(std::max(var, 0.0) / reps);
    }
    return rows;
}

}  // namespace hicrit
