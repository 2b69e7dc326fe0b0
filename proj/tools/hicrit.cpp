// hicrit: batch command-line front end. Every command prints one JSON
// document to stdout; diagnostics go to stderr.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>

#include "hicrit/bounds.hpp"
#include "hicrit/error.hpp"
#include "hicrit/exact.hpp"
#include "hicrit/io.hpp"
#include "hicrit/parallel.hpp"
#include "hicrit/power.hpp"
#include "hicrit/scan.hpp"
#include "hicrit/simulation.hpp"
#include "hicrit/statistics.hpp"
#include "hicrit/tail_approx.hpp"
#include "hicrit/version.hpp"

namespace {

using Json = nlohmann::ordered_json;
using namespace hicrit;

constexpr const char* kSchema = "hicrit.v1";

enum Exit { kOk = 0, kInput = 2, kNumeric = 3 };

struct Common {
    std::string kind = "hc";
    std::size_t k0 = 1;
    double k1_frac = 0.5;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--kind", c.kind, "hc, mhc, bj, mbj or jw")->capture_default_str();
    cmd->add_option("--k0", c.k0, "first index")->capture_default_str();
    cmd->add_option("--k1-frac", c.k1_frac, "last index as a fraction of n")->capture_default_str();
}

IndexRange range_for(const Common& c, std::size_t n) {
    if (!(c.k1_frac > 0.0 && c.k1_frac <= 1.0)) throw InputError("--k1-frac must lie in (0,1]");
    StatisticSpec spec;
    spec.k0 = c.k0;
    spec.k1 = std::max<std::size_t>(
        c.k0, static_cast<std::size_t>(std::floor(c.k1_frac * static_cast<double>(n))));
    return resolve_range(spec, n);
}

Json common_params(const Common& c) {
    return Json{{"kind", c.kind}, {"k0", c.k0}, {"k1_frac", c.k1_frac}};
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json document(const std::string& command, Json params, std::optional<std::uint64_t> seed,
              Json result) {
    Json manifest{{"command", command}, {"parameters", std::move(params)}};
    if (seed) manifest["seed"] = *seed;
    manifest["version"] = kVersion;
    return Json{{"schema", kSchema}, {"manifest", std::move(manifest)}, {"result", std::move(result)}};
}

// ---- stat ---------------------------------------------------------------

struct StatCmd {
    std::string input;
    Common common;
    bool terms = false;
};

Json run_stat(const StatCmd& o) {
    const PValueSample sample = PValueSample::from_values(read_values(o.input));
    const std::size_t n = sample.size();
    const IndexRange r = range_for(o.common, n);
    const StatisticSpec spec{parse_curve_kind(o.common.kind), r.k0, r.k1};
    const StatisticResult res = evaluate(spec, sample, o.terms);
    Json out{{"n", n}, {"k0", r.k0}, {"k1", r.k1}, {"value", finite_or_null(res.value)},
             {"argmax_k", res.argmax_k}};
    if (o.terms) {
        Json t = Json::array();
        for (double v : res.per_k) t.push_back(finite_or_null(v));
        out["terms"] = std::move(t);
    }
    Json params = common_params(o.common);
    params["input"] = o.input;
    return document("stat", std::move(params), std::nullopt, std::move(out));
}

// ---- pvalue / threshold ---------------------------------------------------

struct PValueCmd {
    Common common;
    std::size_t n = 0;
    double b = 0.0;
    std::string method = "approx";
    std::optional<double> tau0;
    double tau1 = 0.5;
};

Json run_pvalue(const PValueCmd& o) {
    const CurveKind kind = parse_curve_kind(o.common.kind);
    Json params = common_params(o.common);
    params["n"] = o.n;
    params["b"] = o.b;
    params["method"] = o.method;
    Json out;
    if (o.method == "approx" || o.method == "exact") {
        const IndexRange r = range_for(o.common, o.n);
        out["k0"] = r.k0;
        out["k1"] = r.k1;
        if (o.method == "approx") {
            const TailApproxResult res = tail_pvalue(kind, o.n, o.b, r.k0, r.k1);
            out["p_value"] = res.p_value;
            out["raw_sum"] = res.raw_sum;
            out["clipped"] = res.clipped;
            out["boundary_convex"] = res.boundary_convex;
        } else {
            out["p_value"] = crossing_probability(o.n, boundary_vector(kind, o.n, o.b, r.k0, r.k1));
        }
    } else if (o.method == "de") {
        out["p_value"] = darling_erdos_pvalue(o.b, o.n);
    } else if (o.method == "ou") {
        const double tau0 = o.tau0.value_or(1.0 / static_cast<double>(o.n));
        params["tau0"] = tau0;
        params["tau1"] = o.tau1;
        const OUApproxResult res = ou_pvalue(o.b, tau0, o.tau1);
        out["p_value"] = res.p_value;
        out["t0"] = res.t0;
    } else {
        throw InputError("--method must be approx, exact, de or ou");
    }
    return document("pvalue", std::move(params), std::nullopt, std::move(out));
}

struct ThresholdCmd {
    Common common;
    std::size_t n = 0;
    double alpha = 0.05;
};

Json run_threshold(const ThresholdCmd& o) {
    const CurveKind kind = parse_curve_kind(o.common.kind);
    const IndexRange r = range_for(o.common, o.n);
    const double b = threshold(kind, o.n, o.alpha, r.k0, r.k1);
    Json params = common_params(o.common);
    params["n"] = o.n;
    params["alpha"] = o.alpha;
    Json out{{"k0", r.k0}, {"k1", r.k1}, {"threshold", b},
             {"p_value", tail_pvalue(kind, o.n, b, r.k0, r.k1).p_value}};
    return document("threshold", std::move(params), std::nullopt, std::move(out));
}

// ---- power ----------------------------------------------------------------

struct PowerCmd {
    Common common;
    std::size_t n = 0;
    std::optional<double> alpha;
    std::optional<double> b;
    double p = 0.0;
    double mu = 0.0;
    std::optional<double> delta_sd;
    std::optional<double> delta_var;
    std::optional<std::string> sided;
    std::string count = "binomial";
    bool analytic = false;
    std::size_t reps = 10000;
    std::uint64_t seed = 1;
};

double resolve_b(std::optional<double> b, std::optional<double> alpha, CurveKind kind,
                 std::size_t n, const IndexRange& r) {
    if (b.has_value() == alpha.has_value()) throw InputError("give exactly one of --b and --alpha");
    return b ? *b : threshold(kind, n, *alpha, r.k0, r.k1);
}

Json run_power(const PowerCmd& o) {
    const CurveKind kind = parse_curve_kind(o.common.kind);
    const IndexRange r = range_for(o.common, o.n);
    const double b = resolve_b(o.b, o.alpha, kind, o.n, r);
    if (o.delta_sd && o.delta_var) throw InputError("give at most one of --delta-sd and --delta-var");
    MixtureModel model;
    model.p = o.p;
    model.mu = o.mu;
    // Analytic power needs one-sided fixed delta; simulation defaults follow
    // the two-sided protocol with delta sd 0.1.
    if (o.delta_sd) {
        model.delta_sd = *o.delta_sd;
    } else if (o.delta_var) {
        if (*o.delta_var < 0.0) throw InputError("--delta-var must be >= 0");
        model.delta_sd = std::sqrt(*o.delta_var);
    } else {
        model.delta_sd = o.analytic ? 0.0 : 0.1;
    }
    const std::string sided = o.sided.value_or(o.analytic ? "one" : "two");
    if (sided == "one") {
        model.sided = Sidedness::One;
    } else if (sided == "two") {
        model.sided = Sidedness::Two;
    } else {
        throw InputError("--sided must be one or two");
    }
    if (o.count == "binomial") {
        model.count_mode = CountMode::Binomial;
    } else if (o.count == "deterministic") {
        model.count_mode = CountMode::Deterministic;
    } else {
        throw InputError("--count must be binomial or deterministic");
    }
    Json params = common_params(o.common);
    params["n"] = o.n;
    if (o.alpha) params["alpha"] = *o.alpha;
    params["b"] = b;
    params["p"] = o.p;
    params["mu"] = o.mu;
    params["delta_sd"] = model.delta_sd;
    params["sided"] = sided;
    params["count"] = o.count;
    params["analytic"] = o.analytic;
    Json out{{"k0", r.k0}, {"k1", r.k1}, {"threshold", b}};
    if (o.analytic) {
        const PowerResult res = analytic_power(kind, o.n, b, r.k0, r.k1, model);
        out["method"] = "analytic";
        out["power"] = res.power;
        out["j0"] = res.j0;
        return document("power", std::move(params), std::nullopt, std::move(out));
    }
    if (o.reps < 1) throw InputError("--reps must be >= 1");
    params["reps"] = o.reps;
    const PowerResult res = mc_power({kind, r.k0, r.k1}, o.n, b, model, o.reps, o.seed);
    out["method"] = "monte_carlo";
    out["power"] = res.power;
    out["se"] = res.se;
    out["replicates"] = res.replicates;
    return document("power", std::move(params), o.seed, std::move(out));
}

// ---- simulate-null ----------------------------------------------------------

struct NullCmd {
    Common common;
    std::size_t n = 0;
    std::optional<double> alpha;
    std::optional<double> b;
    std::size_t reps = 100000;
    std::uint64_t seed = 1;
};

Json run_null(const NullCmd& o) {
    const CurveKind kind = parse_curve_kind(o.common.kind);
    const IndexRange r = range_for(o.common, o.n);
    const double b = resolve_b(o.b, o.alpha, kind, o.n, r);
    if (o.reps < 1) throw InputError("--reps must be >= 1");
    const NullSimResult res = simulate_null({kind, r.k0, r.k1}, o.n, b, o.reps, o.seed);
    Json params = common_params(o.common);
    params["n"] = o.n;
    if (o.alpha) params["alpha"] = *o.alpha;
    params["b"] = b;
    params["reps"] = o.reps;
    Json out{{"k0", r.k0},        {"k1", r.k1},
             {"threshold", b},    {"rate", res.rate},
             {"se", res.se},      {"exceedances", res.exceedances},
             {"replicates", res.replicates}};
    return document("simulate-null", std::move(params), o.seed, std::move(out));
}

// ---- lower-bound ------------------------------------------------------------

struct BoundCmd {
    std::string input;
    std::string kind = "mbj";
    double alpha = 0.05;
};

Json run_bound(const BoundCmd& o) {
    const CurveKind kind = parse_curve_kind(o.kind);
    if (kind != CurveKind::MBJ && kind != CurveKind::MHC) {
        throw InputError("--kind must be mbj or mhc");
    }
    const PValueSample sample = PValueSample::from_values(read_values(o.input));
    const BoundingSequence seq = bounding_sequence(sample.size(), o.alpha);
    const LowerBoundResult res =
        kind == CurveKind::MBJ ? lower_bound_bj(sample, seq) : lower_bound_hc(sample, seq);
    Json params{{"input", o.input}, {"kind", o.kind}, {"alpha", o.alpha}};
    Json out{{"n", sample.size()},
             {"lambda_hat", res.lambda_hat},
             {"active_k", res.active_k},
             {"active_t", res.active_t}};
    if (kind == CurveKind::MBJ) {
        out["gamma"] = seq.gamma;
    } else {
        out["beta"] = seq.beta;
    }
    return document("lower-bound", std::move(params), std::nullopt, std::move(out));
}

// ---- synth / scan -------------------------------------------------------------

SynthConfig parse_synth(const std::string& text) {
    SynthConfig c;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw InputError("--synth: expected key=value, got '" + item + "'");
        const std::string key = item.substr(0, eq);
        const std::string val = item.substr(eq + 1);
        try {
            if (key == "mu") {
                c.mu = std::stod(val);
            } else if (key == "p") {
                c.p = std::stod(val);
            } else if (key == "seed") {
                c.seed = std::stoull(val);
            } else if (key == "n") {
                c.n_seq = std::stoul(val);
            } else if (key == "t") {
                c.length = std::stoul(val);
            } else if (key == "l") {
                c.max_length = std::stoul(val);
            } else if (key == "gap") {
                c.gap = std::stoul(val);
            } else {
                throw InputError("--synth: unknown key '" + key + "'");
            }
        } catch (const std::logic_error&) {
            throw InputError("--synth: bad value for '" + key + "'");
        }
    }
    return c;
}

Json synth_params(const SynthConfig& c) {
    return Json{{"n", c.n_seq}, {"t", c.length}, {"l", c.max_length}, {"p", c.p},
                {"mu", c.mu},   {"gap", c.gap == 0 ? c.max_length : c.gap}};
}

Json truth_json(const std::vector<TruthInterval>& truth) {
    Json arr = Json::array();
    for (const auto& t : truth) {
        arr.push_back(Json{{"start", t.interval.begin + 1},
                           {"end", t.interval.end()},
                           {"carriers", t.carriers.size()},
                           {"mu", t.mu}});
    }
    return arr;
}

struct SynthCmd {
    std::string synth;
    std::string out;
    std::string format;
};

Json run_synth(const SynthCmd& o) {
    const SynthConfig c = parse_synth(o.synth);
    const ScanDataset data = synthesize(c);
    std::string format = o.format;
    if (format.empty()) format = o.out.ends_with(".csv") ? "csv" : "binary";
    if (format != "csv" && format != "binary") throw InputError("--format must be csv or binary");
    std::ofstream f(o.out, format == "csv" ? std::ios::out : std::ios::out | std::ios::binary);
    if (!f) throw InputError("cannot write " + o.out);
    if (format == "csv") {
        write_scan_csv(f, data);
    } else {
        write_scan_binary(f, data);
    }
    if (!f.flush()) throw InputError("write failed for " + o.out);
    Json params = synth_params(c);
    params["out"] = o.out;
    params["format"] = format;
    Json out{{"truth", truth_json(data.truth)}};
    return document("synth", std::move(params), c.seed, std::move(out));
}

struct ScanCmd {
    std::string data;
    std::string synth;
    std::string kind = "mbj";
    double alpha = 0.05;
    std::size_t max_length = 20;
    std::size_t k0 = 0;
    std::size_t k1 = 0;
    std::string centering = "mean";
    double sigma = 1.0;
};

Json run_scan(const ScanCmd& o) {
    if (o.data.empty() == o.synth.empty()) throw InputError("give exactly one of --data and --synth");
    ScanConfig config;
    config.kind = parse_curve_kind(o.kind);
    config.alpha = o.alpha;
    config.max_length = o.max_length;
    config.k0 = o.k0;
    config.k1 = o.k1;
    if (o.centering == "mean") {
        config.centering = Centering::Mean;
    } else if (o.centering == "median") {
        config.centering = Centering::Median;
    } else {
        throw InputError("--centering must be mean or median");
    }
    Json params{{"kind", o.kind}, {"alpha", o.alpha}, {"L", o.max_length}, {"k0", o.k0},
                {"k1", o.k1},     {"centering", o.centering}};
    std::optional<std::uint64_t> seed;
    ScanDataset data;
    if (!o.data.empty()) {
        data = read_scan(o.data);
        if (!(o.sigma > 0.0)) throw InputError("--sigma must be > 0");
        data.sigma.assign(data.n_seq, o.sigma);
        params["data"] = o.data;
        params["sigma"] = o.sigma;
    } else {
        SynthConfig c = parse_synth(o.synth);
        if (c.max_length != o.max_length) c.max_length = o.max_length;
        // size guard before allocating the matrix
        scan_threshold(config, c.n_seq, c.length);
        data = synthesize(c);
        params["synth"] = synth_params(c);
        seed = c.seed;
    }
    const IndexRange r = scan_range(config, data.n_seq);
    const ScanResult res = scan(data, config);
    Json det = Json::array();
    for (const auto& d : res.detections) {
        det.push_back(Json{{"start", d.interval.begin + 1},
                           {"end", d.interval.end()},
                           {"value", finite_or_null(d.value)}});
    }
    Json out{{"n", data.n_seq},
             {"t", data.length},
             {"k0", r.k0},
             {"k1", r.k1},
             {"threshold", res.threshold},
             {"candidates", res.candidates},
             {"exceedances", res.exceedances},
             {"detections", std::move(det)}};
    if (!data.truth.empty()) {
        std::size_t found = 0;
        for (const auto& t : data.truth) {
            for (const auto& d : res.detections) {
                if (d.interval.overlaps(t.interval)) {
                    ++found;
                    break;
                }
            }
        }
        out["truth_intervals"] = data.truth.size();
        out["truth_detected"] = found;
        out["recall"] = static_cast<double>(found) / static_cast<double>(data.truth.size());
    }
    return document("scan", std::move(params), seed, std::move(out));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Higher criticism and Berk-Jones tests: p-values, thresholds, power, bounds, scans"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));
    std::optional<int> threads;
    bool timing = false;
    app.add_option("--threads", threads, "worker cap (default: HICRIT_THREADS or all cores)");
    app.add_flag("--timing", timing, "add wall-clock seconds to the output");

    StatCmd stat;
    auto* c_stat = app.add_subcommand("stat", "statistic of a p-value file");
    c_stat->add_option("input", stat.input, "one p-value per line")->required();
    add_common(c_stat, stat.common);
    c_stat->add_flag("--terms", stat.terms, "include per-index terms");

    PValueCmd pv;
    auto* c_pv = app.add_subcommand("pvalue", "null exceedance probability of a threshold");
    add_common(c_pv, pv.common);
    c_pv->add_option("--n", pv.n)->required();
    c_pv->add_option("--b", pv.b)->required();
    c_pv->add_option("--method", pv.method, "approx, exact, de or ou")->capture_default_str();
    c_pv->add_option("--tau0", pv.tau0, "ou: lower time limit (default 1/n)");
    c_pv->add_option("--tau1", pv.tau1, "ou: upper time limit")->capture_default_str();

    ThresholdCmd th;
    auto* c_th = app.add_subcommand("threshold", "threshold for a given level");
    add_common(c_th, th.common);
    c_th->add_option("--n", th.n)->required();
    c_th->add_option("--alpha", th.alpha)->capture_default_str();

    PowerCmd pw;
    auto* c_pw = app.add_subcommand("power", "power under a sparse normal mixture");
    add_common(c_pw, pw.common);
    c_pw->add_option("--n", pw.n)->required();
    auto* pw_alpha = c_pw->add_option("--alpha", pw.alpha);
    auto* pw_b = c_pw->add_option("--b", pw.b);
    pw_alpha->excludes(pw_b);
    c_pw->add_option("--p", pw.p)->required();
    c_pw->add_option("--mu", pw.mu)->required();
    c_pw->add_option("--delta-sd", pw.delta_sd, "sd of the signal mean");
    c_pw->add_option("--delta-var", pw.delta_var, "variance of the signal mean");
    c_pw->add_option("--sided", pw.sided, "one or two");
    c_pw->add_option("--count", pw.count, "binomial or deterministic")->capture_default_str();
    c_pw->add_flag("--analytic", pw.analytic, "hybrid exact/approximate power");
    c_pw->add_option("--reps", pw.reps)->capture_default_str();
    c_pw->add_option("--seed", pw.seed)->capture_default_str();

    NullCmd nl;
    auto* c_nl = app.add_subcommand("simulate-null", "Monte Carlo null exceedance rate");
    add_common(c_nl, nl.common);
    c_nl->add_option("--n", nl.n)->required();
    auto* nl_alpha = c_nl->add_option("--alpha", nl.alpha);
    auto* nl_b = c_nl->add_option("--b", nl.b);
    nl_alpha->excludes(nl_b);
    c_nl->add_option("--reps", nl.reps)->capture_default_str();
    c_nl->add_option("--seed", nl.seed)->capture_default_str();

    BoundCmd bd;
    auto* c_bd = app.add_subcommand("lower-bound", "lower confidence bound for the signal fraction");
    c_bd->add_option("input", bd.input, "one p-value per line")->required();
    c_bd->add_option("--kind", bd.kind, "mbj or mhc")->capture_default_str();
    c_bd->add_option("--alpha", bd.alpha)->capture_default_str();

    SynthCmd sy;
    auto* c_sy = app.add_subcommand("synth", "write a synthetic scan dataset");
    c_sy->add_option("--synth", sy.synth, "key=value list: mu,p,seed,n,t,l,gap")->required();
    c_sy->add_option("--out", sy.out)->required();
    c_sy->add_option("--format", sy.format, "csv or binary (default from extension)");

    ScanCmd sc;
    auto* c_sc = app.add_subcommand("scan", "interval scan across sequences");
    c_sc->add_option("--data", sc.data, "CSV or binary matrix, one sequence per row");
    c_sc->add_option("--synth", sc.synth, "synthesize instead: key=value list");
    c_sc->add_option("--kind", sc.kind)->capture_default_str();
    c_sc->add_option("--alpha", sc.alpha)->capture_default_str();
    c_sc->add_option("--L", sc.max_length, "max interval length")->capture_default_str();
    c_sc->add_option("--k0", sc.k0, "first index (default 4 for hc, else 1)");
    c_sc->add_option("--k1", sc.k1, "last index (default N/2)");
    c_sc->add_option("--centering", sc.centering, "mean or median")->capture_default_str();
    c_sc->add_option("--sigma", sc.sigma, "noise scale for --data")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kInput;
    }

    set_num_threads(threads.value_or(threads_from_env()));
    const auto start = std::chrono::steady_clock::now();
    try {
        Json doc;
        if (*c_stat) doc = run_stat(stat);
        else if (*c_pv) doc = run_pvalue(pv);
        else if (*c_th) doc = run_threshold(th);
        else if (*c_pw) doc = run_power(pw);
        else if (*c_nl) doc = run_null(nl);
        else if (*c_bd) doc = run_bound(bd);
        else if (*c_sy) doc = run_synth(sy);
        else if (*c_sc) doc = run_scan(sc);
        if (timing) {
            const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
            doc["manifest"]["wall_clock_seconds"] = dt.count();
        }
        std::cout << doc.dump(2) << '\n';
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInput;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInput;
    } catch (const SizeError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInput;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kNumeric;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << '\n';
        return kNumeric;
    }
    return kOk;
}
