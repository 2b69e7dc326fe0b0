// Serial reference vs OpenMP kernel for each Monte Carlo harness and the
// scan. Thread count follows HICRIT_THREADS or the OpenMP default.

#include <benchmark/benchmark.h>

#include "hicrit/bounds.hpp"
#include "hicrit/parallel.hpp"
#include "hicrit/power.hpp"
#include "hicrit/scan.hpp"
#include "hicrit/simulation.hpp"

using namespace hicrit;

namespace {

void apply_env_threads() {
    static const bool once = [] {
        set_num_threads(threads_from_env());
        return true;
    }();
    (void)once;
}

const StatisticSpec kSpec{CurveKind::MBJ, 1, 0};

MixtureModel mixture() {
    MixtureModel m;
    m.p = 0.01;
    m.mu = 4.0;
    m.delta_sd = 0.1;
    m.sided = Sidedness::Two;
    return m;
}

const ScanDataset& scan_data() {
    static const ScanDataset data = [] {
        SynthConfig s;
        s.n_seq = 674;
        s.length = 4000;
        s.mu = 2.0;
        s.p = 0.02;
        s.seed = 1;
        s.layout = {{3, 8}, {4, 5}, {7, 3}, {10, 1}};
        return synthesize(s);
    }();
    return data;
}

void BM_simulate_null(benchmark::State& state) {
    apply_env_threads();
    const bool parallel = state.range(0) != 0;
    for (auto _ : state) {
        const NullSimResult r = parallel ? simulate_null(kSpec, 1000, 3.40, 20000, 1)
                                         : simulate_null_serial(kSpec, 1000, 3.40, 20000, 1);
        benchmark::DoNotOptimize(r.rate);
    }
    state.SetLabel(parallel ? "openmp" : "serial");
}

void BM_mc_power(benchmark::State& state) {
    apply_env_threads();
    const bool parallel = state.range(0) != 0;
    const MixtureModel m = mixture();
    for (auto _ : state) {
        const PowerResult r = parallel ? mc_power(kSpec, 1000, 3.40, m, 10000, 1)
                                       : mc_power_serial(kSpec, 1000, 3.40, m, 10000, 1);
        benchmark::DoNotOptimize(r.power);
    }
    state.SetLabel(parallel ? "openmp" : "serial");
}

void BM_compare_bounds(benchmark::State& state) {
    apply_env_threads();
    const bool parallel = state.range(0) != 0;
    const BoundsModel m{0.2, 3.0};
    for (auto _ : state) {
        const BoundsComparison r = parallel ? compare_bounds(400, 0.05, m, 2000, 1)
                                            : compare_bounds_serial(400, 0.05, m, 2000, 1);
        benchmark::DoNotOptimize(r.rel_l2_bj);
    }
    state.SetLabel(parallel ? "openmp" : "serial");
}

void BM_scan(benchmark::State& state) {
    apply_env_threads();
    const bool parallel = state.range(0) != 0;
    const ScanDataset& data = scan_data();
    ScanConfig c;
    for (auto _ : state) {
        const ScanResult r = parallel ? scan(data, c) : scan_serial(data, c);
        benchmark::DoNotOptimize(r.exceedances);
    }
    state.SetLabel(parallel ? "openmp" : "serial");
}

}  // namespace

BENCHMARK(BM_simulate_null)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_mc_power)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_compare_bounds)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_scan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
