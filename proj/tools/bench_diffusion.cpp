// Compares the OpenMP diffusion kernel against the serial reference.
// Run: build/tools/bench_diffusion [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include "neundiff/diffusion.hpp"
#include "neundiff/rng.hpp"

namespace {

neundiff::Raster random_raster(int n, uint64_t seed) {
    neundiff::Raster r(n, n);
    neundiff::SplitMix64 rng(seed);
    for (double& v : r.values()) v = rng.uniform(0.0, 255.0);
    return r;
}

void BM_pm_step_serial(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const neundiff::Raster u = random_raster(n, 7);
    const neundiff::DiffusionParams p;
    neundiff::Raster out(n, n);
    for (auto _ : state) {
        neundiff::pm_step_serial(u, p, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n) * n);
}

void BM_pm_step_parallel(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const neundiff::Raster u = random_raster(n, 7);
    const neundiff::DiffusionParams p;
    neundiff::Raster out(n, n);
    for (auto _ : state) {
        neundiff::pm_step(u, p, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n) * n);
}

} // namespace

BENCHMARK(BM_pm_step_serial)->Arg(256)->Arg(512)->Arg(1024)->Arg(2048);
BENCHMARK(BM_pm_step_parallel)->Arg(256)->Arg(512)->Arg(1024)->Arg(2048);

BENCHMARK_MAIN();
