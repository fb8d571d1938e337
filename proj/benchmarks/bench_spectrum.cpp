#include "support/corpus.hpp"

#include "dspectrum/dchain.hpp"
#include "dspectrum/dynamics.hpp"

#include <benchmark/benchmark.h>

using namespace dspectrum;

namespace {

Graph bench_graph(const benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    return testing::erdos_renyi(n, 8.0 / static_cast<double>(n), 42);
}

void BM_FullSpectrum(benchmark::State& state) {
    const Graph g = bench_graph(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(full_spectrum(g));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.node_count()));
}

void BM_ChainedFixedPoint(benchmark::State& state) {
    const Graph g = bench_graph(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_spectrum_chained(g));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.node_count()));
}

void BM_CoreNumbers(benchmark::State& state) {
    const Graph g = bench_graph(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(core_numbers(g));
    }
}

}  // namespace

BENCHMARK(BM_FullSpectrum)->Arg(500)->Arg(5000);
BENCHMARK(BM_ChainedFixedPoint)->Arg(500)->Arg(5000);
BENCHMARK(BM_CoreNumbers)->Arg(5000)->Arg(50000);
BENCHMARK_MAIN();
