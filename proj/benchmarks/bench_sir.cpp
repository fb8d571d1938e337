#include "support/corpus.hpp"

#include "dspectrum/sir.hpp"

#include <benchmark/benchmark.h>

using namespace dspectrum;

namespace {

void BM_SimulateOnce(benchmark::State& state) {
    const Graph g = testing::erdos_renyi(500, 0.02, 42);
    const double p = 1.5 * epidemic_threshold(g);
    SirSimulator sim(g);
    std::uint32_t run = 0;
    for (auto _ : state) {
        CounterStream rng = sir_stream(42, 0, 0, run++);
        benchmark::DoNotOptimize(sim.run(0, p, rng));
    }
}

void BM_ProfileAllNodes(benchmark::State& state) {
    const Graph g = testing::erdos_renyi(200, 0.05, 42);
    SirParams params;
    params.runs_per_source = 100;
    params.workers = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(profile_all_nodes(g, kDefaultMultipliers, params));
    }
}

}  // namespace

BENCHMARK(BM_SimulateOnce);
BENCHMARK(BM_ProfileAllNodes)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
