#include <benchmark/benchmark.h>

#include "nakasec/params.hpp"
#include "nakasec/path_sim.hpp"
#include "nakasec/reduced_sim.hpp"
#include "nakasec/rng.hpp"

using namespace nakasec;

namespace {

const ProtocolParams kBtc90 = ProtocolParams::validate(1.0 / 600.0, 0.9, 10.0);
const ProtocolParams kPure90 = ProtocolParams::validate(1.0, 0.9, 0.0);

void BM_PhiloxNext(benchmark::State& state) {
    PhiloxRng rng(1, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rng.next_u64());
    }
}
BENCHMARK(BM_PhiloxNext);

void BM_ReducedTrial(benchmark::State& state) {
    PhiloxRng rng(3, 4);
    const ConfirmationDepth k(6);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_reduced_trial(k, kBtc90.p(), rng));
    }
}
BENCHMARK(BM_ReducedTrial);

void BM_ReducedEstimate100k(benchmark::State& state) {
    const ConfirmationDepth k(6);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            estimate(EstimateMode::RiggedUpper, k, kBtc90, 100000, 7,
                     static_cast<unsigned>(state.range(0))));
    }
    state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_ReducedEstimate100k)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_PathGeneration(benchmark::State& state) {
    PhiloxRng rng(5, 6);
    const double duration = 1000.0 * 600.0; // ~1000 blocks at the btc rate
    std::uint64_t blocks = 0;
    for (auto _ : state) {
        const SamplePath path = generate_sample_path(kBtc90, duration, rng);
        blocks += path.blocks.size();
        benchmark::DoNotOptimize(path.blocks.data());
    }
    state.SetItemsProcessed(static_cast<int64_t>(blocks));
}
BENCHMARK(BM_PathGeneration)->Unit(benchmark::kMillisecond);

void BM_FullAttackTrial(benchmark::State& state) {
    const ConfirmationDepth k(3);
    std::uint64_t trial = 0;
    const double tau = 200.0;
    const double duration = 600.0;
    for (auto _ : state) {
        PhiloxRng rng = PhiloxRng::substream(11, trial++);
        SamplePath path = generate_sample_path(kPure90, duration, rng);
        benchmark::DoNotOptimize(run_private_mining_attack(path, k, tau, 1e-12));
    }
}
BENCHMARK(BM_FullAttackTrial)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
