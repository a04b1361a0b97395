#include <benchmark/benchmark.h>

#include "nakasec/bounds.hpp"
#include "nakasec/distributions.hpp"
#include "nakasec/params.hpp"

using namespace nakasec;

namespace {

const ProtocolParams kBtc90 = ProtocolParams::validate(1.0 / 600.0, 0.9, 10.0);
const ProtocolParams kBtc75 = ProtocolParams::validate(1.0 / 600.0, 0.75, 10.0);

void BM_BinomPmf(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(binom_pmf(n / 3, n, 0.114876));
    }
}
BENCHMARK(BM_BinomPmf)->Arg(12)->Arg(120)->Arg(2000);

void BM_Thm2Upper(benchmark::State& state) {
    const ConfirmationDepth k(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(thm2_upper(k, kBtc90));
    }
}
BENCHMARK(BM_Thm2Upper)->Arg(6)->Arg(14)->Arg(60)->Arg(200);

void BM_BoundsReport(benchmark::State& state) {
    const ConfirmationDepth k(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(bounds_report(k, kBtc90));
    }
}
BENCHMARK(BM_BoundsReport)->Arg(6)->Arg(30);

void BM_MinDepthForRisk(benchmark::State& state) {
    const double target = thm2_upper(ConfirmationDepth(14), kBtc90);
    for (auto _ : state) {
        benchmark::DoNotOptimize(min_depth_for_risk(kBtc75, target, BoundSelector::Thm2Upper));
    }
}
BENCHMARK(BM_MinDepthForRisk);

void BM_Sweep60(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(sweep(kBtc75, 1, 60));
    }
}
BENCHMARK(BM_Sweep60);

} // namespace
