#include <benchmark/benchmark.h>

#include "lecho/averages.hpp"
#include "lecho/echo.hpp"
#include "lecho/stats.hpp"

namespace {

lecho::ModeTable table(int length) {
    lecho::QuenchParams p;
    p.length = length;
    p.h0 = 0.99;
    p.h1 = 1.01;
    p.beta = 20.0;
    return lecho::ModeTable(p);
}

void BM_Loschmidt(benchmark::State& state) {
    const auto t = table(static_cast<int>(state.range(0)));
    double x = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(lecho::loschmidt(t, x));
        x += 0.37;
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Loschmidt)->RangeMultiplier(4)->Range(16, 16384)->Complexity();

void BM_Sampling(benchmark::State& state) {
    const auto t = table(50);
    for (auto _ : state)
        benchmark::DoNotOptimize(lecho::sample_logle(t, lecho::default_tau(50), state.range(0), 1));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sampling)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_Variance(benchmark::State& state) {
    const auto t = table(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(lecho::variance_le(t));
}
BENCHMARK(BM_Variance)->Arg(80)->Arg(1000)->Arg(10000);

void BM_Classify(benchmark::State& state) {
    const auto t = table(50);
    const auto w = lecho::weights(t);
    const auto s = lecho::sample_logle(t, lecho::default_tau(50), 100000, 1);
    for (auto _ : state) benchmark::DoNotOptimize(lecho::classify(w, s));
}
BENCHMARK(BM_Classify)->Unit(benchmark::kMillisecond);

}  // namespace
