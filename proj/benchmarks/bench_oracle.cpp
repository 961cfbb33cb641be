#include <benchmark/benchmark.h>

#include "lecho/oracle.hpp"

namespace {

void BM_OracleLoschmidt(benchmark::State& state) {
    lecho::QuenchParams p;
    p.length = static_cast<int>(state.range(0));
    p.h0 = 0.5;
    p.h1 = 0.5;
    p.gamma0 = 0.25;
    p.gamma1 = 0.1;
    p.beta = 2.0;
    const auto o = lecho::EchoOracle::quasifree(p);
    double x = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(o.loschmidt(x));
        x += 0.37;
    }
}
BENCHMARK(BM_OracleLoschmidt)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

void BM_OracleSetup(benchmark::State& state) {
    lecho::QuenchParams p;
    p.length = static_cast<int>(state.range(0));
    p.h0 = 0.3;
    p.h1 = 0.7;
    for (auto _ : state) benchmark::DoNotOptimize(lecho::EchoOracle::quasifree(p));
}
BENCHMARK(BM_OracleSetup)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

void BM_QScan(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(lecho::q_function_scan(200, 200));
}
BENCHMARK(BM_QScan)->Unit(benchmark::kMillisecond);

}  // namespace
