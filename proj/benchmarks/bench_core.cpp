#include "dickesim/observables.hpp"
#include "dickesim/pi_liouvillian.hpp"

#include <benchmark/benchmark.h>

using namespace dickesim;

namespace {

ModelParams bench_params(int n) { return {n, 10.0, 1.0, 0.61 * (n - 1) * 10.0 / 4.0}; }

void BM_BuildLiouvillian(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    DickeLadder ladder(n);
    const ModelParams p = bench_params(n);
    for (auto _ : state) {
        auto L = build_liouvillian_pi(p, ladder);
        benchmark::DoNotOptimize(L);
    }
}
BENCHMARK(BM_BuildLiouvillian)->Arg(8)->Arg(16)->Arg(32);

void BM_SteadyStateLU(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    DickeLadder ladder(n);
    const auto L = build_liouvillian_pi(bench_params(n), ladder);
    for (auto _ : state) {
        auto rho = steady_state_pi(L, ladder);
        benchmark::DoNotOptimize(rho);
    }
}
BENCHMARK(BM_SteadyStateLU)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_KrylovEvolve(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    DickeLadder ladder(n);
    const auto L = build_liouvillian_pi(bench_params(n), ladder);
    const auto rho0 = BlockDensityMatrix::ground_state(ladder);
    for (auto _ : state) {
        auto rho = evolve(L, ladder, rho0, 0.1);
        benchmark::DoNotOptimize(rho);
    }
}
BENCHMARK(BM_KrylovEvolve)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_ObservableSet(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    DickeLadder ladder(n);
    const auto L = build_liouvillian_pi(bench_params(n), ladder);
    const auto rho = steady_state_pi(L, ladder);
    for (auto _ : state) {
        auto obs = observable_set(rho, ladder);
        benchmark::DoNotOptimize(obs);
    }
}
BENCHMARK(BM_ObservableSet)->Arg(16)->Arg(32);

} // namespace

BENCHMARK_MAIN();
