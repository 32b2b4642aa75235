#include <benchmark/benchmark.h>

#include "minres/extremal.hpp"
#include "minres/functional.hpp"
#include "minres/geometry.hpp"

using namespace minres;

static void BM_SolveNu(benchmark::State& state) {
    const double alpha = state.range(0) / 1000.0;
    for (auto _ : state) benchmark::DoNotOptimize(solve_nu(alpha));
}
BENCHMARK(BM_SolveNu)->Arg(0)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_FindSwitch(benchmark::State& state) {
    const double alpha = state.range(0) / 1000.0;
    const ArcPtr nu = solve_nu(alpha);
    for (auto _ : state) benchmark::DoNotOptimize(find_switch(alpha, *nu));
}
BENCHMARK(BM_FindSwitch)->Arg(0)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_AssembleProfile(benchmark::State& state) {
    const double alpha = state.range(0) / 1000.0;
    for (auto _ : state) benchmark::DoNotOptimize(assemble_profile(alpha));
}
BENCHMARK(BM_AssembleProfile)->Arg(0)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_SolveForHeight(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(solve_for_height(1.0));
}
BENCHMARK(BM_SolveForHeight)->Unit(benchmark::kMillisecond);

static void BM_BodyEvaluate(benchmark::State& state) {
    BodyEvaluator body(solve_for_height(1.0));
    double x = -0.9;
    for (auto _ : state) {
        benchmark::DoNotOptimize(body(x, 0.3));
        x = x > 0.6 ? -0.9 : x + 0.01;
    }
}
BENCHMARK(BM_BodyEvaluate);

static void BM_BuildMesh(benchmark::State& state) {
    const ExtremalSolution sol = solve_for_height(1.0);
    for (auto _ : state) benchmark::DoNotOptimize(build_mesh(sol, 200, 400));
}
BENCHMARK(BM_BuildMesh)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
