#include <cmath>
#include <numbers>

#include <benchmark/benchmark.h>

#include <teichpent/inverse.hpp>
#include <teichpent/quadrature.hpp>
#include <teichpent/sc_map.hpp>
#include <teichpent/teich.hpp>

using namespace teichpent;

namespace {

// Forward map at a generic and a rectangular configuration.
void BM_HexagonRep(benchmark::State& state) {
    const Pentagon p(0.5, 2);
    const Direction d(state.range(0) == 0 ? 0.0 : std::numbers::pi / 4);
    for (auto _ : state) benchmark::DoNotOptimize(hexagon_rep(p, d));
}
BENCHMARK(BM_HexagonRep)->Arg(0)->Arg(1);

void BM_HexagonRepTolerance(benchmark::State& state) {
    QuadratureSpec s;
    s.rel_tol = std::pow(10.0, -static_cast<double>(state.range(0)));
    const Pentagon p(0.2, 7);
    for (auto _ : state) benchmark::DoNotOptimize(hexagon_rep(p, Direction(2.0), s));
}
BENCHMARK(BM_HexagonRepTolerance)->DenseRange(6, 14, 4);

void BM_InverseSolve(benchmark::State& state) {
    const HexagonClass h = hexagon_rep(Pentagon(0.2, 5), Direction(2.5));
    for (auto _ : state) benchmark::DoNotOptimize(pentagon_from_hexagon(h));
}
BENCHMARK(BM_InverseSolve)->Unit(benchmark::kMillisecond);

void BM_ChartInterior(benchmark::State& state) {
    const ConformalChart chart(Pentagon(0.5, 2), Direction(1.0));
    for (auto _ : state) benchmark::DoNotOptimize(chart.interior(cplx(0.3, 0.7)));
}
BENCHMARK(BM_ChartInterior);

void BM_ExtremalMap(benchmark::State& state) {
    const Pentagon p(0.5, 2);
    const double K = static_cast<double>(state.range(0));
    const Pentagon q = teich_point(p, TeichParam(K, Direction(1.0)));
    for (auto _ : state) benchmark::DoNotOptimize(extremal_map(p, q));
}
BENCHMARK(BM_ExtremalMap)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
