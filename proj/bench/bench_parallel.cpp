// Serial reference vs OpenMP for the three parallel kernels.
#include <benchmark/benchmark.h>

#include <cmath>

#include "hardy/kernel.hpp"
#include "hardy/quadrature.hpp"
#include "hardy/sampling.hpp"
#include "hardy/symbols.hpp"

using namespace hardy;

namespace {

// log-singular at the corner, like the kernel integrand
cplx corner_integrand(double s, double t) { return std::log(s + t + 1e-300) * std::exp(-s - 2 * t) / (1 + s * t); }

void BM_CornerSerial(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(quad::serial::integrate_square_corner(corner_integrand));
}
void BM_CornerParallel(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(quad::integrate_square_corner(corner_integrand));
}

std::vector<cplx> gram_points(int count) {
    sampling::Rng rng(7);
    return sampling::random_halfplane_points(rng, count);
}

void BM_GramSerial(benchmark::State& st) {
    const auto pts = gram_points(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(kernel::serial::gram_matrix(3, pts, kernel::Method::quadrature));
}
void BM_GramParallel(benchmark::State& st) {
    const auto pts = gram_points(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(kernel::gram_matrix(3, pts, kernel::Method::quadrature));
}

const symbols::SymbolExpr& bench_symbol() {
    static const auto e = symbols::parse("z + sqrt(z) + 1");
    return e;
}
double ratio(cplx z) { return z.real() / bench_symbol()(z).real(); }

void BM_SupremumSerial(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(symbols::serial::grid_supremum(ratio));
}
void BM_SupremumParallel(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(symbols::grid_supremum(ratio));
}

}  // namespace

BENCHMARK(BM_CornerSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CornerParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GramSerial)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GramParallel)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SupremumSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SupremumParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
