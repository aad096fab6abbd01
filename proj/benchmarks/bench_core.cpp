#include <benchmark/benchmark.h>

#include <random>

#include "greenbound/bounds.hpp"
#include "greenbound/green.hpp"
#include "greenbound/schur.hpp"

using namespace greenbound;

namespace {

ComplexMatrix gaussian(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d(0.0, 0.7071067811865476);
    ComplexMatrix a(n);
    for (auto& z : a.entries()) {
        const double re = d(rng);
        z = {re, d(rng)};
    }
    return a;
}

// Upper triangular with eigenvalues alternating between the half-planes.
ComplexMatrix mixed_triangular(std::size_t n)
{
    ComplexMatrix b = gaussian(n, 7);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) b(i, j) = 0.0;
        b(i, i) = {i % 2 ? 0.5 + 0.1 * i : -0.5 - 0.1 * i, b(i, i).imag()};
    }
    return b;
}

void BM_MatrixExp(benchmark::State& state)
{
    const ComplexMatrix a = gaussian(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(matrix_exp(a));
}
BENCHMARK(BM_MatrixExp)->RangeMultiplier(2)->Range(2, 32);

void BM_Schur(benchmark::State& state)
{
    const ComplexMatrix a = gaussian(static_cast<std::size_t>(state.range(0)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(schur_decompose(a));
}
BENCHMARK(BM_Schur)->RangeMultiplier(2)->Range(2, 32);

void BM_TwoNorm(benchmark::State& state)
{
    const ComplexMatrix a = gaussian(static_cast<std::size_t>(state.range(0)), 3);
    for (auto _ : state) benchmark::DoNotOptimize(induced_norm(a, NormKind::two));
}
BENCHMARK(BM_TwoNorm)->RangeMultiplier(2)->Range(2, 32);

void BM_GreenKernelSetup(benchmark::State& state)
{
    const ComplexMatrix b = mixed_triangular(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(GreenKernel(b));
}
BENCHMARK(BM_GreenKernelSetup)->RangeMultiplier(2)->Range(2, 16);

void BM_GreenKernelEval(benchmark::State& state)
{
    const GreenKernel g(mixed_triangular(static_cast<std::size_t>(state.range(0))));
    double t = -5.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(g(t));
        t = t > 5.0 ? -5.0 : t + 0.37;
    }
}
BENCHMARK(BM_GreenKernelEval)->RangeMultiplier(2)->Range(2, 16);

void BM_TriangularBound(benchmark::State& state)
{
    BoundParams p;
    p.n = static_cast<std::size_t>(state.range(0));
    p.norm_n = 1.5;
    p.gamma_minus = 0.4;
    p.gamma_plus = 0.9;
    double t = 0.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(triangular_bound(p, t));
        t = t > 10.0 ? -10.0 : t + 0.013;
    }
}
BENCHMARK(BM_TriangularBound)->RangeMultiplier(2)->Range(2, 32);

void BM_ConvPowerBesselPath(benchmark::State& state)
{
    const auto k = static_cast<unsigned>(state.range(0));
    double t = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(conv_power_closed(k, t, 0.5, 1.0, ConvPath::bessel));
        t = t > 20.0 ? 0.1 : t + 0.07;
    }
}
BENCHMARK(BM_ConvPowerBesselPath)->DenseRange(1, 8, 7);

}  // namespace

BENCHMARK_MAIN();
