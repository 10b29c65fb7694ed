// Serial reference vs OpenMP kernels. Run with OMP_NUM_THREADS set to
// compare thread counts.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "opcomm/constructions.hpp"
#include "opcomm/kernels.hpp"
#include "opcomm/lazy_op.hpp"
#include "opcomm/spectral.hpp"

using namespace opcomm;

namespace {

std::vector<double> random_vector(std::size_t n, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v)
        x = d(rng);
    return v;
}

template <bool Parallel>
void BM_gemm(benchmark::State& state)
{
    const auto n = std::size_t(state.range(0));
    const auto a = random_vector(n * n, 1), b = random_vector(n * n, 2);
    std::vector<double> c(n * n);
    for (auto _ : state) {
        if constexpr (Parallel)
            kernels::parallel::gemm(a, b, c, n, n, n);
        else
            kernels::serial::gemm(a, b, c, n, n, n);
        benchmark::DoNotOptimize(c.data());
    }
    state.SetItemsProcessed(state.iterations() * std::int64_t(2 * n * n * n));
}

template <bool Parallel>
void BM_gemv(benchmark::State& state)
{
    const auto n = std::size_t(state.range(0));
    const auto a = random_vector(n * n, 3), x = random_vector(n, 4);
    std::vector<double> y(n);
    for (auto _ : state) {
        if constexpr (Parallel)
            kernels::parallel::gemv(a, x, y, n, n);
        else
            kernels::serial::gemv(a, x, y, n, n);
        benchmark::DoNotOptimize(y.data());
    }
    state.SetItemsProcessed(state.iterations() * std::int64_t(2 * n * n));
}

template <bool Parallel>
void BM_compress(benchmark::State& state)
{
    const auto m = std::size_t(state.range(0));
    const HalmosPair p = halmos_pair_scaled();
    for (auto _ : state) {
        Matrix c = Parallel ? compress(p.A_tilde, m, 0.1) : compress_serial(p.A_tilde, m, 0.1);
        benchmark::DoNotOptimize(c.data().data());
    }
}

void BM_operator_norm(benchmark::State& state)
{
    const auto m = std::size_t(state.range(0));
    const Matrix n = compress(halmos_pair_scaled().N_tilde, m, 0.4);
    for (auto _ : state)
        benchmark::DoNotOptimize(operator_norm(n, 1e-8).upper);
}

} // namespace

BENCHMARK(BM_gemm<false>)->Name("gemm/serial")->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(BM_gemm<true>)->Name("gemm/parallel")->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(BM_gemv<false>)->Name("gemv/serial")->Arg(512)->Arg(2048);
BENCHMARK(BM_gemv<true>)->Name("gemv/parallel")->Arg(512)->Arg(2048);
BENCHMARK(BM_compress<false>)->Name("compress/serial")->Arg(512)->Arg(2048);
BENCHMARK(BM_compress<true>)->Name("compress/parallel")->Arg(512)->Arg(2048);
BENCHMARK(BM_operator_norm)->Name("operator_norm/N~")->Arg(256)->Arg(512);

BENCHMARK_MAIN();
