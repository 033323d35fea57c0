// Serial reference vs OpenMP kernels vs the FFT path.
// Run: ./build/arw_bench [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include "arw/kacrice.hpp"
#include "arw/nodal.hpp"

using namespace arw;

namespace {

const Eigenfunction& big_field() {
    static const Eigenfunction f =
        sample_eigenfunction(enumerate_frequencies(2, 1105), 1);
    return f;
}

const Eigenfunction& mid_field() {
    static const Eigenfunction f = sample_eigenfunction(enumerate_frequencies(2, 65), 2);
    return f;
}

void BM_grid_direct_serial(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(detail::grid_direct(big_field(), 264, false));
}
BENCHMARK(BM_grid_direct_serial)->Unit(benchmark::kMillisecond);

void BM_grid_direct_parallel(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(detail::grid_direct(big_field(), 264, true));
}
BENCHMARK(BM_grid_direct_parallel)->Unit(benchmark::kMillisecond);

void BM_grid_spectral(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(detail::grid_spectral(big_field(), 264));
}
BENCHMARK(BM_grid_spectral)->Unit(benchmark::kMillisecond);

void BM_grid_reference(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(detail::grid_direct_reference(mid_field(), 64));
}
BENCHMARK(BM_grid_reference)->Unit(benchmark::kMillisecond);

void BM_marching_serial(benchmark::State& state) {
    const Grid g = detail::offset_grid(mid_field(), 256);
    for (auto _ : state)
        benchmark::DoNotOptimize(detail::marching_measure(g, mid_field(), false, nullptr));
}
BENCHMARK(BM_marching_serial)->Unit(benchmark::kMillisecond);

void BM_marching_parallel(benchmark::State& state) {
    const Grid g = detail::offset_grid(mid_field(), 256);
    for (auto _ : state)
        benchmark::DoNotOptimize(detail::marching_measure(g, mid_field(), true, nullptr));
}
BENCHMARK(BM_marching_parallel)->Unit(benchmark::kMillisecond);

void BM_smoothed_serial(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(detail::smoothed_measure(mid_field(), 0.05, 128, false));
}
BENCHMARK(BM_smoothed_serial)->Unit(benchmark::kMillisecond);

void BM_smoothed_parallel(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(detail::smoothed_measure(mid_field(), 0.05, 128, true));
}
BENCHMARK(BM_smoothed_parallel)->Unit(benchmark::kMillisecond);

void BM_kernel_mc_serial(benchmark::State& state) {
    Vec z(2);
    z[0] = 0.21;
    z[1] = 0.37;
    const CovarianceBlocks bl = covariance_blocks(enumerate_frequencies(2, 25), z);
    Eigen::SelfAdjointEigenSolver<Mat> es(bl.Omega);
    const Mat root = es.eigenvectors() *
                     es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                     es.eigenvectors().transpose();
    for (auto _ : state) {
        double mean = 0, m2 = 0;
        detail::kernel_mc_moments(root, 200000, 1, false, mean, m2);
        benchmark::DoNotOptimize(mean);
    }
}
BENCHMARK(BM_kernel_mc_serial)->Unit(benchmark::kMillisecond);

void BM_kernel_mc_parallel(benchmark::State& state) {
    Vec z(2);
    z[0] = 0.21;
    z[1] = 0.37;
    const CovarianceBlocks bl = covariance_blocks(enumerate_frequencies(2, 25), z);
    Eigen::SelfAdjointEigenSolver<Mat> es(bl.Omega);
    const Mat root = es.eigenvectors() *
                     es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                     es.eigenvectors().transpose();
    for (auto _ : state) {
        double mean = 0, m2 = 0;
        detail::kernel_mc_moments(root, 200000, 1, true, mean, m2);
        benchmark::DoNotOptimize(mean);
    }
}
BENCHMARK(BM_kernel_mc_parallel)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
