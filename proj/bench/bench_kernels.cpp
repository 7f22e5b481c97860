// Serial reference kernels against their OpenMP counterparts.

#include <vector>

#include <benchmark/benchmark.h>

#include "remcorr/optimizer.hpp"
#include "remcorr/sweep_engine.hpp"

namespace {

using namespace remcorr;

const SpectralDecomposition& chain(int n) {
    static const auto decomp = spectral_decomposition(coupling_profile(ChainSpec(200, 0.375)));
    static const auto small = spectral_decomposition(coupling_profile(ChainSpec(20, 0.375)));
    return n == 200 ? decomp : small;
}

std::vector<double> phi_grid() {
    std::vector<double> grid;
    for (int k = 0; k <= 8; ++k) {
        grid.push_back(k / 16.0);
    }
    return grid;
}

void BM_sweep_serial(benchmark::State& state) {
    const auto& decomp = chain(static_cast<int>(state.range(0)));
    const SweepOptions options{0.01};
    for (auto _ : state) {
        benchmark::DoNotOptimize(sweep_serial(decomp, 55.9, SubDomain::of(SubDomainId::Full), options));
    }
}

void BM_sweep_parallel(benchmark::State& state) {
    const auto& decomp = chain(static_cast<int>(state.range(0)));
    const SweepOptions options{0.01};
    for (auto _ : state) {
        benchmark::DoNotOptimize(sweep(decomp, 55.9, SubDomain::of(SubDomainId::Full), options));
    }
}

void BM_phi_sweep_serial(benchmark::State& state) {
    const auto grid = phi_grid();
    for (auto _ : state) {
        benchmark::DoNotOptimize(phi_sweep_serial(static_cast<int>(state.range(0)), grid, SenderState(0.0, 0.0)));
    }
}

void BM_phi_sweep_parallel(benchmark::State& state) {
    const auto grid = phi_grid();
    for (auto _ : state) {
        benchmark::DoNotOptimize(phi_sweep(static_cast<int>(state.range(0)), grid, SenderState(0.0, 0.0)));
    }
}

}  // namespace

BENCHMARK(BM_sweep_serial)->Arg(20)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sweep_parallel)->Arg(20)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_phi_sweep_serial)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_phi_sweep_parallel)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
