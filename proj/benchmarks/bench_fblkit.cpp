#include <benchmark/benchmark.h>

#include <cstddef>
#include <vector>

#include "fblkit/bounds.hpp"
#include "fblkit/channel.hpp"
#include "fblkit/measures.hpp"
#include "fblkit/montecarlo.hpp"
#include "fblkit/rng.hpp"

namespace {

using namespace fblkit;

void bm_mutual_information(benchmark::State& state) {
    Channel ch = make_bsc(0.11);
    InputDistribution px = uniform_input(2);
    for (auto _ : state)
        benchmark::DoNotOptimize(mutual_information(ch, px));
}
BENCHMARK(bm_mutual_information);

void bm_dispersion(benchmark::State& state) {
    Channel ch = make_bsc(0.11);
    InputDistribution px = uniform_input(2);
    for (auto _ : state) benchmark::DoNotOptimize(dispersion(ch, px));
}
BENCHMARK(bm_dispersion);

void bm_capacity_bsc(benchmark::State& state) {
    Channel ch = make_bsc(0.11);
    for (auto _ : state) benchmark::DoNotOptimize(capacity(ch).capacity);
}
BENCHMARK(bm_capacity_bsc);

void bm_capacity_zchannel(benchmark::State& state) {
    Channel ch = make_z_channel(0.5);
    for (auto _ : state) benchmark::DoNotOptimize(capacity(ch).capacity);
}
BENCHMARK(bm_capacity_zchannel);

void bm_qfunc_inv(benchmark::State& state) {
    double p = 1e-3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(qfunc_inv(p));
    }
}
BENCHMARK(bm_qfunc_inv);

void bm_information_density(benchmark::State& state) {
    std::size_t n = static_cast<std::size_t>(state.range(0));
    Channel ch = make_bsc(0.11);
    InputDistribution px = uniform_input(2);
    StreamRng rng(7, 0);
    Word x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = static_cast<Symbol>(rng.next_below(2));
        y[i] = static_cast<Symbol>(rng.next_below(2));
    }
    for (auto _ : state)
        benchmark::DoNotOptimize(information_density(ch, px, x, y));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(n));
}
BENCHMARK(bm_information_density)->Arg(100)->Arg(1000);

void bm_estimate_error(benchmark::State& state) {
    Channel ch = make_bsc(0.11);
    InputDistribution px = uniform_input(2);
    for (auto _ : state) {
        SimulationReport report =
            estimate_error(ch, px, 32, 0.25, 200, 42,
                           TiePolicy::TiesAreErrors);
        benchmark::DoNotOptimize(report.p_hat);
    }
}
BENCHMARK(bm_estimate_error);

void bm_exact_ensemble_error(benchmark::State& state) {
    Channel ch = make_bsc(0.11);
    InputDistribution px = uniform_input(2);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            exact_ensemble_error(ch, px, 8, 16, TiePolicy::TiesAreErrors));
}
BENCHMARK(bm_exact_ensemble_error);

void bm_exact_density_distribution(benchmark::State& state) {
    std::size_t n = static_cast<std::size_t>(state.range(0));
    Channel ch = make_bsc(0.11);
    InputDistribution px = uniform_input(2);
    for (auto _ : state) {
        std::vector<DensityAtom> atoms = exact_density_distribution(ch, px, n);
        benchmark::DoNotOptimize(atoms.data());
    }
}
BENCHMARK(bm_exact_density_distribution)->Arg(100)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
