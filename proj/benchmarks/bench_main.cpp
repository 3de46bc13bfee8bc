#include <benchmark/benchmark.h>

#include <cmath>
#include <string>
#include <vector>

#include "rdsde/coeff.hpp"
#include "rdsde/fbm.hpp"
#include "rdsde/fracnorm.hpp"
#include "rdsde/skorokhod.hpp"
#include "rdsde/solver.hpp"

using namespace rdsde;

namespace {

Problem example_b() {
    const std::vector<std::string> drift{"cos(x1)"};
    const std::vector<std::string> diffusion{"sin(t + xd1)"};
    Problem p;
    p.coeffs = CoefficientSet::parse(drift, diffusion, {{"r", 1.0}}, 1, 1).bind();
    p.eta = [](double u, std::span<double> out) { out[0] = u * u; };
    p.r = 1.0;
    p.horizon = 2.0;
    return p;
}

}  // namespace

static void BM_Cholesky(benchmark::State& state) {
    const TimeGrid grid(0.0, 1.0, static_cast<std::size_t>(state.range(0)));
    const CholeskyGenerator gen(grid, HurstParameter(0.75));
    std::uint64_t path = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(gen.sample(1, 1, path++));
    }
}
BENCHMARK(BM_Cholesky)->RangeMultiplier(4)->Range(64, 1024);

static void BM_Circulant(benchmark::State& state) {
    const TimeGrid grid(0.0, 1.0, static_cast<std::size_t>(state.range(0)));
    const CirculantGenerator gen(grid, HurstParameter(0.75));
    std::uint64_t path = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(gen.sample(1, 1, path++));
    }
}
BENCHMARK(BM_Circulant)->RangeMultiplier(4)->Range(64, 1 << 16);

static void BM_Regulator(benchmark::State& state) {
    const TimeGrid grid(0.0, 1.0, static_cast<std::size_t>(state.range(0)));
    const SamplePath g = sample_circulant(grid, HurstParameter(0.75), 3, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(regulator(g));
    }
}
BENCHMARK(BM_Regulator)->RangeMultiplier(8)->Range(512, 1 << 18);

static void BM_AlphaNorm(benchmark::State& state) {
    const TimeGrid grid(0.0, 1.0, static_cast<std::size_t>(state.range(0)));
    const SamplePath g = sample_circulant(grid, HurstParameter(0.75), 1, 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(w_alpha_inf_norm(g, {0.3, 1.0, 0.0, 1.0}));
    }
}
BENCHMARK(BM_AlphaNorm)->RangeMultiplier(2)->Range(256, 4096);

static void BM_LambdaBound(benchmark::State& state) {
    const TimeGrid grid(0.0, 1.0, static_cast<std::size_t>(state.range(0)));
    const SamplePath g = sample_circulant(grid, HurstParameter(0.75), 1, 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(lambda_alpha_bound(g, 0.3));
    }
}
BENCHMARK(BM_LambdaBound)->RangeMultiplier(2)->Range(256, 4096);

static void BM_Solve(benchmark::State& state) {
    const Problem p = example_b();
    SolverConfig cfg;
    cfg.scheme = state.range(1) == 0 ? Scheme::euler : Scheme::picard;
    cfg.steps_per_delay = static_cast<std::size_t>(state.range(0));
    const SamplePath g = sample_driver(p, cfg, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve(p, g, cfg));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(2 * cfg.steps_per_delay));
}
BENCHMARK(BM_Solve)->ArgsProduct({{256, 1024, 4096}, {0, 1}});
BENCHMARK_MAIN();
