// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "robust_alloc/calibrate.hpp"
#include "robust_alloc/simulation.hpp"
#include "robust_alloc/strategy.hpp"
#include "robust_alloc/verify.hpp"

using namespace robust_alloc;

namespace {

const ReferenceScenario kReference{0.336, 0.0381, 0.0262, 0.0086, 0.078, 0.1457, 0.0196};

AmbiguityBands paper_bands() {
    AmbiguityBands b;
    b.lambda0_B = 0.0086;
    b.lambda_S_lo = 0.0124;
    b.lambda_S_hi = 0.1254;
    b.sigma_r_lo = 0.0111;
    b.sigma_r_hi = 0.0455;
    b.sigma_S_lo = 0.1191;
    b.sigma_S_hi = 0.1651;
    b.rho_lo = -0.1474;
    b.rho_hi = 0.1337;
    return b;
}

const InvestorConfig kInvestor{2.0, 10.0, 20.0, 1.0, 0.0381};

Execution mode(const benchmark::State& state) {
    return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

void BM_simulate_wealth(benchmark::State& state) {
    const auto bands = paper_bands();
    SimulationSpec spec;
    spec.paths = 20000;
    spec.steps_per_year = 52;
    spec.seed = 7;
    spec.strategy = [&](double t) { return optimal_weights(kInvestor, bands, kReference.kappa, t).total; };
    spec.scenario = [&](double t) { return worst_case_scenario(bands, kReference.kappa, t); };
    for (auto _ : state) {
        auto result = simulate_wealth(spec, kInvestor, kReference.kappa, kReference.r_bar, mode(state));
        benchmark::DoNotOptimize(result.terminal_wealth.data());
    }
}
BENCHMARK(BM_simulate_wealth)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_estimate_bands(benchmark::State& state) {
    const auto series = generate_synthetic(kReference, 20.0, 900, 1.0 / 12.0, 11);
    for (auto _ : state) {
        auto est = estimate_bands(series, 20.0, 240, mode(state));
        benchmark::DoNotOptimize(est.bands.rho_lo);
    }
}
BENCHMARK(BM_estimate_bands)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_verify_saddle(benchmark::State& state) {
    SaddleGridSpec grid;
    grid.t_points = 10;
    grid.r_points = 5;
    const DriftModel model(kInvestor, paper_bands(), kReference.kappa, kReference.r_bar);
    for (auto _ : state) {
        auto report = verify_saddle(model, grid, {}, mode(state));
        benchmark::DoNotOptimize(report.max_abs_f);
    }
}
BENCHMARK(BM_verify_saddle)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
