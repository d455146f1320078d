#include "cev/analytic.hpp"
#include "cev/lattice.hpp"
#include "cev/mc_oracle.hpp"
#include "cev/params.hpp"
#include "cev/pricing.hpp"
#include "cev/special_functions.hpp"

#include <benchmark/benchmark.h>

namespace {

cev::CevParams market(double beta) {
    cev::CevParams p;
    p.beta = beta;
    return p;
}

void bm_build_lattice(benchmark::State& state) {
    const cev::CevParams p = market(1.0);
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(cev::build_lattice(p, 1.0, n));
    }
    state.SetComplexityN(n);
}
BENCHMARK(bm_build_lattice)->Range(256, 16384)->Complexity(benchmark::oN);

void bm_american_put(benchmark::State& state) {
    const cev::CevParams p = market(1.0);
    const int n = static_cast<int>(state.range(0));
    const cev::Lattice lat = cev::build_lattice(p, 1.0, n);
    const cev::PayoffSpec put{cev::OptionKind::put, 1.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(cev::price_option(lat, put, cev::ExerciseStyle::american,
                                                   p, cev::WeightsMode::exact_h));
    }
    state.SetComplexityN(n);
}
BENCHMARK(bm_american_put)->Range(256, 8192)->Complexity(benchmark::oNSquared);

void bm_closed_form(benchmark::State& state) {
    const cev::CevParams p = market(1.2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            cev::european_price_cev(p, 1.0, 1.0, cev::OptionKind::put));
    }
}
BENCHMARK(bm_closed_form);

void bm_ncx2_cdf(benchmark::State& state) {
    const double lambda = static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(cev::ncx2_cdf(lambda + 3.0, 4.0, lambda));
    }
}
BENCHMARK(bm_ncx2_cdf)->Arg(1)->Arg(100)->Arg(10000);

void bm_mc_terminal(benchmark::State& state) {
    const cev::CevParams p = market(0.5);
    cev::McConfig cfg;
    cfg.n_paths = state.range(0);
    cfg.n_time_steps = 365;
    cfg.seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(cev::simulate_terminal(p, 1.0, cfg));
    }
    state.SetItemsProcessed(state.iterations() * cfg.n_paths);
}
BENCHMARK(bm_mc_terminal)->Arg(1000)->Arg(10000);

} // namespace

BENCHMARK_MAIN();
