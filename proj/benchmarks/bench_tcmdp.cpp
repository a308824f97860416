#include "tcmdp/cost_control.hpp"
#include "tcmdp/experiments.hpp"
#include "tcmdp/mdp_sim.hpp"
#include "tcmdp/model_classes.hpp"
#include "tcmdp/selector.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace tcmdp;

std::shared_ptr<const Trajectory> model_i_sample(std::size_t n) {
    SimModel model;
    model.kind = ModelKind::model_i;
    return std::make_shared<const Trajectory>(simulate(model, n, 11));
}

CandidateList histogram_grid(const Trajectory& t, int max_dy) {
    CandidateList out;
    for (int c = 0; c <= 1; ++c) {
        for (int dy = 0; dy <= max_dy; ++dy) {
            out.push_back(std::make_shared<HistogramDensity>(fit_histogram(t, {c, 0, c, dy})));
        }
    }
    return out;
}

void simulate_model_ii(benchmark::State& state) {
    SimModel model;
    model.kind = ModelKind::model_ii;
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate(model, n, 3));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(simulate_model_ii)->Arg(1000)->Arg(100000);

void histogram_fit(benchmark::State& state) {
    const auto t = model_i_sample(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_histogram(*t, {2, 0, 2, 6}));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(histogram_fit)->Arg(1000)->Arg(10000);

void spline_fit(benchmark::State& state) {
    const auto t = model_i_sample(1000);
    const auto options = Table1Config{}.spline;
    const int degree = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_spline(*t, degree, options));
    }
}
BENCHMARK(spline_fit)->Arg(2)->Arg(6)->Arg(10);

void pairwise_hellinger_table(benchmark::State& state) {
    const auto t = model_i_sample(static_cast<std::size_t>(state.range(0)));
    const auto cands = histogram_grid(*t, 6);
    const EmpiricalMeasure m(t, quadrature_for(cands));
    for (auto _ : state) {
        benchmark::DoNotOptimize(pairwise_table(cands, m));
    }
    state.counters["candidates"] = static_cast<double>(cands.size());
}
BENCHMARK(pairwise_hellinger_table)->Arg(1000)->Arg(10000);

void control_selection(benchmark::State& state) {
    const auto t = model_i_sample(2000);
    const EmpiricalMeasure m(t, Quadrature::midpoint(256));
    const auto est = fit_histogram(*t, {1, 0, 1, 4});
    const auto cost = quadratic_cost(0.5, 0.0, uniform_control_grid(static_cast<std::size_t>(state.range(0))));
    for (auto _ : state) {
        benchmark::DoNotOptimize(select_control(est, cost, t->samples().front().g, m, {.fallback = true}));
    }
}
BENCHMARK(control_selection)->Arg(8)->Arg(32);

} // namespace

BENCHMARK_MAIN();
