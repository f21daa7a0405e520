#include "dynas/analysis.hpp"
#include "dynas/log.hpp"
#include "dynas/optimizer.hpp"
#include "dynas/problems.hpp"
#include "dynas/switching.hpp"

#include <benchmark/benchmark.h>

using namespace dynas;

namespace {

void BM_Evaluate(benchmark::State& state) {
    const int f = static_cast<int>(state.range(0));
    const int d = static_cast<int>(state.range(1));
    const auto problem = instantiate({f, d, 1}, 0);
    Rng rng(1);
    const Vector x = uniform_in_box(d, rng);
    for (auto _ : state) benchmark::DoNotOptimize(problem.evaluate(x));
}
BENCHMARK(BM_Evaluate)->ArgsProduct({{1, 8, 10, 14, 21}, {2, 10, 20}});

// Full static run on the sphere; items are function evaluations.
void BM_StaticRun(benchmark::State& state) {
    const auto algorithm = kPortfolio[static_cast<std::size_t>(state.range(0))];
    const int d = static_cast<int>(state.range(1));
    const auto problem = instantiate({1, d, 1}, 0);
    std::uint64_t seed = 0;
    EvalCount evals = 0;
    for (auto _ : state) {
        OptimizerConfig config;
        config.algorithm = algorithm;
        config.rng_seed = ++seed;
        auto optimizer = make_optimizer(config, d);
        BudgetedEvaluator ev(problem, 10000 * d, 1e-8);
        drive(*optimizer, ev);
        evals += ev.evals_used();
    }
    state.SetItemsProcessed(evals);
    state.SetLabel(std::string(to_string(algorithm)));
}
BENCHMARK(BM_StaticRun)->ArgsProduct({{0, 1, 2, 3, 4}, {2, 5}})->Unit(benchmark::kMillisecond);

void BM_SwitchRun(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const auto problem = instantiate({10, d, 1}, 0);
    SwitchPlan plan;
    plan.a1.algorithm = Algorithm::bfgs;
    plan.a2.algorithm = Algorithm::cmaes;
    plan = validated(plan);
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(run_switch(plan, problem, 10000 * d, ++seed));
}
BENCHMARK(BM_SwitchRun)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_VbsDyn(benchmark::State& state) {
    Rng rng(3);
    std::vector<ErtTable> tables;
    for (Algorithm a : kPortfolio) {
        ErtTable t;
        t.algorithm_label = std::string(to_string(a));
        t.function_id = 1;
        t.dimension = 2;
        double v = 10.0;
        for (auto& e : t.ert) e = v += std::uniform_real_distribution<double>(0.0, 50.0)(rng);
        tables.push_back(t);
    }
    for (auto _ : state) benchmark::DoNotOptimize(vbs_dyn(tables, TargetGrid::size - 1));
}
BENCHMARK(BM_VbsDyn);

}  // namespace

int main(int argc, char** argv) {
    set_warnings_enabled(false);
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
