// Serial reference vs OpenMP kernels. Arg 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include "minty/activation.hpp"
#include "minty/column_generation.hpp"
#include "minty/metrics.hpp"
#include "minty/prop1.hpp"
#include "minty/rulegen.hpp"
#include "minty/synthdata.hpp"
#include "oracles.hpp"

using namespace minty;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

std::vector<Rule> some_rules(std::size_t d, std::size_t count) {
    std::vector<Rule> rules{Rule::intercept()};
    for (std::uint32_t k = 0; rules.size() < count; ++k)
        rules.push_back(Rule{k % static_cast<std::uint32_t>(d), (k * 7 + 3) % static_cast<std::uint32_t>(d)});
    return rules;
}

void BM_activation_matrix(benchmark::State& state) {
    const auto ds = oracle::random_dataset(20000, 60, 0.1, 1);
    const auto rules = some_rules(60, 64);
    for (auto _ : state) benchmark::DoNotOptimize(activation_matrix(ds, rules, exec_of(state)));
}

void BM_beam(benchmark::State& state) {
    const auto ds = oracle::random_dataset(5000, 60, 0.1, 2);
    const auto r = oracle::random_vector(ds.n(), 2);
    const Pricer pricer(ds);
    for (auto _ : state)
        benchmark::DoNotOptimize(pricer.beam(r, {0.01, 0.01, 0.01}, 60, 7, {}, exec_of(state)));
}

void BM_exhaustive(benchmark::State& state) {
    const auto ds = oracle::random_dataset(2000, 20, 0.1, 3);
    const auto r = oracle::random_vector(ds.n(), 3);
    const Pricer pricer(ds);
    for (auto _ : state)
        benchmark::DoNotOptimize(pricer.exhaustive(r, {0.01, 0.01, 0.01}, 4, {}, exec_of(state)));
}

void BM_fit_toy(benchmark::State& state) {
    const auto ds = gen_toy(7000, 0.1, 4);
    for (auto _ : state) benchmark::DoNotOptimize(fit_minty(ds, FitConfig{}, exec_of(state)));
}

void BM_prop1(benchmark::State& state) {
    PairSpec spec;
    spec.c = 4;
    spec.sigma = 0.5;
    spec.beta.assign(8, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(run_prop1_experiment(spec, 0.3, 1 << 20, 5, exec_of(state)));
}

void BM_bootstrap(benchmark::State& state) {
    const auto y = oracle::random_vector(5000, 6);
    const auto yhat = oracle::random_vector(5000, 7);
    const std::vector<std::uint8_t> relied(5000, 0);
    for (auto _ : state)
        benchmark::DoNotOptimize(evaluate_predictions(yhat, y, relied, default_bootstrap_reps, 8, exec_of(state)));
}

} // namespace

BENCHMARK(BM_activation_matrix)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_beam)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_exhaustive)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_fit_toy)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_prop1)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_bootstrap)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
