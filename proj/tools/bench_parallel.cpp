// Serial reference against the OpenMP paths: exact kernel tables and independent runs.

#include <benchmark/benchmark.h>

#include "tasep/oracle.hpp"
#include "tasep/simulate.hpp"

using namespace tasep;

namespace {

const Rates<mpq_class>& table_rates() {
    static const auto rt = bound_rates(CaseId::C, 3, random_binding(CaseId::C, 3, 2, 10, 17));
    return rt;
}

void kernel_table_bench(benchmark::State& st, Route route, Exec exec) {
    const int cap = static_cast<int>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(kernel_table(CaseId::C, 2, {1}, table_rates(), cap, route, exec));
}

SimConfig sim_config() {
    SimConfig c;
    c.cs = CaseId::A;
    c.ell = 50;
    c.steps = 200;
    c.x = [](int) { return 0.3; };
    c.rate = [](int) { return 1.0; };
    c.seed = 42;
    return c;
}

void BM_run_many_serial(benchmark::State& st) {
    const auto c = sim_config();
    for (auto _ : st) benchmark::DoNotOptimize(run_many_serial(c, st.range(0)));
}

void BM_run_many_parallel(benchmark::State& st) {
    const auto c = sim_config();
    for (auto _ : st) benchmark::DoNotOptimize(run_many(c, st.range(0)));
}

void BM_run_many_continuous_serial(benchmark::State& st) {
    const ContinuousConfig c{50, 20.0, [](int) { return 1.0; }, false, 7};
    for (auto _ : st) benchmark::DoNotOptimize(run_many_continuous_serial(c, st.range(0)));
}

void BM_run_many_continuous_parallel(benchmark::State& st) {
    const ContinuousConfig c{50, 20.0, [](int) { return 1.0; }, false, 7};
    for (auto _ : st) benchmark::DoNotOptimize(run_many_continuous(c, st.range(0)));
}

}  // namespace

BENCHMARK_CAPTURE(kernel_table_bench, tableau_serial, Route::Tableau, Exec::Serial)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(kernel_table_bench, tableau_parallel, Route::Tableau, Exec::Parallel)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(kernel_table_bench, chain_serial, Route::ClosedFormChain, Exec::Serial)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(kernel_table_bench, chain_parallel, Route::ClosedFormChain, Exec::Parallel)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_run_many_serial)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_run_many_parallel)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_run_many_continuous_serial)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_run_many_continuous_parallel)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
