#include "intb/multiflow.hpp"
#include "intb/quadrature.hpp"
#include "intb/scenarios.hpp"

#include <benchmark/benchmark.h>

using namespace intb;

namespace {

// Integrand of the degree-3 integral representation for the nonlinear triple.
BoxIntegrand triple_integrand() {
    const MultiflowProblem mp = scenarios::nonlinear_triple();
    return [mp](const std::vector<double>& s) {
        const Times tau{mp.t[0], mp.t[1], s[2]};
        const FieldHandle h = integrating_bracket_slots(mp.bracket, mp.fields, tau, {s[0], s[1]}, OdeConfig{});
        return h(mp.x);
    };
}

void run(benchmark::State& state, Kernel kernel) {
    const BoxIntegrand f = triple_integrand();
    const int nodes = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate_box(f, {0.1, 0.1, 0.1}, nodes, 2, kernel));
    }
    state.SetItemsProcessed(state.iterations() * nodes * nodes * nodes);
}

void BM_Serial(benchmark::State& state) { run(state, Kernel::Serial); }
void BM_OpenMP(benchmark::State& state) { run(state, Kernel::OpenMP); }

}  // namespace

BENCHMARK(BM_Serial)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OpenMP)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
