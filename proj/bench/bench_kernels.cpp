// Serial reference vs OpenMP kernels, plus the lazy greedy variant.

#include <benchmark/benchmark.h>

#include <vector>

#include "wptsim/oracle.hpp"
#include "wptsim/rng.hpp"
#include "wptsim/scenario.hpp"

namespace {

using namespace wptsim;

struct BenchInstance {
    oracle::ExpectedPowerMatrix powers;
    std::vector<double> initial;
    oracle::ScheduleParams params;
    energy::UtilitySpec spec = energy::UtilitySpec::u1(1);
    double capacity = 1.0;
};

// skew < 1 damps every policy but the first, the regime where lazy
// evaluation skips most of the queue.
BenchInstance make_instance(int n_policies, int n_sensors, int n_slots,
                            double skew = 1.0) {
    BenchInstance inst;
    auto stream = rng::substream(1234, rng::Purpose::Instance, n_policies, n_sensors);
    inst.powers.n_policies = n_policies;
    inst.powers.n_sensors = n_sensors;
    inst.powers.values.resize(static_cast<std::size_t>(n_policies) * n_sensors);
    for (std::size_t k = 0; k < inst.powers.values.size(); ++k) {
        const double damp = k < static_cast<std::size_t>(n_sensors) ? 1.0 : skew;
        inst.powers.values[k] = stream.next_double() * damp;
    }
    inst.initial.resize(n_sensors);
    for (auto& x : inst.initial) x = stream.uniform(0.05, 0.3);
    inst.params = {n_slots, 1.0, static_cast<double>(n_slots), 2.0};
    inst.spec = energy::UtilitySpec::u1(n_sensors);
    return inst;
}

void BM_gua_serial(benchmark::State& state) {
    const auto inst = make_instance(static_cast<int>(state.range(0)),
                                    static_cast<int>(state.range(1)), 50,
                                    state.range(2) ? 0.02 : 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(oracle::gua(inst.powers, inst.initial, inst.spec,
                                             inst.params, inst.capacity,
                                             oracle::ExecMode::Serial));
    }
}

void BM_gua_parallel(benchmark::State& state) {
    const auto inst = make_instance(static_cast<int>(state.range(0)),
                                    static_cast<int>(state.range(1)), 50,
                                    state.range(2) ? 0.02 : 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(oracle::gua(inst.powers, inst.initial, inst.spec,
                                             inst.params, inst.capacity,
                                             oracle::ExecMode::Parallel));
    }
}

void BM_gua_lazy(benchmark::State& state) {
    const auto inst = make_instance(static_cast<int>(state.range(0)),
                                    static_cast<int>(state.range(1)), 50,
                                    state.range(2) ? 0.02 : 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(oracle::gua_lazy(inst.powers, inst.initial, inst.spec,
                                                  inst.params, inst.capacity));
    }
}

harness::Scenario bench_scenario(double side, int codewords, int sensors) {
    harness::ScenarioConfig cfg;
    cfg.area_width = side;
    cfg.area_height = side;
    cfg.epsilon = 1.0;
    cfg.codebook_size = codewords;
    cfg.n_sensors = sensors;
    cfg.t_c = 50.0;
    cfg.n_slots = 50;
    cfg.seed = 77;
    return harness::Scenario::build(cfg);
}

void BM_power_matrix_serial(benchmark::State& state) {
    const auto sc = bench_scenario(static_cast<double>(state.range(0)), 8, 20);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            sc.true_matrix(sc.initial_gains, oracle::ExecMode::Serial));
    }
}

void BM_power_matrix_parallel(benchmark::State& state) {
    const auto sc = bench_scenario(static_cast<double>(state.range(0)), 8, 20);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            sc.true_matrix(sc.initial_gains, oracle::ExecMode::Parallel));
    }
}

}  // namespace

// Parallel mode falls back to the serial loop below its work threshold, so
// the small sizes measure that guard and the large ones the actual fan-out.
BENCHMARK(BM_gua_serial)->Args({100, 5, 0})->Args({2000, 20, 0})->Args({2000, 20, 1});
BENCHMARK(BM_gua_parallel)->Args({100, 5, 0})->Args({2000, 20, 0})->Args({2000, 20, 1});
BENCHMARK(BM_gua_lazy)->Args({100, 5, 0})->Args({2000, 20, 0})->Args({2000, 20, 1});
BENCHMARK(BM_power_matrix_serial)->Arg(20)->Arg(40);
BENCHMARK(BM_power_matrix_parallel)->Arg(20)->Arg(40);

BENCHMARK_MAIN();
