#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "wptsim/bandit.hpp"
#include "wptsim/scenario.hpp"

namespace wptsim::harness {

// Initial energies drawn fresh each round: x_i ~ U(0, fraction * Q],
// exclusive of zero. Raw energy units.
std::vector<double> generate_context(const ScenarioConfig& cfg, rng::Stream& stream);

struct AlgorithmTrace {
    std::string name;
    bandit::RegretLedger ledger;
    std::vector<double> alpha_regret_cum;
    std::vector<double> ub_regret_cum;

    double mean_reward_tail(std::size_t tail_rounds) const;
};

struct RunResult {
    long rounds = 0;
    long window_used = 0;
    double variation = 0.0;  // measured V of the true mean-power path
    double p_ref = 0.0;
    int flagged_pairs = 0;
    double wall_seconds = 0.0;
    std::vector<AlgorithmTrace> algorithms;
    std::filesystem::path trace_path;
    std::filesystem::path summary_path;
    std::filesystem::path manifest_path;

    const AlgorithmTrace& trace(const std::string& name) const;
};

// Full round loop: fresh context every round, optional antenna-gain drift,
// per-algorithm schedule selection, paired realized fades keyed by
// (seed, round, slot, location, sensor), energy simulation, regret
// bookkeeping and CSV persistence. Trace files are byte-identical across
// runs with the same config and seed.
RunResult run_experiment(const ScenarioConfig& cfg);

struct SweepRow {
    double value = 0.0;
    std::string algorithm;
    double mean_tail_reward = 0.0;  // mean reward over the final 10% of rounds
};

struct SweepResult {
    char axis = 'Q';
    std::vector<SweepRow> rows;
    std::filesystem::path csv_path;
};

// Re-runs the experiment for each axis value ('Q': capacity, 'N': sensor
// count) under the same seed.
SweepResult sweep(const ScenarioConfig& cfg, char axis, std::span<const double> values);

}  // namespace wptsim::harness
