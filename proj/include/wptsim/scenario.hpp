#pragma once

#include <vector>

#include "wptsim/bandit.hpp"
#include "wptsim/channel.hpp"
#include "wptsim/config.hpp"
#include "wptsim/geometry.hpp"
#include "wptsim/oracle.hpp"
#include "wptsim/policy.hpp"

namespace wptsim::harness {

// Precomputed world: grid, codebook, sensor layout, pattern table and the
// normalization reference. All powers downstream of here are normalized by
// p_ref; the energy scale follows (capacity, energies and rates divide by
// p_ref as well), which leaves every fill level and utility unchanged.
struct Scenario {
    ScenarioConfig cfg;
    channel::UlaConfig ula;
    std::vector<geometry::GridLocation> grid;
    channel::Codebook codebook;
    std::vector<Point> sensor_pos;
    std::vector<double> initial_gains;
    PolicySet policies;
    bandit::SharingModel sharing;   // pattern(l, m, i)
    std::vector<double> inv_d2;     // [l][i] = 1 / distance^2
    double p_ref = 0.0;
    double norm_capacity = 0.0;     // q_capacity / p_ref
    int flagged_pairs = 0;          // (location, sensor) pairs outside the
                                    // sector stand-off guarantee

    static Scenario build(const ScenarioConfig& cfg);

    // Deterministic received power of sensor i from location l, codeword m,
    // in raw units.
    double det_power(int l, int m, int i, double gain) const;

    // Normalized expected-power matrix for the given gains: entries are
    // min(eta * det_power / p_ref, 1).
    oracle::ExpectedPowerMatrix true_matrix(std::span<const double> gains,
                                            oracle::ExecMode mode) const;
    // Serial reference for the matrix kernel.
    oracle::ExpectedPowerMatrix true_matrix_serial(std::span<const double> gains) const;

    // Unclamped normalized realized power: eta * |fade|^2 * det_power / p_ref.
    double realized_power(int l, int m, int i, double gain, double fade_power) const;

    oracle::ScheduleParams schedule_params() const;
};

}  // namespace wptsim::harness
