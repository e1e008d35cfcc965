#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wptsim/common.hpp"
#include "wptsim/energy.hpp"

namespace wptsim::harness {

struct ScenarioConfig {
    // field geometry
    double area_width = 5.0;
    double area_height = 5.0;
    double epsilon = 1.0;

    // charger array and codebook
    int n_antennas = 8;
    double spacing = 0.1;
    double carrier_hz = 800e6;
    int codebook_size = 4;
    double gamma = 2.0;  // asserted in-beam peak/edge ratio, (1.25, 2.5]

    // sensors
    int n_sensors = 5;
    std::vector<Point> sensor_positions;  // empty: drawn from the layout stream
    std::vector<double> antenna_gains;    // empty: all 1.0

    // energy model
    double q_capacity = 500.0;
    double zeta = 2.0;
    double t_c = 50.0;
    double t_u = 1.0;
    int n_slots = 50;
    double eta = 1.0;               // RF-to-DC conversion efficiency
    double context_fraction = 0.3;  // initial energy ~ U(0, fraction * Q]
    energy::UtilityKind utility = energy::UtilityKind::U1;

    // experiment
    long rounds = 2000;
    bool nonstationary = false;
    double drift_rate = 0.05;
    std::vector<std::string> algorithms = {"umcb"};
    std::uint64_t seed = 1;
    long window = 0;  // 0: choose from the measured drift ("auto")
    bool share_by_location = true;
    double alpha = 0.0;  // 0: default 1/2 - 1/(2e)
    double epsilon0 = 1.0 / 3.0;
    std::string out_dir = "out";
    bool dump_energy_traces = false;

    void validate() const;  // throws ConfigError
};

// key = value lines, '#' comments. Lists are comma separated; sensor
// positions use "x:y" pairs.
ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(const std::string& text);

// Canonical serialized form of the effective settings; hashed into the run
// manifest.
std::string serialize_config(const ScenarioConfig& cfg);
std::uint64_t config_hash(const ScenarioConfig& cfg);

}  // namespace wptsim::harness
