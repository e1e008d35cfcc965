#include "wptsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wptsim::harness {

Scenario Scenario::build(const ScenarioConfig& cfg) {
    cfg.validate();
    Scenario sc;
    sc.cfg = cfg;
    sc.ula = {cfg.n_antennas, cfg.spacing, cfg.carrier_hz};
    sc.ula.validate();

    geometry::Area area{cfg.area_width, cfg.area_height, cfg.epsilon};
    sc.grid = geometry::build_grid(area);
    sc.codebook = channel::build_codebook(cfg.codebook_size, sc.ula);

    if (!cfg.sensor_positions.empty()) {
        sc.sensor_pos = cfg.sensor_positions;
    } else {
        auto stream = rng::substream(cfg.seed, rng::Purpose::Layout);
        sc.sensor_pos.reserve(cfg.n_sensors);
        for (int i = 0; i < cfg.n_sensors; ++i) {
            const double x = stream.uniform(0.0, cfg.area_width);
            const double y = stream.uniform(0.0, cfg.area_height);
            sc.sensor_pos.push_back({x, y});
        }
    }
    sc.initial_gains = cfg.antenna_gains.empty()
                           ? std::vector<double>(cfg.n_sensors, 1.0)
                           : cfg.antenna_gains;

    const int n_loc = static_cast<int>(sc.grid.size());
    const int n_cw = sc.codebook.size();
    const int n_sens = cfg.n_sensors;
    sc.policies = {n_loc, n_cw};
    sc.sharing.n_locations = n_loc;
    sc.sharing.n_codewords = n_cw;
    sc.sharing.n_sensors = n_sens;
    sc.sharing.pattern.resize(static_cast<std::size_t>(n_loc) * n_cw * n_sens);
    sc.inv_d2.resize(static_cast<std::size_t>(n_loc) * n_sens);

    double max_inv_d2 = 0.0;
    for (int l = 0; l < n_loc; ++l) {
        for (int i = 0; i < n_sens; ++i) {
            const double d = geometry::distance(sc.grid[l], sc.sensor_pos[i]);
            if (!(d > 0.0)) {
                throw ConfigError("sensor coincides with a grid center; move it");
            }
            sc.inv_d2[static_cast<std::size_t>(l) * n_sens + i] = 1.0 / (d * d);
            max_inv_d2 = std::max(max_inv_d2, 1.0 / (d * d));
            const double cos_theta =
                std::cos(channel::bearing(sc.grid[l].center, sc.sensor_pos[i]));
            for (int m = 0; m < n_cw; ++m) {
                sc.sharing.pattern[(static_cast<std::size_t>(l) * n_cw + m) * n_sens + i] =
                    channel::array_factor(sc.codebook.entries[m], cos_theta, sc.ula);
            }
        }
    }

    const double max_gain =
        *std::max_element(sc.initial_gains.begin(), sc.initial_gains.end());
    sc.p_ref = cfg.n_antennas * max_gain * max_gain * max_inv_d2;
    sc.norm_capacity = cfg.q_capacity / sc.p_ref;

    // Count (location, sensor) pairs outside the sector stand-off guarantee;
    // their powers are still computed, the bound just does not vouch for
    // them.
    const double half_diag = cfg.epsilon * std::numbers::sqrt2 / 2.0;
    for (int l = 0; l < n_loc; ++l) {
        for (int i = 0; i < n_sens; ++i) {
            const double d = geometry::distance(sc.grid[l], sc.sensor_pos[i]);
            const double theta = channel::bearing(sc.grid[l].center, sc.sensor_pos[i]);
            int best_m = 0;
            double best_gap = std::abs(std::cos(sc.codebook.entries[0].beam_angle) -
                                       std::cos(theta));
            for (int m = 1; m < n_cw; ++m) {
                const double gap = std::abs(std::cos(sc.codebook.entries[m].beam_angle) -
                                            std::cos(theta));
                if (gap < best_gap) {
                    best_gap = gap;
                    best_m = m;
                }
            }
            const auto sector = channel::analyze_beam_sector(
                sc.codebook.entries[best_m], sc.ula, d, theta, theta, theta, cfg.gamma);
            if (d <= half_diag || !geometry::min_distance_ok(d, cfg.epsilon, sector)) {
                ++sc.flagged_pairs;
            }
        }
    }
    return sc;
}

double Scenario::det_power(int l, int m, int i, double gain) const {
    const double af = sharing.at(l, m, i);
    return gain * gain * inv_d2[static_cast<std::size_t>(l) * cfg.n_sensors + i] * af;
}

oracle::ExpectedPowerMatrix Scenario::true_matrix(std::span<const double> gains,
                                                  oracle::ExecMode mode) const {
    oracle::ExpectedPowerMatrix mx;
    mx.n_policies = policies.size();
    mx.n_sensors = cfg.n_sensors;
    mx.values.resize(static_cast<std::size_t>(mx.n_policies) * mx.n_sensors);
    const int n_cw = policies.n_codewords;
    const int n = mx.n_policies;
    const bool parallel = mode == oracle::ExecMode::Parallel &&
                          mx.values.size() >= 32768;
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (int j = 0; j < n; ++j) {
            const int l = j / n_cw;
            const int m = j % n_cw;
            for (int i = 0; i < cfg.n_sensors; ++i) {
                mx.values[static_cast<std::size_t>(j) * cfg.n_sensors + i] =
                    std::min(cfg.eta * det_power(l, m, i, gains[i]) / p_ref, 1.0);
            }
        }
    } else {
        for (int j = 0; j < n; ++j) {
            const int l = j / n_cw;
            const int m = j % n_cw;
            for (int i = 0; i < cfg.n_sensors; ++i) {
                mx.values[static_cast<std::size_t>(j) * cfg.n_sensors + i] =
                    std::min(cfg.eta * det_power(l, m, i, gains[i]) / p_ref, 1.0);
            }
        }
    }
    return mx;
}

oracle::ExpectedPowerMatrix Scenario::true_matrix_serial(
    std::span<const double> gains) const {
    return true_matrix(gains, oracle::ExecMode::Serial);
}

double Scenario::realized_power(int l, int m, int i, double gain, double fade_power) const {
    return cfg.eta * fade_power * det_power(l, m, i, gain) / p_ref;
}

oracle::ScheduleParams Scenario::schedule_params() const {
    return {cfg.n_slots, cfg.t_u, cfg.t_c, cfg.zeta};
}

}  // namespace wptsim::harness
