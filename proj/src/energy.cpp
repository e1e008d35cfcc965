#include "wptsim/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wptsim::energy {

void SensorState::validate() const {
    if (!(capacity > 0.0)) throw ConfigError("sensor capacity must be positive");
    if (energy < 0.0 || energy > capacity) {
        throw ConfigError("sensor energy outside [0, capacity]");
    }
    if (consumption_rate < 0.0) throw ConfigError("consumption rate must be >= 0");
    if (!(antenna_gain > 0.0)) throw ConfigError("antenna gain must be positive");
}

UtilitySpec::UtilitySpec(UtilityKind kind, int n_sensors, std::vector<double> knots)
    : kind_(kind), n_sensors_(n_sensors), knots_(std::move(knots)) {
    if (n_sensors_ < 1) throw ConfigError("utility needs n_sensors >= 1");
    validate_shape();
    lipschitz_b_ = lipschitz_bound(*this);
}

UtilitySpec UtilitySpec::u1(int n_sensors) {
    return UtilitySpec(UtilityKind::U1, n_sensors, {});
}

UtilitySpec UtilitySpec::u2(int n_sensors) {
    return UtilitySpec(UtilityKind::U2, n_sensors, {});
}

UtilitySpec UtilitySpec::table(std::vector<double> knots, int n_sensors) {
    if (knots.size() < 2) throw ConfigError("utility table needs at least two knots");
    return UtilitySpec(UtilityKind::Table, n_sensors, std::move(knots));
}

double UtilitySpec::value(double sigma) const {
    if (sigma < 0.0) sigma = 0.0;
    const double scale = 100.0 / n_sensors_;
    switch (kind_) {
        case UtilityKind::U1:
            return scale * std::sqrt(sigma);
        case UtilityKind::U2:
            return scale * std::sqrt(sigma / (1.0 + sigma));
        case UtilityKind::Table: {
            const double n = static_cast<double>(knots_.size() - 1);
            const double pos = sigma * n;
            if (pos >= n) {  // extrapolate with the last segment's slope
                const double slope = (knots_.back() - knots_[knots_.size() - 2]) * n;
                return knots_.back() + slope * (sigma - 1.0);
            }
            const auto k = static_cast<std::size_t>(pos);
            const double frac = pos - static_cast<double>(k);
            return knots_[k] + (knots_[k + 1] - knots_[k]) * frac;
        }
    }
    return 0.0;
}

double UtilitySpec::derivative(double sigma) const {
    constexpr double kFloor = 1e-12;
    if (sigma < kFloor) sigma = kFloor;
    const double scale = 100.0 / n_sensors_;
    switch (kind_) {
        case UtilityKind::U1:
            return scale * 0.5 / std::sqrt(sigma);
        case UtilityKind::U2: {
            const double phi = sigma / (1.0 + sigma);
            const double dphi = 1.0 / ((1.0 + sigma) * (1.0 + sigma));
            return scale * 0.5 * dphi / std::sqrt(phi);
        }
        case UtilityKind::Table: {
            const double n = static_cast<double>(knots_.size() - 1);
            const double pos = sigma * n;
            std::size_t k = (pos >= n) ? knots_.size() - 2 : static_cast<std::size_t>(pos);
            return (knots_[k + 1] - knots_[k]) * n;
        }
    }
    return 0.0;
}

void UtilitySpec::validate_shape() const {
    constexpr int kPoints = 1000;
    double prev = value(0.0);
    double prev_diff = -1.0;
    if (prev < 0.0) throw ModelError("utility must be non-negative");
    for (int k = 1; k < kPoints; ++k) {
        const double cur = value(static_cast<double>(k) / (kPoints - 1));
        const double diff = cur - prev;
        if (diff < -1e-12) throw ModelError("utility must be non-decreasing");
        if (prev_diff >= 0.0 && diff > prev_diff + 1e-12) {
            throw ModelError("utility must have non-increasing first differences");
        }
        prev_diff = diff;
        prev = cur;
    }
}

double consumption_rate(double x, double zeta, double t_c) {
    if (!(zeta >= 1.0)) throw ModelError("zeta < 1 could deplete a sensor within a round");
    if (!(t_c > 0.0)) throw ModelError("round deadline must be positive");
    return x / (zeta * t_c);
}

double uncharged_residual(double x, double rate, int n, double t_u) {
    if (n < 0) throw std::invalid_argument("slot index must be >= 0");
    return std::max(x - static_cast<double>(n) * rate * t_u, 0.0);
}

void RoundSchedule::validate() const {
    if (static_cast<double>(slots.size()) * slot_duration > deadline * (1.0 + 1e-12)) {
        throw ModelError("real-time charging constraint violated: slots * t_u exceeds T_c");
    }
}

RoundResult simulate_round(const std::vector<SensorState>& states,
                           const RoundSchedule& schedule,
                           std::span<const double> realized_powers) {
    schedule.validate();
    const std::size_t n = states.size();
    const std::size_t n_slots = schedule.slots.size();
    if (realized_powers.size() != n_slots * n) {
        throw std::invalid_argument("realized power matrix must be n_slots x n_sensors");
    }
    for (double p : realized_powers) {
        if (!(p >= 0.0)) throw std::invalid_argument("realized powers must be >= 0");
    }

    RoundResult result;
    result.final_energy.reserve(n);
    result.baseline.reserve(n);
    result.overflow.assign(n, 0.0);

    const double t_u = schedule.slot_duration;
    for (std::size_t i = 0; i < n; ++i) {
        double q = states[i].energy;
        const double drain = states[i].consumption_rate * t_u;
        for (std::size_t s = 0; s < n_slots; ++s) {
            const double next = q - drain + realized_powers[s * n + i] * t_u;
            if (next > states[i].capacity) {
                result.overflow[i] += next - states[i].capacity;
                q = states[i].capacity;
            } else {
                q = std::max(next, 0.0);
            }
        }
        result.final_energy.push_back(q);
        result.baseline.push_back(uncharged_residual(
            states[i].energy, states[i].consumption_rate, static_cast<int>(n_slots), t_u));
    }
    return result;
}

double utility(const UtilitySpec& spec, double q, double capacity) {
    if (!(capacity > 0.0)) throw ConfigError("capacity must be positive");
    if (q < -1e-9 * capacity || q > capacity * (1.0 + 1e-9)) {
        throw std::domain_error("energy outside [0, capacity]");
    }
    return spec.value(std::clamp(q / capacity, 0.0, 1.0));
}

double round_reward(const UtilitySpec& spec, std::span<const double> final_energy,
                    std::span<const double> baseline, double capacity) {
    if (final_energy.size() != baseline.size()) {
        throw std::invalid_argument("energy/baseline length mismatch");
    }
    double reward = 0.0;
    for (std::size_t i = 0; i < final_energy.size(); ++i) {
        reward += spec.value(final_energy[i] / capacity) -
                  spec.value(baseline[i] / capacity);
    }
    return reward;
}

double lipschitz_bound(const UtilitySpec& spec, double sigma_min, int lattice_points) {
    if (lattice_points < 2) throw std::invalid_argument("lattice needs >= 2 points");
    const double step = (1.0 - sigma_min) / (lattice_points - 1);
    double best = 0.0;
    double prev = spec.value(sigma_min);
    for (int k = 1; k < lattice_points; ++k) {
        const double cur = spec.value(sigma_min + k * step);
        best = std::max(best, (cur - prev) / step);
        prev = cur;
    }
    return best;
}

}  // namespace wptsim::energy
