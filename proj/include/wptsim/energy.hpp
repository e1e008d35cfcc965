#pragma once

#include <span>
#include <vector>

#include "wptsim/common.hpp"

namespace wptsim::energy {

struct SensorState {
    Point position{};
    double capacity = 0.0;          // Q
    double energy = 0.0;            // current stored energy, in [0, Q]
    double consumption_rate = 0.0;  // power drained while operating
    double antenna_gain = 1.0;

    void validate() const;
};

enum class UtilityKind { U1, U2, Table };

// Charging utility of one sensor as a function of its fill level
// sigma = q / Q. Must be non-negative, non-decreasing and concave; the
// constructor verifies those properties on a 1000-point lattice.
class UtilitySpec {
  public:
    // (100/N) * sqrt(sigma)
    static UtilitySpec u1(int n_sensors);
    // (100/N) * sqrt(sigma / (1 + sigma))
    static UtilitySpec u2(int n_sensors);
    // Values at a uniform sigma grid on [0, 1]; linear interpolation, final
    // slope extrapolated past 1.
    static UtilitySpec table(std::vector<double> knots, int n_sensors);

    double value(double sigma) const;  // defined for sigma >= 0, incl. > 1
    double derivative(double sigma) const;

    UtilityKind kind() const { return kind_; }
    int n_sensors() const { return n_sensors_; }
    double lipschitz_b() const { return lipschitz_b_; }

  private:
    UtilitySpec(UtilityKind kind, int n_sensors, std::vector<double> knots);
    void validate_shape() const;

    UtilityKind kind_;
    int n_sensors_;
    std::vector<double> knots_;
    double lipschitz_b_ = 0.0;
};

// x / (zeta * t_c); zeta >= 1 guarantees an uncharged sensor survives the
// round with x*(1 - 1/zeta) left.
double consumption_rate(double x, double zeta, double t_c);

// Residual after n uncharged slots, floored at zero.
double uncharged_residual(double x, double rate, int n, double t_u);

struct RoundSchedule {
    std::vector<int> slots;      // policy index per slot
    double slot_duration = 1.0;  // t_u
    double deadline = 0.0;       // T_c

    int n_slots() const { return static_cast<int>(slots.size()); }
    void validate() const;  // real-time constraint n_slots * t_u <= deadline
};

struct RoundResult {
    std::vector<double> final_energy;  // per sensor, after the last slot
    std::vector<double> baseline;      // uncharged residual at round end
    std::vector<double> overflow;      // energy discarded by the battery cap
};

// Slot-by-slot update q <- clamp(q - rate*t_u + p*t_u, 0, Q). The cap binds
// after every slot; overflow is recorded per sensor.
// realized_powers is n_slots x n_sensors, row-major, all entries >= 0.
RoundResult simulate_round(const std::vector<SensorState>& states,
                           const RoundSchedule& schedule,
                           std::span<const double> realized_powers);

// U(q/Q); q must lie in [0, Q].
double utility(const UtilitySpec& spec, double q, double capacity);

// sum U(q_i/Q) - sum U(c_i/Q)
double round_reward(const UtilitySpec& spec, std::span<const double> final_energy,
                    std::span<const double> baseline, double capacity);

// Max slope of U on a uniform sigma lattice over [sigma_min, 1]. U1's
// derivative diverges at 0, so the estimate is lattice-dependent by design.
double lipschitz_bound(const UtilitySpec& spec, double sigma_min = 0.0,
                       int lattice_points = 1000);

}  // namespace wptsim::energy
