#pragma once

#include <span>
#include <utility>
#include <vector>

#include "wptsim/energy.hpp"

namespace wptsim::oracle {

// Expected per-slot charging power of every sensor under every policy,
// normalized so entries lie in [0, 1].
struct ExpectedPowerMatrix {
    int n_policies = 0;
    int n_sensors = 0;
    std::vector<double> values;  // [policy * n_sensors + sensor]

    double at(int policy, int sensor) const {
        return values[static_cast<std::size_t>(policy) * n_sensors + sensor];
    }
    std::span<const double> row(int policy) const {
        return {values.data() + static_cast<std::size_t>(policy) * n_sensors,
                static_cast<std::size_t>(n_sensors)};
    }
    void validate() const;  // shape and [0,1] entries
};

struct ScheduleParams {
    int n_slots = 0;
    double t_u = 1.0;
    double t_c = 0.0;
    double zeta = 2.0;

    void validate() const;
};

enum class ExecMode { Serial, Parallel };

// Round value of a fixed schedule evaluated on expected powers with the
// battery cap enforced after every slot. Consumption follows the
// x/(zeta*t_c) law.
double evaluate_schedule(const ExpectedPowerMatrix& powers, std::span<const int> slots,
                         std::span<const double> initial, const energy::UtilitySpec& spec,
                         const ScheduleParams& params, double capacity);

// Greedy utility scheduler: fills slots in order, each step picking the
// policy with the largest marginal round-value increase. Ties go to the
// lowest policy index. Parallel mode scans candidates with OpenMP and is
// bit-identical to serial.
energy::RoundSchedule gua(const ExpectedPowerMatrix& powers, std::span<const double> initial,
                          const energy::UtilitySpec& spec, const ScheduleParams& params,
                          double capacity, ExecMode mode = ExecMode::Parallel);

// Plain reference implementation kept for differential testing.
energy::RoundSchedule gua_serial(const ExpectedPowerMatrix& powers,
                                 std::span<const double> initial,
                                 const energy::UtilitySpec& spec,
                                 const ScheduleParams& params, double capacity);

// Lazy-evaluation variant with cached marginal gains. Cached bounds decay by
// submodularity as the prefix grows but can rise as the slot index advances
// (a later slot sees a lower battery, so the cap wastes less); each cached
// bound is therefore inflated by a per-step allowance that dominates the
// rise. Output is identical to gua whenever per-slot consumption cannot
// deplete a sensor mid-round, which the zeta >= 1 law guarantees.
energy::RoundSchedule gua_lazy(const ExpectedPowerMatrix& powers,
                               std::span<const double> initial,
                               const energy::UtilitySpec& spec,
                               const ScheduleParams& params, double capacity);

// Received-energy greedy: every slot takes argmax_j sum_i p_ij, ignoring
// battery caps and utility. Ties go to the lowest index.
energy::RoundSchedule gmq(const ExpectedPowerMatrix& powers, const ScheduleParams& params);

// Approximation-guarantee precondition: zeta >= 2, or the utility does not
// more than double between (zeta-1)*rate*t_c and zeta*rate*t_c for any
// sensor.
bool greedy_guarantee_condition(const energy::UtilitySpec& spec, double zeta,
                        std::span<const double> rates, double t_c, double capacity);

struct ContinuousAllocation {
    std::vector<double> t;  // per-policy charging time, t >= 0, sum <= t_c
};

struct P1Result {
    ContinuousAllocation allocation;
    double objective = 0.0;    // value at the returned allocation
    double upper_bound = 0.0;  // objective plus certified duality gap
    double gap = 0.0;
    int iterations = 0;
};

// Continuous relaxation: real-valued charging times on the scaled simplex
// {t >= 0, sum t <= t_c} with the battery cap removed. Solved by an
// away-step conditional-gradient method to a relative duality gap of 1e-6
// (or 1e4 iterations); the gap certifies upper_bound >= optimum.
P1Result upper_bound_p1(const ExpectedPowerMatrix& powers, std::span<const double> initial,
                        const energy::UtilitySpec& spec, double capacity, double t_c,
                        double zeta);

// Exact optimum by enumerating every policy sequence. Test-scale only;
// throws when the instance exceeds ~2^22 schedules.
std::pair<std::vector<int>, double> exhaustive_best(const ExpectedPowerMatrix& powers,
                                                    std::span<const double> initial,
                                                    const energy::UtilitySpec& spec,
                                                    const ScheduleParams& params,
                                                    double capacity);

}  // namespace wptsim::oracle
