#pragma once

#include <deque>
#include <span>
#include <vector>

#include "wptsim/energy.hpp"
#include "wptsim/oracle.hpp"
#include "wptsim/policy.hpp"
#include "wptsim/rng.hpp"

namespace wptsim::bandit {

// Fade-free pattern factors: pattern(l, m, i) is the array-factor value of
// codeword m at sensor i's bearing from location l. Ratios between codewords
// at the same location are fade- and distance-independent, which is what
// lets one observation reveal every codeword at that location.
struct SharingModel {
    int n_locations = 0;
    int n_codewords = 0;
    int n_sensors = 0;
    std::vector<double> pattern;  // [l][m][i]

    double at(int l, int m, int i) const {
        return pattern[(static_cast<std::size_t>(l) * n_codewords + m) * n_sensors + i];
    }
    PolicySet policies() const { return {n_locations, n_codewords}; }
};

// Per-policy pull counts and per-(policy, sensor) empirical means of the
// clamped normalized observations.
struct ArmStats {
    int n_policies = 0;
    int n_sensors = 0;
    std::vector<long long> pulls;      // per policy, one per observed slot
    std::vector<long long> obs_count;  // per (policy, sensor)
    std::vector<double> obs_sum;       // per (policy, sensor)

    ArmStats() = default;
    ArmStats(int policies, int sensors)
        : n_policies(policies),
          n_sensors(sensors),
          pulls(policies, 0),
          obs_count(static_cast<std::size_t>(policies) * sensors, 0),
          obs_sum(static_cast<std::size_t>(policies) * sensors, 0.0) {}

    double mean(int policy, int sensor) const {
        const auto k = static_cast<std::size_t>(policy) * n_sensors + sensor;
        return obs_count[k] > 0 ? obs_sum[k] / static_cast<double>(obs_count[k]) : 0.0;
    }
};

// One charging slot's feedback: the policy that was played and the
// unclamped normalized power each sensor saw.
struct SlotObservation {
    int policy = -1;
    std::vector<double> per_sensor;
};

// Folds a round of feedback into the statistics. With sharing on, every
// codeword at a played slot's location absorbs that slot's implied
// observation through the known pattern ratios; recorded values clamp to 1.
void update(ArmStats& stats, const energy::RoundSchedule& schedule,
            std::span<const SlotObservation> observations, bool share_by_location,
            const SharingModel& model);

struct BanditContext {
    long round = 1;                       // t, starting at 1
    std::vector<double> initial_energy;   // X_t
};

// min(mean + sqrt(3 ln t / (2 T_j)), 1); unexplored policies get 1.
double ucb_estimate(const ArmStats& stats, int policy, int sensor, double t);

// Greedy schedule on the optimistic power estimates.
energy::RoundSchedule umcb_select(const ArmStats& stats, const BanditContext& ctx,
                                  const energy::UtilitySpec& spec,
                                  const oracle::ScheduleParams& params, double capacity,
                                  oracle::ExecMode mode = oracle::ExecMode::Parallel);

// Sliding-window statistics: counts and means cover only the trailing
// `window` rounds. Aggregates are rebuilt from the per-round records in a
// fixed order every round, so they equal a from-scratch recomputation
// exactly.
class SlidingStats {
  public:
    SlidingStats(int n_policies, int n_sensors, long window);

    void push_round(const energy::RoundSchedule& schedule,
                    std::span<const SlotObservation> observations, bool share_by_location,
                    const SharingModel& model);

    const ArmStats& stats() const { return window_stats_; }
    long window() const { return window_; }

  private:
    struct PolicyAggregate {
        int policy = 0;
        long long count = 0;            // observed slots this round
        std::vector<double> sums;       // per sensor
        std::vector<long long> counts;  // per sensor
    };

    long window_;
    std::deque<std::vector<PolicyAggregate>> history_;
    ArmStats window_stats_;
    void rebuild();
};

// min(ceil(sqrt(T/V)), T); a stationary horizon (V = 0) keeps everything.
long window_size(long t_horizon, double variation);

// Per slot: explore a uniform random policy with probability epsilon0, else
// exploit the best marginal-gain policy on the empirical means.
energy::RoundSchedule eg_select(const ArmStats& stats, const BanditContext& ctx,
                                double epsilon0, rng::Stream& rng,
                                const energy::UtilitySpec& spec,
                                const oracle::ScheduleParams& params, double capacity);

struct RegretLedger {
    std::vector<double> reward;
    std::vector<double> comparator_greedy;  // realized reward of the
                                            // true-means greedy schedule
    std::vector<double> comparator_ub;      // certified continuous bound

    void push(double r, double r_greedy, double r_ub);
    std::size_t rounds() const { return reward.size(); }
};

inline constexpr double kDefaultAlpha = 0.5 - 0.5 / 2.718281828459045235360287;

// Cumulative alpha * sum(comparator) - sum(reward); may go negative.
std::vector<double> alpha_regret(const RegretLedger& ledger, double alpha = kDefaultAlpha);

// Cumulative sum(ub - reward).
std::vector<double> ub_regret(const RegretLedger& ledger);

struct VariationMetrics {
    long d_changes = 1;   // 1 + number of rounds whose mean vector changed
    double v_total = 0.0; // sum of max-norm round-to-round differences
};

VariationMetrics variation_metrics(std::span<const std::vector<double>> mean_history);

}  // namespace wptsim::bandit
