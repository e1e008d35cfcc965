#include "wptsim/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wptsim::bandit {

namespace {

constexpr double kPatternFloor = 1e-15;

// Scatter one slot's feedback into per-policy accumulators. `sink` receives
// (policy, sensor, clamped value) plus a per-policy slot count.
template <typename CountFn, typename ValueFn>
void scatter_slot(const SlotObservation& obs, bool share_by_location,
                  const SharingModel& model, CountFn&& count, ValueFn&& value) {
    const PolicySet set = model.policies();
    const Policy played = set.at(obs.policy);
    const int m_from = share_by_location ? 0 : played.codeword;
    const int m_to = share_by_location ? model.n_codewords - 1 : played.codeword;
    for (int m = m_from; m <= m_to; ++m) {
        const int target = set.index_of(played.location, m);
        count(target);
        for (int i = 0; i < model.n_sensors; ++i) {
            if (m == played.codeword) {
                value(target, i, std::min(obs.per_sensor[i], 1.0));
                continue;
            }
            const double af_played = model.at(played.location, played.codeword, i);
            if (af_played < kPatternFloor) continue;  // fade not recoverable
            const double ratio = model.at(played.location, m, i) / af_played;
            value(target, i, std::min(obs.per_sensor[i] * ratio, 1.0));
        }
    }
}

void check_round_shape(const energy::RoundSchedule& schedule,
                       std::span<const SlotObservation> observations,
                       const SharingModel& model) {
    if (observations.size() != schedule.slots.size()) {
        throw std::invalid_argument("observation count does not match schedule length");
    }
    for (std::size_t s = 0; s < observations.size(); ++s) {
        if (observations[s].policy != schedule.slots[s]) {
            throw std::invalid_argument("observation policy does not match schedule");
        }
        if (static_cast<int>(observations[s].per_sensor.size()) != model.n_sensors) {
            throw std::invalid_argument("observation sensor count mismatch");
        }
    }
}

}  // namespace

void update(ArmStats& stats, const energy::RoundSchedule& schedule,
            std::span<const SlotObservation> observations, bool share_by_location,
            const SharingModel& model) {
    check_round_shape(schedule, observations, model);
    if (stats.n_policies != model.policies().size() || stats.n_sensors != model.n_sensors) {
        throw std::invalid_argument("stats shape does not match the sharing model");
    }
    for (const auto& obs : observations) {
        scatter_slot(
            obs, share_by_location, model, [&](int j) { stats.pulls[j] += 1; },
            [&](int j, int i, double v) {
                const auto k = static_cast<std::size_t>(j) * stats.n_sensors + i;
                stats.obs_sum[k] += v;
                stats.obs_count[k] += 1;
            });
    }
}

double ucb_estimate(const ArmStats& stats, int policy, int sensor, double t) {
    if (!(t >= 1.0)) throw std::invalid_argument("round index must be >= 1");
    const long long n = stats.pulls[policy];
    if (n == 0) return 1.0;
    const double radius = std::sqrt(3.0 * std::log(t) / (2.0 * static_cast<double>(n)));
    return std::min(stats.mean(policy, sensor) + radius, 1.0);
}

energy::RoundSchedule umcb_select(const ArmStats& stats, const BanditContext& ctx,
                                  const energy::UtilitySpec& spec,
                                  const oracle::ScheduleParams& params, double capacity,
                                  oracle::ExecMode mode) {
    oracle::ExpectedPowerMatrix estimates;
    estimates.n_policies = stats.n_policies;
    estimates.n_sensors = stats.n_sensors;
    estimates.values.resize(static_cast<std::size_t>(stats.n_policies) * stats.n_sensors);
    const auto t = static_cast<double>(ctx.round);
    for (int j = 0; j < stats.n_policies; ++j) {
        for (int i = 0; i < stats.n_sensors; ++i) {
            estimates.values[static_cast<std::size_t>(j) * stats.n_sensors + i] =
                ucb_estimate(stats, j, i, t);
        }
    }
    return oracle::gua(estimates, ctx.initial_energy, spec, params, capacity, mode);
}

SlidingStats::SlidingStats(int n_policies, int n_sensors, long window)
    : window_(window), window_stats_(n_policies, n_sensors) {
    if (window_ < 1) throw std::invalid_argument("window must be >= 1");
}

void SlidingStats::push_round(const energy::RoundSchedule& schedule,
                              std::span<const SlotObservation> observations,
                              bool share_by_location, const SharingModel& model) {
    check_round_shape(schedule, observations, model);
    const int n_policies = model.policies().size();
    const int n_sensors = model.n_sensors;

    std::vector<long long> counts(n_policies, 0);
    std::vector<std::vector<double>> sums(n_policies);
    std::vector<std::vector<long long>> per_sensor_counts(n_policies);
    for (const auto& obs : observations) {
        scatter_slot(
            obs, share_by_location, model,
            [&](int j) {
                if (sums[j].empty()) {
                    sums[j].assign(n_sensors, 0.0);
                    per_sensor_counts[j].assign(n_sensors, 0);
                }
                counts[j] += 1;
            },
            [&](int j, int i, double v) {
                sums[j][i] += v;
                per_sensor_counts[j][i] += 1;
            });
    }

    std::vector<PolicyAggregate> round;
    for (int j = 0; j < n_policies; ++j) {
        if (counts[j] == 0) continue;
        PolicyAggregate agg;
        agg.policy = j;
        agg.count = counts[j];
        agg.sums = std::move(sums[j]);
        agg.counts = std::move(per_sensor_counts[j]);
        round.push_back(std::move(agg));
    }
    history_.push_back(std::move(round));
    while (static_cast<long>(history_.size()) > window_) history_.pop_front();
    rebuild();
}

void SlidingStats::rebuild() {
    std::fill(window_stats_.pulls.begin(), window_stats_.pulls.end(), 0);
    std::fill(window_stats_.obs_sum.begin(), window_stats_.obs_sum.end(), 0.0);
    std::fill(window_stats_.obs_count.begin(), window_stats_.obs_count.end(), 0);
    const int n_sensors = window_stats_.n_sensors;
    for (const auto& round : history_) {
        for (const auto& agg : round) {
            window_stats_.pulls[agg.policy] += agg.count;
            for (int i = 0; i < n_sensors; ++i) {
                const auto k = static_cast<std::size_t>(agg.policy) * n_sensors + i;
                window_stats_.obs_sum[k] += agg.sums[i];
                window_stats_.obs_count[k] += agg.counts[i];
            }
        }
    }
}

long window_size(long t_horizon, double variation) {
    if (t_horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    if (!(variation > 0.0)) return t_horizon;
    const double w = std::ceil(std::sqrt(static_cast<double>(t_horizon) / variation));
    return std::min(std::max(static_cast<long>(w), 1L), t_horizon);
}

energy::RoundSchedule eg_select(const ArmStats& stats, const BanditContext& ctx,
                                double epsilon0, rng::Stream& rng,
                                const energy::UtilitySpec& spec,
                                const oracle::ScheduleParams& params, double capacity) {
    if (epsilon0 < 0.0 || epsilon0 > 1.0) {
        throw std::invalid_argument("epsilon0 must lie in [0, 1]");
    }
    params.validate();
    const int n_policies = stats.n_policies;
    const int n_sensors = stats.n_sensors;
    if (static_cast<int>(ctx.initial_energy.size()) != n_sensors) {
        throw std::invalid_argument("context energy length mismatch");
    }

    std::vector<double> drain(n_sensors);
    std::vector<double> battery = ctx.initial_energy;
    for (int i = 0; i < n_sensors; ++i) {
        const double rate =
            energy::consumption_rate(ctx.initial_energy[i], params.zeta, params.t_c);
        drain[i] = rate * params.t_u;
    }

    // Same append-and-coast marginal arithmetic as the greedy scheduler.
    auto candidate_value = [&](int j, int remaining) {
        double v = 0.0;
        for (int i = 0; i < n_sensors; ++i) {
            double next = battery[i] - drain[i] + stats.mean(j, i) * params.t_u;
            if (next > capacity) next = capacity;
            if (next < 0.0) next = 0.0;
            const double q = std::max(next - static_cast<double>(remaining) * drain[i], 0.0);
            v += spec.value(q / capacity);
        }
        return v;
    };

    energy::RoundSchedule sched;
    sched.slot_duration = params.t_u;
    sched.deadline = params.t_c;
    sched.slots.reserve(params.n_slots);
    for (int n = 1; n <= params.n_slots; ++n) {
        const int remaining = params.n_slots - n;
        int pick;
        if (rng.next_double() < epsilon0) {
            pick = rng.uniform_int(n_policies);
        } else {
            pick = 0;
            double best = candidate_value(0, remaining);
            for (int j = 1; j < n_policies; ++j) {
                const double v = candidate_value(j, remaining);
                if (v > best) {
                    best = v;
                    pick = j;
                }
            }
        }
        sched.slots.push_back(pick);
        for (int i = 0; i < n_sensors; ++i) {
            double next = battery[i] - drain[i] + stats.mean(pick, i) * params.t_u;
            if (next > capacity) next = capacity;
            if (next < 0.0) next = 0.0;
            battery[i] = next;
        }
    }
    sched.validate();
    return sched;
}

void RegretLedger::push(double r, double r_greedy, double r_ub) {
    reward.push_back(r);
    comparator_greedy.push_back(r_greedy);
    comparator_ub.push_back(r_ub);
}

std::vector<double> alpha_regret(const RegretLedger& ledger, double alpha) {
    if (ledger.comparator_greedy.size() != ledger.reward.size()) {
        throw std::invalid_argument("ledger comparator series length mismatch");
    }
    std::vector<double> out;
    out.reserve(ledger.reward.size());
    double cum = 0.0;
    for (std::size_t t = 0; t < ledger.reward.size(); ++t) {
        cum += alpha * ledger.comparator_greedy[t] - ledger.reward[t];
        out.push_back(cum);
    }
    return out;
}

std::vector<double> ub_regret(const RegretLedger& ledger) {
    if (ledger.comparator_ub.size() != ledger.reward.size()) {
        throw std::invalid_argument("ledger comparator series length mismatch");
    }
    std::vector<double> out;
    out.reserve(ledger.reward.size());
    double cum = 0.0;
    for (std::size_t t = 0; t < ledger.reward.size(); ++t) {
        cum += ledger.comparator_ub[t] - ledger.reward[t];
        out.push_back(cum);
    }
    return out;
}

VariationMetrics variation_metrics(std::span<const std::vector<double>> mean_history) {
    if (mean_history.empty()) {
        throw std::invalid_argument("mean history must not be empty");
    }
    VariationMetrics metrics;
    for (std::size_t t = 1; t < mean_history.size(); ++t) {
        if (mean_history[t].size() != mean_history[t - 1].size()) {
            throw std::invalid_argument("mean history rows differ in length");
        }
        double max_diff = 0.0;
        for (std::size_t k = 0; k < mean_history[t].size(); ++k) {
            max_diff = std::max(max_diff,
                                std::abs(mean_history[t][k] - mean_history[t - 1][k]));
        }
        if (max_diff > 0.0) metrics.d_changes += 1;
        metrics.v_total += max_diff;
    }
    return metrics;
}

}  // namespace wptsim::bandit
