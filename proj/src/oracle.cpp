#include "wptsim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace wptsim::oracle {

void ExpectedPowerMatrix::validate() const {
    if (n_policies < 1) throw std::invalid_argument("empty policy set");
    if (n_sensors < 1) throw std::invalid_argument("power matrix needs >= 1 sensor");
    if (values.size() != static_cast<std::size_t>(n_policies) * n_sensors) {
        throw std::invalid_argument("power matrix shape mismatch");
    }
    for (double v : values) {
        if (!(v >= -1e-12) || !(v <= 1.0 + 1e-9)) {
            throw std::invalid_argument("power matrix entries must lie in [0, 1]");
        }
    }
}

void ScheduleParams::validate() const {
    if (n_slots < 0) throw std::invalid_argument("negative slot count");
    if (!(t_u > 0.0)) throw std::invalid_argument("slot duration must be positive");
    if (static_cast<double>(n_slots) * t_u > t_c * (1.0 + 1e-12)) {
        throw ModelError("real-time charging constraint violated: n_slots * t_u exceeds t_c");
    }
    if (!(zeta >= 1.0)) throw ModelError("zeta must be >= 1");
}

namespace {

// Battery after charging with power p for one slot, then coasting through
// `remaining` uncharged slots. Uncharged decline is monotone, so the coast
// collapses to a single floored subtraction.
inline double append_and_coast(double q, double drain, double p, double t_u,
                               double capacity, int remaining) {
    double next = q - drain + p * t_u;
    if (next > capacity) next = capacity;
    if (next < 0.0) next = 0.0;
    return std::max(next - static_cast<double>(remaining) * drain, 0.0);
}

struct RoundModel {
    const ExpectedPowerMatrix& powers;
    const energy::UtilitySpec& spec;
    ScheduleParams params;
    double capacity;
    std::vector<double> drain;     // per-sensor consumption per slot
    std::vector<double> baseline;  // uncharged residual at round end

    RoundModel(const ExpectedPowerMatrix& p, std::span<const double> initial,
               const energy::UtilitySpec& s, const ScheduleParams& pr, double q)
        : powers(p), spec(s), params(pr), capacity(q) {
        powers.validate();
        params.validate();
        if (static_cast<int>(initial.size()) != powers.n_sensors) {
            throw std::invalid_argument("initial energy length mismatch");
        }
        if (!(capacity > 0.0)) throw std::invalid_argument("capacity must be positive");
        drain.reserve(initial.size());
        baseline.reserve(initial.size());
        for (double x : initial) {
            const double rate = energy::consumption_rate(x, params.zeta, params.t_c);
            drain.push_back(rate * params.t_u);
            baseline.push_back(
                energy::uncharged_residual(x, rate, params.n_slots, params.t_u));
        }
    }

    double candidate_value(std::span<const double> battery, int policy,
                           int remaining) const {
        const auto row = powers.row(policy);
        double v = 0.0;
        for (int i = 0; i < powers.n_sensors; ++i) {
            const double q = append_and_coast(battery[i], drain[i], row[i],
                                              params.t_u, capacity, remaining);
            v += spec.value(q / capacity);
        }
        return v;
    }

    // Value of stopping before the candidate slot: coast through it and the
    // remaining slots uncharged.
    double stop_value(std::span<const double> battery, int remaining) const {
        double v = 0.0;
        for (int i = 0; i < powers.n_sensors; ++i) {
            const double q = std::max(
                battery[i] - static_cast<double>(remaining + 1) * drain[i], 0.0);
            v += spec.value(q / capacity);
        }
        return v;
    }

    void commit(std::vector<double>& battery, int policy) const {
        const auto row = powers.row(policy);
        for (int i = 0; i < powers.n_sensors; ++i) {
            double next = battery[i] - drain[i] + row[i] * params.t_u;
            if (next > capacity) next = capacity;
            if (next < 0.0) next = 0.0;
            battery[i] = next;
        }
    }

    energy::RoundSchedule make_schedule(std::vector<int> slots) const {
        energy::RoundSchedule sched;
        sched.slots = std::move(slots);
        sched.slot_duration = params.t_u;
        sched.deadline = params.t_c;
        sched.validate();
        return sched;
    }
};

}  // namespace

double evaluate_schedule(const ExpectedPowerMatrix& powers, std::span<const int> slots,
                         std::span<const double> initial, const energy::UtilitySpec& spec,
                         const ScheduleParams& params, double capacity) {
    if (static_cast<int>(slots.size()) > params.n_slots) {
        throw std::invalid_argument("schedule longer than the round");
    }
    RoundModel model(powers, initial, spec, params, capacity);
    std::vector<double> battery(initial.begin(), initial.end());
    for (int policy : slots) {
        if (policy < 0 || policy >= powers.n_policies) {
            throw std::invalid_argument("policy index out of range");
        }
        model.commit(battery, policy);
    }
    const int remaining = params.n_slots - static_cast<int>(slots.size());
    double value = 0.0;
    for (int i = 0; i < powers.n_sensors; ++i) {
        const double q =
            std::max(battery[i] - static_cast<double>(remaining) * model.drain[i], 0.0);
        value += spec.value(q / capacity) - spec.value(model.baseline[i] / capacity);
    }
    return value;
}

energy::RoundSchedule gua(const ExpectedPowerMatrix& powers, std::span<const double> initial,
                          const energy::UtilitySpec& spec, const ScheduleParams& params,
                          double capacity, ExecMode mode) {
    RoundModel model(powers, initial, spec, params, capacity);
    std::vector<double> battery(initial.begin(), initial.end());
    std::vector<double> vals(powers.n_policies);
    std::vector<int> slots;
    slots.reserve(params.n_slots);

    // Fan out only when a step carries enough work to beat the fork cost.
    const bool parallel =
        mode == ExecMode::Parallel &&
        static_cast<long>(powers.n_policies) * powers.n_sensors >= 32768;

    for (int n = 1; n <= params.n_slots; ++n) {
        const int remaining = params.n_slots - n;
        if (parallel) {
#pragma omp parallel for schedule(static)
            for (int j = 0; j < powers.n_policies; ++j) {
                vals[j] = model.candidate_value(battery, j, remaining);
            }
        } else {
            for (int j = 0; j < powers.n_policies; ++j) {
                vals[j] = model.candidate_value(battery, j, remaining);
            }
        }
        int best = 0;
        for (int j = 1; j < powers.n_policies; ++j) {
            if (vals[j] > vals[best]) best = j;
        }
        slots.push_back(best);
        model.commit(battery, best);
    }
    return model.make_schedule(std::move(slots));
}

// Recomputes the prefix battery from scratch for every candidate; same
// update arithmetic as the incremental path, so outputs match bit for bit.
energy::RoundSchedule gua_serial(const ExpectedPowerMatrix& powers,
                                 std::span<const double> initial,
                                 const energy::UtilitySpec& spec,
                                 const ScheduleParams& params, double capacity) {
    RoundModel model(powers, initial, spec, params, capacity);
    std::vector<int> slots;
    slots.reserve(params.n_slots);
    std::vector<double> battery(initial.size());

    for (int n = 1; n <= params.n_slots; ++n) {
        const int remaining = params.n_slots - n;
        int best = -1;
        double best_val = 0.0;
        for (int j = 0; j < powers.n_policies; ++j) {
            std::copy(initial.begin(), initial.end(), battery.begin());
            for (int s : slots) model.commit(battery, s);
            const double v = model.candidate_value(battery, j, remaining);
            if (best < 0 || v > best_val) {
                best = j;
                best_val = v;
            }
        }
        slots.push_back(best);
    }
    return model.make_schedule(std::move(slots));
}

energy::RoundSchedule gua_lazy(const ExpectedPowerMatrix& powers,
                               std::span<const double> initial,
                               const energy::UtilitySpec& spec,
                               const ScheduleParams& params, double capacity) {
    RoundModel model(powers, initial, spec, params, capacity);
    std::vector<double> battery(initial.begin(), initial.end());

    // Per-step allowance for how much a cached value may rise when its slot
    // index advances by one: the battery is at most one drain lower, and by
    // concavity the utility gain of that slack is largest at the baseline.
    double delta = 0.0;
    for (int i = 0; i < powers.n_sensors; ++i) {
        delta += spec.value((model.baseline[i] + model.drain[i]) / capacity) -
                 spec.value(model.baseline[i] / capacity);
    }

    // Cached entries hold marginal gains, the quantity the decay argument
    // covers; absolute candidate values grow with the prefix.
    struct Entry {
        double key;  // gain - step * delta; comparable across steps
        int step;
        int policy;
    };
    struct Less {
        bool operator()(const Entry& a, const Entry& b) const {
            if (a.key != b.key) return a.key < b.key;
            return a.policy > b.policy;
        }
    };
    std::priority_queue<Entry, std::vector<Entry>, Less> queue;

    double base = model.stop_value(battery, params.n_slots - 1);
    for (int j = 0; j < powers.n_policies; ++j) {
        const double gain = model.candidate_value(battery, j, params.n_slots - 1) - base;
        queue.push({gain - 1.0 * delta, 1, j});
    }

    std::vector<int> slots;
    slots.reserve(params.n_slots);
    for (int n = 1; n <= params.n_slots; ++n) {
        const int remaining = params.n_slots - n;
        if (n > 1) base = model.stop_value(battery, remaining);
        auto recompute = [&](Entry e) {
            e.key = model.candidate_value(battery, e.policy, remaining) - base -
                    static_cast<double>(n) * delta;
            e.step = n;
            queue.push(e);
        };
        while (true) {
            Entry top = queue.top();
            queue.pop();
            if (top.step != n) {
                recompute(top);
                continue;
            }
            if (!queue.empty()) {
                const Entry& next = queue.top();
                if (top.key == next.key && next.step != n) {
                    // A stale tie could still recompute to the same gain with
                    // a lower index; settle it before committing.
                    Entry other = next;
                    queue.pop();
                    recompute(other);
                    queue.push(top);
                    continue;
                }
            }
            slots.push_back(top.policy);
            model.commit(battery, top.policy);
            queue.push(top);  // stays a candidate for later slots
            break;
        }
    }
    return model.make_schedule(std::move(slots));
}

energy::RoundSchedule gmq(const ExpectedPowerMatrix& powers, const ScheduleParams& params) {
    powers.validate();
    params.validate();
    int best = 0;
    double best_score = -1.0;
    for (int j = 0; j < powers.n_policies; ++j) {
        double score = 0.0;
        for (double v : powers.row(j)) score += v;
        if (score > best_score) {
            best_score = score;
            best = j;
        }
    }
    energy::RoundSchedule sched;
    sched.slots.assign(params.n_slots, best);
    sched.slot_duration = params.t_u;
    sched.deadline = params.t_c;
    sched.validate();
    return sched;
}

bool greedy_guarantee_condition(const energy::UtilitySpec& spec, double zeta,
                        std::span<const double> rates, double t_c, double capacity) {
    if (zeta >= 2.0) return true;
    for (double rate : rates) {
        const double hi = spec.value(zeta * rate * t_c / capacity);
        const double lo = spec.value((zeta - 1.0) * rate * t_c / capacity);
        if (hi > 2.0 * lo + 1e-12) return false;
    }
    return true;
}

std::pair<std::vector<int>, double> exhaustive_best(const ExpectedPowerMatrix& powers,
                                                    std::span<const double> initial,
                                                    const energy::UtilitySpec& spec,
                                                    const ScheduleParams& params,
                                                    double capacity) {
    powers.validate();
    double count = 1.0;
    for (int s = 0; s < params.n_slots; ++s) count *= powers.n_policies;
    if (count > static_cast<double>(1 << 22)) {
        throw std::invalid_argument("instance too large for exhaustive search");
    }

    std::vector<int> current(params.n_slots, 0);
    std::vector<int> best = current;
    double best_val = evaluate_schedule(powers, current, initial, spec, params, capacity);
    while (true) {
        int pos = params.n_slots - 1;
        while (pos >= 0 && current[pos] == powers.n_policies - 1) {
            current[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
        ++current[pos];
        const double v = evaluate_schedule(powers, current, initial, spec, params, capacity);
        if (v > best_val) {
            best_val = v;
            best = current;
        }
    }
    return {best, best_val};
}

}  // namespace wptsim::oracle
