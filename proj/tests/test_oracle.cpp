#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "wptsim/oracle.hpp"
#include "wptsim/rng.hpp"

using namespace wptsim;
using namespace wptsim::oracle;

namespace {

ExpectedPowerMatrix matrix(int policies, int sensors, std::vector<double> values) {
    ExpectedPowerMatrix m;
    m.n_policies = policies;
    m.n_sensors = sensors;
    m.values = std::move(values);
    return m;
}

struct Instance {
    ExpectedPowerMatrix powers;
    std::vector<double> initial;
    ScheduleParams params;
    double capacity = 1.0;
};

Instance random_instance(rng::Stream& stream, int max_sensors, int max_policies,
                         int max_slots) {
    Instance inst;
    const int n = 1 + stream.uniform_int(max_sensors);
    const int g = 1 + stream.uniform_int(max_policies);
    const int slots = 1 + stream.uniform_int(max_slots);
    inst.powers.n_policies = g;
    inst.powers.n_sensors = n;
    inst.powers.values.resize(static_cast<std::size_t>(g) * n);
    for (auto& v : inst.powers.values) v = stream.next_double();
    inst.initial.resize(n);
    for (auto& x : inst.initial) x = stream.uniform(0.05, 0.3);
    inst.params = {slots, 1.0, static_cast<double>(slots), 2.0};
    return inst;
}

}  // namespace

TEST_CASE("greedy scheduler basics") {
    const auto spec = energy::UtilitySpec::u1(1);
    SUBCASE("single policy fills every slot") {
        const auto m = matrix(1, 1, {0.4});
        const ScheduleParams params{3, 1.0, 3.0, 2.0};
        const auto sched = gua(m, std::vector<double>{0.2}, spec, params, 1.0);
        CHECK(sched.slots == std::vector<int>{0, 0, 0});
    }
    SUBCASE("diminishing returns favor the starving sensor") {
        // policy 0 feeds only the low sensor, policy 1 only the high one
        const auto m = matrix(2, 2, {0.3, 0.0, 0.0, 0.3});
        const auto spec2 = energy::UtilitySpec::u1(2);
        const ScheduleParams params{1, 1.0, 1.0, 2.0};
        const auto sched = gua(m, std::vector<double>{0.1, 0.9}, spec2, params, 1.0);
        CHECK(sched.slots == std::vector<int>{0});
    }
    SUBCASE("empty policy set throws") {
        ExpectedPowerMatrix empty;
        empty.n_sensors = 1;
        CHECK_THROWS_AS(gua(empty, std::vector<double>{0.1}, spec, {1, 1.0, 1.0, 2.0}, 1.0),
                        std::invalid_argument);
    }
}

TEST_CASE("greedy approximation on exhaustively solvable instances") {
    auto stream = rng::substream(31, rng::Purpose::Instance);
    constexpr double kFloor = 0.3161;
    for (int k = 0; k < 50; ++k) {
        Instance inst = random_instance(stream, 3, 4, 4);
        const auto spec = energy::UtilitySpec::u1(inst.powers.n_sensors);
        const auto sched = gua(inst.powers, inst.initial, spec, inst.params, inst.capacity);
        const double greedy_val = evaluate_schedule(inst.powers, sched.slots, inst.initial,
                                                    spec, inst.params, inst.capacity);
        const auto [best, opt] =
            exhaustive_best(inst.powers, inst.initial, spec, inst.params, inst.capacity);
        CHECK(greedy_val >= kFloor * opt - 1e-9);
        CHECK(greedy_val <= opt + 1e-9);
    }
}

TEST_CASE("greedy value is monotone along the trajectory") {
    auto stream = rng::substream(31, rng::Purpose::Instance, 1);
    for (int k = 0; k < 30; ++k) {
        Instance inst = random_instance(stream, 3, 4, 4);
        const auto spec = energy::UtilitySpec::u1(inst.powers.n_sensors);
        const auto sched = gua(inst.powers, inst.initial, spec, inst.params, inst.capacity);
        double prev = 0.0;
        for (std::size_t len = 1; len <= sched.slots.size(); ++len) {
            const std::vector<int> prefix(sched.slots.begin(), sched.slots.begin() + len);
            const double v = evaluate_schedule(inst.powers, prefix, inst.initial, spec,
                                               inst.params, inst.capacity);
            CHECK(v >= prev - 1e-12);
            prev = v;
        }
    }
}

TEST_CASE("serial, parallel and lazy greedy are identical") {
    auto stream = rng::substream(31, rng::Purpose::Instance, 2);
    for (int k = 0; k < 100; ++k) {
        Instance inst = random_instance(stream, 3, 6, 5);
        const auto spec = energy::UtilitySpec::u1(inst.powers.n_sensors);
        const auto a = gua(inst.powers, inst.initial, spec, inst.params, inst.capacity,
                           ExecMode::Parallel);
        const auto b = gua_serial(inst.powers, inst.initial, spec, inst.params,
                                  inst.capacity);
        const auto c = gua_lazy(inst.powers, inst.initial, spec, inst.params,
                                inst.capacity);
        CHECK(a.slots == b.slots);
        CHECK(a.slots == c.slots);
    }
    SUBCASE("uniform-optimism ties resolve identically") {
        const auto m = matrix(4, 2, std::vector<double>(8, 1.0));
        const auto spec = energy::UtilitySpec::u1(2);
        const ScheduleParams params{4, 1.0, 4.0, 2.0};
        const std::vector<double> x = {0.1, 0.2};
        const auto a = gua(m, x, spec, params, 1.0);
        const auto c = gua_lazy(m, x, spec, params, 1.0);
        CHECK(a.slots == std::vector<int>(4, 0));
        CHECK(a.slots == c.slots);
    }
}

TEST_CASE("received-energy greedy") {
    const ScheduleParams params{3, 1.0, 3.0, 2.0};
    SUBCASE("dominant policy wins every slot") {
        const auto m = matrix(3, 2, {0.1, 0.1, 0.4, 0.5, 0.2, 0.1});
        const auto sched = gmq(m, params);
        CHECK(sched.slots == std::vector<int>{1, 1, 1});
    }
    SUBCASE("ties break to the lowest index") {
        const auto m = matrix(3, 1, {0.5, 0.5, 0.2});
        const auto sched = gmq(m, params);
        CHECK(sched.slots == std::vector<int>{0, 0, 0});
    }
    SUBCASE("a nearly full sensor next to the strongest beam wastes energy") {
        // policy 0 blasts sensor 0 (nearly full); policy 1 serves sensor 1
        const auto m = matrix(2, 2, {1.0, 0.0, 0.0, 0.45});
        const auto spec = energy::UtilitySpec::u1(2);
        const std::vector<double> x = {0.95, 0.1};
        const auto g = gua(m, x, spec, params, 1.0);
        const auto q = gmq(m, params);
        const double g_val = evaluate_schedule(m, g.slots, x, spec, params, 1.0);
        const double q_val = evaluate_schedule(m, q.slots, x, spec, params, 1.0);
        CHECK(q.slots == std::vector<int>{0, 0, 0});
        CHECK(g_val > q_val);
    }
}

TEST_CASE("schedule evaluation matches the slot simulator") {
    auto stream = rng::substream(31, rng::Purpose::Instance, 3);
    for (int k = 0; k < 50; ++k) {
        Instance inst = random_instance(stream, 3, 4, 4);
        const auto spec = energy::UtilitySpec::u1(inst.powers.n_sensors);
        const auto sched = gua(inst.powers, inst.initial, spec, inst.params, inst.capacity);

        std::vector<energy::SensorState> states(inst.powers.n_sensors);
        std::vector<double> powers(static_cast<std::size_t>(inst.params.n_slots) *
                                   inst.powers.n_sensors);
        for (int i = 0; i < inst.powers.n_sensors; ++i) {
            states[i].capacity = inst.capacity;
            states[i].energy = inst.initial[i];
            states[i].consumption_rate = energy::consumption_rate(
                inst.initial[i], inst.params.zeta, inst.params.t_c);
        }
        for (int s = 0; s < inst.params.n_slots; ++s) {
            for (int i = 0; i < inst.powers.n_sensors; ++i) {
                powers[static_cast<std::size_t>(s) * inst.powers.n_sensors + i] =
                    inst.powers.at(sched.slots[s], i);
            }
        }
        const auto res = energy::simulate_round(states, sched, powers);
        const double direct =
            energy::round_reward(spec, res.final_energy, res.baseline, inst.capacity);
        const double via_eval = evaluate_schedule(inst.powers, sched.slots, inst.initial,
                                                  spec, inst.params, inst.capacity);
        CHECK(via_eval == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("approximation-guarantee condition") {
    const auto u1 = energy::UtilitySpec::u1(1);
    const std::vector<double> rates = {0.05, 0.1};
    SUBCASE("zeta >= 2 short-circuits") {
        CHECK(greedy_guarantee_condition(u1, 2.0, rates, 10.0, 1.0));
        CHECK(greedy_guarantee_condition(u1, 3.5, rates, 10.0, 1.0));
    }
    SUBCASE("sqrt utility: doubling condition flips around zeta = 4/3") {
        CHECK(greedy_guarantee_condition(u1, 1.5, rates, 1.0, 1.0));
        CHECK_FALSE(greedy_guarantee_condition(u1, 1.2, rates, 1.0, 1.0));
    }
    SUBCASE("constant-zero utility passes at zeta = 1") {
        const auto zero = energy::UtilitySpec::table({0.0, 0.0}, 1);
        CHECK(greedy_guarantee_condition(zero, 1.0, rates, 1.0, 1.0));
    }
}

TEST_CASE("continuous relaxation solver") {
    SUBCASE("one policy takes the whole budget") {
        const auto m = matrix(1, 1, {0.5});
        const auto spec = energy::UtilitySpec::u1(1);
        const double t_c = 1.0;
        const auto res = upper_bound_p1(m, std::vector<double>{0.2}, spec, 1.0, t_c, 2.0);
        REQUIRE(res.allocation.t.size() == 1);
        CHECK(res.allocation.t[0] == doctest::Approx(1.0).epsilon(1e-6));
        const double residual = 0.2 - 0.2 / 2.0;
        const double expected = spec.value(residual + 0.5) - spec.value(residual);
        CHECK(res.objective == doctest::Approx(expected).epsilon(1e-6));
        CHECK(res.upper_bound >= res.objective);
    }
    SUBCASE("symmetric two-by-two splits the budget evenly") {
        const auto m = matrix(2, 2, {0.5, 0.0, 0.0, 0.5});
        const auto spec = energy::UtilitySpec::u1(2);
        const auto res = upper_bound_p1(m, std::vector<double>{0.2, 0.2}, spec, 1.0, 2.0,
                                        2.0);
        CHECK(std::abs(res.allocation.t[0] - res.allocation.t[1]) <= 2e-3 * 2.0);
        CHECK(res.allocation.t[0] + res.allocation.t[1] <= 2.0 + 1e-9);
    }
    SUBCASE("objective is monotone in the budget and the powers") {
        auto stream = rng::substream(31, rng::Purpose::Instance, 4);
        const auto spec = energy::UtilitySpec::u1(2);
        for (int k = 0; k < 20; ++k) {
            auto m = matrix(3, 2, {});
            m.values.resize(6);
            for (auto& v : m.values) v = stream.uniform(0.1, 1.0);
            const std::vector<double> x = {stream.uniform(0.1, 0.4),
                                           stream.uniform(0.1, 0.4)};
            const auto base = upper_bound_p1(m, x, spec, 1.0, 2.0, 2.0);
            const auto longer = upper_bound_p1(m, x, spec, 1.0, 2.5, 2.0);
            CHECK(longer.objective >= base.objective - 1e-6 * std::abs(base.objective));
            auto boosted = m;
            boosted.values[0] = std::min(1.0, boosted.values[0] + 0.2);
            const auto better = upper_bound_p1(boosted, x, spec, 1.0, 2.0, 2.0);
            CHECK(better.objective >= base.objective - 1e-6 * std::abs(base.objective));
        }
    }
    SUBCASE("certified bound dominates the discrete greedy") {
        auto stream = rng::substream(31, rng::Purpose::Instance, 5);
        for (int k = 0; k < 30; ++k) {
            Instance inst = random_instance(stream, 3, 4, 4);
            const auto spec = energy::UtilitySpec::u1(inst.powers.n_sensors);
            const auto sched =
                gua(inst.powers, inst.initial, spec, inst.params, inst.capacity);
            const double g = evaluate_schedule(inst.powers, sched.slots, inst.initial,
                                               spec, inst.params, inst.capacity);
            const auto p1 = upper_bound_p1(inst.powers, inst.initial, spec, inst.capacity,
                                           inst.params.t_c, inst.params.zeta);
            CHECK(g <= p1.upper_bound + 1e-9 * std::max(1.0, p1.upper_bound));
        }
    }
}

TEST_CASE("exhaustive search agrees with direct enumeration on a toy case") {
    // one sensor, two policies, one slot: picking the stronger policy wins
    const auto m = matrix(2, 1, {0.2, 0.6});
    const auto spec = energy::UtilitySpec::u1(1);
    const ScheduleParams params{1, 1.0, 1.0, 2.0};
    const auto [sched, value] = exhaustive_best(m, std::vector<double>{0.1}, spec, params,
                                                1.0);
    CHECK(sched == std::vector<int>{1});
    const double residual = 0.1 - 0.05;
    CHECK(value == doctest::Approx(spec.value(residual + 0.6) - spec.value(residual)));
}
