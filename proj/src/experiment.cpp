#include "wptsim/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>

namespace wptsim::harness {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct AlgorithmState {
    std::string name;
    bandit::ArmStats stats;                      // umcb, eg
    std::unique_ptr<bandit::SlidingStats> sw;    // umcb_sw
    bandit::RegretLedger ledger;
    std::vector<double> alpha_cum;
    std::vector<double> ub_cum;
};

struct RealizedRound {
    std::vector<double> powers;  // n_slots x n_sensors, unclamped normalized
    std::vector<bandit::SlotObservation> observations;
};

RealizedRound realize(const Scenario& sc, const energy::RoundSchedule& schedule,
                      long round, std::span<const double> gains) {
    const int n = sc.cfg.n_sensors;
    const int n_slots = schedule.n_slots();
    RealizedRound out;
    out.powers.resize(static_cast<std::size_t>(n_slots) * n);
    out.observations.resize(n_slots);
    for (int s = 0; s < n_slots; ++s) {
        const Policy pol = sc.policies.at(schedule.slots[s]);
        auto& obs = out.observations[s];
        obs.policy = pol.index;
        obs.per_sensor.resize(n);
        for (int i = 0; i < n; ++i) {
            auto fade = rng::substream(sc.cfg.seed, rng::Purpose::Fade,
                                       static_cast<std::uint64_t>(round),
                                       static_cast<std::uint64_t>(s),
                                       static_cast<std::uint64_t>(pol.location),
                                       static_cast<std::uint64_t>(i));
            const double p = sc.realized_power(pol.location, pol.codeword, i, gains[i],
                                               fade.exp1());
            out.powers[static_cast<std::size_t>(s) * n + i] = p;
            obs.per_sensor[i] = p;
        }
    }
    return out;
}

std::vector<energy::SensorState> make_states(const Scenario& sc,
                                             std::span<const double> norm_energy,
                                             const oracle::ScheduleParams& params) {
    std::vector<energy::SensorState> states(sc.cfg.n_sensors);
    for (int i = 0; i < sc.cfg.n_sensors; ++i) {
        states[i].position = sc.sensor_pos[i];
        states[i].capacity = sc.norm_capacity;
        states[i].energy = norm_energy[i];
        states[i].consumption_rate =
            energy::consumption_rate(norm_energy[i], params.zeta, params.t_c);
        states[i].antenna_gain = sc.initial_gains[i];
    }
    return states;
}

}  // namespace

std::vector<double> generate_context(const ScenarioConfig& cfg, rng::Stream& stream) {
    std::vector<double> energy(cfg.n_sensors);
    for (auto& x : energy) {
        x = stream.uniform_open0(cfg.context_fraction * cfg.q_capacity);
    }
    return energy;
}

double AlgorithmTrace::mean_reward_tail(std::size_t tail_rounds) const {
    if (ledger.reward.empty() || tail_rounds == 0) return 0.0;
    const std::size_t n = std::min(tail_rounds, ledger.reward.size());
    double sum = 0.0;
    for (std::size_t t = ledger.reward.size() - n; t < ledger.reward.size(); ++t) {
        sum += ledger.reward[t];
    }
    return sum / static_cast<double>(n);
}

const AlgorithmTrace& RunResult::trace(const std::string& name) const {
    for (const auto& a : algorithms) {
        if (a.name == name) return a;
    }
    throw std::invalid_argument("no trace for algorithm '" + name + "'");
}

RunResult run_experiment(const ScenarioConfig& cfg) {
    const auto t_start = std::chrono::steady_clock::now();
    const Scenario sc = Scenario::build(cfg);
    const auto params = sc.schedule_params();
    const auto spec = cfg.utility == energy::UtilityKind::U1
                          ? energy::UtilitySpec::u1(cfg.n_sensors)
                          : energy::UtilitySpec::u2(cfg.n_sensors);
    const double alpha = cfg.alpha > 0.0 ? cfg.alpha : bandit::kDefaultAlpha;
    const double q_norm = sc.norm_capacity;

    {
        std::vector<std::string> names = cfg.algorithms;
        std::sort(names.begin(), names.end());
        if (std::adjacent_find(names.begin(), names.end()) != names.end()) {
            throw ConfigError("duplicate algorithm in config");
        }
    }

    // Gain path and variation are a pure function of (seed, round), so the
    // window can be sized up front from the drift the run will actually see.
    std::vector<std::vector<double>> gain_path;  // per round, rounds 1..T
    double variation = 0.0;
    if (cfg.nonstationary) {
        channel::AntennaGainState gs{sc.initial_gains, sc.initial_gains, cfg.drift_rate};
        std::vector<std::vector<double>> mean_history;
        mean_history.reserve(cfg.rounds);
        gain_path.reserve(cfg.rounds);
        for (long t = 1; t <= cfg.rounds; ++t) {
            auto stream = rng::substream(cfg.seed, rng::Purpose::GainDrift,
                                         static_cast<std::uint64_t>(t));
            gs = channel::drift_antenna_gain(gs, stream);
            gain_path.push_back(gs.current);
            mean_history.push_back(
                sc.true_matrix(gs.current, oracle::ExecMode::Parallel).values);
        }
        if (!mean_history.empty()) {
            variation = bandit::variation_metrics(mean_history).v_total;
        }
    }
    long window = cfg.window;
    if (window == 0) {
        window = cfg.rounds > 0 ? bandit::window_size(cfg.rounds, variation) : 1;
    }

    std::vector<AlgorithmState> algos;
    for (const auto& name : cfg.algorithms) {
        AlgorithmState st;
        st.name = name;
        if (name == "umcb" || name == "eg") {
            st.stats = bandit::ArmStats(sc.policies.size(), cfg.n_sensors);
        } else if (name == "umcb_sw") {
            st.sw = std::make_unique<bandit::SlidingStats>(sc.policies.size(),
                                                           cfg.n_sensors, window);
        }
        algos.push_back(std::move(st));
    }

    std::filesystem::create_directories(cfg.out_dir);
    const std::filesystem::path trace_path =
        std::filesystem::path(cfg.out_dir) / "trace.csv";
    std::ofstream trace(trace_path, std::ios::binary);
    if (!trace) throw ConfigError("cannot write trace file: " + trace_path.string());
    trace << "round,algorithm,reward,ub_reward,gua_true_reward,alpha_regret_cum,"
             "ub_regret_cum\n";

    std::ofstream energy_trace;
    if (cfg.dump_energy_traces) {
        energy_trace.open(std::filesystem::path(cfg.out_dir) / "energy.csv",
                          std::ios::binary);
        energy_trace << "round,algorithm,sensor,final_energy,baseline,overflow\n";
    }

    std::vector<double> gains = sc.initial_gains;
    oracle::ExpectedPowerMatrix true_mx =
        sc.true_matrix(gains, oracle::ExecMode::Parallel);

    for (long t = 1; t <= cfg.rounds; ++t) {
        if (cfg.nonstationary) {
            gains = gain_path[static_cast<std::size_t>(t - 1)];
            true_mx = sc.true_matrix(gains, oracle::ExecMode::Parallel);
        }
        auto ctx_stream =
            rng::substream(cfg.seed, rng::Purpose::Context, static_cast<std::uint64_t>(t));
        const std::vector<double> raw_energy = generate_context(cfg, ctx_stream);
        std::vector<double> norm_energy(raw_energy.size());
        for (std::size_t i = 0; i < raw_energy.size(); ++i) {
            norm_energy[i] = raw_energy[i] / sc.p_ref;
        }
        bandit::BanditContext bctx{t, norm_energy};
        const auto states = make_states(sc, norm_energy, params);

        const auto greedy_true =
            oracle::gua(true_mx, norm_energy, spec, params, q_norm);
        const auto p1 = oracle::upper_bound_p1(true_mx, norm_energy, spec, q_norm,
                                               cfg.t_c, cfg.zeta);
        const auto greedy_realized = realize(sc, greedy_true, t, gains);
        const auto greedy_result =
            energy::simulate_round(states, greedy_true, greedy_realized.powers);
        const double r_greedy = energy::round_reward(spec, greedy_result.final_energy,
                                                     greedy_result.baseline, q_norm);
        const double r_ub = p1.upper_bound;

        for (auto& algo : algos) {
            energy::RoundSchedule schedule;
            if (algo.name == "umcb") {
                schedule = bandit::umcb_select(algo.stats, bctx, spec, params, q_norm);
            } else if (algo.name == "umcb_sw") {
                schedule = bandit::umcb_select(algo.sw->stats(), bctx, spec, params, q_norm);
            } else if (algo.name == "eg") {
                auto explore = rng::substream(cfg.seed, rng::Purpose::Explore,
                                              static_cast<std::uint64_t>(t));
                schedule = bandit::eg_select(algo.stats, bctx, cfg.epsilon0, explore, spec,
                                             params, q_norm);
            } else if (algo.name == "gua") {
                schedule = greedy_true;
            } else {
                schedule = oracle::gmq(true_mx, params);
            }
            schedule.validate();

            const RealizedRound realized = realize(sc, schedule, t, gains);
            const auto result = energy::simulate_round(states, schedule, realized.powers);
            const double r =
                energy::round_reward(spec, result.final_energy, result.baseline, q_norm);

            if (algo.name == "umcb" || algo.name == "eg") {
                bandit::update(algo.stats, schedule, realized.observations,
                               cfg.share_by_location, sc.sharing);
            } else if (algo.name == "umcb_sw") {
                algo.sw->push_round(schedule, realized.observations, cfg.share_by_location,
                                    sc.sharing);
            }

            algo.ledger.push(r, r_greedy, r_ub);
            const double prev_alpha = algo.alpha_cum.empty() ? 0.0 : algo.alpha_cum.back();
            const double prev_ub = algo.ub_cum.empty() ? 0.0 : algo.ub_cum.back();
            algo.alpha_cum.push_back(prev_alpha + alpha * r_greedy - r);
            algo.ub_cum.push_back(prev_ub + r_ub - r);

            trace << t << ',' << algo.name << ',' << fmt(r) << ',' << fmt(r_ub) << ','
                  << fmt(r_greedy) << ',' << fmt(algo.alpha_cum.back()) << ','
                  << fmt(algo.ub_cum.back()) << '\n';
            if (cfg.dump_energy_traces) {
                for (int i = 0; i < cfg.n_sensors; ++i) {
                    energy_trace << t << ',' << algo.name << ',' << i << ','
                                 << fmt(result.final_energy[i] * sc.p_ref) << ','
                                 << fmt(result.baseline[i] * sc.p_ref) << ','
                                 << fmt(result.overflow[i] * sc.p_ref) << '\n';
                }
            }
        }
    }
    trace.close();

    const auto t_end = std::chrono::steady_clock::now();
    const double wall = std::chrono::duration<double>(t_end - t_start).count();

    RunResult result;
    result.rounds = cfg.rounds;
    result.window_used = window;
    result.variation = variation;
    result.p_ref = sc.p_ref;
    result.flagged_pairs = sc.flagged_pairs;
    result.wall_seconds = wall;
    result.trace_path = trace_path;
    for (auto& algo : algos) {
        AlgorithmTrace out;
        out.name = algo.name;
        out.ledger = std::move(algo.ledger);
        out.alpha_regret_cum = std::move(algo.alpha_cum);
        out.ub_regret_cum = std::move(algo.ub_cum);
        result.algorithms.push_back(std::move(out));
    }

    const std::filesystem::path summary_path =
        std::filesystem::path(cfg.out_dir) / "summary.txt";
    std::ofstream summary(summary_path, std::ios::binary);
    summary << kVersion << "\n";
    summary << "rounds = " << cfg.rounds << "\n";
    summary << "window = " << window << "\n";
    summary << "variation = " << fmt(variation) << "\n";
    summary << "p_ref = " << fmt(sc.p_ref) << "\n";
    summary << "standoff_flagged_pairs = " << sc.flagged_pairs << "\n";
    summary << "wall_seconds = " << fmt(wall) << "\n";
    for (const auto& a : result.algorithms) {
        double total = 0.0;
        for (double r : a.ledger.reward) total += r;
        summary << "algorithm " << a.name << ": total_reward = " << fmt(total)
                << ", final_alpha_regret = "
                << fmt(a.alpha_regret_cum.empty() ? 0.0 : a.alpha_regret_cum.back())
                << ", final_ub_regret = "
                << fmt(a.ub_regret_cum.empty() ? 0.0 : a.ub_regret_cum.back()) << "\n";
    }
    summary.close();
    result.summary_path = summary_path;

    const std::filesystem::path manifest_path =
        std::filesystem::path(cfg.out_dir) / "manifest.txt";
    std::ofstream manifest(manifest_path, std::ios::binary);
    char hash_buf[32];
    std::snprintf(hash_buf, sizeof(hash_buf), "%016llx",
                  static_cast<unsigned long long>(config_hash(cfg)));
    manifest << "version = " << kVersion << "\n";
    manifest << "config_hash = " << hash_buf << "\n";
    manifest << "seed = " << cfg.seed << "\n";
    manifest << "--- effective config ---\n" << serialize_config(cfg);
    manifest.close();
    result.manifest_path = manifest_path;

    return result;
}

SweepResult sweep(const ScenarioConfig& cfg, char axis, std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("sweep needs at least one value");
    if (axis != 'Q' && axis != 'N') throw std::invalid_argument("sweep axis must be Q or N");

    SweepResult out;
    out.axis = axis;
    std::filesystem::create_directories(cfg.out_dir);
    for (double v : values) {
        ScenarioConfig run_cfg = cfg;
        if (axis == 'Q') {
            run_cfg.q_capacity = v;
        } else {
            run_cfg.n_sensors = static_cast<int>(v);
            if (!cfg.sensor_positions.empty() || !cfg.antenna_gains.empty()) {
                throw ConfigError("N sweep requires randomly placed sensors");
            }
        }
        char tag[64];
        std::snprintf(tag, sizeof(tag), "sweep_%c_%g", axis, v);
        run_cfg.out_dir = (std::filesystem::path(cfg.out_dir) / tag).string();
        const RunResult run = run_experiment(run_cfg);
        const auto tail = static_cast<std::size_t>(
            std::max<long>(1, (run_cfg.rounds + 9) / 10));
        for (const auto& a : run.algorithms) {
            out.rows.push_back({v, a.name, a.mean_reward_tail(tail)});
        }
    }

    out.csv_path = std::filesystem::path(cfg.out_dir) / "sweep.csv";
    std::ofstream csv(out.csv_path, std::ios::binary);
    csv << "axis,value,algorithm,mean_tail_reward\n";
    for (const auto& row : out.rows) {
        csv << axis << ',' << fmt(row.value) << ',' << row.algorithm << ','
            << fmt(row.mean_tail_reward) << '\n';
    }
    return out;
}

}  // namespace wptsim::harness
