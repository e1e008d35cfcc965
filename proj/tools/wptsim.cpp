#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "wptsim/experiment.hpp"
#include "wptsim/validation.hpp"

namespace {

using wptsim::Point;
namespace harness = wptsim::harness;
namespace oracle = wptsim::oracle;
namespace energy = wptsim::energy;
namespace channel = wptsim::channel;
namespace geometry = wptsim::geometry;

std::vector<double> parse_values(const std::string& csv) {
    std::vector<double> values;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) values.push_back(std::stod(item));
    }
    return values;
}

int cmd_run(const std::string& config_path, const CLI::App* cmd,
            std::uint64_t seed_override, const std::string& out_override,
            long rounds_override) {
    harness::ScenarioConfig cfg = harness::load_config(config_path);
    if (cmd->count("--seed")) cfg.seed = seed_override;
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (cmd->count("--rounds")) cfg.rounds = rounds_override;
    cfg.validate();

    const auto result = harness::run_experiment(cfg);
    std::cout << "rounds: " << result.rounds << ", window: " << result.window_used
              << ", p_ref: " << result.p_ref << "\n";
    for (const auto& a : result.algorithms) {
        double total = 0.0;
        for (double r : a.ledger.reward) total += r;
        std::cout << a.name << ": total reward " << total;
        if (!a.ub_regret_cum.empty()) {
            std::cout << ", final UB regret " << a.ub_regret_cum.back()
                      << ", final alpha regret " << a.alpha_regret_cum.back();
        }
        std::cout << "\n";
    }
    std::cout << "trace: " << result.trace_path.string() << "\n";
    std::cout << "summary: " << result.summary_path.string() << "\n";
    return 0;
}

int cmd_sweep(const std::string& config_path, const CLI::App* cmd,
              const std::string& axis, const std::string& values_csv,
              std::uint64_t seed_override, const std::string& out_override) {
    harness::ScenarioConfig cfg = harness::load_config(config_path);
    if (cmd->count("--seed")) cfg.seed = seed_override;
    if (!out_override.empty()) cfg.out_dir = out_override;
    const auto values = parse_values(values_csv);
    const auto result = harness::sweep(cfg, axis.at(0), values);
    for (const auto& row : result.rows) {
        std::cout << axis << "=" << row.value << " " << row.algorithm
                  << " mean_tail_reward=" << row.mean_tail_reward << "\n";
    }
    std::cout << "sweep table: " << result.csv_path.string() << "\n";
    return 0;
}

int cmd_oracle(const std::string& instance_path) {
    std::ifstream in(instance_path);
    if (!in) {
        std::cerr << "cannot open instance file: " << instance_path << "\n";
        return 1;
    }
    nlohmann::json doc;
    in >> doc;

    oracle::ExpectedPowerMatrix powers;
    const auto& rows = doc.at("powers");
    powers.n_policies = static_cast<int>(rows.size());
    powers.n_sensors = static_cast<int>(rows.at(0).size());
    for (const auto& row : rows) {
        for (const auto& v : row) powers.values.push_back(v.get<double>());
    }
    const std::vector<double> initial = doc.at("energies").get<std::vector<double>>();
    const double capacity = doc.at("capacity").get<double>();
    oracle::ScheduleParams params;
    params.n_slots = doc.at("n_slots").get<int>();
    params.t_u = doc.value("t_u", 1.0);
    params.t_c = doc.value("t_c", static_cast<double>(params.n_slots) * params.t_u);
    params.zeta = doc.value("zeta", 2.0);
    const std::string ukind = doc.value("utility", std::string("U1"));
    const auto spec = ukind == "U2"
                          ? energy::UtilitySpec::u2(static_cast<int>(initial.size()))
                          : energy::UtilitySpec::u1(static_cast<int>(initial.size()));

    const auto sched = oracle::gua(powers, initial, spec, params, capacity);
    const double reward = oracle::evaluate_schedule(powers, sched.slots, initial, spec,
                                                    params, capacity);
    const auto p1 = oracle::upper_bound_p1(powers, initial, spec, capacity, params.t_c,
                                           params.zeta);

    std::cout << "schedule:";
    for (int s : sched.slots) std::cout << ' ' << s;
    std::cout << "\nreward: " << reward << "\n";
    std::cout << "p1_bound: " << p1.upper_bound << " (objective " << p1.objective
              << ", gap " << p1.gap << ", iterations " << p1.iterations << ")\n";
    std::cout << "approximation_ratio: "
              << (p1.upper_bound > 0.0 ? reward / p1.upper_bound : 1.0) << "\n";
    return 0;
}

int cmd_bound(double d1, double epsilon, double gamma) {
    geometry::BeamSectorGeometry geom;
    geom.d1 = d1;
    geom.gamma = gamma;
    std::cout << geometry::discretization_ratio_bound(geom, epsilon) << "\n";
    return 0;
}

int cmd_beamscan(const std::string& config_path, const std::string& out_path,
                 const std::string& at) {
    const harness::ScenarioConfig cfg = harness::load_config(config_path);
    const auto sc = harness::Scenario::build(cfg);
    Point charger{cfg.area_width / 2.0, cfg.area_height / 2.0};
    if (!at.empty()) {
        const auto colon = at.find(':');
        if (colon == std::string::npos) {
            std::cerr << "--at expects x:y\n";
            return 1;
        }
        charger = {std::stod(at.substr(0, colon)), std::stod(at.substr(colon + 1))};
    }

    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "cannot write " << out_path << "\n";
        return 1;
    }
    out << "x,y";
    for (int m = 0; m < sc.codebook.size(); ++m) out << ",codeword_" << m;
    out << "\n";
    for (const auto& loc : sc.grid) {
        out << loc.center.x << ',' << loc.center.y;
        for (int m = 0; m < sc.codebook.size(); ++m) {
            double p = 0.0;
            if (geometry::distance(loc.center, charger) > 0.0) {
                p = channel::expected_power(loc.center, 1.0, charger,
                                            sc.codebook.entries[m], sc.ula);
            }
            out << ',' << p;
        }
        out << "\n";
    }
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

int cmd_validate(const std::string& check, const std::string& scratch) {
    std::filesystem::create_directories(scratch);
    std::vector<wptsim::validation::CheckResult> results;
    if (check.empty()) {
        results = wptsim::validation::run_all(scratch);
    } else {
        results.push_back(wptsim::validation::run_check(check, scratch));
    }
    bool all_pass = true;
    for (const auto& r : results) {
        std::printf("check=%s status=%s seconds=%.2f detail=%s\n", r.name.c_str(),
                    r.pass ? "PASS" : "FAIL", r.seconds, r.detail.c_str());
        all_pass = all_pass && r.pass;
    }
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mobile beamforming charger simulation"};
    app.require_subcommand(1);

    std::string config_path, out_override, values_csv, axis = "Q";
    std::uint64_t seed_override = 0;
    long rounds_override = -1;

    auto* run = app.add_subcommand("run", "run one experiment from a config file");
    run->add_option("config", config_path, "config file")->required();
    run->add_option("--seed", seed_override, "override the config seed");
    run->add_option("--out", out_override, "override the output directory");
    run->add_option("--rounds", rounds_override, "override the round count");

    std::string sweep_config;
    auto* sweep = app.add_subcommand("sweep", "re-run the experiment along one axis");
    sweep->add_option("config", sweep_config, "config file")->required();
    sweep->add_option("--axis", axis, "Q or N")->required();
    sweep->add_option("--values", values_csv, "comma separated axis values")->required();
    sweep->add_option("--seed", seed_override, "override the config seed");
    sweep->add_option("--out", out_override, "override the output directory");

    std::string instance_path;
    auto* orc = app.add_subcommand("oracle", "full-information schedule for one instance");
    orc->add_option("instance", instance_path, "instance JSON file")->required();

    double d1 = 0.0, eps = 0.0, gamma = 2.0;
    auto* bound = app.add_subcommand("bound", "discretization approximation bound");
    bound->add_option("--d1", d1, "charger to cell-center distance")->required();
    bound->add_option("--epsilon", eps, "cell edge length")->required();
    bound->add_option("--gamma", gamma, "in-beam peak/edge power ratio");

    std::string scan_config, scan_out = "beamscan.csv", scan_at;
    auto* scan = app.add_subcommand("beamscan", "power field per codeword as CSV");
    scan->add_option("config", scan_config, "config file")->required();
    scan->add_option("--out", scan_out, "output CSV path");
    scan->add_option("--at", scan_at, "charger position x:y (default: area center)");

    std::string check_name, scratch = "validate_out";
    auto* val = app.add_subcommand("validate", "run the acceptance check battery");
    val->add_option("--check", check_name, "run a single named check");
    val->add_option("--scratch", scratch, "scratch directory for experiment outputs");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, run, seed_override, out_override,
                                          rounds_override);
        if (sweep->parsed()) return cmd_sweep(sweep_config, sweep, axis, values_csv,
                                              seed_override, out_override);
        if (orc->parsed()) return cmd_oracle(instance_path);
        if (bound->parsed()) return cmd_bound(d1, eps, gamma);
        if (scan->parsed()) return cmd_beamscan(scan_config, scan_out, scan_at);
        if (val->parsed()) return cmd_validate(check_name, scratch);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
