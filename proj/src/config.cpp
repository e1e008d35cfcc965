#include "wptsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "wptsim/geometry.hpp"

namespace wptsim::harness {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        const std::string t = trim(item);
        if (!t.empty()) parts.push_back(t);
    }
    return parts;
}

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not a number: '" + value + "'");
    }
}

long to_long(const std::string& key, const std::string& value) {
    const double v = to_double(key, value);
    if (std::abs(v - std::round(v)) > 1e-9) {
        throw ConfigError("config key '" + key + "': expected an integer");
    }
    return static_cast<long>(std::llround(v));
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "on") return true;
    if (value == "false" || value == "0" || value == "off") return false;
    throw ConfigError("config key '" + key + "': expected a boolean");
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig cfg;
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "area_width") cfg.area_width = to_double(key, value);
        else if (key == "area_height") cfg.area_height = to_double(key, value);
        else if (key == "epsilon") cfg.epsilon = to_double(key, value);
        else if (key == "n_antennas") cfg.n_antennas = static_cast<int>(to_long(key, value));
        else if (key == "spacing") cfg.spacing = to_double(key, value);
        else if (key == "carrier_hz") cfg.carrier_hz = to_double(key, value);
        else if (key == "codebook_size") cfg.codebook_size = static_cast<int>(to_long(key, value));
        else if (key == "gamma") cfg.gamma = to_double(key, value);
        else if (key == "n_sensors") cfg.n_sensors = static_cast<int>(to_long(key, value));
        else if (key == "sensor_positions") {
            cfg.sensor_positions.clear();
            for (const auto& pair : split(value, ',')) {
                const auto colon = pair.find(':');
                if (colon == std::string::npos) {
                    throw ConfigError("sensor_positions entries must be x:y pairs");
                }
                cfg.sensor_positions.push_back(
                    {to_double(key, trim(pair.substr(0, colon))),
                     to_double(key, trim(pair.substr(colon + 1)))});
            }
        } else if (key == "antenna_gains") {
            cfg.antenna_gains.clear();
            for (const auto& g : split(value, ',')) {
                cfg.antenna_gains.push_back(to_double(key, g));
            }
        }
        else if (key == "q_capacity") cfg.q_capacity = to_double(key, value);
        else if (key == "zeta") cfg.zeta = to_double(key, value);
        else if (key == "t_c") cfg.t_c = to_double(key, value);
        else if (key == "t_u") cfg.t_u = to_double(key, value);
        else if (key == "n_slots") cfg.n_slots = static_cast<int>(to_long(key, value));
        else if (key == "eta") cfg.eta = to_double(key, value);
        else if (key == "context_fraction") cfg.context_fraction = to_double(key, value);
        else if (key == "utility") {
            if (value == "U1") cfg.utility = energy::UtilityKind::U1;
            else if (value == "U2") cfg.utility = energy::UtilityKind::U2;
            else throw ConfigError("utility must be U1 or U2");
        }
        else if (key == "rounds") cfg.rounds = to_long(key, value);
        else if (key == "scenario") {
            if (value == "stationary") cfg.nonstationary = false;
            else if (value == "nonstationary") cfg.nonstationary = true;
            else throw ConfigError("scenario must be stationary or nonstationary");
        }
        else if (key == "drift_rate") cfg.drift_rate = to_double(key, value);
        else if (key == "algorithms") cfg.algorithms = split(value, ',');
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_long(key, value));
        else if (key == "window") {
            cfg.window = (value == "auto") ? 0 : to_long(key, value);
        }
        else if (key == "share_by_location") cfg.share_by_location = to_bool(key, value);
        else if (key == "alpha") cfg.alpha = to_double(key, value);
        else if (key == "epsilon0") cfg.epsilon0 = to_double(key, value);
        else if (key == "out_dir") cfg.out_dir = value;
        else if (key == "dump_energy_traces") cfg.dump_energy_traces = to_bool(key, value);
        else throw ConfigError("unknown config key '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

void ScenarioConfig::validate() const {
    if (static_cast<double>(n_slots) * t_u > t_c * (1.0 + 1e-12)) {
        throw ConfigError(
            "real-time charging constraint violated: n_slots * t_u = " +
            std::to_string(n_slots * t_u) + " exceeds t_c = " + std::to_string(t_c));
    }
    if (n_slots < 0) throw ConfigError("n_slots must be >= 0");
    if (!(t_u > 0.0) || !(t_c > 0.0)) throw ConfigError("t_u and t_c must be positive");
    if (!(q_capacity > 0.0)) throw ConfigError("q_capacity must be positive");
    if (!(zeta >= 1.0)) throw ConfigError("zeta must be >= 1");
    if (n_sensors < 1) throw ConfigError("need at least one sensor");
    if (!sensor_positions.empty() &&
        static_cast<int>(sensor_positions.size()) != n_sensors) {
        throw ConfigError("sensor_positions length must equal n_sensors");
    }
    if (!antenna_gains.empty() && static_cast<int>(antenna_gains.size()) != n_sensors) {
        throw ConfigError("antenna_gains length must equal n_sensors");
    }
    if (codebook_size < 1) throw ConfigError("codebook_size must be >= 1");
    if (!(gamma > 1.25) || gamma > 2.5) {
        throw ConfigError("gamma must lie in (1.25, 2.5]");
    }
    if (!(context_fraction > 0.0) || context_fraction > 1.0) {
        throw ConfigError("context_fraction must lie in (0, 1]");
    }
    if (!(eta > 0.0) || eta > 1.0) throw ConfigError("eta must lie in (0, 1]");
    if (rounds < 0) throw ConfigError("rounds must be >= 0");
    if (window < 0) throw ConfigError("window must be >= 1, or auto");
    if (epsilon0 < 0.0 || epsilon0 > 1.0) throw ConfigError("epsilon0 must lie in [0, 1]");
    if (alpha < 0.0 || alpha > 1.0) throw ConfigError("alpha must lie in [0, 1]");
    if (!(drift_rate >= 0.0) || drift_rate > 1.0) {
        throw ConfigError("drift_rate must lie in [0, 1]");
    }
    if (algorithms.empty()) throw ConfigError("at least one algorithm is required");
    for (const auto& a : algorithms) {
        if (a != "umcb" && a != "umcb_sw" && a != "eg" && a != "gua" && a != "gmq") {
            throw ConfigError("unknown algorithm '" + a + "'");
        }
    }
    geometry::Area area{area_width, area_height, epsilon};
    area.validate();
}

std::string serialize_config(const ScenarioConfig& cfg) {
    std::ostringstream out;
    out.precision(17);
    out << "area_width = " << cfg.area_width << "\n";
    out << "area_height = " << cfg.area_height << "\n";
    out << "epsilon = " << cfg.epsilon << "\n";
    out << "n_antennas = " << cfg.n_antennas << "\n";
    out << "spacing = " << cfg.spacing << "\n";
    out << "carrier_hz = " << cfg.carrier_hz << "\n";
    out << "codebook_size = " << cfg.codebook_size << "\n";
    out << "gamma = " << cfg.gamma << "\n";
    out << "n_sensors = " << cfg.n_sensors << "\n";
    if (!cfg.sensor_positions.empty()) {
        out << "sensor_positions = ";
        for (std::size_t i = 0; i < cfg.sensor_positions.size(); ++i) {
            if (i) out << ", ";
            out << cfg.sensor_positions[i].x << ":" << cfg.sensor_positions[i].y;
        }
        out << "\n";
    }
    if (!cfg.antenna_gains.empty()) {
        out << "antenna_gains = ";
        for (std::size_t i = 0; i < cfg.antenna_gains.size(); ++i) {
            if (i) out << ", ";
            out << cfg.antenna_gains[i];
        }
        out << "\n";
    }
    out << "q_capacity = " << cfg.q_capacity << "\n";
    out << "zeta = " << cfg.zeta << "\n";
    out << "t_c = " << cfg.t_c << "\n";
    out << "t_u = " << cfg.t_u << "\n";
    out << "n_slots = " << cfg.n_slots << "\n";
    out << "eta = " << cfg.eta << "\n";
    out << "context_fraction = " << cfg.context_fraction << "\n";
    out << "utility = " << (cfg.utility == energy::UtilityKind::U1 ? "U1" : "U2") << "\n";
    out << "rounds = " << cfg.rounds << "\n";
    out << "scenario = " << (cfg.nonstationary ? "nonstationary" : "stationary") << "\n";
    out << "drift_rate = " << cfg.drift_rate << "\n";
    out << "algorithms = ";
    for (std::size_t i = 0; i < cfg.algorithms.size(); ++i) {
        if (i) out << ", ";
        out << cfg.algorithms[i];
    }
    out << "\n";
    out << "seed = " << cfg.seed << "\n";
    if (cfg.window > 0) {
        out << "window = " << cfg.window << "\n";
    } else {
        out << "window = auto\n";
    }
    out << "share_by_location = " << (cfg.share_by_location ? "true" : "false") << "\n";
    out << "alpha = " << cfg.alpha << "\n";
    out << "epsilon0 = " << cfg.epsilon0 << "\n";
    out << "dump_energy_traces = " << (cfg.dump_energy_traces ? "true" : "false") << "\n";
    return out.str();
}

std::uint64_t config_hash(const ScenarioConfig& cfg) {
    const std::string text = serialize_config(cfg);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace wptsim::harness
