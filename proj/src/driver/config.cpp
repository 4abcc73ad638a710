#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "wenplaq/driver.hpp"
#include "wenplaq/errors.hpp"
#include "wenplaq/pauli.hpp"

namespace wenplaq::driver {

namespace {

template <typename T>
std::vector<T> scalar_or_list(const nlohmann::json &j) {
    if (j.is_array()) return j.get<std::vector<T>>();
    return {j.get<T>()};
}

}  // namespace

const char *to_string(Command c) {
    switch (c) {
    case Command::Scan: return "scan";
    case Command::Sweep: return "sweep";
    case Command::Correlate: return "correlate";
    case Command::Compile: return "compile";
    case Command::Tomo: return "tomo";
    }
    return "?";
}

Command command_from_string(const std::string &s) {
    for (auto c : {Command::Scan, Command::Sweep, Command::Correlate, Command::Compile, Command::Tomo}) {
        if (s == to_string(c)) return c;
    }
    throw ValidationError("unknown command '" + s + "'");
}

int RunConfig::lattice_x() const { return lx.value_or(command == Command::Correlate ? 6 : 2); }
int RunConfig::lattice_y() const { return ly.value_or(2); }

void apply_json(RunConfig &cfg, const std::string &json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("config must be a JSON object");

    static const std::set<std::string> known{"out",   "lattice", "g",     "j_min",   "j_max", "j_points",
                                             "T",     "M",       "m_scan", "stepper", "slices", "ratios",
                                             "machine", "J",     "tau",   "sigma",   "seed",  "repetitions"};
    try {
        for (const auto &[key, value] : j.items()) {
            if (!known.contains(key)) throw ValidationError("unknown config key '" + key + "'");
            if (key == "out") cfg.out_dir = value.get<std::string>();
            if (key == "lattice") {
                const auto dims = value.get<std::vector<int>>();
                if (dims.size() != 2) throw ValidationError("config 'lattice' must be [Lx, Ly]");
                cfg.lx = dims[0];
                cfg.ly = dims[1];
            }
            if (key == "g") cfg.g_values = scalar_or_list<double>(value);
            if (key == "j_min") cfg.j_min = value.get<double>();
            if (key == "j_max") cfg.j_max = value.get<double>();
            if (key == "j_points") cfg.j_points = value.get<int>();
            if (key == "T") cfg.total_time = value.get<double>();
            if (key == "M") cfg.steps = value.get<int>();
            if (key == "m_scan") cfg.step_scan = value.get<std::vector<int>>();
            if (key == "stepper") cfg.stepper = value.get<std::string>();
            if (key == "slices") cfg.slices = value.get<int>();
            if (key == "ratios") cfg.ratios = scalar_or_list<double>(value);
            if (key == "machine") cfg.machine_path = value.get<std::string>();
            if (key == "J") cfg.coupling = value.get<double>();
            if (key == "tau") cfg.tau = value.get<double>();
            if (key == "sigma") cfg.sigma = value.get<double>();
            if (key == "seed") cfg.seed = value.get<std::uint64_t>();
            if (key == "repetitions") cfg.repetitions = value.get<int>();
        }
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(std::string("config has a value of the wrong type: ") + e.what());
    }
}

void load_config_file(RunConfig &cfg, const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    apply_json(cfg, ss.str());
    if (!cfg.machine_path.empty() && std::filesystem::path(cfg.machine_path).is_relative()) {
        cfg.machine_path = (path.parent_path() / cfg.machine_path).string();
    }
}

void validate(const RunConfig &cfg) {
    const int lx = cfg.lattice_x(), ly = cfg.lattice_y();
    if (lx < 1 || ly < 1) throw ValidationError("lattice dimensions must be positive");
    if (lx * ly > kDefaultDenseLimit) {
        throw ValidationError("lattice has " + std::to_string(lx * ly) + " sites; at most " +
                              std::to_string(kDefaultDenseLimit) + " are supported");
    }
    const bool is_2x2 = lx == 2 && ly == 2;
    if (cfg.g_values.empty()) throw ValidationError("at least one g value is required");

    switch (cfg.command) {
    case Command::Scan:
        if (cfg.j_points < 2) throw ValidationError("--j-points must be at least 2");
        if (!(cfg.j_min < cfg.j_max)) throw ValidationError("--j-min must be smaller than --j-max");
        break;
    case Command::Sweep:
        if (!(cfg.g_values.front() > 0.0)) throw ValidationError("sweep needs g > 0; the gap closes at g = 0");
        if (cfg.j_min == cfg.j_max) throw ValidationError("sweep needs distinct --j-min and --j-max");
        if (!(cfg.total_time > 0.0)) throw ValidationError("--T must be positive");
        if (cfg.steps < 2) throw ValidationError("--M must be at least 2");
        for (int m : cfg.step_scan) {
            if (m < 2) throw ValidationError("every entry of m_scan must be at least 2");
        }
        if (cfg.stepper != "exact" && cfg.stepper != "trotter") {
            throw ValidationError("--stepper must be 'exact' or 'trotter'");
        }
        if (cfg.stepper == "trotter" && !is_2x2) {
            throw ValidationError("the trotter stepper requires a 2x2 lattice; set \"lattice\": [2, 2] or use "
                                  "--stepper exact");
        }
        if (cfg.slices < 1) throw ValidationError("--slices must be at least 1");
        break;
    case Command::Correlate:
        if (cfg.ratios.empty()) throw ValidationError("correlate needs at least one J/g ratio");
        for (double r : cfg.ratios) {
            if (!(r >= 0.0)) throw ValidationError("J/g ratios must be non-negative");
        }
        break;
    case Command::Compile:
        if (cfg.machine_path.empty()) throw ValidationError("compile needs a machine file (--machine PATH)");
        if (!(cfg.tau >= 0.0)) throw ValidationError("tau must be non-negative");
        break;
    case Command::Tomo:
        if (!is_2x2) throw ValidationError("tomo works on the 2x2 lattice only");
        if (!(cfg.sigma >= 0.0)) throw ValidationError("--sigma must be non-negative");
        if (cfg.repetitions < 1) throw ValidationError("repetitions must be at least 1");
        break;
    }
}

}  // namespace wenplaq::driver
