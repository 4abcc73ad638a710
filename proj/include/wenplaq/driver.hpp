#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace wenplaq::driver {

enum class Command { Scan, Sweep, Correlate, Compile, Tomo };

const char *to_string(Command c);
Command command_from_string(const std::string &s);

struct RunConfig {
    Command command = Command::Scan;
    std::filesystem::path out_dir = "out";

    /// Unset means the command default: 6x2 for correlate, 2x2 otherwise.
    std::optional<int> lx;
    std::optional<int> ly;

    std::vector<double> g_values{1.0, 5.0, 20.0};
    double j_min = -20.0;
    double j_max = 20.0;
    int j_points = 81;

    double total_time = 6.5684;
    int steps = 31;
    /// Non-empty enables the (M, F_min) scan in `sweep`.
    std::vector<int> step_scan;
    std::string stepper = "exact";
    int slices = 4;

    std::vector<double> ratios{0.0, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0};

    std::string machine_path;
    double coupling = 1.0;
    double tau = 0.05;

    double sigma = 0.0;
    std::uint64_t seed = 20140521;
    int repetitions = 1;

    int lattice_x() const;
    int lattice_y() const;
};

/// Reads a JSON object; unknown keys are rejected.
void apply_json(RunConfig &cfg, const std::string &json_text);
void load_config_file(RunConfig &cfg, const std::filesystem::path &path);

/// Throws ValidationError with an actionable message.
void validate(const RunConfig &cfg);

/// Each command writes a short human summary to `log` and returns the files
/// it wrote, in write order.
std::vector<std::filesystem::path> cmd_scan(const RunConfig &cfg, std::ostream &log);
std::vector<std::filesystem::path> cmd_sweep(const RunConfig &cfg, std::ostream &log);
std::vector<std::filesystem::path> cmd_correlate(const RunConfig &cfg, std::ostream &log);
std::vector<std::filesystem::path> cmd_compile(const RunConfig &cfg, std::ostream &log);
std::vector<std::filesystem::path> cmd_tomo(const RunConfig &cfg, std::ostream &log);

std::vector<std::filesystem::path> run(const RunConfig &cfg, std::ostream &log);

}  // namespace wenplaq::driver
