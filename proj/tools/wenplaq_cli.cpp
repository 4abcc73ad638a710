#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "wenplaq/driver.hpp"
#include "wenplaq/errors.hpp"

namespace {

using wenplaq::driver::Command;
using wenplaq::driver::RunConfig;

struct Overrides {
    std::string config;
    std::optional<std::string> out;
    std::optional<std::vector<double>> g;
    std::optional<double> j_min, j_max;
    std::optional<int> j_points;
    std::optional<double> total_time;
    std::optional<int> steps;
    std::optional<std::vector<int>> m_scan;
    std::optional<std::string> stepper;
    std::optional<int> slices;
    std::optional<std::string> machine;
    std::optional<double> coupling, tau, sigma;
    std::optional<std::uint64_t> seed;
    std::optional<int> repetitions;
    std::optional<std::vector<int>> lattice;
    std::optional<std::vector<double>> ratios;
};

void add_common(CLI::App *app, Overrides &o) {
    app->add_option("--config", o.config, "JSON run configuration");
    app->add_option("--out", o.out, "output directory");
    app->add_option("--g", o.g, "transverse field value(s)");
    app->add_option("--lattice", o.lattice, "lattice size Lx Ly")->expected(2);
    app->add_option("--seed", o.seed, "random seed");
}

void apply(RunConfig &cfg, const Overrides &o) {
    if (o.out) cfg.out_dir = *o.out;
    if (o.g) cfg.g_values = *o.g;
    if (o.lattice) cfg.lx = (*o.lattice)[0], cfg.ly = (*o.lattice)[1];
    if (o.j_min) cfg.j_min = *o.j_min;
    if (o.j_max) cfg.j_max = *o.j_max;
    if (o.j_points) cfg.j_points = *o.j_points;
    if (o.total_time) cfg.total_time = *o.total_time;
    if (o.steps) cfg.steps = *o.steps;
    if (o.m_scan) cfg.step_scan = *o.m_scan;
    if (o.stepper) cfg.stepper = *o.stepper;
    if (o.slices) cfg.slices = *o.slices;
    if (o.machine) cfg.machine_path = *o.machine;
    if (o.coupling) cfg.coupling = *o.coupling;
    if (o.tau) cfg.tau = *o.tau;
    if (o.sigma) cfg.sigma = *o.sigma;
    if (o.seed) cfg.seed = *o.seed;
    if (o.repetitions) cfg.repetitions = *o.repetitions;
    if (o.ratios) cfg.ratios = *o.ratios;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Transverse Wen-plaquette model toolkit: spectra, sweeps, pulse compilation, tomography"};
    app.require_subcommand(1);
    Overrides o;

    auto *scan = app.add_subcommand("scan", "ground-state Wilson loop, P and concurrences vs J");
    add_common(scan, o);
    scan->add_option("--j-min", o.j_min);
    scan->add_option("--j-max", o.j_max);
    scan->add_option("--j-points", o.j_points);

    auto *sweep = app.add_subcommand("sweep", "constant-adiabaticity sweep and step fidelities");
    add_common(sweep, o);
    sweep->add_option("--j-min", o.j_min, "sweep start");
    sweep->add_option("--j-max", o.j_max, "sweep end");
    sweep->add_option("--T", o.total_time, "total sweep time");
    sweep->add_option("--M", o.steps, "number of steps");
    sweep->add_option("--m-scan", o.m_scan, "step counts for the (M, F_min) scan");
    sweep->add_option("--stepper", o.stepper, "exact or trotter");
    sweep->add_option("--slices", o.slices, "Trotter slices per step");

    auto *correlate = app.add_subcommand("correlate", "x-x spin correlations vs J/g");
    add_common(correlate, o);
    correlate->add_option("--ratios", o.ratios, "J/g values");

    auto *compile = app.add_subcommand("compile", "NMR pulse sequence for one Trotter step plus verification");
    add_common(compile, o);
    compile->add_option("--machine", o.machine, "machine JSON file");
    compile->add_option("--J", o.coupling, "plaquette coupling");
    compile->add_option("--tau", o.tau, "step length");

    auto *tomo = app.add_subcommand("tomo", "synthetic tomography of a ground state");
    add_common(tomo, o);
    tomo->add_option("--J", o.coupling, "plaquette coupling");
    tomo->add_option("--sigma", o.sigma, "noise deviation per Pauli coefficient");
    tomo->add_option("--repetitions", o.repetitions, "number of seeds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    RunConfig cfg;
    try {
        const auto *sub = app.get_subcommands().front();
        cfg.command = wenplaq::driver::command_from_string(sub->get_name());
        if (!o.config.empty()) wenplaq::driver::load_config_file(cfg, o.config);
        apply(cfg, o);
        for (const auto &f : wenplaq::driver::run(cfg, std::cout)) std::cout << "wrote " << f.string() << "\n";
    } catch (const wenplaq::VerificationError &e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return 3;
    } catch (const wenplaq::ValidationError &e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return 2;
    } catch (const wenplaq::MachineError &e) {
        std::cerr << "invalid machine: " << e.what() << "\n";
        return 2;
    } catch (const wenplaq::ParseError &e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
