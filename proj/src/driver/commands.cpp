#include <cmath>
#include <ostream>

#include "csv.hpp"
#include "svg.hpp"
#include "wenplaq/adiabatic.hpp"
#include "wenplaq/driver.hpp"
#include "wenplaq/errors.hpp"
#include "wenplaq/lattice.hpp"
#include "wenplaq/observables.hpp"
#include "wenplaq/pulse.hpp"
#include "wenplaq/spectra.hpp"
#include "wenplaq/tomography.hpp"

namespace wenplaq::driver {

namespace {

namespace fs = std::filesystem;

constexpr const char *kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

const char *color(std::size_t i) { return kPalette[i % std::size(kPalette)]; }

std::vector<double> j_grid(const RunConfig &cfg) {
    std::vector<double> js;
    for (int k = 0; k < cfg.j_points; ++k) {
        js.push_back(cfg.j_min + (cfg.j_max - cfg.j_min) * k / (cfg.j_points - 1));
    }
    return js;
}

double mean_order_p(const StateVector &v) {
    double p = 0.0;
    for (int s = 0; s < v.n_sites(); ++s) p += local_order_P(v, s);
    return p / v.n_sites();
}

std::string pair_name(int a, int b) { return "c" + std::to_string(a + 1) + "_" + std::to_string(b + 1); }

StateVector ground_state(const Lattice &l, double J, double g) {
    return dense_spectrum(build_hamiltonian(l, J, g)).ground_state();
}

}  // namespace

std::vector<fs::path> cmd_scan(const RunConfig &cfg, std::ostream &log) {
    const Lattice l(cfg.lattice_x(), cfg.lattice_y());
    const LoopPath loop = canonical_loop(l);
    const bool closed_form = l.lx() == 2 && l.ly() == 2;
    const auto js = j_grid(cfg);
    const int n = l.n_sites();

    std::vector<fs::path> files;
    std::vector<Series> series;
    const fs::path summary_path = cfg.out_dir / "scan_summary.csv";
    CsvWriter summary(summary_path, "wenplaq scan summary", 1, {"g", "transition_width"});

    for (std::size_t gi = 0; gi < cfg.g_values.size(); ++gi) {
        const double g = cfg.g_values[gi];
        std::vector<std::string> columns{"J", "energy", "wilson", "P"};
        if (closed_form) columns.insert(columns.end(), {"wilson_closed_form", "P_closed_form"});
        for (int a = 0; a < n; ++a) {
            for (int b = a + 1; b < n; ++b) columns.push_back(pair_name(a, b));
        }
        const fs::path path = cfg.out_dir / ("scan_g" + format_cell(g) + ".csv");
        CsvWriter csv(path, "wenplaq scan", 1, columns);

        Series w{"W g=" + format_cell(g), {}, {}, color(gi), false};
        Series p{"P g=" + format_cell(g), {}, {}, color(gi), true};
        double lo = INFINITY, hi = -INFINITY;
        for (double J : js) {
            const auto spectrum = dense_spectrum(build_hamiltonian(l, J, g));
            const auto &psi = spectrum.ground_state();
            const double wv = wilson_expectation(psi, l, loop);
            const double pv = mean_order_p(psi);
            std::vector<Cell> row{J, spectrum.ground_energy(), wv, pv};
            if (closed_form) {
                const double r = std::hypot(g, J);
                row.insert(row.end(), {r > 0 ? J / r : 0.0, r > 0 ? g / r : 0.0});
            }
            for (int a = 0; a < n; ++a) {
                for (int b = a + 1; b < n; ++b) row.push_back(concurrence(reduced_density(psi, {a, b})));
            }
            csv.row(row);
            w.x.push_back(J);
            w.y.push_back(wv);
            p.x.push_back(J);
            p.y.push_back(pv);
            if (std::abs(wv) < 0.9) lo = std::min(lo, J), hi = std::max(hi, J);
        }
        csv.close();
        files.push_back(path);
        const double width = hi >= lo ? hi - lo : 0.0;
        summary.row({g, width});
        log << "g=" << format_cell(g) << ": transition width (|W| < 0.9) = " << format_cell(width) << "\n";
        series.push_back(std::move(w));
        series.push_back(std::move(p));
    }
    summary.close();
    files.push_back(summary_path);

    const fs::path svg = cfg.out_dir / "scan.svg";
    write_line_plot(svg, {"Wilson loop (solid) and P (dashed) vs J", "J", "expectation"}, series);
    files.push_back(svg);
    return files;
}

std::vector<fs::path> cmd_sweep(const RunConfig &cfg, std::ostream &log) {
    const Lattice l(cfg.lattice_x(), cfg.lattice_y());
    const double g = cfg.g_values.front();
    ScheduleOptions so;
    so.lx = l.lx();
    so.ly = l.ly();
    const Schedule schedule = make_schedule(g, cfg.j_min, cfg.j_max, cfg.total_time, so);
    const Discretization d = discretize(schedule, cfg.steps);
    const Stepper stepper = cfg.stepper == "trotter" ? Stepper::trotter(cfg.slices) : Stepper::exact();
    const StateVector initial = ground_state(l, cfg.j_min, g);
    const SweepResult result = evolve(l, g, d.couplings, d.tau, initial, stepper);

    std::vector<fs::path> files;
    const fs::path steps_path = cfg.out_dir / "sweep_steps.csv";
    CsvWriter steps(steps_path, "wenplaq sweep steps", 1, {"m", "t_m", "J_m", "fidelity", "wilson", "P", "energy"});
    for (std::size_t k = 0; k < result.steps.size(); ++k) {
        const auto &r = result.steps[k];
        steps.row({static_cast<long long>(r.m), d.times[k], r.coupling, r.fidelity, r.wilson, r.order_p,
                   r.ground_energy});
    }
    steps.close();
    files.push_back(steps_path);

    const fs::path schedule_path = cfg.out_dir / "sweep_schedule.csv";
    CsvWriter sched(schedule_path, "wenplaq sweep schedule", 1, {"t", "J"});
    for (std::size_t k = 0; k < schedule.times.size(); ++k) sched.row({schedule.times[k], schedule.couplings[k]});
    sched.close();
    files.push_back(schedule_path);

    const fs::path summary_path = cfg.out_dir / "sweep_summary.csv";
    CsvWriter summary(summary_path, "wenplaq sweep summary", 1,
                      {"g", "J_start", "J_end", "T", "M", "stepper", "slices", "adiabaticity_c", "F_min"});
    summary.row({g, cfg.j_min, cfg.j_max, cfg.total_time, static_cast<long long>(cfg.steps), cfg.stepper,
                 static_cast<long long>(cfg.slices), schedule.adiabaticity_c, result.min_fidelity()});
    summary.close();
    files.push_back(summary_path);
    log << "F_min = " << format_cell(result.min_fidelity()) << " (M=" << cfg.steps << ", " << cfg.stepper << ")\n";

    std::vector<ScanPoint> scan;
    if (!cfg.step_scan.empty()) {
        scan = min_fidelity_scan(g, cfg.j_min, cfg.j_max, cfg.total_time, cfg.step_scan, stepper, so);
        const fs::path scan_path = cfg.out_dir / "sweep_mscan.csv";
        CsvWriter csv(scan_path, "wenplaq sweep m-scan", 1, {"M", "F_min"});
        for (const auto &p : scan) {
            csv.row({static_cast<long long>(p.steps), p.min_fidelity});
            log << "M=" << p.steps << ": F_min = " << format_cell(p.min_fidelity) << "\n";
        }
        csv.close();
        files.push_back(scan_path);
    }

    const fs::path svg = cfg.out_dir / "sweep.svg";
    Series path{"J(t)", schedule.times, schedule.couplings, color(0), false};
    Series samples{"J_m", d.times, d.couplings, color(1), true};
    write_line_plot(svg, {"Constant-adiabaticity sweep", "t", "J"}, {path, samples});
    files.push_back(svg);
    const fs::path fsvg = cfg.out_dir / "sweep_fidelity.svg";
    Series fid{"fidelity", {}, {}, color(2), false};
    for (const auto &r : result.steps) fid.x.push_back(r.m), fid.y.push_back(r.fidelity);
    write_line_plot(fsvg, {"Step fidelity", "m", "|<psi|psi_g>|"}, {fid});
    files.push_back(fsvg);
    return files;
}

std::vector<fs::path> cmd_correlate(const RunConfig &cfg, std::ostream &log) {
    const Lattice l(cfg.lattice_x(), cfg.lattice_y());
    const int n = l.n_sites();
    CorrelationOptions opts;
    opts.seed = cfg.seed;

    std::vector<fs::path> files;
    const fs::path path = cfg.out_dir / "correlate.csv";
    CsvWriter csv(path, "wenplaq correlate", 1,
                  {"J_over_g", "J", "g", "site", "distance", "raw", "connected", "manifold_size"});
    Eigen::MatrixXd heat(static_cast<Eigen::Index>(cfg.ratios.size()), n);
    std::vector<std::string> rows, cols;
    for (std::size_t ri = 0; ri < cfg.ratios.size(); ++ri) {
        const double ratio = cfg.ratios[ri];
        const double J = ratio > 0 ? 1.0 : 0.0;
        const double g = ratio > 0 ? 1.0 / ratio : 1.0;
        const auto t = spin_correlations(l, J, g, Pauli::X, opts);
        double worst = 0.0;
        for (int k = 0; k < n; ++k) {
            csv.row({ratio, J, g, static_cast<long long>(k + 1), static_cast<long long>(l.distance(0, k)), t.raw(0, k),
                     t.connected(0, k), static_cast<long long>(t.manifold_size)});
            heat(static_cast<Eigen::Index>(ri), k) = t.raw(0, k);
            if (k > 0) worst = std::max(worst, std::abs(t.raw(0, k)));
        }
        rows.push_back("J/g=" + format_cell(ratio));
        log << "J/g=" << format_cell(ratio) << ": max off-site |<x_1 x_k>| = " << format_cell(worst) << "\n";
    }
    csv.close();
    files.push_back(path);

    for (int k = 0; k < n; ++k) cols.push_back(std::to_string(k + 1));
    const fs::path svg = cfg.out_dir / "correlate.svg";
    write_heatmap(svg, {"<x_1 x_k> on " + l.label(), "site k", "J/g"}, heat, rows, cols);
    files.push_back(svg);
    return files;
}

std::vector<fs::path> cmd_compile(const RunConfig &cfg, std::ostream &log) {
    const NmrMachine machine = NmrMachine::load(cfg.machine_path);
    const Lattice l(2, 2);
    const double J = cfg.coupling, g = cfg.g_values.front(), tau = cfg.tau;

    const PulseSequence four = compile_four_body(J, tau, machine);
    const auto four_eq = verify_equivalence(sequence_unitary(four, machine), zz_all_evolution(4, 2.0 * J * tau));

    const PulseSequence step = compile_step(J, g, tau, machine);
    const CMatrix step_target = tau > 0 ? sequence_unitary(trotter_step(J, g, tau, l)) : CMatrix::Identity(16, 16);
    const auto step_eq = verify_equivalence(sequence_unitary(step, machine), step_target);

    std::optional<PulseSequence> literal;
    double literal_distance = NAN;
    try {
        literal = compile_four_body_literal(J, tau, machine);
        literal_distance =
            verify_equivalence(sequence_unitary(*literal, machine), zz_all_evolution(4, 2.0 * J * tau)).distance;
    } catch (const DomainError &) {
        literal.reset();
    }

    std::vector<fs::path> files;
    auto write_text = [&](const fs::path &p, const std::string &text) {
        std::ofstream out(p, std::ios::binary | std::ios::trunc);
        out << text;
        if (!out) throw Error("failed to write " + p.string());
        files.push_back(p);
    };
    write_text(cfg.out_dir / "compile_step.txt", format_sequence(step, &machine));
    write_text(cfg.out_dir / "compile_four_body.txt", format_sequence(four, &machine));
    if (literal) write_text(cfg.out_dir / "compile_four_body_literal.txt", format_sequence(*literal, &machine));

    const fs::path report = cfg.out_dir / "compile_report.csv";
    CsvWriter csv(report, "wenplaq compile report", 1, {"check", "distance", "threshold", "pass"});
    const bool four_ok = four_eq.distance <= kEquivalenceThreshold;
    const bool step_ok = step_eq.distance <= kEquivalenceThreshold;
    csv.row({std::string("four_body_vs_target"), four_eq.distance, kEquivalenceThreshold,
             std::string(four_ok ? "yes" : "no")});
    csv.row({std::string("step_vs_gate_form"), step_eq.distance, kEquivalenceThreshold,
             std::string(step_ok ? "yes" : "no")});
    csv.row({std::string("literal_four_body_vs_target"), literal_distance, kEquivalenceThreshold,
             std::string(literal_distance <= kEquivalenceThreshold ? "yes" : "no")});
    csv.close();
    files.push_back(report);

    log << "four-body distance = " << format_cell(four_eq.distance) << "\n"
        << "compiled step distance = " << format_cell(step_eq.distance) << "\n"
        << "literal four-body distance = " << format_cell(literal_distance) << " (informational)\n";
    if (!four_ok || !step_ok) {
        throw VerificationError("compiled sequence misses its target: distance " +
                                format_cell(std::max(four_eq.distance, step_eq.distance)) + " exceeds " +
                                format_cell(kEquivalenceThreshold));
    }
    return files;
}

std::vector<fs::path> cmd_tomo(const RunConfig &cfg, std::ostream &log) {
    const Lattice l(2, 2);
    const double J = cfg.coupling, g = cfg.g_values.front();
    const DensityMatrix truth = DensityMatrix::from_state(ground_state(l, J, g));

    std::vector<fs::path> files;
    std::vector<std::string> columns{"seed", "fidelity", "wilson_true", "wilson_rec", "P_true", "P_rec"};
    for (int a = 0; a < 4; ++a) {
        for (int b = a + 1; b < 4; ++b) {
            columns.push_back(pair_name(a, b) + "_true");
            columns.push_back(pair_name(a, b) + "_rec");
        }
    }
    const fs::path report_path = cfg.out_dir / "tomo_report.csv";
    CsvWriter csv(report_path, "wenplaq tomography report", 1, columns);

    double f_sum = 0, f_sq = 0, w_sum = 0, c13 = 0, c24 = 0;
    std::optional<DensityMatrix> first;
    std::optional<MeasurementRecord> first_record;
    for (int rep = 0; rep < cfg.repetitions; ++rep) {
        const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(rep);
        const auto record = synth_measure(truth, cfg.sigma, seed);
        const auto rec = reconstruct(record);
        const auto rep_report = tomography_report(truth, rec.projected);
        std::vector<Cell> row{static_cast<long long>(seed), rep_report.fidelity, rep_report.wilson_truth,
                              rep_report.wilson_reconstructed, rep_report.p_truth, rep_report.p_reconstructed};
        for (const auto &c : rep_report.concurrences) {
            row.push_back(c.truth);
            row.push_back(c.reconstructed);
            if (c.a == 0 && c.b == 2) c13 += c.reconstructed;
            if (c.a == 1 && c.b == 3) c24 += c.reconstructed;
        }
        csv.row(row);
        f_sum += rep_report.fidelity;
        f_sq += rep_report.fidelity * rep_report.fidelity;
        w_sum += rep_report.wilson_reconstructed;
        if (!first) first = rec.projected, first_record = record;
    }
    csv.close();
    files.push_back(report_path);

    const double reps = cfg.repetitions;
    const double f_mean = f_sum / reps;
    const double f_std = std::sqrt(std::max(0.0, f_sq / reps - f_mean * f_mean));
    const fs::path summary_path = cfg.out_dir / "tomo_summary.csv";
    CsvWriter summary(summary_path, "wenplaq tomography summary", 1,
                      {"J", "g", "sigma", "repetitions", "fidelity_mean", "fidelity_std", "wilson_rec_mean",
                       "c1_3_rec_mean", "c2_4_rec_mean"});
    summary.row({J, g, cfg.sigma, static_cast<long long>(cfg.repetitions), f_mean, f_std, w_sum / reps, c13 / reps,
                 c24 / reps});
    summary.close();
    files.push_back(summary_path);

    for (const auto &[suffix, imag] : {std::pair{"real", false}, {"imag", true}}) {
        const fs::path p = cfg.out_dir / (std::string("tomo_rho_") + suffix + ".csv");
        std::vector<std::string> cols;
        for (int c = 0; c < 16; ++c) cols.push_back("col" + std::to_string(c));
        CsvWriter m(p, std::string("wenplaq reconstructed density matrix ") + suffix, 1, cols);
        for (Eigen::Index r = 0; r < 16; ++r) {
            std::vector<Cell> row;
            for (Eigen::Index c = 0; c < 16; ++c) {
                const Complex v = first->matrix()(r, c);
                row.push_back(imag ? v.imag() : v.real());
            }
            m.row(row);
        }
        m.close();
        files.push_back(p);
    }
    const fs::path record_path = cfg.out_dir / "tomo_record.txt";
    {
        std::ofstream out(record_path, std::ios::binary | std::ios::trunc);
        out << format_record(*first_record);
        if (!out) throw Error("failed to write " + record_path.string());
    }
    files.push_back(record_path);
    log << "mean fidelity = " << format_cell(f_mean) << " over " << cfg.repetitions << " seeds\n";
    return files;
}

std::vector<fs::path> run(const RunConfig &cfg, std::ostream &log) {
    validate(cfg);
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) throw Error("cannot create output directory " + cfg.out_dir.string() + ": " + ec.message());
    switch (cfg.command) {
    case Command::Scan: return cmd_scan(cfg, log);
    case Command::Sweep: return cmd_sweep(cfg, log);
    case Command::Correlate: return cmd_correlate(cfg, log);
    case Command::Compile: return cmd_compile(cfg, log);
    case Command::Tomo: return cmd_tomo(cfg, log);
    }
    return {};
}

}  // namespace wenplaq::driver
