#pragma once

#include <vector>

#include "wenplaq/lattice.hpp"
#include "wenplaq/pauli.hpp"

namespace wenplaq {

/// Constant-adiabaticity sweep J(t), tabulated on a dense grid.
struct Schedule {
    double g = 0.0;
    double j_start = 0.0;
    double j_end = 0.0;
    double total_time = 0.0;
    /// Proportionality constant in dJ/dt = c * r(J).
    double adiabaticity_c = 0.0;
    /// Ascending times from 0 to total_time, paired with couplings.
    std::vector<double> times;
    std::vector<double> couplings;

    /// Piecewise-linear interpolation of J(t); t is clamped to [0, T].
    double coupling_at(double t) const;
};

struct ScheduleOptions {
    int grid_points = 2001;
    int lx = 2;
    int ly = 2;
};

/// Local adiabatic rate r(J) = min over coupled excited levels of gap^2 / |<e|dH/dJ|g>|.
double adiabatic_rate(const Lattice &l, double J, double g);

Schedule make_schedule(double g, double j_start, double j_end, double total_time, const ScheduleOptions &opts = {});

struct Discretization {
    /// Midpoints t_m = (m - 1/2) * tau.
    std::vector<double> times;
    std::vector<double> couplings;
    double tau = 0.0;
};

Discretization discretize(const Schedule &s, int steps);

struct Stepper {
    enum class Kind { Exact, Trotter };
    Kind kind = Kind::Exact;
    int slices = 1;

    static Stepper exact() { return {}; }
    static Stepper trotter(int slices);
};

struct StepRecord {
    int m;
    /// Time at the end of step m.
    double time;
    double coupling;
    double ground_energy;
    /// Amplitude overlap |<psi(t_m)|psi_g(J_m)>|.
    double fidelity;
    double wilson;
    double order_p;
};

struct SweepResult {
    std::vector<StepRecord> steps;
    StateVector final_state;

    double min_fidelity() const;
};

SweepResult evolve(const Lattice &l, double g, const std::vector<double> &couplings, double tau,
                   const StateVector &initial, const Stepper &stepper = Stepper::exact());

struct ScanPoint {
    int steps;
    double min_fidelity;
};

/// Runs one sweep per entry of `step_counts`, starting each from the ground state at j_start.
std::vector<ScanPoint> min_fidelity_scan(double g, double j_start, double j_end, double total_time,
                                         const std::vector<int> &step_counts, const Stepper &stepper = Stepper::exact(),
                                         const ScheduleOptions &opts = {});

}  // namespace wenplaq
