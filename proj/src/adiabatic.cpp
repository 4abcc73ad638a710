#include "wenplaq/adiabatic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "wenplaq/errors.hpp"
#include "wenplaq/observables.hpp"
#include "wenplaq/pulse.hpp"
#include "wenplaq/spectra.hpp"

namespace wenplaq {

namespace {

constexpr double kCouplingFloor = 1e-12;

CMatrix exact_step(const CMatrix &h, double tau) {
    const auto eig = hermitian_eigen(h);
    const CVector phases = (eig.values.cast<Complex>() * Complex(0.0, -tau)).array().exp().matrix();
    return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

}  // namespace

double Schedule::coupling_at(double t) const {
    if (t <= times.front()) return couplings.front();
    if (t >= times.back()) return couplings.back();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const auto hi = static_cast<std::size_t>(it - times.begin());
    const std::size_t lo = hi - 1;
    const double w = (t - times[lo]) / (times[hi] - times[lo]);
    return couplings[lo] + w * (couplings[hi] - couplings[lo]);
}

double adiabatic_rate(const Lattice &l, double J, double g) {
    const auto spec = dense_spectrum(build_hamiltonian(l, J, g));
    const auto &ground = spec.ground_state();
    const StateVector driven = apply(plaquette_sum_derivative(l), ground);

    double rate = std::numeric_limits<double>::infinity();
    for (std::size_t gi = 1; gi < spec.degeneracy_groups.size(); ++gi) {
        const auto &group = spec.degeneracy_groups[gi];
        double weight = 0.0;
        for (int idx : group) weight += std::norm(spec.states[static_cast<std::size_t>(idx)].inner(driven));
        const double coupling = std::sqrt(weight);
        if (coupling <= kCouplingFloor) continue;
        const double gap = spec.energies[static_cast<std::size_t>(group.front())] - spec.ground_energy();
        rate = std::min(rate, gap * gap / coupling);
    }
    if (!std::isfinite(rate)) throw DomainError("no excited level couples to the ground state");
    return rate;
}

Schedule make_schedule(double g, double j_start, double j_end, double total_time, const ScheduleOptions &opts) {
    if (!(g > 0.0)) throw DomainError("schedule requires g > 0; the gap closes at g = 0");
    if (!(total_time > 0.0)) throw DomainError("schedule requires T > 0");
    if (j_start == j_end) throw DomainError("schedule requires J_start != J_end");
    if (opts.grid_points < 2) throw DomainError("schedule grid needs at least two points");

    const Lattice l(opts.lx, opts.ly);
    const auto n = static_cast<std::size_t>(opts.grid_points);
    std::vector<double> js(n), inv_rate(n);
    for (std::size_t k = 0; k < n; ++k) {
        js[k] = j_start + (j_end - j_start) * static_cast<double>(k) / static_cast<double>(n - 1);
        inv_rate[k] = 1.0 / adiabatic_rate(l, js[k], g);
    }

    // Cumulative traversal time at c = 1, then rescale so the sweep lasts exactly T.
    std::vector<double> cumulative(n, 0.0);
    const double dj = std::abs(j_end - j_start) / static_cast<double>(n - 1);
    for (std::size_t k = 1; k < n; ++k) cumulative[k] = cumulative[k - 1] + 0.5 * dj * (inv_rate[k - 1] + inv_rate[k]);

    Schedule s;
    s.g = g;
    s.j_start = j_start;
    s.j_end = j_end;
    s.total_time = total_time;
    s.adiabaticity_c = cumulative.back() / total_time;
    s.couplings = std::move(js);
    s.times.resize(n);
    for (std::size_t k = 0; k < n; ++k) s.times[k] = cumulative[k] / s.adiabaticity_c;
    s.times.back() = total_time;
    return s;
}

Discretization discretize(const Schedule &s, int steps) {
    if (steps < 2) throw DomainError("discretization needs M >= 2");
    Discretization d;
    d.tau = s.total_time / steps;
    for (int m = 1; m <= steps; ++m) {
        const double t = (m - 0.5) * d.tau;
        d.times.push_back(t);
        d.couplings.push_back(s.coupling_at(t));
    }
    return d;
}

Stepper Stepper::trotter(int slices) {
    if (slices < 1) throw DomainError("Trotter stepper needs at least one slice");
    return {Kind::Trotter, slices};
}

double SweepResult::min_fidelity() const {
    double f = 1.0;
    for (const auto &r : steps) f = std::min(f, r.fidelity);
    return f;
}

SweepResult evolve(const Lattice &l, double g, const std::vector<double> &couplings, double tau,
                   const StateVector &initial, const Stepper &stepper) {
    if (initial.n_sites() != l.n_sites()) throw DimensionError("initial state does not match the lattice");
    if (std::abs(initial.norm() - 1.0) > 1e-10) throw DomainError("initial state must be normalized");
    if (l.n_sites() > kDefaultDenseLimit) throw CapacityError("evolve requires a lattice within the dense limit");
    if (stepper.kind == Stepper::Kind::Trotter && !(l.lx() == 2 && l.ly() == 2)) {
        throw DomainError("the Trotter stepper requires a 2x2 lattice");
    }

    const LoopPath loop = canonical_loop(l);
    CVector psi = initial.amplitudes();
    std::optional<CVector> previous_ground;
    SweepResult out{{}, initial};
    out.steps.reserve(couplings.size());

    for (std::size_t m = 0; m < couplings.size(); ++m) {
        const double J = couplings[m];
        const CMatrix h = materialize(build_hamiltonian(l, J, g));
        const CMatrix u = stepper.kind == Stepper::Kind::Exact
                              ? exact_step(h, tau)
                              : sequence_unitary(trotter_sequence(J, g, tau, stepper.slices, l));
        psi = u * psi;

        const auto eig = hermitian_eigen(h);
        CVector ground = eig.vectors.col(0);
        if (previous_ground) {
            const Complex ov = ground.dot(*previous_ground);
            if (std::abs(ov) > 0.0) ground *= ov / std::abs(ov);
        }
        previous_ground = ground;

        const StateVector state(l.n_sites(), psi);
        double p = 0.0;
        for (int s = 0; s < l.n_sites(); ++s) p += local_order_P(state, s);
        out.steps.push_back({static_cast<int>(m) + 1, tau * static_cast<double>(m + 1), J, eig.values[0],
                             std::min(1.0, std::abs(ground.dot(psi))), wilson_expectation(state, l, loop),
                             p / l.n_sites()});
    }
    out.final_state = StateVector(l.n_sites(), psi);
    return out;
}

std::vector<ScanPoint> min_fidelity_scan(double g, double j_start, double j_end, double total_time,
                                         const std::vector<int> &step_counts, const Stepper &stepper,
                                         const ScheduleOptions &opts) {
    const Lattice l(opts.lx, opts.ly);
    const Schedule s = make_schedule(g, j_start, j_end, total_time, opts);
    const auto initial = dense_spectrum(build_hamiltonian(l, j_start, g)).ground_state();
    std::vector<ScanPoint> out;
    for (int m : step_counts) {
        const auto d = discretize(s, m);
        out.push_back({m, evolve(l, g, d.couplings, d.tau, initial, stepper).min_fidelity()});
    }
    return out;
}

}  // namespace wenplaq
