#include <cmath>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "wenplaq/adiabatic.hpp"
#include "wenplaq/errors.hpp"
#include "wenplaq/spectra.hpp"

using namespace wenplaq;

namespace {

constexpr double kTotalTime = 6.5684;

// Reference values from an independent NumPy/SciPy implementation of the same
// recipe: degeneracy-grouped r(J), 2001-point trapezoid schedule, midpoint
// couplings and expm steps.
constexpr double kRefAdiabaticityC = 0.053759252718109274;
constexpr double kRefRateAtZero = 5.656854249492375;
constexpr double kRefRateAtEnd = 45424.64564528823;
constexpr double kRefFirstCoupling31 = -3.7676883238943577;
constexpr double kRefMinFidelity31 = 0.9890701297433424;

struct RefScanPoint {
    int steps;
    double min_fidelity;
};
constexpr RefScanPoint kRefScan[] = {
    {5, 0.5897715358690933},  {10, 0.8500112927690168}, {15, 0.9480587624377597},
    {20, 0.9706770360740183}, {25, 0.9833730351333724}, {31, 0.9890701297433424},
    {40, 0.9919642372011939}, {60, 0.9951429518768901}, {100, 0.99592092736031},
};

const Schedule &default_schedule() {
    static const Schedule s = make_schedule(1.0, -20.0, 20.0, kTotalTime);
    return s;
}

StateVector ground_at(double J, double g) {
    return dense_spectrum(build_hamiltonian(Lattice(2, 2), J, g), {.keep_states = 1}).ground_state();
}

}  // namespace

TEST(AdiabaticRate, MatchesReference) {
    const Lattice l(2, 2);
    EXPECT_NEAR(adiabatic_rate(l, 0.0, 1.0), kRefRateAtZero, 1e-9);
    EXPECT_NEAR(adiabatic_rate(l, 20.0, 1.0), kRefRateAtEnd, 1e-6 * kRefRateAtEnd);
    EXPECT_NEAR(adiabatic_rate(l, 3.0, 1.0), adiabatic_rate(l, -3.0, 1.0), 1e-9);
}

TEST(Schedule, EndpointsAndMonotonicity) {
    const auto &s = default_schedule();
    EXPECT_NEAR(s.adiabaticity_c, kRefAdiabaticityC, 1e-12);
    EXPECT_DOUBLE_EQ(s.times.front(), 0.0);
    EXPECT_DOUBLE_EQ(s.times.back(), kTotalTime);
    EXPECT_DOUBLE_EQ(s.coupling_at(0.0), -20.0);
    EXPECT_DOUBLE_EQ(s.coupling_at(kTotalTime), 20.0);
    EXPECT_DOUBLE_EQ(s.coupling_at(-1.0), -20.0);
    for (std::size_t k = 1; k < s.times.size(); ++k) {
        EXPECT_GT(s.times[k], s.times[k - 1]);
        EXPECT_GT(s.couplings[k], s.couplings[k - 1]);
    }
}

TEST(Schedule, AntisymmetricAboutMidpoint) {
    const auto &s = default_schedule();
    for (double t : {0.1, 1.0, 2.5, 3.2}) {
        EXPECT_NEAR(s.coupling_at(t), -s.coupling_at(kTotalTime - t), 1e-9) << t;
    }
    EXPECT_NEAR(s.coupling_at(0.5 * kTotalTime), 0.0, 1e-9);
}

TEST(Schedule, ScalesInverselyWithTotalTime) {
    const auto doubled = make_schedule(1.0, -20.0, 20.0, 2.0 * kTotalTime, {.grid_points = 201});
    const auto base = make_schedule(1.0, -20.0, 20.0, kTotalTime, {.grid_points = 201});
    EXPECT_NEAR(doubled.adiabaticity_c, 0.5 * base.adiabaticity_c, 1e-12);
    for (double t : {0.3, 1.7, 4.0}) EXPECT_NEAR(doubled.coupling_at(2.0 * t), base.coupling_at(t), 1e-12);
}

TEST(Schedule, RejectsInvalidInput) {
    EXPECT_THROW(make_schedule(0.0, -1.0, 1.0, 1.0), DomainError);
    EXPECT_THROW(make_schedule(1.0, -1.0, 1.0, 0.0), DomainError);
    EXPECT_THROW(make_schedule(1.0, 1.0, 1.0, 1.0), DomainError);
    EXPECT_THROW(make_schedule(1.0, -1.0, 1.0, 1.0, {.grid_points = 1}), DomainError);
}

TEST(Discretize, MidpointSampling) {
    const auto d = discretize(default_schedule(), 31);
    ASSERT_EQ(d.couplings.size(), 31u);
    EXPECT_NEAR(d.tau, kTotalTime / 31.0, 1e-15);
    EXPECT_NEAR(d.times.front(), 0.5 * d.tau, 1e-15);
    EXPECT_NEAR(d.couplings.front(), kRefFirstCoupling31, 1e-9);
    EXPECT_NEAR(d.couplings[15], 0.0, 1e-9);
    EXPECT_THROW(discretize(default_schedule(), 1), DomainError);
}

TEST(Evolve, FrozenHamiltonianKeepsGroundState) {
    const Lattice l(2, 2);
    const auto psi0 = ground_at(0.7, 1.3);
    const auto r = evolve(l, 1.3, std::vector<double>(8, 0.7), 0.4, psi0);
    for (const auto &rec : r.steps) EXPECT_NEAR(rec.fidelity, 1.0, 1e-12);
    EXPECT_NEAR(r.final_state.norm(), 1.0, 1e-12);
}

TEST(Evolve, StepMatchesOracleExponential) {
    const Lattice l(2, 2);
    const auto psi0 = ground_at(-2.0, 1.0);
    const auto r = evolve(l, 1.0, {-1.0, 0.5}, 0.3, psi0);
    const oracle::M u = oracle::evolve(oracle::hamiltonian_2x2(0.5, 1.0), 0.3) *
                        oracle::evolve(oracle::hamiltonian_2x2(-1.0, 1.0), 0.3);
    const CVector expected = u * psi0.amplitudes();
    EXPECT_LT((r.final_state.amplitudes() - expected).norm(), 1e-12);
}

TEST(Evolve, ObservablesOfTrackedState) {
    const auto &s = default_schedule();
    const auto d = discretize(s, 31);
    const auto r = evolve(Lattice(2, 2), 1.0, d.couplings, d.tau, ground_at(-20.0, 1.0));
    ASSERT_EQ(r.steps.size(), 31u);
    EXPECT_NEAR(r.min_fidelity(), kRefMinFidelity31, 1e-9);
    for (const auto &rec : r.steps) {
        EXPECT_NEAR(rec.ground_energy, -4.0 * std::hypot(1.0, rec.coupling), 1e-10);
        // A state of fidelity F to the ground state cannot deviate from the
        // ground-state Wilson loop by more than 2 sqrt(1 - F^2).
        const double ideal = rec.coupling / std::hypot(1.0, rec.coupling);
        EXPECT_LE(std::abs(rec.wilson - ideal), 2.0 * std::sqrt(1.0 - rec.fidelity * rec.fidelity) + 1e-9);
    }
    EXPECT_NEAR(r.final_state.norm(), 1.0, 1e-12);
    EXPECT_GT(r.steps.back().wilson, 0.9);
    EXPECT_LT(r.steps.front().wilson, -0.85);
}

TEST(Evolve, ReversedSweepMirrorsForward) {
    const auto fwd = make_schedule(1.0, -20.0, 20.0, kTotalTime, {.grid_points = 401});
    const auto rev = make_schedule(1.0, 20.0, -20.0, kTotalTime, {.grid_points = 401});
    const auto df = discretize(fwd, 20), dr = discretize(rev, 20);
    const Lattice l(2, 2);
    const auto a = evolve(l, 1.0, df.couplings, df.tau, ground_at(-20.0, 1.0));
    const auto b = evolve(l, 1.0, dr.couplings, dr.tau, ground_at(20.0, 1.0));
    for (std::size_t m = 0; m < a.steps.size(); ++m) {
        EXPECT_NEAR(a.steps[m].fidelity, b.steps[m].fidelity, 1e-10);
        EXPECT_NEAR(a.steps[m].wilson, -b.steps[m].wilson, 1e-10);
    }
}

TEST(Evolve, RejectsBadInitialState) {
    const Lattice l(2, 2);
    EXPECT_THROW(evolve(l, 1.0, {0.0}, 0.1, StateVector(3)), DimensionError);
    EXPECT_THROW(evolve(l, 1.0, {0.0}, 0.1, StateVector(4, CVector::Constant(16, 1.0))), DomainError);
    EXPECT_THROW(evolve(Lattice(3, 2), 1.0, {0.0}, 0.1, StateVector(6), Stepper::trotter(2)), DomainError);
    EXPECT_THROW(Stepper::trotter(0), DomainError);
}

TEST(MinFidelityScan, MatchesReferenceAndRises) {
    std::vector<int> counts;
    for (const auto &p : kRefScan) counts.push_back(p.steps);
    const auto scan = min_fidelity_scan(1.0, -20.0, 20.0, kTotalTime, counts);
    ASSERT_EQ(scan.size(), counts.size());
    for (std::size_t i = 0; i < scan.size(); ++i) {
        EXPECT_EQ(scan[i].steps, kRefScan[i].steps);
        EXPECT_NEAR(scan[i].min_fidelity, kRefScan[i].min_fidelity, 1e-9) << scan[i].steps;
        if (i > 0) {
            EXPECT_GT(scan[i].min_fidelity, scan[i - 1].min_fidelity);
        }
    }
}

TEST(MinFidelityScan, TrotterTracksExact) {
    const auto exact = min_fidelity_scan(1.0, -20.0, 20.0, kTotalTime, {31});
    const auto trotter = min_fidelity_scan(1.0, -20.0, 20.0, kTotalTime, {31}, Stepper::trotter(4));
    EXPECT_NEAR(trotter.front().min_fidelity, exact.front().min_fidelity, 0.01);
}
