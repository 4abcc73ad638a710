#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "wenplaq/errors.hpp"
#include "wenplaq/pulse.hpp"

using namespace wenplaq;
using std::numbers::pi;

namespace {

const Lattice kPlaquette(2, 2);

oracle::M nmr_hamiltonian(const NmrMachine &m) {
    oracle::M h = oracle::M::Zero(16, 16);
    for (int i = 0; i < 4; ++i) h += 0.5 * m.omega(i) * oracle::on_site(4, i, 'Z');
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            h += 0.5 * pi * m.coupling(i, j) * oracle::on_site(4, i, 'Z') * oracle::on_site(4, j, 'Z');
        }
    }
    return h;
}

NmrMachine random_machine(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> freq(-1000.0, 1000.0), mag(2.0, 120.0);
    std::bernoulli_distribution negative(0.3);
    std::array<double, 4> omegas{};
    for (auto &w : omegas) w = 2.0 * pi * freq(rng);
    std::array<std::array<double, 4>, 4> c{};
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            const double v = (negative(rng) ? -1.0 : 1.0) * mag(rng);
            c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
            c[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = v;
        }
    }
    return NmrMachine(omegas, c);
}

NmrMachine sample_machine() {
    return NmrMachine::from_json_text(R"({
        "omegas_rad_per_s": [1884.9555921538758, -2827.4333882308138, 3895.5748904513433, -1130.9733552923256],
        "couplings_hz": {"12": 72.0, "13": 1.4, "14": 7.1, "23": 1.6, "24": 5.2, "34": 41.0}})");
}

double trotter_error(double J, double g, double tau, int slices) {
    const CMatrix u = sequence_unitary(trotter_sequence(J, g, tau, slices, kPlaquette));
    return (u - oracle::evolve(oracle::hamiltonian_2x2(J, g), tau)).norm();
}

double fitted_slope(const std::vector<double> &x, const std::vector<double> &y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST(Instructions, RotationMatchesOracle) {
    const CMatrix u = instruction_unitary(Rotation{{0, 2}, Axis::MinusY, 0.7}, 4);
    const oracle::M expected =
        oracle::evolve(-0.5 * (oracle::on_site(4, 0, 'Y') + oracle::on_site(4, 2, 'Y')), 0.7);
    EXPECT_LT((u - expected).norm(), 1e-12);
    const CMatrix z = instruction_unitary(ZPhase{3, 1.1}, 4);
    EXPECT_LT((z - oracle::evolve(0.5 * oracle::on_site(4, 3, 'Z'), 1.1)).norm(), 1e-12);
}

TEST(Instructions, FreeEvolutionMatchesOracle) {
    const auto m = sample_machine();
    const CMatrix u = instruction_unitary(FreeEvolution{0.0123}, 4, &m);
    EXPECT_LT((u - oracle::evolve(nmr_hamiltonian(m), 0.0123)).norm(), 1e-10);
    EXPECT_THROW(instruction_unitary(FreeEvolution{0.1}, 4), MachineError);
}

TEST(Instructions, ZzAllEvolution) {
    EXPECT_LT((zz_all_evolution(4, 0.37) - oracle::evolve(oracle::word("ZZZZ"), 0.37)).norm(), 1e-12);
}

TEST(PulseSequence, InverseUndoesRotations) {
    PulseSequence s(4);
    s.rotate({0, 1}, Axis::X, 0.3).zphase(2, -1.0).rotate({3}, Axis::MinusY, 2.0);
    const CMatrix id = sequence_unitary(s.inverse()) * sequence_unitary(s);
    EXPECT_LT((id - CMatrix::Identity(16, 16)).norm(), 1e-12);
    s.free(0.1);
    EXPECT_THROW(s.inverse(), DomainError);
    EXPECT_THROW(PulseSequence(4).rotate({0, 0}, Axis::X, 1.0), DomainError);
    EXPECT_THROW(PulseSequence(4).rotate({4}, Axis::X, 1.0), DomainError);
    EXPECT_THROW(PulseSequence(4).free(-1.0), DomainError);
}

TEST(Trotter, SingleStepErrorIsThirdOrder) {
    std::vector<double> taus{0.01, 0.02, 0.04, 0.08}, errs;
    for (double t : taus) errs.push_back(trotter_error(1.0, 0.7, t, 1));
    EXPECT_NEAR(fitted_slope(taus, errs), 3.0, 0.2);
}

TEST(Trotter, SliceErrorScalesAsInverseSquare) {
    std::vector<double> ks{2, 4, 8, 16}, errs;
    for (double k : ks) errs.push_back(trotter_error(1.0, 0.7, 0.5, static_cast<int>(k)));
    EXPECT_NEAR(fitted_slope(ks, errs), -2.0, 0.2);
}

TEST(Trotter, ExactWhenOneTermVanishes) {
    EXPECT_LT(trotter_error(0.0, 0.9, 0.3, 1), 1e-12);
    EXPECT_LT(trotter_error(1.3, 0.0, 0.3, 1), 1e-12);
    for (const auto &ins : trotter_step(0.0, 0.9, 0.3, kPlaquette).instructions()) {
        EXPECT_FALSE(std::holds_alternative<IdealUnitary>(ins));
    }
    EXPECT_THROW(trotter_step(1.0, 1.0, 0.0, kPlaquette), DomainError);
    EXPECT_THROW(trotter_step(1.0, 1.0, 0.1, Lattice(3, 2)), DomainError);
}

TEST(Compile, FourBodyMatchesTargetOnRandomMachines) {
    std::mt19937_64 rng(20140521);
    std::uniform_real_distribution<double> uj(-2.0, 2.0);
    for (int machine = 0; machine < 25; ++machine) {
        const auto m = random_machine(rng);
        const double J = uj(rng);
        for (double tau : {0.0, 0.013, 0.05, 0.4}) {
            const CMatrix target = oracle::evolve(2.0 * J * oracle::word("ZZZZ"), tau);
            const CMatrix got = sequence_unitary(compile_four_body(J, tau, m), m);
            EXPECT_LE(oracle::phase_distance(target, got), 1e-8) << "machine " << machine << " tau " << tau;
        }
    }
}

TEST(Compile, ZeroDurationIsIdentity) {
    const auto m = sample_machine();
    const CMatrix u = sequence_unitary(compile_four_body(1.7, 0.0, m), m);
    EXPECT_LE(oracle::phase_distance(CMatrix::Identity(16, 16), u), 1e-9);
}

TEST(Compile, DependsOnlyOnCouplingTimesDuration) {
    const auto m = sample_machine();
    const CMatrix a = sequence_unitary(compile_four_body(0.6, 0.2, m), m);
    const CMatrix b = sequence_unitary(compile_four_body(1.2, 0.1, m), m);
    EXPECT_LE(verify_equivalence(a, b).distance, 1e-9);
    const CMatrix c = sequence_unitary(compile_four_body(0.6, 0.4, m), m);
    EXPECT_GT(verify_equivalence(a, c).distance, 1e-3);
}

TEST(Compile, StepMatchesGateFormTrotterStep) {
    const auto m = sample_machine();
    for (double J : {-1.0, 0.4}) {
        const CMatrix ideal = sequence_unitary(trotter_step(J, 0.8, 0.05, kPlaquette));
        const CMatrix compiled = sequence_unitary(compile_step(J, 0.8, 0.05, m), m);
        EXPECT_LE(verify_equivalence(ideal, compiled).distance, kEquivalenceThreshold);
    }
}

TEST(Compile, LiteralTranscriptionIsNotEquivalent) {
    const auto m = sample_machine();
    const CMatrix target = zz_all_evolution(4, 2.0 * 1.0 * 0.05);
    const CMatrix literal = sequence_unitary(compile_four_body_literal(1.0, 0.05, m), m);
    EXPECT_GT(verify_equivalence(target, literal).distance, 0.1);
}

TEST(Machine, ZeroDivisorCouplingsAreRejected) {
    std::array<std::array<double, 4>, 4> c{};
    const auto set = [&](int a, int b, double v) {
        c[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = v;
        c[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = v;
    };
    set(0, 1, 70), set(0, 3, 7), set(1, 2, 2), set(1, 3, 5), set(2, 3, 40);
    try {
        NmrMachine({1, 2, 3, 4}, c);
        FAIL() << "expected MachineError";
    } catch (const MachineError &e) {
        EXPECT_NE(std::string(e.what()).find("J13"), std::string::npos);
    }
    set(0, 2, 1.5);
    c[0][2] = 1.6;
    EXPECT_THROW(NmrMachine({1, 2, 3, 4}, c), MachineError);
}

TEST(Machine, JsonRoundTrip) {
    const auto m = sample_machine();
    const auto back = NmrMachine::from_json_text(m.to_json_text());
    EXPECT_EQ(back.omegas(), m.omegas());
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) EXPECT_EQ(back.coupling(a, b), m.coupling(a, b));
    EXPECT_THROW(NmrMachine::from_json_text("{not json"), ParseError);
    EXPECT_THROW(NmrMachine::from_json_text(R"({"omegas_rad_per_s": [1, 2], "couplings_hz": {}})"), MachineError);
}

TEST(TextFormat, RoundTripsExactly) {
    const auto m = sample_machine();
    const auto seq = compile_step(0.9, 1.1, 0.07, m);
    const std::string text = format_sequence(seq, &m);
    const auto parsed = parse_sequence(text);
    EXPECT_EQ(parsed.sequence, seq);
    ASSERT_TRUE(parsed.machine.has_value());
    EXPECT_EQ(parsed.machine->omegas(), m.omegas());
    EXPECT_EQ(format_sequence(parsed.sequence, &*parsed.machine), text);
}

TEST(TextFormat, UsesOneBasedSites) {
    PulseSequence s(4);
    s.rotate({0, 2}, Axis::MinusX, 1.5).free(0.25).zphase(3, -0.5);
    const std::string text = format_sequence(s);
    EXPECT_NE(text.find("ROT 1,3 -x 1.5"), std::string::npos);
    EXPECT_NE(text.find("FREE 0.25"), std::string::npos);
    EXPECT_NE(text.find("ZPHASE 4 -0.5"), std::string::npos);
    EXPECT_EQ(parse_sequence(text).sequence, s);
}

TEST(TextFormat, RejectsMalformedInput) {
    EXPECT_THROW(parse_sequence("ROT 1,3 q 1.0\n"), ParseError);
    EXPECT_THROW(parse_sequence("ROT 0 x 1.0\n"), ParseError);
    EXPECT_THROW(parse_sequence("FREE abc\n"), ParseError);
    EXPECT_THROW(parse_sequence("JUMP 3\n"), ParseError);
    PulseSequence s(4);
    s.ideal("ZZZZ", zz_all_evolution(4, 0.1));
    EXPECT_THROW(format_sequence(s), DomainError);
}

TEST(Equivalence, GlobalPhaseIsIgnored) {
    const CMatrix u = oracle::evolve(oracle::hamiltonian_2x2(0.3, 0.8), 0.9);
    const Complex phase = std::polar(1.0, 0.77);
    const auto eq = verify_equivalence(u, phase * u);
    EXPECT_LT(eq.distance, 1e-14);
    EXPECT_LT(std::abs(eq.phase - std::conj(phase)), 1e-12);
    EXPECT_NEAR(verify_equivalence(u, -u).distance, 0.0, 1e-14);
    EXPECT_THROW(verify_equivalence(u, 2.0 * u), NonUnitaryError);
    EXPECT_THROW(verify_equivalence(u, CMatrix::Identity(4, 4)), DimensionError);
}
