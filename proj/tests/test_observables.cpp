#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <gtest/gtest.h>

#include "oracle.hpp"
#include "wenplaq/errors.hpp"
#include "wenplaq/observables.hpp"
#include "wenplaq/spectra.hpp"

using namespace wenplaq;

namespace {

const Lattice kPlaquette(2, 2);

// Bell pairs on sites (0,2) and (1,3); `anti` picks psi+ over phi+.
StateVector paired_state(bool anti) {
    CVector amp = CVector::Zero(16);
    const double h = 0.5;
    for (int a : {0, 1}) {
        for (int b : {0, 1}) {
            const int a2 = anti ? 1 - a : a, b2 = anti ? 1 - b : b;
            amp[a | (b << 1) | (a2 << 2) | (b2 << 3)] = h;
        }
    }
    return {4, amp};
}

StateVector ground(double J, double g) {
    return dense_spectrum(build_hamiltonian(kPlaquette, J, g), {.keep_states = 1}).ground_state();
}

// Square roots of the eigenvalues of rho (YY) rho* (YY), via a general
// non-Hermitian eigensolver.
double brute_concurrence(const CMatrix &rho) {
    const oracle::M yy = oracle::word("YY");
    const oracle::M r = rho * yy * rho.conjugate() * yy;
    Eigen::ComplexEigenSolver<oracle::M> es(r);
    std::vector<double> lam;
    for (Eigen::Index i = 0; i < 4; ++i) lam.push_back(std::sqrt(std::max(0.0, es.eigenvalues()[i].real())));
    std::sort(lam.rbegin(), lam.rend());
    return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

CMatrix random_density(int dim, std::mt19937_64 &rng, int rank) {
    std::normal_distribution<double> n01;
    CMatrix a(dim, rank);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = Complex(n01(rng), n01(rng));
    CMatrix rho = a * a.adjoint();
    return rho / rho.trace();
}

CMatrix random_unitary(int dim, std::mt19937_64 &rng) {
    std::normal_distribution<double> n01;
    CMatrix a(dim, dim);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = Complex(n01(rng), n01(rng));
    return Eigen::HouseholderQR<CMatrix>(a).householderQ();
}

}  // namespace

TEST(DensityMatrix, ValidatesInvariants) {
    CMatrix m = CMatrix::Identity(4, 4) * 0.25;
    EXPECT_NO_THROW(DensityMatrix(2, m));
    m(0, 1) = 0.1;
    EXPECT_THROW(DensityMatrix(2, m), ValidationError);
    EXPECT_THROW(DensityMatrix(2, CMatrix::Identity(4, 4)), ValidationError);
    CMatrix neg = CMatrix::Zero(4, 4);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    EXPECT_THROW(DensityMatrix(2, neg), ValidationError);
    EXPECT_THROW(DensityMatrix(3, CMatrix::Identity(4, 4) * 0.25), DimensionError);
    EXPECT_NEAR(DensityMatrix::maximally_mixed(2).purity(), 0.25, 1e-15);
}

TEST(Wilson, StabilizerEigenstates) {
    const auto loop = canonical_loop(kPlaquette);
    EXPECT_NEAR(wilson_expectation(paired_state(true), kPlaquette, loop), 1.0, 1e-14);
    EXPECT_NEAR(wilson_expectation(paired_state(false), kPlaquette, loop), -1.0, 1e-14);
    const auto rho = DensityMatrix::from_state(paired_state(false));
    EXPECT_NEAR(wilson_expectation(rho, kPlaquette, loop), -1.0, 1e-14);
    EXPECT_THROW(wilson_expectation(StateVector(3), kPlaquette, loop), DimensionError);
}

TEST(Wilson, GroundStateClosedForm) {
    const auto loop = canonical_loop(kPlaquette);
    for (double g : {1.0, 5.0}) {
        for (double J : {-3.0, 0.0, 1.0, 20.0}) {
            EXPECT_NEAR(wilson_expectation(ground(J, g), kPlaquette, loop), J / std::hypot(g, J), 1e-9);
        }
    }
    EXPECT_NEAR(wilson_expectation(ground(1.0, 1.0), kPlaquette, loop), 0.70710678118654752, 1e-9);
}

TEST(OrderP, ExamplesAndSiteUniformity) {
    const StateVector plus(4, CVector::Constant(16, 0.25));
    EXPECT_NEAR(local_order_P(plus, 0), 1.0, 1e-14);
    EXPECT_NEAR(local_order_P(paired_state(false), 2), 0.0, 1e-14);
    for (double J : {-2.0, 1.0}) {
        const auto gs = ground(J, 1.0);
        const auto rho = DensityMatrix::from_state(gs);
        for (int s = 0; s < 4; ++s) {
            EXPECT_NEAR(local_order_P(rho, s), 1.0 / std::hypot(1.0, J), 1e-9);
            EXPECT_NEAR(local_order_P(gs, s), local_order_P(gs, 0), 1e-10);
        }
    }
    EXPECT_NEAR(local_order_P(ground(1.5, 1.0), 0), local_order_P(ground(-1.5, 1.0), 0), 1e-10);
    EXPECT_THROW(local_order_P(plus, 4), DomainError);
}

TEST(OrderP, GroundMarginalHasOnlyXComponent) {
    const auto gs = ground(0.8, 1.0);
    for (int s = 0; s < 4; ++s) {
        EXPECT_LE(std::abs(expectation(PauliString::single(4, s, Pauli::Y), gs)), 1e-10);
        EXPECT_LE(std::abs(expectation(PauliString::single(4, s, Pauli::Z), gs)), 1e-10);
    }
}

TEST(ReducedDensity, Examples) {
    const auto phi = paired_state(false);
    const auto all = reduced_density(phi, {0, 1, 2, 3});
    EXPECT_LT((all.matrix() - DensityMatrix::from_state(phi).matrix()).norm(), 1e-14);
    const auto pair = reduced_density(phi, {0, 2});
    CMatrix bell = CMatrix::Zero(4, 4);
    bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
    EXPECT_LT((pair.matrix() - bell).norm(), 1e-14);
    const auto single = reduced_density(phi, {0});
    EXPECT_LT((single.matrix() - 0.5 * CMatrix::Identity(2, 2)).norm(), 1e-14);
    EXPECT_THROW(reduced_density(phi, {}), DomainError);
    EXPECT_THROW(reduced_density(phi, {0, 0}), DomainError);
    EXPECT_THROW(reduced_density(phi, {4}), DomainError);
}

TEST(ReducedDensity, MatchesBruteForcePartialTrace) {
    std::mt19937_64 rng(17);
    const auto v = StateVector::random(4, rng);
    // Keep sites 3 and 1, in that order: site 3 becomes bit 0.
    const auto got = reduced_density(v, {3, 1});
    CMatrix expected = CMatrix::Zero(4, 4);
    for (int i = 0; i < 16; ++i) {
        for (int j = 0; j < 16; ++j) {
            if ((i & 0b0101) != (j & 0b0101)) continue;
            const int ri = ((i >> 3) & 1) | (((i >> 1) & 1) << 1);
            const int rj = ((j >> 3) & 1) | (((j >> 1) & 1) << 1);
            expected(ri, rj) += v[static_cast<std::size_t>(i)] * std::conj(v[static_cast<std::size_t>(j)]);
        }
    }
    EXPECT_LT((got.matrix() - expected).norm(), 1e-14);
    const auto via_rho = reduced_density(DensityMatrix::from_state(v), {3, 1});
    EXPECT_LT((via_rho.matrix() - expected).norm(), 1e-14);
}

TEST(Concurrence, TrivialExamples) {
    CMatrix bell = CMatrix::Zero(4, 4);
    bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
    EXPECT_NEAR(concurrence(DensityMatrix(2, bell)), 1.0, 1e-12);
    EXPECT_NEAR(concurrence(DensityMatrix(2, CMatrix::Constant(4, 4, 0.25))), 0.0, 1e-12);
    EXPECT_NEAR(concurrence(DensityMatrix::maximally_mixed(2)), 0.0, 1e-12);
    EXPECT_THROW(concurrence(DensityMatrix::maximally_mixed(3)), DimensionError);
}

TEST(Concurrence, MatchesBruteForceOnRandomStates) {
    std::mt19937_64 rng(23);
    for (int rank : {1, 2, 4}) {
        for (int trial = 0; trial < 10; ++trial) {
            const CMatrix rho = random_density(4, rng, rank);
            // Rank-deficient inputs put sqrt(roundoff) into the brute-force lambdas.
            const double tol = rank == 4 ? 1e-10 : 1e-6;
            EXPECT_NEAR(concurrence(DensityMatrix(2, rho)), brute_concurrence(rho), tol) << "rank " << rank;
        }
    }
}

TEST(Concurrence, PureStatesMatchSpinFlipOverlap) {
    std::mt19937_64 rng(29);
    const oracle::M yy = oracle::word("YY");
    for (int trial = 0; trial < 20; ++trial) {
        const auto v = StateVector::random(2, rng);
        const double expected = std::abs(v.amplitudes().dot(yy * v.amplitudes().conjugate()));
        EXPECT_NEAR(concurrence(DensityMatrix::from_state(v)), expected, 1e-12);
    }
}

TEST(Concurrence, GroundStatePairStructure) {
    for (double J : {-20.0, -1.0, 0.0, 0.5, 20.0}) {
        const auto gs = ground(J, 1.0);
        const double c13 = concurrence(reduced_density(gs, {0, 2}));
        const double c24 = concurrence(reduced_density(gs, {1, 3}));
        EXPECT_NEAR(c13, c24, 1e-10) << J;
        EXPECT_NEAR(c13, std::abs(J) / std::hypot(1.0, J), 1e-9) << J;
        const auto rho13 = reduced_density(DensityMatrix::from_state(gs), {0, 2});
        EXPECT_NEAR(c13, brute_concurrence(rho13.matrix()), 1e-6);
        for (auto [a, b] : {std::pair{0, 1}, {0, 3}, {1, 2}, {2, 3}}) {
            EXPECT_LE(concurrence(reduced_density(gs, {a, b})), 0.01) << a << b;
        }
    }
}

TEST(StateFidelity, Properties) {
    std::mt19937_64 rng(31);
    const auto a = DensityMatrix(2, random_density(4, rng, 2));
    const auto b = DensityMatrix(2, random_density(4, rng, 3));
    EXPECT_NEAR(state_fidelity(a, b), state_fidelity(b, a), 1e-14);
    const CMatrix u = random_unitary(4, rng);
    const DensityMatrix ua(2, u * a.matrix() * u.adjoint()), ub(2, u * b.matrix() * u.adjoint());
    EXPECT_NEAR(state_fidelity(ua, ub), state_fidelity(a, b), 1e-12);
    EXPECT_NEAR(state_fidelity(a, a), 1.0, 1e-14);

    const auto zero = DensityMatrix::from_state(StateVector::basis(1, 0));
    const auto one = DensityMatrix::from_state(StateVector::basis(1, 1));
    EXPECT_NEAR(state_fidelity(zero, one), 0.0, 1e-15);
    EXPECT_NEAR(state_fidelity(zero, DensityMatrix::maximally_mixed(1)), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_THROW(state_fidelity(zero, a), DimensionError);
}

TEST(Correlations, ProductStateLimitOn2x2) {
    const auto t = spin_correlations(kPlaquette, 0.0, 1.0, Pauli::X);
    for (Eigen::Index i = 0; i < 4; ++i)
        for (Eigen::Index j = 0; j < 4; ++j) EXPECT_NEAR(t.raw(i, j), 1.0, 1e-12);
    EXPECT_LT(t.connected.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Correlations, TableInvariants) {
    const auto t = spin_correlations(Lattice(3, 2), 0.7, 0.4, Pauli::Z);
    EXPECT_LT((t.raw - t.raw.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    for (Eigen::Index i = 0; i < t.raw.rows(); ++i) EXPECT_NEAR(t.raw(i, i), 1.0, 1e-12);
    EXPECT_THROW(spin_correlations(kPlaquette, 1.0, 1.0, Pauli::I), DomainError);
}

TEST(Correlations, DegenerateManifoldIsFlagged) {
    const auto t = spin_correlations(kPlaquette, 1.0, 0.0, Pauli::X);
    EXPECT_TRUE(t.manifold_averaged);
    EXPECT_EQ(t.manifold_size, 4);
    const auto lifted = spin_correlations(kPlaquette, 1.0, 0.5, Pauli::X);
    EXPECT_FALSE(lifted.manifold_averaged);
}

TEST(Correlations, LocalizedAtSmallFieldOn6x2) {
    const Lattice l(6, 2);
    const auto t = spin_correlations(l, 1.0, 0.01, Pauli::X);
    for (Eigen::Index k = 1; k < t.raw.cols(); ++k) EXPECT_LE(std::abs(t.raw(0, k)), 0.05) << k;
}

TEST(Correlations, ShortRangedOn6x2) {
    const Lattice l(6, 2);
    const int d2 = l.site_of(2, 0), d3 = l.site_of(3, 0);
    for (double ratio : {0.2, 0.5, 1.0}) {
        const auto t = spin_correlations(l, 1.0, ratio, Pauli::X);
        EXPECT_GT(std::abs(t.connected(0, d2)), std::abs(t.connected(0, d3))) << ratio;
    }
}
