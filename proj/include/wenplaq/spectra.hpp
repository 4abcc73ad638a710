#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wenplaq/pauli.hpp"

namespace wenplaq {

struct EigenResult {
    /// Ascending.
    std::vector<double> energies;
    /// states[i] belongs to energies[i]; may hold fewer entries than `energies`
    /// when only the lowest eigenvectors were requested.
    std::vector<StateVector> states;
    /// Runs of consecutive energies closer than `deg_tol`.
    std::vector<std::vector<int>> degeneracy_groups;
    double deg_tol = 0.0;

    double ground_energy() const { return energies.front(); }
    const StateVector &ground_state() const { return states.front(); }
    std::size_t ground_degeneracy() const { return degeneracy_groups.front().size(); }
};

/// 1e-6 * max(1, |e_min|).
double default_deg_tol(double e_min);
std::vector<std::vector<int>> group_degenerate(const std::vector<double> &energies, double tol);

struct HermitianEigen {
    Eigen::VectorXd values;
    CMatrix vectors;
};

/// Full eigendecomposition of a Hermitian matrix, eigenvalues ascending.
/// Real input takes the real-symmetric path.
HermitianEigen hermitian_eigen(const CMatrix &m, bool with_vectors = true);

struct DenseOptions {
    int dense_limit = kDefaultDenseLimit;
    /// Number of lowest eigenvectors kept; negative keeps all, zero skips them.
    int keep_states = -1;
    std::optional<double> deg_tol;
};

EigenResult dense_spectrum(const OperatorSum &h, const DenseOptions &opts = {});

struct LanczosOptions {
    std::uint64_t seed = 20140521;
    int max_krylov = 300;
    int max_restarts = 40;
    /// Required ||Hv - Ev|| for every returned pair.
    double tolerance = 1e-10;
    std::optional<double> deg_tol;
};

/// Lowest k eigenpairs by restarted Lanczos with full reorthogonalization.
EigenResult lanczos_ground(const OperatorSum &h, int k, const LanczosOptions &opts = {});

struct AnalyticGround {
    double energy;
    StateVector state;
    double alpha1;
    double alpha2;
    double alpha3;
};

/// Closed-form ground state of the 2x2 torus Hamiltonian for g > 0,
/// returned in the computational basis.
AnalyticGround analytic_ground_2x2(double J, double g);

}  // namespace wenplaq
