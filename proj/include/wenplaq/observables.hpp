#pragma once

#include <vector>

#include "wenplaq/lattice.hpp"
#include "wenplaq/pauli.hpp"

namespace wenplaq {

inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kTraceTolerance = 1e-10;
inline constexpr double kPositivityTolerance = 1e-8;

/// Validated density matrix: Hermitian, unit trace, positive semidefinite
/// within the tolerances above.
class DensityMatrix {
  public:
    DensityMatrix(int n_sites, CMatrix matrix);

    static DensityMatrix from_state(const StateVector &v);
    static DensityMatrix maximally_mixed(int n_sites);

    int n_sites() const { return n_sites_; }
    Eigen::Index dim() const { return matrix_.rows(); }
    const CMatrix &matrix() const { return matrix_; }
    double min_eigenvalue() const;
    double purity() const;

  private:
    int n_sites_;
    CMatrix matrix_;
};

/// Tr(rho P) for a Hermitian Pauli string.
double expectation(const PauliString &p, const DensityMatrix &rho);

double wilson_expectation(const StateVector &v, const Lattice &l, const LoopPath &c);
double wilson_expectation(const DensityMatrix &rho, const Lattice &l, const LoopPath &c);

/// sqrt(<X_site>^2 + <Y_site>^2).
double local_order_P(const DensityMatrix &rho, int site);
double local_order_P(const StateVector &v, int site);

/// Partial trace onto `keep`; keep[k] becomes bit k of the reduced index.
DensityMatrix reduced_density(const StateVector &v, const std::vector<int> &keep);
DensityMatrix reduced_density(const DensityMatrix &rho, const std::vector<int> &keep);

/// Wootters concurrence of a two-site state.
double concurrence(const DensityMatrix &rho2);

/// |Tr(a b)| / sqrt(Tr(a^2) Tr(b^2)).
double state_fidelity(const DensityMatrix &a, const DensityMatrix &b);

struct CorrelationTable {
    int lx = 0;
    int ly = 0;
    Pauli axis = Pauli::X;
    double coupling = 0.0;
    double field = 0.0;
    double ground_energy = 0.0;
    /// raw(i, j) = <s_i s_j>, connected(i, j) = raw(i, j) - <s_i><s_j>.
    Eigen::MatrixXd raw;
    Eigen::MatrixXd connected;
    Eigen::VectorXd single;
    /// Size of the ground manifold the table was evaluated on.
    int manifold_size = 1;
    /// Set when g = 0 and the table is an average over a degenerate ground manifold.
    bool manifold_averaged = false;
};

struct CorrelationOptions {
    /// Lattices with more sites use Lanczos.
    int dense_sites = 10;
    /// Field at which the reference state for near-degenerate selection is computed.
    double reference_field = 1e-3;
    std::uint64_t seed = 20140521;
};

CorrelationTable spin_correlations(const Lattice &l, double J, double g, Pauli axis,
                                   const CorrelationOptions &opts = {});

}  // namespace wenplaq
