#include "wenplaq/observables.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "wenplaq/errors.hpp"
#include "wenplaq/spectra.hpp"

namespace wenplaq {

namespace {

Eigen::Index dim_of(int n_sites) { return Eigen::Index{1} << n_sites; }

/// Relative eigenvalue below which a density-matrix direction counts as null.
constexpr double kRankTolerance = 1e-13;

void check_keep(int n_sites, const std::vector<int> &keep) {
    if (keep.empty()) throw DomainError("reduced_density needs at least one kept site");
    std::set<int> seen;
    for (int s : keep) {
        if (s < 0 || s >= n_sites) throw DomainError("kept site " + std::to_string(s) + " is out of range");
        if (!seen.insert(s).second) throw DomainError("kept site " + std::to_string(s) + " listed twice");
    }
}

/// Maps (kept index, rest index) to the full basis index.
class SplitIndex {
  public:
    SplitIndex(int n_sites, const std::vector<int> &keep) : keep_(keep) {
        for (int s = 0; s < n_sites; ++s) {
            if (std::find(keep.begin(), keep.end(), s) == keep.end()) rest_.push_back(s);
        }
    }
    Eigen::Index kept_dim() const { return dim_of(static_cast<int>(keep_.size())); }
    Eigen::Index rest_dim() const { return dim_of(static_cast<int>(rest_.size())); }
    Eigen::Index full(Eigen::Index k, Eigen::Index r) const {
        Eigen::Index b = 0;
        for (std::size_t i = 0; i < keep_.size(); ++i) {
            if ((k >> i) & 1) b |= Eigen::Index{1} << keep_[i];
        }
        for (std::size_t i = 0; i < rest_.size(); ++i) {
            if ((r >> i) & 1) b |= Eigen::Index{1} << rest_[i];
        }
        return b;
    }

  private:
    std::vector<int> keep_;
    std::vector<int> rest_;
};

struct GroundManifold {
    double energy;
    std::vector<StateVector> states;
};

GroundManifold ground_manifold(const Lattice &l, double J, double g, const CorrelationOptions &opts) {
    const OperatorSum h = build_hamiltonian(l, J, g);
    EigenResult r;
    if (l.n_sites() <= opts.dense_sites || g == 0.0) {
        r = dense_spectrum(h);
    } else {
        LanczosOptions lo;
        lo.seed = opts.seed;
        r = lanczos_ground(h, 6, lo);
    }
    GroundManifold out{r.ground_energy(), {}};
    for (int idx : r.degeneracy_groups.front()) out.states.push_back(r.states[static_cast<std::size_t>(idx)]);
    return out;
}

}  // namespace

DensityMatrix::DensityMatrix(int n_sites, CMatrix matrix) : n_sites_(n_sites), matrix_(std::move(matrix)) {
    if (n_sites < 1 || matrix_.rows() != dim_of(n_sites) || matrix_.cols() != dim_of(n_sites)) {
        throw DimensionError("density matrix must be 2^n x 2^n for n = " + std::to_string(n_sites));
    }
    if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTolerance) {
        throw ValidationError("density matrix is not Hermitian");
    }
    const Complex tr = matrix_.trace();
    if (std::abs(tr - Complex(1.0, 0.0)) > kTraceTolerance) {
        throw ValidationError("density matrix trace is " + std::to_string(tr.real()) + ", not 1");
    }
    if (min_eigenvalue() < -kPositivityTolerance) throw ValidationError("density matrix has a negative eigenvalue");
}

DensityMatrix DensityMatrix::from_state(const StateVector &v) {
    const CVector a = v.normalized().amplitudes();
    return {v.n_sites(), a * a.adjoint()};
}

DensityMatrix DensityMatrix::maximally_mixed(int n_sites) {
    const Eigen::Index d = dim_of(n_sites);
    return {n_sites, CMatrix::Identity(d, d) / static_cast<double>(d)};
}

double DensityMatrix::min_eigenvalue() const { return hermitian_eigen(matrix_, false).values.minCoeff(); }

double DensityMatrix::purity() const { return (matrix_ * matrix_).trace().real(); }

double expectation(const PauliString &p, const DensityMatrix &rho) {
    if (p.n_sites() != rho.n_sites()) throw DimensionError("Pauli string does not match the density matrix");
    const auto x = static_cast<Eigen::Index>(p.x_mask());
    const auto z = p.z_mask();
    const Complex pre = (p.phase() * Phase(p.y_count())).value();
    Complex acc = 0.0;
    for (Eigen::Index b = 0; b < rho.dim(); ++b) {
        const double sign = (std::popcount(static_cast<std::uint64_t>(b) & z) & 1) ? -1.0 : 1.0;
        acc += rho.matrix()(b, b ^ x) * sign;
    }
    return (pre * acc).real();
}

double wilson_expectation(const StateVector &v, const Lattice &l, const LoopPath &c) {
    if (v.n_sites() != l.n_sites()) throw DimensionError("state does not match the lattice");
    return expectation(wilson_loop(l, c), v);
}

double wilson_expectation(const DensityMatrix &rho, const Lattice &l, const LoopPath &c) {
    if (rho.n_sites() != l.n_sites()) throw DimensionError("density matrix does not match the lattice");
    return expectation(wilson_loop(l, c), rho);
}

double local_order_P(const DensityMatrix &rho, int site) {
    if (site < 0 || site >= rho.n_sites()) throw DomainError("site " + std::to_string(site) + " is out of range");
    const double x = expectation(PauliString::single(rho.n_sites(), site, Pauli::X), rho);
    const double y = expectation(PauliString::single(rho.n_sites(), site, Pauli::Y), rho);
    return std::hypot(x, y);
}

double local_order_P(const StateVector &v, int site) {
    if (site < 0 || site >= v.n_sites()) throw DomainError("site " + std::to_string(site) + " is out of range");
    const double x = expectation(PauliString::single(v.n_sites(), site, Pauli::X), v);
    const double y = expectation(PauliString::single(v.n_sites(), site, Pauli::Y), v);
    return std::hypot(x, y);
}

DensityMatrix reduced_density(const StateVector &v, const std::vector<int> &keep) {
    check_keep(v.n_sites(), keep);
    const SplitIndex split(v.n_sites(), keep);
    const CVector a = v.normalized().amplitudes();
    CMatrix psi(split.kept_dim(), split.rest_dim());
    for (Eigen::Index k = 0; k < psi.rows(); ++k) {
        for (Eigen::Index r = 0; r < psi.cols(); ++r) psi(k, r) = a[split.full(k, r)];
    }
    CMatrix red = psi * psi.adjoint();
    red = 0.5 * (red + red.adjoint()).eval();
    return {static_cast<int>(keep.size()), std::move(red)};
}

DensityMatrix reduced_density(const DensityMatrix &rho, const std::vector<int> &keep) {
    check_keep(rho.n_sites(), keep);
    const SplitIndex split(rho.n_sites(), keep);
    CMatrix red = CMatrix::Zero(split.kept_dim(), split.kept_dim());
    for (Eigen::Index k1 = 0; k1 < red.rows(); ++k1) {
        for (Eigen::Index k2 = 0; k2 < red.cols(); ++k2) {
            Complex acc = 0.0;
            for (Eigen::Index r = 0; r < split.rest_dim(); ++r) acc += rho.matrix()(split.full(k1, r), split.full(k2, r));
            red(k1, k2) = acc;
        }
    }
    return {static_cast<int>(keep.size()), std::move(red)};
}

double concurrence(const DensityMatrix &rho2) {
    if (rho2.n_sites() != 2) throw DimensionError("concurrence needs a two-site density matrix");
    // With rho = Phi Phi^dag, the Wootters lambdas are the singular values of
    // Phi^T (Y x Y) Phi. Dropping numerically null eigenvectors keeps the
    // square roots away from rounding noise.
    const auto eig = hermitian_eigen(rho2.matrix());
    const double cutoff = kRankTolerance * std::max(1.0, eig.values.maxCoeff());
    std::vector<Eigen::Index> kept;
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
        if (eig.values[i] > cutoff) kept.push_back(i);
    }
    CMatrix phi(4, static_cast<Eigen::Index>(kept.size()));
    for (std::size_t k = 0; k < kept.size(); ++k) {
        phi.col(static_cast<Eigen::Index>(k)) = eig.vectors.col(kept[k]) * std::sqrt(eig.values[kept[k]]);
    }
    const CMatrix yy = materialize(PauliString::from_word("YY"));
    const CMatrix tau = phi.transpose() * yy * phi;
    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(4);
    if (tau.size() > 0) {
        const Eigen::VectorXd sv = Eigen::JacobiSVD<CMatrix>(tau).singularValues();
        lambda.head(sv.size()) = sv;
    }
    std::sort(lambda.data(), lambda.data() + lambda.size(), std::greater<>());
    return std::max(0.0, lambda[0] - lambda[1] - lambda[2] - lambda[3]);
}

double state_fidelity(const DensityMatrix &a, const DensityMatrix &b) {
    if (a.dim() != b.dim()) throw DimensionError("state_fidelity needs equal dimensions");
    const double pa = a.purity(), pb = b.purity();
    if (!(pa > 0.0) || !(pb > 0.0)) throw DomainError("state_fidelity needs nonzero purity");
    return std::min(1.0, std::abs((a.matrix() * b.matrix()).trace()) / std::sqrt(pa * pb));
}

CorrelationTable spin_correlations(const Lattice &l, double J, double g, Pauli axis, const CorrelationOptions &opts) {
    if (axis == Pauli::I) throw DomainError("correlation axis must be x, y or z");
    const int n = l.n_sites();
    if (n > kDefaultDenseLimit) throw CapacityError("spin_correlations supports at most 12 sites");

    GroundManifold manifold = ground_manifold(l, J, g, opts);
    CorrelationTable t;
    t.lx = l.lx();
    t.ly = l.ly();
    t.axis = axis;
    t.coupling = J;
    t.field = g;
    t.ground_energy = manifold.energy;
    t.manifold_size = static_cast<int>(manifold.states.size());

    std::vector<StateVector> states;
    if (manifold.states.size() == 1) {
        states = manifold.states;
    } else if (g == 0.0) {
        t.manifold_averaged = true;
        states = manifold.states;
    } else {
        const auto reference = ground_manifold(l, J, opts.reference_field, opts).states.front();
        CVector projected = CVector::Zero(reference.amplitudes().size());
        for (const auto &s : manifold.states) projected += s.amplitudes() * s.inner(reference);
        states.push_back(projected.norm() > 1e-8 ? StateVector(n, projected).normalized() : manifold.states.front());
    }

    const double weight = 1.0 / static_cast<double>(states.size());
    t.raw = Eigen::MatrixXd::Zero(n, n);
    t.single = Eigen::VectorXd::Zero(n);
    for (const auto &s : states) {
        for (int i = 0; i < n; ++i) {
            t.single[i] += weight * expectation(PauliString::single(n, i, axis), s);
            t.raw(i, i) += weight;
            for (int j = i + 1; j < n; ++j) {
                const double v = weight * expectation(PauliString::from_sites(n, {{i, axis}, {j, axis}}), s);
                t.raw(i, j) += v;
                t.raw(j, i) += v;
            }
        }
    }
    t.connected = t.raw - t.single * t.single.transpose();
    return t;
}

}  // namespace wenplaq
