#include "wenplaq/spectra.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>

#include "wenplaq/errors.hpp"

namespace wenplaq {

double default_deg_tol(double e_min) { return 1e-6 * std::max(1.0, std::abs(e_min)); }

std::vector<std::vector<int>> group_degenerate(const std::vector<double> &energies, double tol) {
    std::vector<std::vector<int>> groups;
    for (std::size_t i = 0; i < energies.size(); ++i) {
        if (groups.empty() || std::abs(energies[i] - energies[i - 1]) >= tol) groups.emplace_back();
        groups.back().push_back(static_cast<int>(i));
    }
    return groups;
}

HermitianEigen hermitian_eigen(const CMatrix &m, bool with_vectors) {
    if (m.rows() != m.cols()) throw DimensionError("eigendecomposition needs a square matrix");
    const int opts = with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly;
    HermitianEigen out;
    if (m.rows() == 0) return out;

    if (m.imag().cwiseAbs().maxCoeff() == 0.0) {
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.real(), opts);
        if (es.info() != Eigen::Success) throw ConvergenceError("real symmetric eigensolver did not converge", {});
        out.values = es.eigenvalues();
        if (with_vectors) out.vectors = es.eigenvectors().cast<Complex>();
    } else {
        const Eigen::SelfAdjointEigenSolver<CMatrix> es(m, opts);
        if (es.info() != Eigen::Success) throw ConvergenceError("Hermitian eigensolver did not converge", {});
        out.values = es.eigenvalues();
        if (with_vectors) out.vectors = es.eigenvectors();
    }
    return out;
}

EigenResult dense_spectrum(const OperatorSum &h, const DenseOptions &opts) {
    const CMatrix m = materialize(h, opts.dense_limit);
    const bool want_vectors = opts.keep_states != 0;
    const auto eig = hermitian_eigen(m, want_vectors);

    EigenResult r;
    r.energies.assign(eig.values.data(), eig.values.data() + eig.values.size());
    if (want_vectors) {
        const Eigen::Index keep = opts.keep_states < 0 ? eig.values.size()
                                                       : std::min<Eigen::Index>(opts.keep_states, eig.values.size());
        r.states.reserve(static_cast<std::size_t>(keep));
        for (Eigen::Index i = 0; i < keep; ++i) r.states.emplace_back(h.n_sites(), eig.vectors.col(i));
    }
    r.deg_tol = opts.deg_tol.value_or(default_deg_tol(r.energies.front()));
    r.degeneracy_groups = group_degenerate(r.energies, r.deg_tol);
    return r;
}

namespace {

// Two passes of classical Gram-Schmidt against the current basis.
void orthogonalize(CVector &w, const std::vector<CVector> &basis) {
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto &q : basis) w -= q * q.dot(w);
    }
}

CVector random_unit(Eigen::Index dim, std::mt19937_64 &rng) {
    std::normal_distribution<double> normal;
    CVector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v[i] = Complex(normal(rng), normal(rng));
    return v / v.norm();
}

struct RitzPairs {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};

RitzPairs tridiagonal_eigen(const std::vector<double> &alpha, const std::vector<double> &beta, std::size_t m) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
        t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = alpha[i];
        if (i + 1 < m) {
            t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + 1)) = beta[i];
            t(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) = beta[i];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    return {es.eigenvalues(), es.eigenvectors()};
}

struct LanczosPairs {
    std::vector<double> energies;
    std::vector<CVector> vectors;
    std::vector<double> residuals;
    bool converged = false;
};

// Restarted Lanczos for the k lowest pairs of H restricted to the orthogonal
// complement of `locked`.
LanczosPairs lanczos_pairs(const OperatorSum &h, int k, const std::vector<CVector> &locked, const LanczosOptions &opts,
                           std::mt19937_64 &rng) {
    const Eigen::Index dim = Eigen::Index{1} << h.n_sites();
    const auto room = dim - static_cast<Eigen::Index>(locked.size());
    const auto max_m = static_cast<std::size_t>(std::min<Eigen::Index>(room, std::max(opts.max_krylov, 2 * k + 10)));

    CVector start = random_unit(dim, rng);
    orthogonalize(start, locked);
    start /= start.norm();

    LanczosPairs out;
    for (int restart = 0; restart <= opts.max_restarts; ++restart) {
        std::vector<CVector> basis{start};
        std::vector<double> alpha, beta;
        CVector w;
        std::size_t m = 0;
        while (true) {
            apply_into(h, basis.back(), w);
            orthogonalize(w, locked);
            alpha.push_back(basis.back().dot(w).real());
            orthogonalize(w, basis);
            const double b = w.norm();
            m = basis.size();
            if (m >= max_m) break;

            if (b >= 1e-12 && m >= static_cast<std::size_t>(k) && m % 10 == 0) {
                const auto ritz = tridiagonal_eigen(alpha, beta, m);
                bool converged = true;
                for (int i = 0; i < k && converged; ++i) {
                    converged = std::abs(b * ritz.vectors(static_cast<Eigen::Index>(m) - 1, i)) <= 0.1 * opts.tolerance;
                }
                if (converged) break;
            }
            if (b < 1e-12) {
                // Invariant subspace: continue in a fresh direction so degenerate copies can appear.
                CVector fresh = random_unit(dim, rng);
                orthogonalize(fresh, locked);
                orthogonalize(fresh, basis);
                beta.push_back(0.0);
                basis.push_back(fresh / fresh.norm());
            } else {
                beta.push_back(b);
                basis.push_back(w / b);
            }
        }

        const auto ritz = tridiagonal_eigen(alpha, beta, m);
        out = LanczosPairs{};
        out.converged = true;
        CVector restart_vec = CVector::Zero(dim);
        for (int i = 0; i < k; ++i) {
            CVector y = CVector::Zero(dim);
            for (std::size_t j = 0; j < m; ++j) y += ritz.vectors(static_cast<Eigen::Index>(j), i) * basis[j];
            y /= y.norm();
            CVector hy;
            apply_into(h, y, hy);
            const double e = y.dot(hy).real();
            const double res = (hy - e * y).norm();
            out.residuals.push_back(res);
            if (res > opts.tolerance) out.converged = false;
            restart_vec += y;
            out.energies.push_back(e);
            out.vectors.push_back(std::move(y));
        }
        if (out.converged) return out;
        start = restart_vec / restart_vec.norm();
    }
    return out;
}

}  // namespace

EigenResult lanczos_ground(const OperatorSum &h, int k, const LanczosOptions &opts) {
    if (k < 1) throw DomainError("lanczos_ground needs k >= 1");
    if (!h.is_hermitian_weighted()) throw DomainError("lanczos_ground needs a Hermitian-weighted operator");
    const Eigen::Index dim = Eigen::Index{1} << h.n_sites();
    if (k > dim) throw DomainError("more eigenpairs requested than the Hilbert space holds");

    std::mt19937_64 rng(opts.seed);
    auto found = lanczos_pairs(h, k, {}, opts, rng);
    const auto fail = [&](const std::vector<double> &residuals) {
        throw ConvergenceError("Lanczos did not converge after " + std::to_string(opts.max_restarts) + " restarts",
                               residuals);
    };
    if (!found.converged) fail(found.residuals);

    // A single Krylov sequence can miss copies of a degenerate level. Probe the
    // complement of the accepted vectors until nothing lower than the current
    // k-th level remains there.
    for (int probe = 0; probe < k && k < dim; ++probe) {
        const auto extra = lanczos_pairs(h, 1, found.vectors, opts, rng);
        if (!extra.converged) fail(extra.residuals);
        const double gap = 1e-8 * std::max(1.0, std::abs(found.energies.back()));
        if (!(extra.energies.front() < found.energies.back() - gap)) break;
        found.energies.back() = extra.energies.front();
        found.vectors.back() = extra.vectors.front();
        found.residuals.back() = extra.residuals.front();
        std::vector<std::size_t> order(found.energies.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return found.energies[a] < found.energies[b]; });
        LanczosPairs sorted;
        for (auto i : order) {
            sorted.energies.push_back(found.energies[i]);
            sorted.vectors.push_back(std::move(found.vectors[i]));
            sorted.residuals.push_back(found.residuals[i]);
        }
        sorted.converged = true;
        found = std::move(sorted);
    }

    EigenResult r;
    r.energies = found.energies;
    for (auto &v : found.vectors) r.states.emplace_back(h.n_sites(), std::move(v));
    r.deg_tol = opts.deg_tol.value_or(default_deg_tol(r.energies.front()));
    r.degeneracy_groups = group_degenerate(r.energies, r.deg_tol);
    return r;
}

AnalyticGround analytic_ground_2x2(double J, double g) {
    if (!(g > 0.0)) throw DomainError("analytic 2x2 ground state requires g > 0 (g = 0 is degenerate)");
    const double s = std::sqrt(g * g + J * J);
    const double a1 = J * J + 2.0 * g * g + 2.0 * g * s;
    const double a2 = std::sqrt(2.0) * J * (g + s);
    const double a3 = J * J;

    // Amplitudes on x-basis words; bit k of the key is the x-label of site k.
    double x_amp[16] = {};
    x_amp[0b0000] = a1;
    x_amp[0b1010] = -a2 / std::sqrt(2.0);  // |0101>_x: sites 2 and 4 in |->
    x_amp[0b0101] = -a2 / std::sqrt(2.0);  // |1010>_x: sites 1 and 3 in |->
    x_amp[0b1111] = a3;

    CVector amp = CVector::Zero(16);
    for (int xw = 0; xw < 16; ++xw) {
        if (x_amp[xw] == 0.0) continue;
        // <c|x-word> = prod_s (1/sqrt2) * (-1 if x_s = 1 and c_s = 1).
        for (int c = 0; c < 16; ++c) {
            const double sign = (std::popcount(static_cast<unsigned>(xw & c)) & 1) ? -1.0 : 1.0;
            amp[c] += 0.25 * sign * x_amp[xw];
        }
    }
    StateVector state(4, amp);
    return {-4.0 * s, state.normalized(), a1, a2, a3};
}

}  // namespace wenplaq
