#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace wenplaq {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Largest site count for which dense 2^n x 2^n matrices are built.
inline constexpr int kDefaultDenseLimit = 12;
/// Largest site count a state vector may have (basis indices are 64-bit masks).
inline constexpr int kMaxSites = 30;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char to_char(Pauli p);
Pauli pauli_from_char(char c);

/// Element i^k of the group {+1, +i, -1, -i}.
class Phase {
  public:
    constexpr Phase() = default;
    constexpr explicit Phase(int exponent) : k_(static_cast<std::uint8_t>(((exponent % 4) + 4) % 4)) {}

    static constexpr Phase one() { return Phase(0); }
    static constexpr Phase i() { return Phase(1); }
    static constexpr Phase minus_one() { return Phase(2); }
    static constexpr Phase minus_i() { return Phase(3); }

    constexpr int exponent() const { return k_; }
    constexpr bool is_real() const { return (k_ & 1) == 0; }
    constexpr Phase conj() const { return Phase(4 - k_); }
    Complex value() const;

    constexpr Phase operator*(Phase o) const { return Phase(k_ + o.k_); }
    constexpr bool operator==(const Phase &) const = default;

  private:
    std::uint8_t k_ = 0;
};

/// Phased tensor product of single-site Paulis. Site 0 is the least
/// significant bit of a basis-state index.
class PauliString {
  public:
    explicit PauliString(int n_sites);
    explicit PauliString(std::vector<Pauli> letters, Phase phase = Phase::one());

    /// `word[k]` is the letter on site k, e.g. "XYXY".
    static PauliString from_word(std::string_view word, Phase phase = Phase::one());
    static PauliString single(int n_sites, int site, Pauli p);
    static PauliString from_sites(int n_sites, const std::vector<std::pair<int, Pauli>> &letters);

    int n_sites() const { return static_cast<int>(letters_.size()); }
    Pauli letter(int site) const { return letters_.at(static_cast<std::size_t>(site)); }
    const std::vector<Pauli> &letters() const { return letters_; }
    Phase phase() const { return phase_; }

    std::uint64_t x_mask() const { return x_mask_; }
    std::uint64_t z_mask() const { return z_mask_; }
    int y_count() const;
    int weight() const;
    bool is_identity() const { return x_mask_ == 0 && z_mask_ == 0; }

    PauliString with_phase(Phase p) const;
    std::string word() const;
    std::string to_string() const;

    bool same_letters(const PauliString &o) const { return letters_ == o.letters_; }
    bool commutes_with(const PauliString &o) const;
    PauliString operator*(const PauliString &o) const;
    bool operator==(const PauliString &o) const { return phase_ == o.phase_ && letters_ == o.letters_; }

  private:
    void rebuild_masks();

    std::vector<Pauli> letters_;
    Phase phase_;
    std::uint64_t x_mask_ = 0;
    std::uint64_t z_mask_ = 0;
};

struct Term {
    double coefficient;
    PauliString string;
};

/// Real-weighted sum of Pauli strings over a common number of sites.
class OperatorSum {
  public:
    explicit OperatorSum(int n_sites);

    void add(double coefficient, PauliString string);
    /// Combines terms with identical letters; phases are folded into the
    /// coefficient so each term keeps phase +1 or +i. Zero terms are dropped.
    OperatorSum merged(double drop_below = 0.0) const;
    OperatorSum scaled(double factor) const;

    int n_sites() const { return n_sites_; }
    const std::vector<Term> &terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    /// True when every term's phase times coefficient is real.
    bool is_hermitian_weighted() const;
    std::string to_string() const;

  private:
    int n_sites_;
    std::vector<Term> terms_;
};

class StateVector {
  public:
    /// |0...0>.
    explicit StateVector(int n_sites);
    StateVector(int n_sites, CVector amplitudes);

    static StateVector basis(int n_sites, std::uint64_t index);
    /// Haar-like random state from complex Gaussian amplitudes.
    static StateVector random(int n_sites, std::mt19937_64 &rng);

    int n_sites() const { return n_sites_; }
    std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
    const CVector &amplitudes() const { return amplitudes_; }
    Complex operator[](std::size_t i) const { return amplitudes_[static_cast<Eigen::Index>(i)]; }

    double norm() const { return amplitudes_.norm(); }
    StateVector normalized() const;
    /// <this|other>.
    Complex inner(const StateVector &other) const;

  private:
    int n_sites_;
    CVector amplitudes_;
};

StateVector apply_string(const PauliString &p, const StateVector &v);
StateVector apply(const OperatorSum &h, const StateVector &v);
/// out = h * in, matrix-free. `out` is resized as needed.
void apply_into(const OperatorSum &h, const CVector &in, CVector &out);

Complex expectation_complex(const PauliString &p, const StateVector &v);
double expectation(const PauliString &p, const StateVector &v);
Complex expectation_complex(const OperatorSum &h, const StateVector &v);
double expectation(const OperatorSum &h, const StateVector &v);

CMatrix materialize(const PauliString &p, int dense_limit = kDefaultDenseLimit);
CMatrix materialize(const OperatorSum &h, int dense_limit = kDefaultDenseLimit);

}  // namespace wenplaq
