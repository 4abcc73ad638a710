#include "wenplaq/pauli.hpp"

#include <bit>
#include <map>
#include <sstream>

#include "wenplaq/errors.hpp"

namespace wenplaq {

namespace {

void check_site_count(int n) {
    if (n <= 0 || n > kMaxSites) {
        throw DimensionError("site count " + std::to_string(n) + " outside [1, " + std::to_string(kMaxSites) + "]");
    }
}

void check_same_sites(int a, int b, const char *what) {
    if (a != b) {
        throw DimensionError(std::string(what) + ": site count mismatch (" + std::to_string(a) + " vs " +
                             std::to_string(b) + ")");
    }
}

// Multiplication table for single-site Paulis: a*b = i^k c.
std::pair<Pauli, int> multiply_letters(Pauli a, Pauli b) {
    if (a == Pauli::I) return {b, 0};
    if (b == Pauli::I) return {a, 0};
    if (a == b) return {Pauli::I, 0};
    auto ia = static_cast<int>(a);
    auto ib = static_cast<int>(b);
    auto c = static_cast<Pauli>(6 - ia - ib);
    // X*Y = iZ, Y*Z = iX, Z*X = iY; reversed order picks up -i.
    bool cyclic = (ib - ia + 3) % 3 == 1;
    return {c, cyclic ? 1 : 3};
}

}  // namespace

char to_char(Pauli p) {
    switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
    }
    return '?';
}

Pauli pauli_from_char(char c) {
    switch (c) {
    case 'I': case 'i': return Pauli::I;
    case 'X': case 'x': return Pauli::X;
    case 'Y': case 'y': return Pauli::Y;
    case 'Z': case 'z': return Pauli::Z;
    default: throw ParseError(std::string("not a Pauli letter: '") + c + "'");
    }
}

Complex Phase::value() const {
    switch (k_) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
    }
}

PauliString::PauliString(int n_sites) {
    check_site_count(n_sites);
    letters_.assign(static_cast<std::size_t>(n_sites), Pauli::I);
}

PauliString::PauliString(std::vector<Pauli> letters, Phase phase) : letters_(std::move(letters)), phase_(phase) {
    check_site_count(static_cast<int>(letters_.size()));
    rebuild_masks();
}

PauliString PauliString::from_word(std::string_view word, Phase phase) {
    std::vector<Pauli> letters;
    letters.reserve(word.size());
    for (char c : word) letters.push_back(pauli_from_char(c));
    return PauliString(std::move(letters), phase);
}

PauliString PauliString::single(int n_sites, int site, Pauli p) { return from_sites(n_sites, {{site, p}}); }

PauliString PauliString::from_sites(int n_sites, const std::vector<std::pair<int, Pauli>> &letters) {
    check_site_count(n_sites);
    std::vector<Pauli> out(static_cast<std::size_t>(n_sites), Pauli::I);
    for (auto [site, p] : letters) {
        if (site < 0 || site >= n_sites) {
            throw DimensionError("site " + std::to_string(site) + " outside a " + std::to_string(n_sites) +
                                 "-site string");
        }
        out[static_cast<std::size_t>(site)] = p;
    }
    return PauliString(std::move(out));
}

void PauliString::rebuild_masks() {
    x_mask_ = 0;
    z_mask_ = 0;
    for (std::size_t s = 0; s < letters_.size(); ++s) {
        const std::uint64_t bit = std::uint64_t{1} << s;
        if (letters_[s] == Pauli::X || letters_[s] == Pauli::Y) x_mask_ |= bit;
        if (letters_[s] == Pauli::Z || letters_[s] == Pauli::Y) z_mask_ |= bit;
    }
}

int PauliString::y_count() const { return std::popcount(x_mask_ & z_mask_); }

int PauliString::weight() const { return std::popcount(x_mask_ | z_mask_); }

PauliString PauliString::with_phase(Phase p) const {
    PauliString out = *this;
    out.phase_ = p;
    return out;
}

std::string PauliString::word() const {
    std::string w;
    w.reserve(letters_.size());
    for (Pauli p : letters_) w.push_back(to_char(p));
    return w;
}

std::string PauliString::to_string() const {
    static constexpr const char *prefix[] = {"+", "+i", "-", "-i"};
    return prefix[phase_.exponent()] + word();
}

bool PauliString::commutes_with(const PauliString &o) const {
    check_same_sites(n_sites(), o.n_sites(), "commutes_with");
    // Symplectic form: count sites where the letters anticommute.
    const auto anti = std::popcount((x_mask_ & o.z_mask_) ^ (z_mask_ & o.x_mask_));
    return anti % 2 == 0;
}

PauliString PauliString::operator*(const PauliString &o) const {
    check_same_sites(n_sites(), o.n_sites(), "PauliString product");
    std::vector<Pauli> out(letters_.size());
    int k = phase_.exponent() + o.phase_.exponent();
    for (std::size_t s = 0; s < letters_.size(); ++s) {
        auto [c, e] = multiply_letters(letters_[s], o.letters_[s]);
        out[s] = c;
        k += e;
    }
    return PauliString(std::move(out), Phase(k));
}

OperatorSum::OperatorSum(int n_sites) : n_sites_(n_sites) { check_site_count(n_sites); }

void OperatorSum::add(double coefficient, PauliString string) {
    check_same_sites(n_sites_, string.n_sites(), "OperatorSum::add");
    terms_.push_back({coefficient, std::move(string)});
}

OperatorSum OperatorSum::merged(double drop_below) const {
    // Key on letters plus the imaginary bit of the phase; the sign goes into the coefficient.
    std::map<std::pair<std::string, bool>, double> acc;
    std::vector<std::pair<std::string, bool>> order;
    for (const auto &t : terms_) {
        const int k = t.string.phase().exponent();
        const bool imaginary = (k & 1) != 0;
        const double sign = (k >= 2) ? -1.0 : 1.0;
        auto key = std::make_pair(t.string.word(), imaginary);
        auto [it, inserted] = acc.try_emplace(key, 0.0);
        if (inserted) order.push_back(key);
        it->second += sign * t.coefficient;
    }
    OperatorSum out(n_sites_);
    for (const auto &key : order) {
        const double c = acc[key];
        if (std::abs(c) <= drop_below || c == 0.0) continue;
        out.add(c, PauliString::from_word(key.first, key.second ? Phase::i() : Phase::one()));
    }
    return out;
}

OperatorSum OperatorSum::scaled(double factor) const {
    OperatorSum out(n_sites_);
    for (const auto &t : terms_) out.add(factor * t.coefficient, t.string);
    return out;
}

bool OperatorSum::is_hermitian_weighted() const {
    for (const auto &t : terms_) {
        if (!t.string.phase().is_real() && t.coefficient != 0.0) return false;
    }
    return true;
}

std::string OperatorSum::to_string() const {
    std::ostringstream os;
    os.precision(12);
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (i) os << " + ";
        os << terms_[i].coefficient << "*" << terms_[i].string.to_string();
    }
    return os.str();
}

StateVector::StateVector(int n_sites) : n_sites_(n_sites) {
    check_site_count(n_sites);
    amplitudes_ = CVector::Zero(Eigen::Index{1} << n_sites);
    amplitudes_[0] = 1.0;
}

StateVector::StateVector(int n_sites, CVector amplitudes) : n_sites_(n_sites), amplitudes_(std::move(amplitudes)) {
    check_site_count(n_sites);
    if (amplitudes_.size() != (Eigen::Index{1} << n_sites)) {
        throw DimensionError("amplitude vector of length " + std::to_string(amplitudes_.size()) + " for " +
                             std::to_string(n_sites) + " sites");
    }
}

StateVector StateVector::basis(int n_sites, std::uint64_t index) {
    check_site_count(n_sites);
    if (index >= (std::uint64_t{1} << n_sites)) throw DimensionError("basis index out of range");
    CVector a = CVector::Zero(Eigen::Index{1} << n_sites);
    a[static_cast<Eigen::Index>(index)] = 1.0;
    return {n_sites, std::move(a)};
}

StateVector StateVector::random(int n_sites, std::mt19937_64 &rng) {
    check_site_count(n_sites);
    std::normal_distribution<double> normal;
    CVector a(Eigen::Index{1} << n_sites);
    for (Eigen::Index i = 0; i < a.size(); ++i) a[i] = Complex(normal(rng), normal(rng));
    return StateVector(n_sites, std::move(a)).normalized();
}

StateVector StateVector::normalized() const {
    const double nrm = norm();
    if (nrm == 0.0) throw DomainError("cannot normalize the zero vector");
    return {n_sites_, amplitudes_ / nrm};
}

Complex StateVector::inner(const StateVector &other) const {
    check_same_sites(n_sites_, other.n_sites_, "inner product");
    return amplitudes_.dot(other.amplitudes_);
}

namespace {

// Net factor of P on |b>: phase * i^{#Y} * (-1)^{popcount(b & z)}, target b ^ x.
Complex string_prefactor(const PauliString &p) { return (p.phase() * Phase(p.y_count())).value(); }

inline double parity_sign(std::uint64_t b, std::uint64_t z) { return (std::popcount(b & z) & 1) ? -1.0 : 1.0; }

}  // namespace

StateVector apply_string(const PauliString &p, const StateVector &v) {
    check_same_sites(p.n_sites(), v.n_sites(), "apply_string");
    const auto &in = v.amplitudes();
    CVector out(in.size());
    const Complex pre = string_prefactor(p);
    const std::uint64_t x = p.x_mask(), z = p.z_mask();
    for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(in.size()); ++b) {
        out[static_cast<Eigen::Index>(b ^ x)] = pre * parity_sign(b, z) * in[static_cast<Eigen::Index>(b)];
    }
    return {v.n_sites(), std::move(out)};
}

void apply_into(const OperatorSum &h, const CVector &in, CVector &out) {
    const auto dim = static_cast<std::uint64_t>(in.size());
    if (dim != (std::uint64_t{1} << h.n_sites())) throw DimensionError("apply: vector length does not match operator");
    out.setZero(in.size());
    for (const auto &t : h.terms()) {
        const Complex pre = t.coefficient * string_prefactor(t.string);
        const std::uint64_t x = t.string.x_mask(), z = t.string.z_mask();
        for (std::uint64_t b = 0; b < dim; ++b) {
            out[static_cast<Eigen::Index>(b ^ x)] += pre * parity_sign(b, z) * in[static_cast<Eigen::Index>(b)];
        }
    }
}

StateVector apply(const OperatorSum &h, const StateVector &v) {
    check_same_sites(h.n_sites(), v.n_sites(), "apply");
    CVector out;
    apply_into(h, v.amplitudes(), out);
    return {v.n_sites(), std::move(out)};
}

Complex expectation_complex(const PauliString &p, const StateVector &v) {
    check_same_sites(p.n_sites(), v.n_sites(), "expectation");
    const auto &a = v.amplitudes();
    const Complex pre = string_prefactor(p);
    const std::uint64_t x = p.x_mask(), z = p.z_mask();
    Complex acc = 0.0;
    for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(a.size()); ++b) {
        acc += std::conj(a[static_cast<Eigen::Index>(b ^ x)]) * parity_sign(b, z) * a[static_cast<Eigen::Index>(b)];
    }
    return pre * acc;
}

double expectation(const PauliString &p, const StateVector &v) { return expectation_complex(p, v).real(); }

Complex expectation_complex(const OperatorSum &h, const StateVector &v) {
    Complex acc = 0.0;
    for (const auto &t : h.terms()) acc += t.coefficient * expectation_complex(t.string, v);
    return acc;
}

double expectation(const OperatorSum &h, const StateVector &v) { return expectation_complex(h, v).real(); }

namespace {

void check_dense(int n, int limit) {
    if (n > limit) {
        throw CapacityError(std::to_string(n) + " sites exceed the dense limit of " + std::to_string(limit));
    }
}

void accumulate_string(CMatrix &m, const PauliString &p, Complex weight) {
    const Complex pre = weight * string_prefactor(p);
    const std::uint64_t x = p.x_mask(), z = p.z_mask();
    for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(m.cols()); ++b) {
        m(static_cast<Eigen::Index>(b ^ x), static_cast<Eigen::Index>(b)) += pre * parity_sign(b, z);
    }
}

}  // namespace

CMatrix materialize(const PauliString &p, int dense_limit) {
    check_dense(p.n_sites(), dense_limit);
    const Eigen::Index dim = Eigen::Index{1} << p.n_sites();
    CMatrix m = CMatrix::Zero(dim, dim);
    accumulate_string(m, p, 1.0);
    return m;
}

CMatrix materialize(const OperatorSum &h, int dense_limit) {
    check_dense(h.n_sites(), dense_limit);
    const Eigen::Index dim = Eigen::Index{1} << h.n_sites();
    CMatrix m = CMatrix::Zero(dim, dim);
    for (const auto &t : h.terms()) accumulate_string(m, t.string, t.coefficient);
    return m;
}

}  // namespace wenplaq
