#include "wenplaq/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "wenplaq/errors.hpp"

namespace wenplaq {

namespace {

int wrap(int v, int n) { return ((v % n) + n) % n; }

}  // namespace

Lattice::Lattice(int lx, int ly) : lx_(lx), ly_(ly) {
    if (lx < 1 || ly < 1) throw DomainError("lattice dimensions must be positive");
    if (lx * ly > kMaxSites) throw CapacityError("lattice has more than " + std::to_string(kMaxSites) + " sites");
}

int Lattice::site_of(int x, int y) const {
    x = wrap(x, lx_);
    y = wrap(y, ly_);
    return y * lx_ + ((y % 2 == 0) ? x : lx_ - 1 - x);
}

Coord Lattice::coord_of(int site) const {
    check_site(site);
    const int y = site / lx_;
    const int r = site % lx_;
    return {(y % 2 == 0) ? r : lx_ - 1 - r, y};
}

bool Lattice::is_odd(int site) const {
    const auto c = coord_of(site);
    return (c.x + c.y) % 2 == 0;
}

bool Lattice::are_neighbors(int a, int b) const {
    if (a == b) return false;
    const auto ca = coord_of(a);
    for (auto [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
        if (site_of(ca.x + dx, ca.y + dy) == b) return true;
    }
    return false;
}

int Lattice::distance(int a, int b) const {
    const auto ca = coord_of(a), cb = coord_of(b);
    const int dx = std::abs(ca.x - cb.x), dy = std::abs(ca.y - cb.y);
    return std::min(dx, lx_ - dx) + std::min(dy, ly_ - dy);
}

void Lattice::check_site(int site) const {
    if (site < 0 || site >= n_sites()) {
        throw DomainError("site " + std::to_string(site) + " is not on the " + label() + " lattice");
    }
}

LoopPath::LoopPath(const Lattice &l, std::vector<int> sites) : sites_(std::move(sites)) {
    if (sites_.size() < 2) throw DomainError("a closed loop needs at least two sites");
    std::set<int> seen;
    for (int s : sites_) {
        l.check_site(s);
        if (!seen.insert(s).second) throw DomainError("loop visits site " + std::to_string(s) + " twice");
    }
    for (std::size_t i = 0; i < sites_.size(); ++i) {
        const int a = sites_[i], b = sites_[(i + 1) % sites_.size()];
        if (!l.are_neighbors(a, b)) {
            throw DomainError("loop is not closed: sites " + std::to_string(a) + " and " + std::to_string(b) +
                              " are not nearest neighbours");
        }
    }
}

LoopPath LoopPath::reversed(const Lattice &l) const {
    std::vector<int> r(sites_.rbegin(), sites_.rend());
    return LoopPath(l, std::move(r));
}

LoopPath plaquette_loop(const Lattice &l, int base) {
    const auto c = l.coord_of(base);
    return LoopPath(l, {base, l.site_of(c.x + 1, c.y), l.site_of(c.x + 1, c.y + 1), l.site_of(c.x, c.y + 1)});
}

LoopPath canonical_loop(const Lattice &l) { return plaquette_loop(l, 0); }

PauliString plaquette_operator(const Lattice &l, int base) {
    const auto c = l.coord_of(base);
    std::vector<Pauli> letters(static_cast<std::size_t>(l.n_sites()), Pauli::I);
    auto put = [&](int x, int y, Pauli p) {
        auto &slot = letters[static_cast<std::size_t>(l.site_of(x, y))];
        if (slot != Pauli::I) throw DomainError("plaquette wraps onto itself on a " + l.label() + " lattice");
        slot = p;
    };
    put(c.x, c.y, Pauli::X);
    put(c.x + 1, c.y, Pauli::Y);
    put(c.x + 1, c.y + 1, Pauli::X);
    put(c.x, c.y + 1, Pauli::Y);
    return PauliString(std::move(letters));
}

OperatorSum plaquette_sum_derivative(const Lattice &l) {
    OperatorSum h(l.n_sites());
    for (int i = 0; i < l.n_sites(); ++i) h.add(-1.0, plaquette_operator(l, i));
    return h.merged();
}

OperatorSum build_hamiltonian(const Lattice &l, double J, double g) {
    OperatorSum h(l.n_sites());
    for (int i = 0; i < l.n_sites(); ++i) h.add(-J, plaquette_operator(l, i));
    for (int i = 0; i < l.n_sites(); ++i) h.add(-g, PauliString::single(l.n_sites(), i, Pauli::X));
    return h.merged();
}

PauliString wilson_loop(const Lattice &l, const LoopPath &c) {
    std::vector<Pauli> letters(static_cast<std::size_t>(l.n_sites()), Pauli::I);
    for (int s : c.sites()) letters[static_cast<std::size_t>(s)] = l.is_odd(s) ? Pauli::X : Pauli::Y;
    return PauliString(std::move(letters));
}

const char *to_string(Excitation e) {
    switch (e) {
    case Excitation::None: return "none";
    case Excitation::E: return "e";
    case Excitation::M: return "m";
    }
    return "?";
}

std::vector<PlaquetteRecord> classify_excitations(const Lattice &l, const StateVector &v, TopologicalOrder order,
                                                  double tolerance) {
    if (v.n_sites() != l.n_sites()) throw DimensionError("state does not match the lattice");
    const double defect = order == TopologicalOrder::Z2A ? -1.0 : 1.0;
    std::vector<PlaquetteRecord> out;
    out.reserve(static_cast<std::size_t>(l.n_sites()));
    for (int base = 0; base < l.n_sites(); ++base) {
        const double f = expectation(plaquette_operator(l, base), v);
        Excitation label = Excitation::None;
        if (std::abs(f - defect) < tolerance) label = l.is_odd(base) ? Excitation::E : Excitation::M;
        out.push_back({base, f, label});
    }
    return out;
}

}  // namespace wenplaq
