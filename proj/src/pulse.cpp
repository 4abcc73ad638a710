#include "wenplaq/pulse.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "wenplaq/errors.hpp"

namespace wenplaq {

namespace {

using std::numbers::pi;

constexpr double kUnitarityTolerance = 1e-9;

const char *coupling_name(int a, int b) {
    static const char *names[4][4] = {{"", "J12", "J13", "J14"},
                                      {"J12", "", "J23", "J24"},
                                      {"J13", "J23", "", "J34"},
                                      {"J14", "J24", "J34", ""}};
    return names[a][b];
}

Eigen::Matrix2cd pauli_matrix(Axis a) {
    Eigen::Matrix2cd m;
    switch (a) {
    case Axis::X: m << 0, 1, 1, 0; break;
    case Axis::MinusX: m << 0, -1, -1, 0; break;
    case Axis::Y: m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case Axis::MinusY: m << 0, Complex(0, 1), Complex(0, -1), 0; break;
    }
    return m;
}

/// exp(-i angle sigma / 2) for a Pauli-like sigma with sigma^2 = 1.
Eigen::Matrix2cd single_rotation(Axis a, double angle) {
    return std::cos(angle / 2) * Eigen::Matrix2cd::Identity() - Complex(0, 1) * std::sin(angle / 2) * pauli_matrix(a);
}

/// Tensor product with site 0 as the least significant factor.
CMatrix tensor(const std::vector<Eigen::Matrix2cd> &factors) {
    CMatrix out = CMatrix::Identity(1, 1);
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
        CMatrix next(out.rows() * 2, out.cols() * 2);
        for (Eigen::Index r = 0; r < out.rows(); ++r) {
            for (Eigen::Index c = 0; c < out.cols(); ++c) next.block(2 * r, 2 * c, 2, 2) = out(r, c) * (*it);
        }
        out = std::move(next);
    }
    return out;
}

CMatrix diagonal_phase(const Eigen::VectorXd &energies, double t) {
    CVector d(energies.size());
    for (Eigen::Index i = 0; i < energies.size(); ++i) d[i] = std::polar(1.0, -energies[i] * t);
    return d.asDiagonal();
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string &tok, int line) {
    double v = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
        throw ParseError("line " + std::to_string(line) + ": '" + tok + "' is not a number");
    }
    return v;
}

int parse_site(const std::string &tok, int line) {
    int v = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
        throw ParseError("line " + std::to_string(line) + ": '" + tok + "' is not a site number");
    }
    return v - 1;
}

/// exp(-i alpha Z_a Z_b) from four equal free-evolution windows. The pi pulses
/// give sites a, b, c, d the toggling-frame signs (++--), (++--) or (--++),
/// (+-+-), (+--+), so every shift and every other coupling averages to zero.
void append_zz(PulseSequence &s, const NmrMachine &m, int a, int b, double alpha) {
    int c = -1, d = -1;
    for (int k = 0; k < NmrMachine::kSites; ++k) {
        if (k == a || k == b) continue;
        (c < 0 ? c : d) = k;
    }
    const double jab = m.coupling(a, b);
    const double window = std::abs(alpha) / (2.0 * pi * std::abs(jab));
    const bool flipped = (alpha < 0) != (jab < 0);

    if (flipped) s.rotate({b}, Axis::X, pi);
    s.free(window);
    s.rotate({c, d}, Axis::X, pi);
    s.free(window);
    s.rotate({a, b, c}, Axis::X, pi);
    s.free(window);
    s.rotate({c, d}, Axis::X, pi);
    s.free(window);
    if (flipped) {
        s.rotate({a, c}, Axis::X, pi);
    } else {
        s.rotate({a, b, c}, Axis::X, pi);
    }
}

void require_2x2(const Lattice &l) {
    if (l.lx() != 2 || l.ly() != 2) throw DomainError("Trotter steps are defined on the 2x2 lattice only");
}

/// Appends conj^dagger . body . conj for each of the two plaquette orientations.
template <typename Body>
void append_plaquette_factors(PulseSequence &s, Body &&body) {
    const std::vector<int> odd{0, 2}, even{1, 3};
    s.rotate(odd, Axis::X, pi / 2).rotate(even, Axis::Y, pi / 2);
    body(s);
    s.rotate(odd, Axis::MinusX, pi / 2).rotate(even, Axis::MinusY, pi / 2);
    s.rotate(odd, Axis::Y, pi / 2).rotate(even, Axis::X, pi / 2);
    body(s);
    s.rotate(odd, Axis::MinusY, pi / 2).rotate(even, Axis::MinusX, pi / 2);
}

}  // namespace

NmrMachine::NmrMachine(std::array<double, kSites> omegas, std::array<std::array<double, kSites>, kSites> couplings)
    : omegas_(omegas), couplings_(couplings) {
    for (int i = 0; i < kSites; ++i) {
        if (!std::isfinite(omegas_[i])) throw MachineError("omega of spin " + std::to_string(i + 1) + " is not finite");
        if (couplings_[i][i] != 0.0) throw MachineError("coupling matrix must have a zero diagonal");
        for (int j = 0; j < kSites; ++j) {
            if (!std::isfinite(couplings_[i][j])) throw MachineError("couplings must be finite");
            if (couplings_[i][j] != couplings_[j][i]) {
                throw MachineError(std::string("coupling matrix is not symmetric at ") + coupling_name(i, j));
            }
        }
    }
    for (auto [a, b] : {std::pair{2, 3}, {0, 1}, {0, 2}}) {
        if (couplings_[a][b] == 0.0) {
            throw MachineError(std::string(coupling_name(a, b)) + " is zero but the four-body compiler divides by it");
        }
    }
}

double NmrMachine::coupling(int a, int b) const {
    if (a < 0 || a >= kSites || b < 0 || b >= kSites) throw DomainError("machine site out of range");
    return couplings_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
}

Eigen::VectorXd NmrMachine::diagonal() const {
    Eigen::VectorXd d(1 << kSites);
    for (int b = 0; b < (1 << kSites); ++b) {
        double e = 0.0;
        for (int i = 0; i < kSites; ++i) {
            const double zi = ((b >> i) & 1) ? -1.0 : 1.0;
            e += omegas_[i] / 2 * zi;
            for (int j = i + 1; j < kSites; ++j) {
                const double zj = ((b >> j) & 1) ? -1.0 : 1.0;
                e += pi * couplings_[i][j] / 2 * zi * zj;
            }
        }
        d[b] = e;
    }
    return d;
}

NmrMachine NmrMachine::from_json_text(const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("machine file is not valid JSON: ") + e.what());
    }
    try {
        const auto &om = j.at("omegas_rad_per_s");
        if (!om.is_array() || om.size() != kSites) throw MachineError("omegas_rad_per_s must list four values");
        std::array<double, kSites> omegas{};
        for (int i = 0; i < kSites; ++i) omegas[i] = om.at(i).get<double>();

        std::array<std::array<double, kSites>, kSites> c{};
        for (const auto &[key, value] : j.at("couplings_hz").items()) {
            if (key.size() != 2 || key[0] < '1' || key[0] > '4' || key[1] < '1' || key[1] > '4' || key[0] == key[1]) {
                throw MachineError("coupling key '" + key + "' must name two distinct spins, e.g. \"13\"");
            }
            const int a = key[0] - '1', b = key[1] - '1';
            c[a][b] = c[b][a] = value.get<double>();
        }
        return {omegas, c};
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("machine file: ") + e.what());
    }
}

NmrMachine NmrMachine::load(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open machine file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string NmrMachine::to_json_text() const {
    nlohmann::ordered_json j;
    j["omegas_rad_per_s"] = omegas_;
    nlohmann::ordered_json c = nlohmann::ordered_json::object();
    for (int a = 0; a < kSites; ++a) {
        for (int b = a + 1; b < kSites; ++b) c[std::to_string(a + 1) + std::to_string(b + 1)] = couplings_[a][b];
    }
    j["couplings_hz"] = c;
    return j.dump(2) + "\n";
}

const char *to_string(Axis a) {
    switch (a) {
    case Axis::X: return "x";
    case Axis::Y: return "y";
    case Axis::MinusX: return "-x";
    case Axis::MinusY: return "-y";
    }
    return "?";
}

Axis axis_from_string(const std::string &s) {
    if (s == "x") return Axis::X;
    if (s == "y") return Axis::Y;
    if (s == "-x") return Axis::MinusX;
    if (s == "-y") return Axis::MinusY;
    throw ParseError("unknown rotation axis '" + s + "'");
}

void PulseSequence::check_site(int site) const {
    if (site < 0 || site >= n_sites_) throw DomainError("pulse site " + std::to_string(site + 1) + " is out of range");
}

PulseSequence &PulseSequence::rotate(std::vector<int> sites, Axis axis, double angle) {
    if (sites.empty()) throw DomainError("rotation needs at least one site");
    std::set<int> seen;
    for (int s : sites) {
        check_site(s);
        if (!seen.insert(s).second) throw DomainError("rotation lists a site twice");
    }
    if (!std::isfinite(angle)) throw DomainError("rotation angle must be finite");
    instructions_.emplace_back(Rotation{std::move(sites), axis, angle});
    return *this;
}

PulseSequence &PulseSequence::free(double duration) {
    if (!(duration >= 0.0) || !std::isfinite(duration)) throw DomainError("free evolution duration must be >= 0");
    instructions_.emplace_back(FreeEvolution{duration});
    return *this;
}

PulseSequence &PulseSequence::zphase(int site, double angle) {
    check_site(site);
    if (!std::isfinite(angle)) throw DomainError("z-phase angle must be finite");
    instructions_.emplace_back(ZPhase{site, angle});
    return *this;
}

PulseSequence &PulseSequence::ideal(std::string label, CMatrix matrix) {
    const Eigen::Index d = Eigen::Index{1} << n_sites_;
    if (matrix.rows() != d || matrix.cols() != d) throw DimensionError("ideal unitary has the wrong dimension");
    instructions_.emplace_back(IdealUnitary{std::move(label), std::move(matrix)});
    return *this;
}

PulseSequence &PulseSequence::append(const PulseSequence &other) {
    if (other.n_sites_ != n_sites_) throw DimensionError("cannot append sequences of different sizes");
    instructions_.insert(instructions_.end(), other.instructions_.begin(), other.instructions_.end());
    return *this;
}

PulseSequence PulseSequence::inverse() const {
    PulseSequence out(n_sites_);
    for (auto it = instructions_.rbegin(); it != instructions_.rend(); ++it) {
        std::visit(
            [&](const auto &ins) {
                using T = std::decay_t<decltype(ins)>;
                if constexpr (std::is_same_v<T, Rotation>) {
                    out.rotate(ins.sites, ins.axis, -ins.angle);
                } else if constexpr (std::is_same_v<T, ZPhase>) {
                    out.zphase(ins.site, -ins.angle);
                } else if constexpr (std::is_same_v<T, IdealUnitary>) {
                    out.ideal(ins.label + "^-1", ins.matrix.adjoint());
                } else {
                    throw DomainError("free evolution has no instruction-level inverse");
                }
            },
            *it);
    }
    return out;
}

CMatrix zz_all_evolution(int n_sites, double angle) {
    const Eigen::Index d = Eigen::Index{1} << n_sites;
    CVector diag(d);
    for (Eigen::Index b = 0; b < d; ++b) {
        const double parity = (std::popcount(static_cast<std::uint64_t>(b)) & 1) ? -1.0 : 1.0;
        diag[b] = std::polar(1.0, -angle * parity);
    }
    return diag.asDiagonal();
}

PulseSequence trotter_step(double J, double g, double tau, const Lattice &l) {
    require_2x2(l);
    if (!(tau > 0.0)) throw DomainError("Trotter step needs tau > 0");
    PulseSequence s(4);
    const std::vector<int> all{0, 1, 2, 3};
    if (g != 0.0) s.rotate(all, Axis::X, -g * tau);
    if (J != 0.0) {
        const CMatrix zzzz = zz_all_evolution(4, -2.0 * J * tau);
        append_plaquette_factors(s, [&](PulseSequence &q) { q.ideal("ZZZZ", zzzz); });
    }
    if (g != 0.0) s.rotate(all, Axis::X, -g * tau);
    return s;
}

PulseSequence trotter_sequence(double J, double g, double tau, int slices, const Lattice &l) {
    if (slices < 1) throw DomainError("Trotter sequence needs at least one slice");
    PulseSequence s(4);
    const PulseSequence step = trotter_step(J, g, tau / slices, l);
    for (int k = 0; k < slices; ++k) s.append(step);
    return s;
}

PulseSequence compile_four_body(double J, double tau, const NmrMachine &m) {
    if (!(tau >= 0.0)) throw DomainError("four-body compilation needs tau >= 0");
    // ZZZZ = R^dag V^dag (X1 X3) V R with V = exp(-i pi/4 Z1Z2) exp(-i pi/4 Z3Z4)
    // and R rotating Z to Y on spins 1 and 3; X1 X3 comes from Z1 Z3 by y rotations.
    const std::vector<int> outer{0, 2};
    PulseSequence s(4);
    s.rotate(outer, Axis::MinusX, pi / 2);
    append_zz(s, m, 0, 1, pi / 4);
    append_zz(s, m, 2, 3, pi / 4);
    s.rotate(outer, Axis::MinusY, pi / 2);
    append_zz(s, m, 0, 2, 2.0 * J * tau);
    s.rotate(outer, Axis::Y, pi / 2);
    append_zz(s, m, 0, 1, -pi / 4);
    append_zz(s, m, 2, 3, -pi / 4);
    s.rotate(outer, Axis::X, pi / 2);
    return s;
}

PulseSequence compile_four_body_literal(double J, double tau, const NmrMachine &m) {
    if (!(tau >= 0.0)) throw DomainError("four-body compilation needs tau >= 0");
    const double j12 = m.coupling(0, 1), j13 = m.coupling(0, 2), j34 = m.coupling(2, 3);
    const double tau1 = 1.0 / (4.0 * j34);
    const double tau2 = 1.0 / (4.0 * j12);
    const double tau3 = 2.0 * J * tau / (pi * j13);
    const double theta1 = -m.omega(0) / j34;
    const double theta2 = -4.0 * m.omega(1) * J * tau / (pi * j13);
    const double theta3 = m.omega(3) / j12 + 4.0 * m.omega(3) * J * tau / (pi * j13);

    PulseSequence s(4);
    s.rotate({2}, Axis::Y, pi / 2);
    s.free(tau1).rotate({2, 3}, Axis::X, pi).free(tau1);
    s.rotate({1}, Axis::Y, pi);
    s.rotate({2}, Axis::X, pi / 2).rotate({0}, Axis::MinusY, pi / 2);
    s.free(tau2).rotate({0, 1}, Axis::Y, pi).free(tau2);
    s.rotate({0}, Axis::X, pi / 2);
    s.free(tau3).rotate({0, 2}, Axis::X, pi).free(tau3);
    s.rotate({0}, Axis::X, pi / 2);
    s.free(tau2).rotate({0, 1}, Axis::Y, pi).free(tau2);
    s.rotate({2}, Axis::MinusX, pi / 2).rotate({0}, Axis::MinusY, pi / 2);
    s.free(tau1).rotate({2, 3}, Axis::Y, pi).free(tau1);
    s.rotate({2}, Axis::Y, pi / 2);
    s.zphase(0, theta1).zphase(1, theta2).zphase(3, theta3);
    return s;
}

PulseSequence compile_step(double J, double g, double tau, const NmrMachine &m) {
    if (!(tau >= 0.0)) throw DomainError("compiled Trotter step needs tau >= 0");
    PulseSequence s(4);
    const std::vector<int> all{0, 1, 2, 3};
    if (g != 0.0) s.rotate(all, Axis::X, -g * tau);
    if (J != 0.0) {
        const PulseSequence body = compile_four_body(-J, tau, m);
        append_plaquette_factors(s, [&](PulseSequence &q) { q.append(body); });
    }
    if (g != 0.0) s.rotate(all, Axis::X, -g * tau);
    return s;
}

CMatrix instruction_unitary(const Instruction &ins, int n_sites, const NmrMachine *machine) {
    return std::visit(
        [&](const auto &x) -> CMatrix {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Rotation>) {
                std::vector<Eigen::Matrix2cd> f(static_cast<std::size_t>(n_sites), Eigen::Matrix2cd::Identity());
                for (int s : x.sites) f.at(static_cast<std::size_t>(s)) = single_rotation(x.axis, x.angle);
                return tensor(f);
            } else if constexpr (std::is_same_v<T, ZPhase>) {
                std::vector<Eigen::Matrix2cd> f(static_cast<std::size_t>(n_sites), Eigen::Matrix2cd::Identity());
                Eigen::Matrix2cd z = Eigen::Matrix2cd::Zero();
                z(0, 0) = std::polar(1.0, -x.angle / 2);
                z(1, 1) = std::polar(1.0, x.angle / 2);
                f.at(static_cast<std::size_t>(x.site)) = z;
                return tensor(f);
            } else if constexpr (std::is_same_v<T, FreeEvolution>) {
                if (machine == nullptr) throw MachineError("free evolution requires an NMR machine");
                if (n_sites != NmrMachine::kSites) throw DimensionError("free evolution needs a four-spin sequence");
                return diagonal_phase(machine->diagonal(), x.duration);
            } else {
                return x.matrix;
            }
        },
        ins);
}

CMatrix sequence_unitary(const PulseSequence &s, const NmrMachine *machine, int dense_limit) {
    if (s.n_sites() > dense_limit) throw CapacityError("sequence exceeds the dense limit");
    const Eigen::Index d = Eigen::Index{1} << s.n_sites();
    CMatrix u = CMatrix::Identity(d, d);
    for (const auto &ins : s.instructions()) u = instruction_unitary(ins, s.n_sites(), machine) * u;
    return u;
}

CMatrix sequence_unitary(const PulseSequence &s, const NmrMachine &machine) { return sequence_unitary(s, &machine); }

Equivalence verify_equivalence(const CMatrix &u, const CMatrix &v) {
    if (u.rows() != v.rows() || u.cols() != v.cols() || u.rows() != u.cols()) {
        throw DimensionError("verify_equivalence needs square matrices of equal size");
    }
    const CMatrix id = CMatrix::Identity(u.rows(), u.cols());
    if ((u.adjoint() * u - id).cwiseAbs().maxCoeff() > kUnitarityTolerance) throw NonUnitaryError("u is not unitary");
    if ((v.adjoint() * v - id).cwiseAbs().maxCoeff() > kUnitarityTolerance) throw NonUnitaryError("v is not unitary");
    const Complex tr = (v.adjoint() * u).trace();
    const Complex phase = std::abs(tr) > 0.0 ? tr / std::abs(tr) : Complex(1.0, 0.0);
    return {(u - phase * v).norm() / u.norm(), phase};
}

std::string format_sequence(const PulseSequence &s, const NmrMachine *machine) {
    std::ostringstream out;
    out << "# wenplaq pulse sequence v1\n";
    out << "SITES " << s.n_sites() << "\n";
    if (machine != nullptr) {
        out << "MACHINE omegas";
        for (double w : machine->omegas()) out << ' ' << format_double(w);
        out << "\nMACHINE couplings";
        for (int a = 0; a < NmrMachine::kSites; ++a) {
            for (int b = a + 1; b < NmrMachine::kSites; ++b) out << ' ' << format_double(machine->coupling(a, b));
        }
        out << "\n";
    }
    for (const auto &ins : s.instructions()) {
        std::visit(
            [&](const auto &x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, Rotation>) {
                    out << "ROT ";
                    for (std::size_t i = 0; i < x.sites.size(); ++i) out << (i ? "," : "") << x.sites[i] + 1;
                    out << ' ' << to_string(x.axis) << ' ' << format_double(x.angle) << "\n";
                } else if constexpr (std::is_same_v<T, FreeEvolution>) {
                    out << "FREE " << format_double(x.duration) << "\n";
                } else if constexpr (std::is_same_v<T, ZPhase>) {
                    out << "ZPHASE " << x.site + 1 << ' ' << format_double(x.angle) << "\n";
                } else {
                    throw DomainError("ideal unitary '" + x.label + "' has no text form");
                }
            },
            ins);
    }
    return out.str();
}

ParsedSequence parse_sequence(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::optional<PulseSequence> seq;
    std::optional<std::array<double, 4>> omegas;
    std::optional<std::array<double, 6>> couplings;

    auto sequence = [&]() -> PulseSequence & {
        if (!seq) seq.emplace(NmrMachine::kSites);
        return *seq;
    };

    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw) || kw[0] == '#') continue;
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        auto need = [&](std::size_t n) {
            if (tok.size() != n) {
                throw ParseError("line " + std::to_string(lineno) + ": " + kw + " expects " + std::to_string(n) +
                                 " fields");
            }
        };
        try {
            if (kw == "SITES") {
                need(1);
                if (seq) throw ParseError("line " + std::to_string(lineno) + ": SITES must precede instructions");
                seq.emplace(parse_site(tok[0], lineno) + 1);
            } else if (kw == "MACHINE") {
                if (tok.empty()) throw ParseError("line " + std::to_string(lineno) + ": empty MACHINE line");
                if (tok[0] == "omegas") {
                    need(5);
                    std::array<double, 4> w{};
                    for (int i = 0; i < 4; ++i) w[i] = parse_double(tok[i + 1], lineno);
                    omegas = w;
                } else if (tok[0] == "couplings") {
                    need(7);
                    std::array<double, 6> c{};
                    for (int i = 0; i < 6; ++i) c[i] = parse_double(tok[i + 1], lineno);
                    couplings = c;
                } else {
                    throw ParseError("line " + std::to_string(lineno) + ": unknown MACHINE field " + tok[0]);
                }
            } else if (kw == "ROT") {
                need(3);
                std::vector<int> sites;
                std::istringstream ss(tok[0]);
                for (std::string s; std::getline(ss, s, ',');) sites.push_back(parse_site(s, lineno));
                sequence().rotate(std::move(sites), axis_from_string(tok[1]), parse_double(tok[2], lineno));
            } else if (kw == "FREE") {
                need(1);
                sequence().free(parse_double(tok[0], lineno));
            } else if (kw == "ZPHASE") {
                need(2);
                sequence().zphase(parse_site(tok[0], lineno), parse_double(tok[1], lineno));
            } else {
                throw ParseError("line " + std::to_string(lineno) + ": unknown instruction " + kw);
            }
        } catch (const DomainError &e) {
            throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }

    ParsedSequence out{seq ? *seq : PulseSequence(NmrMachine::kSites), std::nullopt};
    if (omegas.has_value() != couplings.has_value()) throw ParseError("MACHINE header needs both omegas and couplings");
    if (omegas) {
        std::array<std::array<double, 4>, 4> c{};
        int k = 0;
        for (int a = 0; a < 4; ++a) {
            for (int b = a + 1; b < 4; ++b, ++k) c[a][b] = c[b][a] = (*couplings)[k];
        }
        out.machine.emplace(*omegas, c);
    }
    return out;
}

}  // namespace wenplaq
