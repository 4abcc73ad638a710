#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wenplaq/lattice.hpp"
#include "wenplaq/pauli.hpp"

namespace wenplaq {

/// Four-spin liquid-state NMR register. Sites are 0-based in code and
/// 1-based in every text or JSON representation.
///
/// H = sum_i omega_i/2 Z_i + sum_{i<j} pi J_ij/2 Z_i Z_j
/// with omega in rad/s, J in Hz and durations in seconds.
class NmrMachine {
  public:
    static constexpr int kSites = 4;

    NmrMachine(std::array<double, kSites> omegas, std::array<std::array<double, kSites>, kSites> couplings);

    const std::array<double, kSites> &omegas() const { return omegas_; }
    double omega(int site) const { return omegas_.at(static_cast<std::size_t>(site)); }
    double coupling(int a, int b) const;

    /// Diagonal of H in the computational basis.
    Eigen::VectorXd diagonal() const;

    static NmrMachine from_json_text(const std::string &text);
    static NmrMachine load(const std::string &path);
    std::string to_json_text() const;

  private:
    std::array<double, kSites> omegas_;
    std::array<std::array<double, kSites>, kSites> couplings_;
};

enum class Axis { X, Y, MinusX, MinusY };

const char *to_string(Axis a);
Axis axis_from_string(const std::string &s);

/// prod_{s in sites} exp(-i angle sigma_axis(s) / 2).
struct Rotation {
    std::vector<int> sites;
    Axis axis;
    double angle;
    bool operator==(const Rotation &) const = default;
};

struct FreeEvolution {
    double duration;
    bool operator==(const FreeEvolution &) const = default;
};

/// exp(-i angle Z_site / 2).
struct ZPhase {
    int site;
    double angle;
    bool operator==(const ZPhase &) const = default;
};

/// Exact target unitary used in gate-form sequences.
struct IdealUnitary {
    std::string label;
    CMatrix matrix;
    bool operator==(const IdealUnitary &o) const { return label == o.label && matrix == o.matrix; }
};

using Instruction = std::variant<Rotation, FreeEvolution, ZPhase, IdealUnitary>;

/// Instructions in time order: the first entry acts first.
class PulseSequence {
  public:
    explicit PulseSequence(int n_sites = NmrMachine::kSites) : n_sites_(n_sites) {}

    int n_sites() const { return n_sites_; }
    const std::vector<Instruction> &instructions() const { return instructions_; }
    std::size_t size() const { return instructions_.size(); }

    PulseSequence &rotate(std::vector<int> sites, Axis axis, double angle);
    PulseSequence &free(double duration);
    PulseSequence &zphase(int site, double angle);
    PulseSequence &ideal(std::string label, CMatrix matrix);
    PulseSequence &append(const PulseSequence &other);

    /// Instruction-wise inverse in reversed order. Free evolutions have no
    /// inverse and are rejected.
    PulseSequence inverse() const;

    bool operator==(const PulseSequence &o) const = default;

  private:
    void check_site(int site) const;

    int n_sites_;
    std::vector<Instruction> instructions_;
};

/// exp(-i angle Z_1 Z_2 ... Z_n).
CMatrix zz_all_evolution(int n_sites, double angle);

/// One symmetric Trotter step exp(-i H_x tau/2) exp(-i H_plaq tau) exp(-i H_x tau/2)
/// on the 2x2 torus, with the plaquette factor written as two ZZZZ evolutions
/// conjugated by pi/2 rotations.
PulseSequence trotter_step(double J, double g, double tau, const Lattice &l);
/// `slices` consecutive Trotter steps of length tau / slices.
PulseSequence trotter_sequence(double J, double g, double tau, int slices, const Lattice &l);

/// exp(-i 2 J tau ZZZZ) built from pi/2 rotations and free evolutions with
/// every unwanted shift and coupling refocused by pi pulses.
PulseSequence compile_four_body(double J, double tau, const NmrMachine &m);
/// The published instruction list, transcribed verbatim including its
/// closing z-phase corrections.
PulseSequence compile_four_body_literal(double J, double tau, const NmrMachine &m);
/// Trotter step with both four-body factors compiled for the machine.
PulseSequence compile_step(double J, double g, double tau, const NmrMachine &m);

CMatrix instruction_unitary(const Instruction &ins, int n_sites, const NmrMachine *machine = nullptr);
/// Product of the instruction unitaries. Free evolutions need a machine.
CMatrix sequence_unitary(const PulseSequence &s, const NmrMachine *machine = nullptr,
                         int dense_limit = kDefaultDenseLimit);
CMatrix sequence_unitary(const PulseSequence &s, const NmrMachine &machine);

struct Equivalence {
    double distance;
    Complex phase;
};

/// min over unit phase of ||u - phase v||_F / ||u||_F.
Equivalence verify_equivalence(const CMatrix &u, const CMatrix &v);

inline constexpr double kEquivalenceThreshold = 1e-8;

struct ParsedSequence {
    PulseSequence sequence;
    std::optional<NmrMachine> machine;
};

/// Line format: `ROT 1,3 x angle`, `FREE duration`, `ZPHASE site angle`,
/// preceded by an optional `MACHINE` header.
std::string format_sequence(const PulseSequence &s, const NmrMachine *machine = nullptr);
ParsedSequence parse_sequence(const std::string &text);

}  // namespace wenplaq
