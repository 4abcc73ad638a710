#pragma once

#include <string>
#include <vector>

#include "wenplaq/pauli.hpp"

namespace wenplaq {

struct Coord {
    int x;
    int y;
    bool operator==(const Coord &) const = default;
};

/// Periodic Lx x Ly square lattice.
///
/// Sites are numbered row by row in a snake pattern: row y = 0 runs left to
/// right, row y = 1 right to left, and so on. On the 2x2 torus this yields the
/// labelling 0=(0,0), 1=(1,0), 2=(1,1), 3=(0,1), i.e. spins 1..4 going around
/// the plaquette.
///
/// A site is *odd* when x + y is even, so site 0 is odd and the Wilson loop
/// around the 2x2 torus reads X0 Y1 X2 Y3.
class Lattice {
  public:
    Lattice(int lx, int ly);

    int lx() const { return lx_; }
    int ly() const { return ly_; }
    int n_sites() const { return lx_ * ly_; }

    /// Coordinates wrap modulo (Lx, Ly).
    int site_of(int x, int y) const;
    Coord coord_of(int site) const;
    bool is_odd(int site) const;
    bool are_neighbors(int a, int b) const;
    /// Periodic Manhattan distance.
    int distance(int a, int b) const;
    void check_site(int site) const;

    std::string label() const { return std::to_string(lx_) + "x" + std::to_string(ly_); }

  private:
    int lx_;
    int ly_;
};

/// Closed string of distinct sites; consecutive entries (and last -> first)
/// are nearest neighbours on the torus.
class LoopPath {
  public:
    LoopPath(const Lattice &l, std::vector<int> sites);
    const std::vector<int> &sites() const { return sites_; }
    LoopPath reversed(const Lattice &l) const;

  private:
    std::vector<int> sites_;
};

/// Loop around the plaquette whose lower-left corner is `base`.
LoopPath plaquette_loop(const Lattice &l, int base);
/// Loop around the plaquette at site 0; on 2x2 this is (1,2,3,4).
LoopPath canonical_loop(const Lattice &l);

/// X at base, Y at base+ex, X at base+ex+ey, Y at base+ey.
PauliString plaquette_operator(const Lattice &l, int base);
/// -J sum_i F_i - g sum_i X_i with identical strings merged.
OperatorSum build_hamiltonian(const Lattice &l, double J, double g);
/// dH/dJ = -sum_i F_i.
OperatorSum plaquette_sum_derivative(const Lattice &l);
/// Product over loop sites of X on odd sites and Y on even sites.
PauliString wilson_loop(const Lattice &l, const LoopPath &c);

enum class TopologicalOrder { Z2A, Z2B };
enum class Excitation { None, E, M };

const char *to_string(Excitation e);

struct PlaquetteRecord {
    int base;
    double f_value;
    Excitation label;
};

inline constexpr double kDefaultDefectTolerance = 0.1;

/// Measures every plaquette and labels defects relative to the given order:
/// Z2A defects have F = -1, Z2B defects F = +1. A defect on an even
/// sub-plaquette is an m-particle, on an odd one an e-particle.
std::vector<PlaquetteRecord> classify_excitations(const Lattice &l, const StateVector &v, TopologicalOrder order,
                                                  double tolerance = kDefaultDefectTolerance);

}  // namespace wenplaq
