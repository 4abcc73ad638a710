#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wenplaq/observables.hpp"

namespace wenplaq {

/// Pauli-basis expectation values keyed by word (character k is site k).
struct MeasurementRecord {
    int n_sites = 0;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    std::map<std::string, double> entries;
};

/// Every Pauli word on n sites in I < X < Y < Z lexicographic order.
std::vector<std::string> pauli_words(int n_sites);

/// Exact expectations plus independent Gaussian noise of deviation sigma on
/// every non-identity word.
MeasurementRecord synth_measure(const DensityMatrix &rho, double sigma, std::uint64_t seed);

struct Reconstruction {
    /// Linear inversion, possibly with negative eigenvalues.
    CMatrix raw;
    /// Negative eigenvalues clipped to zero and trace renormalized.
    DensityMatrix projected;
};

Reconstruction reconstruct(const MeasurementRecord &rec);

struct PairConcurrence {
    int a;
    int b;
    double truth;
    double reconstructed;
};

struct TomographyReport {
    double fidelity;
    double wilson_truth;
    double wilson_reconstructed;
    double p_truth;
    double p_reconstructed;
    std::vector<PairConcurrence> concurrences;

    double wilson_delta() const { return wilson_reconstructed - wilson_truth; }
    double p_delta() const { return p_reconstructed - p_truth; }
};

/// Compares two four-site states on the 2x2 plaquette; P is averaged over sites.
TomographyReport tomography_report(const DensityMatrix &truth, const DensityMatrix &reconstructed);

std::string format_record(const MeasurementRecord &rec);
MeasurementRecord parse_record(const std::string &text);

}  // namespace wenplaq
