#include "wenplaq/tomography.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <sstream>

#include "wenplaq/errors.hpp"
#include "wenplaq/lattice.hpp"
#include "wenplaq/spectra.hpp"

namespace wenplaq {

namespace {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

template <typename T>
T parse_number(const std::string &tok, const std::string &what) {
    T v{};
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
        throw ParseError("measurement record: bad " + what + " '" + tok + "'");
    }
    return v;
}

}  // namespace

std::vector<std::string> pauli_words(int n_sites) {
    if (n_sites < 1 || n_sites > 8) throw DomainError("Pauli word enumeration supports 1 to 8 sites");
    static constexpr char letters[] = {'I', 'X', 'Y', 'Z'};
    const std::size_t count = std::size_t{1} << (2 * n_sites);
    std::vector<std::string> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        std::string w(static_cast<std::size_t>(n_sites), 'I');
        for (int s = 0; s < n_sites; ++s) w[static_cast<std::size_t>(s)] = letters[(k >> (2 * (n_sites - 1 - s))) & 3];
        out.push_back(std::move(w));
    }
    return out;
}

MeasurementRecord synth_measure(const DensityMatrix &rho, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0)) throw DomainError("noise sigma must be >= 0");
    MeasurementRecord rec{rho.n_sites(), sigma, seed, {}};
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (const auto &w : pauli_words(rho.n_sites())) {
        const double exact = expectation(PauliString::from_word(w), rho);
        if (w.find_first_not_of('I') == std::string::npos) {
            rec.entries[w] = 1.0;
            continue;
        }
        // Truncated at five deviations so every entry stays within 1 + 5 sigma of zero.
        const double eps = sigma * std::clamp(noise(rng), -5.0, 5.0);
        rec.entries[w] = exact + eps;
    }
    return rec;
}

Reconstruction reconstruct(const MeasurementRecord &rec) {
    const auto words = pauli_words(rec.n_sites);
    std::vector<std::string> missing;
    for (const auto &w : words) {
        if (!rec.entries.contains(w)) missing.push_back(w);
    }
    if (!missing.empty()) {
        throw IncompleteRecordError("measurement record lacks " + std::to_string(missing.size()) + " Pauli words",
                                    std::move(missing));
    }

    const Eigen::Index d = Eigen::Index{1} << rec.n_sites;
    CMatrix raw = CMatrix::Zero(d, d);
    for (const auto &w : words) raw += rec.entries.at(w) * materialize(PauliString::from_word(w));
    raw /= static_cast<double>(d);
    raw = 0.5 * (raw + raw.adjoint()).eval();

    const auto eig = hermitian_eigen(raw);
    Eigen::VectorXd clipped = eig.values.cwiseMax(0.0);
    const double total = clipped.sum();
    if (!(total > 0.0)) throw DomainError("reconstruction has no positive spectral weight");
    clipped /= total;
    CMatrix projected = eig.vectors * clipped.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
    projected = 0.5 * (projected + projected.adjoint()).eval();
    return {std::move(raw), DensityMatrix(rec.n_sites, std::move(projected))};
}

TomographyReport tomography_report(const DensityMatrix &truth, const DensityMatrix &reconstructed) {
    if (truth.n_sites() != 4 || reconstructed.n_sites() != 4) {
        throw DimensionError("tomography_report expects four-site states");
    }
    const Lattice l(2, 2);
    const LoopPath loop = canonical_loop(l);
    auto mean_p = [](const DensityMatrix &rho) {
        double p = 0.0;
        for (int s = 0; s < rho.n_sites(); ++s) p += local_order_P(rho, s);
        return p / rho.n_sites();
    };
    TomographyReport r{state_fidelity(truth, reconstructed),
                       wilson_expectation(truth, l, loop),
                       wilson_expectation(reconstructed, l, loop),
                       mean_p(truth),
                       mean_p(reconstructed),
                       {}};
    for (int a = 0; a < 4; ++a) {
        for (int b = a + 1; b < 4; ++b) {
            r.concurrences.push_back({a, b, concurrence(reduced_density(truth, {a, b})),
                                      concurrence(reduced_density(reconstructed, {a, b}))});
        }
    }
    return r;
}

std::string format_record(const MeasurementRecord &rec) {
    std::ostringstream out;
    out << "# wenplaq measurement record v1\n";
    out << "n_sites " << rec.n_sites << "\n";
    out << "sigma " << format_double(rec.sigma) << "\n";
    out << "seed " << rec.seed << "\n";
    for (const auto &[w, v] : rec.entries) out << w << ' ' << format_double(v) << "\n";
    return out.str();
}

MeasurementRecord parse_record(const std::string &text) {
    std::istringstream in(text);
    MeasurementRecord rec;
    bool have_sites = false;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string key, value, extra;
        if (!(ls >> key) || key[0] == '#') continue;
        if (!(ls >> value) || (ls >> extra)) throw ParseError("measurement record: malformed line '" + line + "'");
        if (key == "n_sites") {
            rec.n_sites = parse_number<int>(value, "n_sites");
            have_sites = true;
        } else if (key == "sigma") {
            rec.sigma = parse_number<double>(value, "sigma");
        } else if (key == "seed") {
            rec.seed = parse_number<std::uint64_t>(value, "seed");
        } else {
            if (!have_sites || key.size() != static_cast<std::size_t>(rec.n_sites) ||
                key.find_first_not_of("IXYZ") != std::string::npos) {
                throw ParseError("measurement record: '" + key + "' is not a Pauli word of length n_sites");
            }
            rec.entries[key] = parse_number<double>(value, "value");
        }
    }
    if (!have_sites) throw ParseError("measurement record lacks n_sites");
    return rec;
}

}  // namespace wenplaq
