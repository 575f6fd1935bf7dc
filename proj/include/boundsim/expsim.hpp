// expsim.hpp: photon-counting simulation of the MCP and tomography runs.
//
// Every Bell state P_{k,l} is "measured" separately and its coincidence
// counts are mixed afterwards with the weights c_{k,l}, as in the lab.
// A setting with joint probability p has Poisson mean
//   windows * (peak * d * p + background)
// so a perfectly correlated setting of a maximally entangled state sits at
// the peak rate.

#pragma once

#include "boundsim/mubs.hpp"
#include "boundsim/numkernel.hpp"
#include "boundsim/simplex.hpp"
#include "boundsim/witness.hpp"

#include <cstdint>
#include <vector>

namespace boundsim {

struct NoiseModel {
    double peak = 1500.0;      // coincidences per window, perfectly correlated setting
    int windows = 1;           // integration windows per setting
    double background = 5.0;   // flat coincidences per window
    std::uint64_t seed = 0;

    void validate() const;  // InvalidConfig
    static NoiseModel noiseless() { return {1.0, 1, 0.0, 0}; }
};

/// One projector pair. counts[k*d+l] is the count recorded for P_{k,l};
/// integer-valued when drawn, real when they are expectations.
struct CountRecord {
    int setting = 0;
    std::vector<double> counts;
    double mixed = 0.0;
};

/// Poisson mean of one setting.
double expected_count(int d, WeylIndex bell, const Ket& ket_a, const Ket& ket_b, const NoiseModel& noise);

/// One seeded draw. The generator is derived from (noise.seed, stream,
/// bell), so the same arguments always give the same count.
long long simulate_counts(int d, WeylIndex bell, const Ket& ket_a, const Ket& ket_b, const NoiseModel& noise,
                          std::uint64_t stream = 0);

/// MCP settings of a family: setting (m*d + i)*d + j pairs Alice's i-th
/// vector of basis m with Bob's j-th vector of its conjugate.
std::vector<CountRecord> simulate_mcp(const MubFamily& fam, const NoiseModel& noise);
std::vector<CountRecord> expected_mcp(const MubFamily& fam, const NoiseModel& noise);

/// Sets mixed = sum c_{k,l} counts[k*d+l]. NegativeWeight if any c < -1e-10.
std::vector<CountRecord> retroactive_mix(std::vector<CountRecord> records, const SimplexCoeffs& c);

/// P = Gamma / sum Gamma as a d x d table (gamma row-major). EmptyCounts if
/// the sum is not positive, OutOfRange on negative entries.
ProbabilityTable probabilities_from_counts(const std::vector<double>& gamma, int d);

/// Witness estimate from mixed MCP records.
CorrelationReport estimate_mcp(const std::vector<CountRecord>& mixed, int d, const LabelingChoice& labeling);

struct TomographySet {
    int d = 0;
    std::vector<Ket> kets;  // one side; pairs are the Cartesian square

    std::size_t pairs() const { return kets.size() * kets.size(); }
    /// kets[p / kets.size()] (x) kets[p % kets.size()]
    Ket pair(std::size_t p) const;
};

/// d basis kets followed by (|i> + e^{i phi}|j>)/sqrt 2 for i < j and
/// phi in {0, pi/2, pi, 3pi/2}.
TomographySet tomography_settings(int d);

std::vector<double> simulate_tomography(const ComplexMatrix& rho, const TomographySet& set, const NoiseModel& noise);
std::vector<double> expected_tomography(const ComplexMatrix& rho, const TomographySet& set, const NoiseModel& noise);

/// Linear least squares over Hermitian matrices, then eigenvalues clipped
/// at zero and the trace renormalized. SingularSystem when the settings do
/// not span the operator space.
ComplexMatrix reconstruct(const std::vector<double>& counts, const TomographySet& set);

struct MeasurementBudget {
    long long qst = 0;   // d^2 - 4d^3 + 4d^4
    long long mcp1 = 0;  // d + d^2
    long long mcp2 = 0;  // d^2 + d^3
};

MeasurementBudget measurement_budget(int d);

/// OAM l in {-1, 0, +1} to index l + 1.
int oam_relabel(int l);

/// sum_l |l, -l> / sqrt 3 in index labels.
Ket spdc_state();

/// Applies i -> (d-1-i) to Bob's index of a two-qudit ket.
Ket relabel_bob_anticorrelated(const Ket& psi, int d);

}  // namespace boundsim
