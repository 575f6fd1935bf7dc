// witness.hpp: the maximum complementarity protocol.
//
// For each basis pair k Alice measures in basis A_k and Bob in the
// componentwise conjugate basis A_k^*. The correlation
//   C_k = sum_i P(i, sigma_k(i))
// sums matched-outcome joint probabilities after Bob relabels outcome i as
// sigma_k(i). Separable states satisfy I_m = sum_k C_k <= 1 + (m-1)/d; with
// a complete family (m = d+1) the bound is 2 and 2 - I_{d+1} < 0 certifies
// entanglement.

#pragma once

#include "boundsim/mubs.hpp"
#include "boundsim/numkernel.hpp"
#include "boundsim/simplex.hpp"

#include <optional>
#include <string>
#include <vector>

namespace boundsim {

/// sigma[i] is the Bob outcome matched with Alice outcome i.
using Permutation = std::vector<int>;

/// Joint outcome probabilities P(i, j) for one basis pair.
using ProbabilityTable = Eigen::MatrixXd;

struct Labeling {
    std::vector<Permutation> sigma;  // one per basis
    bool conjugate_bob = true;
};

enum class LabelingMode { MethodsD3, Fixed, Maximize };

struct LabelingChoice {
    LabelingMode mode = LabelingMode::Maximize;
    Labeling fixed;  // used when mode == Fixed

    static LabelingChoice methods() { return {LabelingMode::MethodsD3, {}}; }
    static LabelingChoice maximize() { return {LabelingMode::Maximize, {}}; }
    static LabelingChoice from(Labeling l) { return {LabelingMode::Fixed, std::move(l)}; }
};

std::string to_string(LabelingMode mode);

struct CorrelationReport {
    int d = 0;
    int m = 0;
    std::vector<double> correlations;  // C_{A_k,B_k}
    double sum = 0.0;                  // I_m
    double bound = 0.0;                // 1 + (m-1)/d
    std::optional<double> witness;     // 2 - I_{d+1}, complete families only
    Labeling labeling;                 // sigma actually used per basis
    LabelingMode mode = LabelingMode::Maximize;

    bool violates_bound() const { return sum > bound; }
};

struct Relabeling {
    Permutation sigma;
    double value = 0.0;
};

/// <a,b| rho |a,b>, clamped to [0, 1].
double joint_prob(const ComplexMatrix& rho, const Ket& ket_a, const Ket& ket_b);

/// P(i, j) = joint_prob(rho, A_i, B_j).
ProbabilityTable joint_table(const ComplexMatrix& rho, const Basis& basis_a, const Basis& basis_b);

double correlation(const ProbabilityTable& table, const Permutation& sigma);
double correlation(const ComplexMatrix& rho, const Basis& basis_a, const Basis& basis_b,
                   const Permutation& sigma);

/// Maximizes sum_i P(i, sigma(i)). Exhaustive over all permutations for
/// d <= 6, Hungarian assignment above. Ties resolve to the
/// lexicographically smallest sigma (values within 1e-12 count as equal).
Relabeling best_relabeling(const ProbabilityTable& table);
Relabeling best_relabeling(const ComplexMatrix& rho, const Basis& basis_a, const Basis& basis_b);

/// Fixed qutrit relabeling: sigma_1(i) = i+1 mod 3 in the
/// computational basis, identity in the other three.
Labeling methods_labeling_d3();

double separable_bound(int m, int d);

/// Full protocol on an arbitrary d^2-dimensional state.
CorrelationReport mcp(const ComplexMatrix& rho, const MubFamily& fam, const LabelingChoice& labeling);

/// Protocol on precomputed joint tables (one per basis, in family order).
CorrelationReport mcp_from_tables(int d, const std::vector<ProbabilityTable>& tables,
                                  const LabelingChoice& labeling);

/// Joint tables of every Bell projector in every basis pair of a family,
/// used to evaluate magic-simplex states without building rho:
/// P_rho(i,j) = sum_{k,l} c_{k,l} P_{k,l}(i,j).
class BellResponse {
public:
    explicit BellResponse(const MubFamily& fam, bool conjugate_bob = true);

    int d() const { return d_; }
    int bases() const { return static_cast<int>(tables_.size()); }
    bool conjugate_bob() const { return conjugate_bob_; }

    std::vector<ProbabilityTable> tables(const SimplexCoeffs& coeffs) const;
    /// Table of P_{k,l} in basis pair m.
    const ProbabilityTable& table(int m, int k, int l) const;

private:
    int d_ = 0;
    bool conjugate_bob_ = true;
    std::vector<std::vector<ProbabilityTable>> tables_;  // [m][k*d+l]
};

CorrelationReport mcp_simplex(const SimplexCoeffs& coeffs, const BellResponse& response,
                              const LabelingChoice& labeling);

}  // namespace boundsim
