// simplex.hpp: Weyl operators, Bell projectors and magic-simplex states.
//
// Conventions
//   W_{k,l} = Z^k X^l = sum_n omega^{k n} |n><n-l|,  omega = e^{2 pi i / d},
//   indices mod d. X shifts |n> to |n+1>.
//   P_{0,0} projects onto |Omega> = sum_i |ii> / sqrt(d) and
//   P_{k,l} = (W_{k,l} (x) 1) P_{0,0} (W_{k,l} (x) 1)^dagger, so the Bell
//   vector of (k,l) is sum_j omega^{k j} |j, j-l> / sqrt(d).

#pragma once

#include "boundsim/numkernel.hpp"

#include <optional>
#include <vector>

namespace boundsim {

inline constexpr int kMaxQuditDim = 16;

struct WeylIndex {
    int k = 0;
    int l = 0;
};

/// The d x d table c_{k,l} of Bell-state weights, row-major in (k, l).
struct SimplexCoeffs {
    int d = 0;
    std::vector<double> c;

    static SimplexCoeffs uniform(int d);
    static SimplexCoeffs vertex(int d, int k, int l);

    double at(int k, int l) const { return c[static_cast<std::size_t>(k * d + l)]; }
    double& at(int k, int l) { return c[static_cast<std::size_t>(k * d + l)]; }
    double sum() const;
    double min() const;
    /// Physical (a density matrix) iff min c >= -tol.
    bool physical(double tol = kPsdTol) const { return min() >= -tol; }
};

/// Parameters of the three/four-parameter family. q4 only exists for d > 3.
struct FamilyParams {
    int d = 3;
    double q1 = 0.0;
    double q2 = 0.0;
    double q3 = 0.0;
    std::optional<double> q4;

    double q4_or_zero() const { return q4.value_or(0.0); }
};

ComplexMatrix weyl(int d, int k, int l);
Ket bell_vector(int d, int k, int l);
ComplexMatrix bell_state(int d, int k, int l);

/// rho = sum c_{k,l} P_{k,l}. Throws BadNormalization if |sum c - 1| > 1e-12.
ComplexMatrix state_from_coeffs(const SimplexCoeffs& coeffs);

/// Spreads the identity weight 1 - q1/(d^2-d-1) - q2/(d+1) - q3 - (d-3) q4
/// uniformly, then adds q1/(d^2-d-1) to c_{0,0}, q2/((d+1)(d-1)) to each
/// c_{i,0} (i >= 1), q3/d to each c_{i,1} and q4/d to each c_{i,z} for
/// z = 2..d-2. Supports 3 <= d <= 16.
SimplexCoeffs coeffs_from_family(const FamilyParams& params);

/// Horodecki one-parameter state, lambda in [0, 5].
FamilyParams horodecki_params(double lambda);

/// Smallest eigenvalue of the partial transpose on Alice of a d x d state.
double ppt_min_eig(const ComplexMatrix& rho, int d);

/// One of the 72 relabelings of the qutrit phase space that keep the
/// family's line structure: (k, l) -> anchor + k * direction + l * side * transversal.
struct SimplexVariant {
    WeylIndex direction;    // direction of the q1/q2 line
    WeylIndex anchor;       // point carrying the q1 weight
    int side = 1;           // +1 or -1: which parallel line carries q3
    SimplexCoeffs coeffs;
};

/// All 72 unitary-equivalent coefficient tables of a d = 3 family member.
/// Element 0 is the identity relabeling.
std::vector<SimplexVariant> equivalent_variants(const FamilyParams& params);

}  // namespace boundsim
