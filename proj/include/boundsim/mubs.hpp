// mubs.hpp: complete sets of mutually unbiased bases.
//
// Basis 0 is always the computational basis. For d = p^n the remaining d
// bases are labelled by field elements r = 0..d-1 (in the integer encoding
// of galois.hpp) and their vectors by s = 0..d-1:
//
//   odd p:   v_{r,s}(x) = omega_p^{tr(r x^2 + s x)} / sqrt(d)
//   p = 2:   v_{r,s}(x) = i^{x^T B_r x mod 4} (-1)^{s.x} / sqrt(d),
//            B_r[i][j] = tr(r X^i X^j), x and s as bit vectors
//
// For d = 3 this reproduces the four textbook qutrit bases
// {e_j}, {(1,w^s,w^2s)}, {(1,w^{1+s},w^{1+2s})}, {(1,w^{2+s},w^{2+2s})} exactly
// (not just up to phase).

#pragma once

#include "boundsim/numkernel.hpp"

#include <vector>

namespace boundsim {

using Basis = std::vector<Ket>;

struct MubFamily {
    int d = 0;
    std::vector<Basis> bases;

    int size() const { return static_cast<int>(bases.size()); }
};

struct MubReport {
    double max_overlap_deviation = 0.0;        // max ||<a|b>|^2 - 1/d| over distinct bases
    double max_orthonormality_deviation = 0.0;  // max |<a_i|a_j> - delta_ij| within a basis
};

/// d in {2,3,4,5,7,8,9}: d+1 bases. d = 6: three bases, the tensor
/// products of the first three d=2 and d=3 bases. Other d throw
/// UnsupportedDimension.
MubFamily mub_family(int d);

MubReport verify_mub(const MubFamily& fam);

/// Componentwise complex conjugate of every vector.
Basis conjugate_basis(const Basis& basis);

/// Columns are the basis vectors.
ComplexMatrix basis_matrix(const Basis& basis);

}  // namespace boundsim
