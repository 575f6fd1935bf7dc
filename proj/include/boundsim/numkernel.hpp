// numkernel.hpp: small dense complex linear algebra for two-qudit states.
//
// Matrices are at most 256x256 (two d=16 qudits), all dense.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <vector>

namespace boundsim {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using Ket = Eigen::VectorXcd;

/// Default tolerances.
inline constexpr double kHermitianTol = 1e-9;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kTraceTol = 1e-9;

/// Real eigenvalues in ascending order.
struct Spectrum {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double min() const { return values.front(); }
    double max() const { return values.back(); }
    double sum() const;
};

/// Eigenvalues (ascending) with the matching orthonormal eigenvectors as
/// columns of `vectors`.
struct HermitianEigen {
    std::vector<double> values;
    ComplexMatrix vectors;
};

enum class Subsystem { A, B };

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
Ket kron(const Ket& a, const Ket& b);

/// |psi><psi|
ComplexMatrix projector(const Ket& psi);

/// Largest entry of |m - m^dagger|.
double hermiticity_error(const ComplexMatrix& m);

/// Cyclic complex Jacobi eigensolver. Throws NotHermitian when
/// hermiticity_error(m) > tol.
HermitianEigen herm_eig(const ComplexMatrix& m, double tol = kHermitianTol);
Spectrum herm_eigvals(const ComplexMatrix& m, double tol = kHermitianTol);

/// Transpose of the chosen tensor factor of an operator on C^dA (x) C^dB.
/// Pure index permutation, so applying it twice is bit-exact identity.
ComplexMatrix partial_transpose(const ComplexMatrix& m, int dA, int dB, Subsystem side);

/// True when m is Hermitian within kHermitianTol, has trace 1 within
/// kTraceTol and no eigenvalue below -kPsdTol.
bool is_state(const ComplexMatrix& m);
/// Throws NotAState with `who` in the message unless is_state(m).
void require_state(const ComplexMatrix& m, const char* who);

/// Uhlmann fidelity in the squared convention,
///   F(rho, sigma) = ( Tr sqrt( sqrt(rho) sigma sqrt(rho) ) )^2,
/// so for a pure rho = |psi><psi| it reduces to <psi|sigma|psi>.
/// Both inputs must be valid density matrices (NotAState otherwise).
double fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma);

/// Hermitian square root of a positive semidefinite matrix; eigenvalues
/// below round-off are treated as zero.
ComplexMatrix psd_sqrt(const ComplexMatrix& m);

}  // namespace boundsim
