#include "boundsim/numkernel.hpp"

#include "boundsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace boundsim {

double Spectrum::sum() const {
    return std::accumulate(values.begin(), values.end(), 0.0);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const Eigen::Index ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
    ComplexMatrix out(ar * br, ac * bc);
    for (Eigen::Index i = 0; i < ar; ++i)
        for (Eigen::Index j = 0; j < ac; ++j)
            out.block(i * br, j * bc, br, bc) = a(i, j) * b;
    return out;
}

Ket kron(const Ket& a, const Ket& b) {
    Ket out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

ComplexMatrix projector(const Ket& psi) { return psi * psi.adjoint(); }

double hermiticity_error(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

namespace {

// One two-sided Jacobi rotation that annihilates a(p,q). The complex
// off-diagonal entry is first made real by a diagonal phase on column q,
// after which the classic real symmetric rotation applies.
void rotate(ComplexMatrix& a, ComplexMatrix& v, Eigen::Index p, Eigen::Index q) {
    const Complex apq = a(p, q);
    const double r = std::abs(apq);
    const Complex e = apq / r;

    a.col(q) *= std::conj(e);
    a.row(q) *= e;
    v.col(q) *= std::conj(e);

    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double theta = (aqq - app) / (2.0 * r);
    double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    if (theta < 0.0) t = -t;
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;

    const Eigen::VectorXcd colp = a.col(p);
    a.col(p) = c * colp - s * a.col(q);
    a.col(q) = s * colp + c * a.col(q);
    const Eigen::RowVectorXcd rowp = a.row(p);
    a.row(p) = c * rowp - s * a.row(q);
    a.row(q) = s * rowp + c * a.row(q);

    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = app - t * r;
    a(q, q) = aqq + t * r;

    const Eigen::VectorXcd vp = v.col(p);
    v.col(p) = c * vp - s * v.col(q);
    v.col(q) = s * vp + c * v.col(q);
}

double off_diagonal_norm2(const ComplexMatrix& a) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            if (i != j) s += std::norm(a(i, j));
    return s;
}

}  // namespace

HermitianEigen herm_eig(const ComplexMatrix& m, double tol) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw DimensionMismatch("herm_eig needs a non-empty square matrix");
    const double herr = hermiticity_error(m);
    if (!(herr <= tol))
        throw NotHermitian("max |m - m^dagger| = " + std::to_string(herr));

    const Eigen::Index n = m.rows();
    ComplexMatrix a = 0.5 * (m + m.adjoint());
    ComplexMatrix v = ComplexMatrix::Identity(n, n);

    const double scale = std::max(a.squaredNorm(), std::numeric_limits<double>::min());
    constexpr double kEps = 1e-32;  // relative squared off-diagonal mass
    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (off_diagonal_norm2(a) <= kEps * scale) break;
        for (Eigen::Index p = 0; p < n - 1; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q)
                if (std::abs(a(p, q)) > 1e-300) rotate(a, v, p, q);
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
        return a(x, x).real() < a(y, y).real();
    });

    HermitianEigen out;
    out.values.reserve(static_cast<std::size_t>(n));
    out.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index src = order[static_cast<std::size_t>(k)];
        out.values.push_back(a(src, src).real());
        out.vectors.col(k) = v.col(src);
    }
    return out;
}

Spectrum herm_eigvals(const ComplexMatrix& m, double tol) {
    return Spectrum{herm_eig(m, tol).values};
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, int dA, int dB, Subsystem side) {
    if (dA < 1 || dB < 1 || m.rows() != m.cols() || m.rows() != Eigen::Index{dA} * dB)
        throw DimensionMismatch("partial_transpose: matrix is " + std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()) + ", expected " +
                                std::to_string(dA * dB) + " square");
    ComplexMatrix out(m.rows(), m.cols());
    for (int ia = 0; ia < dA; ++ia)
        for (int ib = 0; ib < dB; ++ib)
            for (int ja = 0; ja < dA; ++ja)
                for (int jb = 0; jb < dB; ++jb) {
                    const Complex x = m(ia * dB + ib, ja * dB + jb);
                    if (side == Subsystem::A)
                        out(ja * dB + ib, ia * dB + jb) = x;
                    else
                        out(ia * dB + jb, ja * dB + ib) = x;
                }
    return out;
}

bool is_state(const ComplexMatrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0) return false;
    if (!m.allFinite()) return false;
    if (hermiticity_error(m) > kHermitianTol) return false;
    if (std::abs(m.trace() - Complex(1.0)) > kTraceTol) return false;
    return herm_eigvals(m).min() >= -kPsdTol;
}

void require_state(const ComplexMatrix& m, const char* who) {
    if (!is_state(m))
        throw NotAState(std::string(who) + ": input is not a density matrix");
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
    const HermitianEigen eig = herm_eig(m);
    const double cutoff = 1e-13 * std::max(1.0, std::abs(eig.values.back()));
    Eigen::VectorXd root(static_cast<Eigen::Index>(eig.values.size()));
    for (std::size_t i = 0; i < eig.values.size(); ++i)
        root(static_cast<Eigen::Index>(i)) = eig.values[i] > cutoff ? std::sqrt(eig.values[i]) : 0.0;
    return eig.vectors * root.asDiagonal() * eig.vectors.adjoint();
}

double fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
    require_state(rho, "fidelity(rho)");
    require_state(sigma, "fidelity(sigma)");
    if (rho.rows() != sigma.rows()) throw DimensionMismatch("fidelity: dimensions differ");

    const ComplexMatrix root = psd_sqrt(rho);
    ComplexMatrix inner = root * sigma * root;
    inner = 0.5 * (inner + inner.adjoint());
    const Spectrum s = herm_eigvals(inner);
    double trace_root = 0.0;
    for (double x : s.values)
        if (x > 1e-13) trace_root += std::sqrt(x);
    return std::clamp(trace_root * trace_root, 0.0, 1.0);
}

}  // namespace boundsim
