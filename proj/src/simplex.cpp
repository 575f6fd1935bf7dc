#include "boundsim/simplex.hpp"

#include "boundsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace boundsim {

namespace {

void check_dim(int d) {
    if (d < 2 || d > kMaxQuditDim)
        throw UnsupportedDimension("qudit dimension " + std::to_string(d) + " outside [2, 16]");
}

void check_index(int d, int k, int l) {
    check_dim(d);
    if (k < 0 || k >= d || l < 0 || l >= d)
        throw IndexOutOfRange("Weyl index (" + std::to_string(k) + "," + std::to_string(l) +
                              ") outside [0," + std::to_string(d) + ")");
}

int mod(int a, int d) { return ((a % d) + d) % d; }

}  // namespace

SimplexCoeffs SimplexCoeffs::uniform(int d) {
    check_dim(d);
    return SimplexCoeffs{d, std::vector<double>(static_cast<std::size_t>(d * d), 1.0 / (d * d))};
}

SimplexCoeffs SimplexCoeffs::vertex(int d, int k, int l) {
    check_index(d, k, l);
    SimplexCoeffs s{d, std::vector<double>(static_cast<std::size_t>(d * d), 0.0)};
    s.at(k, l) = 1.0;
    return s;
}

double SimplexCoeffs::sum() const { return std::accumulate(c.begin(), c.end(), 0.0); }

double SimplexCoeffs::min() const { return *std::min_element(c.begin(), c.end()); }

ComplexMatrix weyl(int d, int k, int l) {
    check_index(d, k, l);
    ComplexMatrix w = ComplexMatrix::Zero(d, d);
    for (int n = 0; n < d; ++n) {
        const int row = mod(n + l, d);
        w(row, n) = std::polar(1.0, 2.0 * std::numbers::pi * mod(k * row, d) / d);
    }
    return w;
}

Ket bell_vector(int d, int k, int l) {
    const ComplexMatrix w = weyl(d, k, l);
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    Ket psi = Ket::Zero(d * d);
    for (int i = 0; i < d; ++i) psi += norm * kron(Ket(w.col(i)), Ket(Ket::Unit(d, i)));
    return psi;
}

ComplexMatrix bell_state(int d, int k, int l) { return projector(bell_vector(d, k, l)); }

ComplexMatrix state_from_coeffs(const SimplexCoeffs& coeffs) {
    check_dim(coeffs.d);
    if (coeffs.c.size() != static_cast<std::size_t>(coeffs.d * coeffs.d))
        throw DimensionMismatch("coefficient table must have d^2 entries");
    const double total = coeffs.sum();
    if (!(std::abs(total - 1.0) <= 1e-12))
        throw BadNormalization("coefficients sum to " + std::to_string(total));
    const int d = coeffs.d;
    ComplexMatrix rho = ComplexMatrix::Zero(d * d, d * d);
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
            const double w = coeffs.at(k, l);
            if (w == 0.0) continue;
            const Ket psi = bell_vector(d, k, l);
            rho.noalias() += w * (psi * psi.adjoint());
        }
    return rho;
}

SimplexCoeffs coeffs_from_family(const FamilyParams& p) {
    const int d = p.d;
    if (d < 3 || d > kMaxQuditDim)
        throw UnsupportedDimension("state family needs 3 <= d <= 16, got " + std::to_string(d));
    if (d == 3 && p.q4 && *p.q4 != 0.0) throw InvalidConfig("q4 only exists for d > 3");

    const double dd = d;
    const double w1 = p.q1 / (dd * dd - (dd + 1.0));
    const double w2 = p.q2 / ((dd + 1.0) * (dd - 1.0));
    const double w3 = p.q3 / dd;
    const double w4 = p.q4_or_zero() / dd;
    const double identity = 1.0 - w1 - p.q2 / (dd + 1.0) - p.q3 - (dd - 3.0) * p.q4_or_zero();

    SimplexCoeffs s{d, std::vector<double>(static_cast<std::size_t>(d * d), identity / (dd * dd))};
    s.at(0, 0) += w1;
    for (int i = 1; i < d; ++i) s.at(i, 0) += w2;
    for (int i = 0; i < d; ++i) s.at(i, 1) += w3;
    for (int z = 2; z <= d - 2; ++z)
        for (int i = 0; i < d; ++i) s.at(i, z) += w4;
    return s;
}

FamilyParams horodecki_params(double lambda) {
    if (!(lambda >= 0.0 && lambda <= 5.0))
        throw OutOfRange("Horodecki lambda must lie in [0, 5], got " + std::to_string(lambda));
    return FamilyParams{3, (30.0 - 5.0 * lambda) / 21.0, -8.0 * lambda / 21.0, (5.0 - 2.0 * lambda) / 7.0,
                        std::nullopt};
}

double ppt_min_eig(const ComplexMatrix& rho, int d) {
    if (rho.rows() != Eigen::Index{d} * d)
        throw DimensionMismatch("state is not " + std::to_string(d * d) + "-dimensional");
    return herm_eigvals(partial_transpose(rho, d, d, Subsystem::A)).min();
}

std::vector<SimplexVariant> equivalent_variants(const FamilyParams& params) {
    if (params.d != 3) throw UnsupportedDimension("equivalent variants are enumerated for d = 3 only");
    const SimplexCoeffs base = coeffs_from_family(params);
    constexpr int d = 3;

    // One direction per line class through the origin, with a transversal
    // that completes it to a basis of Z_3^2.
    const WeylIndex directions[] = {{1, 0}, {0, 1}, {1, 1}, {1, 2}};

    std::vector<SimplexVariant> out;
    out.reserve(72);
    for (const WeylIndex dir : directions) {
        const WeylIndex perp = (dir.k == 0) ? WeylIndex{1, 0} : WeylIndex{0, 1};
        for (int offset = 0; offset < d; ++offset)
            for (int t = 0; t < d; ++t)
                for (int side : {1, -1}) {
                    const WeylIndex anchor{mod(offset * perp.k + t * dir.k, d), mod(offset * perp.l + t * dir.l, d)};
                    SimplexVariant v{dir, anchor, side, SimplexCoeffs{d, std::vector<double>(9, 0.0)}};
                    for (int k = 0; k < d; ++k)
                        for (int l = 0; l < d; ++l) {
                            const int nk = mod(anchor.k + k * dir.k + l * side * perp.k, d);
                            const int nl = mod(anchor.l + k * dir.l + l * side * perp.l, d);
                            v.coeffs.at(nk, nl) = base.at(k, l);
                        }
                    out.push_back(std::move(v));
                }
    }
    return out;
}

}  // namespace boundsim
