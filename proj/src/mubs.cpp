#include "boundsim/mubs.hpp"

#include "boundsim/errors.hpp"
#include "boundsim/galois.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

namespace boundsim {

namespace {

Basis computational(int d) {
    Basis b;
    for (int i = 0; i < d; ++i) b.push_back(Ket::Unit(d, i));
    return b;
}

Complex root_of_unity(int k, int m) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(((k % m) + m) % m) / m;
    return std::polar(1.0, angle);
}

Basis odd_basis(const GaloisField& f, int r) {
    const int d = f.order();
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    Basis b;
    for (int s = 0; s < d; ++s) {
        Ket v(d);
        for (int x = 0; x < d; ++x) {
            const int arg = f.add(f.mul(r, f.mul(x, x)), f.mul(s, x));
            v(x) = norm * root_of_unity(f.trace(arg), f.p());
        }
        b.push_back(v);
    }
    return b;
}

Basis even_basis(const GaloisField& f, int r) {
    const int d = f.order();
    const int n = f.n();
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));

    // Gram matrix of the trace form twisted by r in the polynomial basis.
    std::vector<int> gram(static_cast<std::size_t>(n * n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            gram[static_cast<std::size_t>(i * n + j)] = f.trace(f.mul(r, f.mul(1 << i, 1 << j)));

    Basis b;
    for (int s = 0; s < d; ++s) {
        Ket v(d);
        for (int x = 0; x < d; ++x) {
            int quad = 0;  // x^T B x over the integers
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    quad += ((x >> i) & 1) * gram[static_cast<std::size_t>(i * n + j)] * ((x >> j) & 1);
            const int parity = std::popcount(static_cast<unsigned>(s & x)) & 1;
            v(x) = norm * root_of_unity(quad + 2 * parity, 4);
        }
        b.push_back(v);
    }
    return b;
}

MubFamily prime_power_family(int d, int p, int n) {
    const GaloisField f = gf_make(p, n);
    MubFamily fam{d, {computational(d)}};
    for (int r = 0; r < d; ++r) fam.bases.push_back(p == 2 ? even_basis(f, r) : odd_basis(f, r));
    return fam;
}

MubFamily six_family() {
    const MubFamily two = prime_power_family(2, 2, 1);
    const MubFamily three = prime_power_family(3, 3, 1);
    MubFamily fam{6, {}};
    for (int k = 0; k < 3; ++k) {
        Basis b;
        for (const Ket& u : two.bases[static_cast<std::size_t>(k)])
            for (const Ket& w : three.bases[static_cast<std::size_t>(k)]) b.push_back(kron(u, w));
        fam.bases.push_back(std::move(b));
    }
    return fam;
}

}  // namespace

MubFamily mub_family(int d) {
    static constexpr int kComplete[] = {2, 3, 4, 5, 7, 8, 9};
    if (d == 6) return six_family();
    if (std::find(std::begin(kComplete), std::end(kComplete), d) == std::end(kComplete))
        throw UnsupportedDimension("no MUB family for d = " + std::to_string(d));
    int p = 0, n = 0;
    prime_power(d, p, n);
    return prime_power_family(d, p, n);
}

MubReport verify_mub(const MubFamily& fam) {
    MubReport rep;
    const double inv_d = 1.0 / static_cast<double>(fam.d);
    for (std::size_t a = 0; a < fam.bases.size(); ++a) {
        const Basis& ba = fam.bases[a];
        for (std::size_t i = 0; i < ba.size(); ++i)
            for (std::size_t j = 0; j < ba.size(); ++j) {
                const Complex ip = ba[i].dot(ba[j]);
                const double dev = std::abs(ip - Complex(i == j ? 1.0 : 0.0));
                rep.max_orthonormality_deviation = std::max(rep.max_orthonormality_deviation, dev);
            }
        for (std::size_t b = a + 1; b < fam.bases.size(); ++b)
            for (const Ket& u : ba)
                for (const Ket& w : fam.bases[b]) {
                    const double dev = std::abs(std::norm(u.dot(w)) - inv_d);
                    rep.max_overlap_deviation = std::max(rep.max_overlap_deviation, dev);
                }
    }
    return rep;
}

Basis conjugate_basis(const Basis& basis) {
    Basis out;
    out.reserve(basis.size());
    for (const Ket& v : basis) out.push_back(v.conjugate());
    return out;
}

ComplexMatrix basis_matrix(const Basis& basis) {
    const Eigen::Index d = basis.empty() ? 0 : basis.front().size();
    ComplexMatrix m(d, static_cast<Eigen::Index>(basis.size()));
    for (std::size_t k = 0; k < basis.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = basis[k];
    return m;
}

}  // namespace boundsim
