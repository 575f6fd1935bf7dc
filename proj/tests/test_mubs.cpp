#include "boundsim/errors.hpp"
#include "boundsim/mubs.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace boundsim;

namespace {

// The four qutrit bases written out by hand, w = exp(2 pi i / 3); entries
// are exponents of w, -1 marks a zero entry.
const int kQutrit[4][3][3] = {
    {{0, -1, -1}, {-1, 0, -1}, {-1, -1, 0}},
    {{0, 0, 0}, {0, 1, 2}, {0, 2, 1}},
    {{0, 1, 1}, {0, 2, 0}, {0, 0, 2}},
    {{0, 2, 2}, {0, 0, 1}, {0, 1, 0}},
};

Ket hand_vector(int b, int s) {
    Ket v = Ket::Zero(3);
    int nonzero = 0;
    for (int x = 0; x < 3; ++x) {
        const int e = kQutrit[b][s][x];
        if (e < 0) continue;
        v(x) = std::polar(1.0, 2.0 * std::numbers::pi * e / 3.0);
        ++nonzero;
    }
    return v / std::sqrt(static_cast<double>(nonzero));
}

}  // namespace

TEST_CASE("complete families are orthonormal and mutually unbiased") {
    for (int d : {2, 3, 4, 5, 7, 8, 9}) {
        CAPTURE(d);
        const MubFamily fam = mub_family(d);
        CHECK(fam.d == d);
        CHECK(fam.size() == d + 1);
        for (const Basis& b : fam.bases) CHECK(static_cast<int>(b.size()) == d);
        const MubReport rep = verify_mub(fam);
        CHECK(rep.max_overlap_deviation <= 1e-10);
        CHECK(rep.max_orthonormality_deviation <= 1e-10);
    }
}

TEST_CASE("first basis is computational") {
    for (int d : {2, 4, 6, 9}) {
        const MubFamily fam = mub_family(d);
        for (int i = 0; i < d; ++i) CHECK((fam.bases[0][static_cast<std::size_t>(i)] - Ket::Unit(d, i)).norm() < 1e-15);
    }
}

TEST_CASE("qutrit family equals the hand-written bases vector by vector") {
    const MubFamily fam = mub_family(3);
    for (int b = 0; b < 4; ++b)
        for (int s = 0; s < 3; ++s) {
            CAPTURE(b);
            CAPTURE(s);
            const Ket& v = fam.bases[static_cast<std::size_t>(b)][static_cast<std::size_t>(s)];
            CHECK(std::abs(v.dot(hand_vector(b, s))) == doctest::Approx(1.0).epsilon(1e-12));
            CHECK((v - hand_vector(b, s)).norm() < 1e-12);
        }
}

TEST_CASE("dimension six gives three verified product bases") {
    const MubFamily fam = mub_family(6);
    CHECK(fam.size() == 3);
    const MubReport rep = verify_mub(fam);
    CHECK(rep.max_overlap_deviation <= 1e-10);
    CHECK(rep.max_orthonormality_deviation <= 1e-10);
}

TEST_CASE("unsupported dimensions") {
    for (int d : {0, 1, 10, 12, 16}) CHECK_THROWS_AS(mub_family(d), UnsupportedDimension);
}

TEST_CASE("conjugate basis and basis matrix") {
    const MubFamily fam = mub_family(5);
    for (const Basis& b : fam.bases) {
        const ComplexMatrix u = basis_matrix(b);
        CHECK((u.adjoint() * u - ComplexMatrix::Identity(5, 5)).norm() < 1e-12);
        const ComplexMatrix uc = basis_matrix(conjugate_basis(b));
        CHECK((uc - u.conjugate()).norm() == 0.0);
    }
}
