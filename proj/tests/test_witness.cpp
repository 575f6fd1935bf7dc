#include "boundsim/errors.hpp"
#include "boundsim/witness.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <numeric>

using namespace boundsim;

namespace {

const FamilyParams kFeatured{3, -0.07, -1.73, -0.5774, std::nullopt};

double brute_force_best(const ProbabilityTable& t) {
    Permutation s(static_cast<std::size_t>(t.rows()));
    std::iota(s.begin(), s.end(), 0);
    double best = -1.0;
    do best = std::max(best, correlation(t, s));
    while (std::next_permutation(s.begin(), s.end()));
    return best;
}

ProbabilityTable random_table(int d, std::mt19937_64& rng) {
    const auto p = oracle::random_simplex_point(d * d, rng);
    ProbabilityTable t(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) t(i, j) = p[static_cast<std::size_t>(i * d + j)];
    return t;
}

}  // namespace

TEST_CASE("featured state correlations with the fixed qutrit labeling") {
    const ComplexMatrix rho = state_from_coeffs(coeffs_from_family(kFeatured));
    const CorrelationReport rep = mcp(rho, mub_family(3), LabelingChoice::methods());
    REQUIRE(rep.correlations.size() == 4);
    CHECK(std::abs(rep.correlations[0] - 0.675) <= 0.001);
    for (int k = 1; k < 4; ++k) CHECK(std::abs(rep.correlations[static_cast<std::size_t>(k)] - 0.468) <= 0.001);
    REQUIRE(rep.witness);
    CHECK(std::abs(*rep.witness + 0.079) <= 0.001);
    CHECK(rep.violates_bound());
    CHECK(rep.bound == doctest::Approx(2.0));
    // exact values of the Bell-diagonal arithmetic
    CHECK(rep.correlations[0] == doctest::Approx(0.6746333333333333).epsilon(1e-12));
    CHECK(rep.correlations[1] == doctest::Approx(0.4681666666666667).epsilon(1e-12));
}

TEST_CASE("fixed qutrit labeling") {
    const Labeling l = methods_labeling_d3();
    REQUIRE(l.sigma.size() == 4);
    CHECK(l.sigma[0] == Permutation{1, 2, 0});
    for (int k = 1; k < 4; ++k) CHECK(l.sigma[static_cast<std::size_t>(k)] == Permutation{0, 1, 2});
    CHECK(l.conjugate_bob);
    const ComplexMatrix rho = state_from_coeffs(SimplexCoeffs::uniform(4));
    CHECK_THROWS_AS(mcp(rho, mub_family(4), LabelingChoice::methods()), UnsupportedLabeling);
}

TEST_CASE("maximally entangled and maximally mixed states") {
    for (int d : {2, 3, 4, 5, 7}) {
        const MubFamily fam = mub_family(d);
        const CorrelationReport ent = mcp(bell_state(d, 0, 0), fam, LabelingChoice::maximize());
        for (double c : ent.correlations) CHECK(c == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(*ent.witness == doctest::Approx(2.0 - (d + 1)).epsilon(1e-12));
        const CorrelationReport mix = mcp(state_from_coeffs(SimplexCoeffs::uniform(d)), fam, LabelingChoice::maximize());
        for (double c : mix.correlations) CHECK(c == doctest::Approx(1.0 / d).epsilon(1e-12));
    }
}

TEST_CASE("product basis states: one perfect correlation, the rest 1/d") {
    for (int d : {2, 3, 4, 5, 7, 8, 9}) {
        const MubFamily fam = mub_family(d);
        for (int m = 0; m < fam.size(); ++m) {
            const Ket& v = fam.bases[static_cast<std::size_t>(m)][0];
            const ComplexMatrix rho = projector(kron(v, Ket(v.conjugate())));
            const CorrelationReport rep = mcp(rho, fam, LabelingChoice::maximize());
            for (int k = 0; k < fam.size(); ++k) {
                const double want = k == m ? 1.0 : 1.0 / d;
                CHECK(std::abs(rep.correlations[static_cast<std::size_t>(k)] - want) < 1e-12);
            }
            CHECK(std::abs(rep.sum - separable_bound(d + 1, d)) < 1e-12);
        }
        // joint probabilities of |0 0> in a second basis are all 1/d^2
        const ComplexMatrix rho = projector(kron(Ket(Ket::Unit(d, 0)), Ket(Ket::Unit(d, 0))));
        const ProbabilityTable t = joint_table(rho, fam.bases[1], conjugate_basis(fam.bases[1]));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) CHECK(std::abs(t(i, j) - 1.0 / (d * d)) < 1e-12);
    }
}

TEST_CASE("property: separable states never exceed the bound") {
    const MubFamily fam = mub_family(3);
    std::mt19937_64 rng(314159);
    double worst = -1e9;
    for (int rep = 0; rep < 10000; ++rep) {
        const ComplexMatrix rho = oracle::random_separable(3, rng);
        const CorrelationReport r = mcp(rho, fam, LabelingChoice::maximize());
        worst = std::max(worst, r.sum - 2.0);
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("separable bound") {
    CHECK(separable_bound(4, 3) == doctest::Approx(2.0));
    CHECK(separable_bound(2, 3) == doctest::Approx(4.0 / 3.0));
    CHECK(separable_bound(1, 5) == doctest::Approx(1.0));
    CHECK_THROWS_AS(separable_bound(0, 3), OutOfRange);
}

TEST_CASE("best relabeling matches brute force") {
    std::mt19937_64 rng(17);
    for (int d : {2, 3, 4, 5, 6, 7, 8}) {
        for (int rep = 0; rep < 20; ++rep) {
            const ProbabilityTable t = random_table(d, rng);
            const Relabeling r = best_relabeling(t);
            CHECK(r.value == doctest::Approx(brute_force_best(t)).epsilon(1e-12));
            CHECK(correlation(t, r.sigma) == doctest::Approx(r.value).epsilon(1e-14));
        }
    }
}

TEST_CASE("relabeling ties resolve to the lexicographically smallest permutation") {
    for (int d : {3, 5, 7, 9}) {
        const ProbabilityTable flat = ProbabilityTable::Constant(d, d, 1.0 / (d * d));
        Permutation id(static_cast<std::size_t>(d));
        std::iota(id.begin(), id.end(), 0);
        CHECK(best_relabeling(flat).sigma == id);
        ProbabilityTable shifted = ProbabilityTable::Zero(d, d);
        for (int i = 0; i < d; ++i) shifted(i, (i + 1) % d) = 1.0 / d;
        const Relabeling r = best_relabeling(shifted);
        for (int i = 0; i < d; ++i) CHECK(r.sigma[static_cast<std::size_t>(i)] == (i + 1) % d);
    }
}

TEST_CASE("joint tables and explicit permutations") {
    const ComplexMatrix rho = bell_state(3, 0, 0);
    const MubFamily fam = mub_family(3);
    const ProbabilityTable t = joint_table(rho, fam.bases[0], fam.bases[0]);
    CHECK(t.sum() == doctest::Approx(1.0));
    CHECK(t(1, 1) == doctest::Approx(1.0 / 3.0));
    CHECK(correlation(rho, fam.bases[0], fam.bases[0], {0, 1, 2}) == doctest::Approx(1.0));
    CHECK(correlation(rho, fam.bases[0], fam.bases[0], {1, 2, 0}) == doctest::Approx(0.0));
    CHECK_THROWS_AS(correlation(rho, fam.bases[0], fam.bases[0], {0, 0, 1}), UnsupportedLabeling);
    CHECK_THROWS_AS(joint_prob(rho, Ket::Unit(2, 0), Ket::Unit(3, 0)), DimensionMismatch);
}

TEST_CASE("response tables reproduce the full-state protocol") {
    std::mt19937_64 rng(8);
    for (int d : {3, 4, 5}) {
        const MubFamily fam = mub_family(d);
        const BellResponse response(fam);
        for (int rep = 0; rep < 5; ++rep) {
            const SimplexCoeffs c{d, oracle::random_simplex_point(d * d, rng)};
            const CorrelationReport a = mcp_simplex(c, response, LabelingChoice::maximize());
            const CorrelationReport b = mcp(state_from_coeffs(c), fam, LabelingChoice::maximize());
            CHECK(*a.witness == doctest::Approx(*b.witness).epsilon(1e-12));
            CHECK(a.labeling.sigma == b.labeling.sigma);
        }
    }
}

TEST_CASE("incomplete families report no witness") {
    const ComplexMatrix rho = state_from_coeffs(SimplexCoeffs::uniform(6));
    const CorrelationReport rep = mcp(rho, mub_family(6), LabelingChoice::maximize());
    CHECK(rep.m == 3);
    CHECK_FALSE(rep.witness.has_value());
    CHECK(rep.bound == doctest::Approx(1.0 + 2.0 / 6.0));
}

TEST_CASE("fixed labelings are validated") {
    const ComplexMatrix rho = state_from_coeffs(SimplexCoeffs::uniform(3));
    Labeling l = methods_labeling_d3();
    l.sigma.pop_back();
    CHECK_THROWS_AS(mcp(rho, mub_family(3), LabelingChoice::from(l)), UnsupportedLabeling);
    const CorrelationReport ok = mcp(rho, mub_family(3), LabelingChoice::from(methods_labeling_d3()));
    CHECK(*ok.witness == doctest::Approx(2.0 - 4.0 / 3.0));
}
