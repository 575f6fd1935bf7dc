#include "boundsim/errors.hpp"
#include "boundsim/io.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>

using namespace boundsim;
namespace io = boundsim::io;

TEST_CASE("number formatting") {
    CHECK(io::fmt(0.0) == "0");
    CHECK(io::fmt(-0.5) == "-0.5");
    CHECK(io::fmt(1.0 / 3.0) == "0.333333333333");
    CHECK(io::fmt(1e-20) == "1e-20");
    CHECK(io::fmt(1500.0) == "1500");
}

TEST_CASE("matrix JSON round trip") {
    std::mt19937_64 rng(3);
    const ComplexMatrix m = oracle::random_hermitian(5, rng);
    const io::json j = io::to_json(m);
    CHECK(j.at("dim") == 5);
    const ComplexMatrix back = io::matrix_from_json(io::json::parse(j.dump()));
    CHECK((back - m).norm() == 0.0);
    CHECK_THROWS_AS(io::matrix_from_json(io::json{{"dim", 2}, {"re", {{1, 0}}}, {"im", {{0, 0}}}}), InvalidConfig);
    CHECK_THROWS_AS(io::matrix_from_json(io::json{{"dim", 1}}), InvalidConfig);
    CHECK_THROWS_AS(io::matrix_from_json(io::json{{"dim", 1}, {"re", {{"x"}}}, {"im", {{0}}}}), InvalidConfig);
}

TEST_CASE("coefficient CSV round trip") {
    std::mt19937_64 rng(4);
    for (int d : {3, 4, 5}) {
        const SimplexCoeffs c{d, oracle::random_simplex_point(d * d, rng)};
        const std::string text = io::coeffs_csv(c);
        CHECK(text.rfind("k,l,c\n", 0) == 0);
        const SimplexCoeffs back = io::parse_coeffs_csv(text);
        REQUIRE(back.d == d);
        for (std::size_t i = 0; i < c.c.size(); ++i) CHECK(std::abs(back.c[i] - c.c[i]) <= 1e-12);
    }
}

TEST_CASE("coefficient CSV errors") {
    CHECK_THROWS_AS(io::parse_coeffs_csv("k,l,c\n0,0,1\n0,0,0\n0,1,0\n1,1,0\n"), InvalidConfig);
    CHECK_THROWS_AS(io::parse_coeffs_csv("0,0,1\n0,1,0\n1,0,0\n"), InvalidConfig);
    CHECK_THROWS_AS(io::parse_coeffs_csv("0,0,1\n0,1,0\n1,0,0\n1,5,0\n"), InvalidConfig);
    CHECK_THROWS_AS(io::parse_coeffs_csv("0,0,x\n0,1,0\n1,0,0\n1,1,0\n"), InvalidConfig);
    CHECK_THROWS_AS(io::parse_coeffs_csv("0,0\n"), InvalidConfig);
    // comments and blank lines are ignored
    const SimplexCoeffs c = io::parse_coeffs_csv("# two qubits\nk,l,c\n\n0,0,0.25\n0,1,0.25\n1,0,0.25\n1,1,0.25\n");
    CHECK(c.d == 2);
    CHECK(c.at(1, 1) == 0.25);
}

TEST_CASE("family and report JSON") {
    const FamilyParams p{3, -0.07, -1.73, -0.5774, std::nullopt};
    const io::json jp = io::to_json(p);
    CHECK(jp.at("q2") == -1.73);
    CHECK_FALSE(jp.contains("q4"));
    const ComplexMatrix rho = state_from_coeffs(coeffs_from_family(p));
    const io::json jr = io::to_json(mcp(rho, mub_family(3), LabelingChoice::methods()));
    CHECK(jr.at("witness").get<double>() == doctest::Approx(-0.0791333).epsilon(1e-6));
    CHECK(jr.at("violates_bound") == true);
    CHECK(jr.at("correlations").size() == 4);
    const io::json j6 = io::to_json(mcp(state_from_coeffs(SimplexCoeffs::uniform(6)), mub_family(6), LabelingChoice::maximize()));
    CHECK(j6.at("witness").is_null());
}

TEST_CASE("labeling JSON round trip") {
    const Labeling l = methods_labeling_d3();
    const Labeling back = io::labeling_from_json(io::json::parse(io::to_json(l).dump()));
    CHECK(back.sigma == l.sigma);
    CHECK(back.conjugate_bob == l.conjugate_bob);
    CHECK_THROWS_AS(io::labeling_from_json(io::json{{"sigma", "abc"}}), InvalidConfig);
}

TEST_CASE("MUB family JSON") {
    const io::json j = io::to_json(mub_family(3));
    CHECK(j.at("d") == 3);
    REQUIRE(j.at("bases").size() == 4);
    CHECK(j.at("bases")[1][0].size() == 3);
    CHECK(j.at("bases")[1][0][0][0].get<double>() == doctest::Approx(1.0 / std::sqrt(3.0)));
}

TEST_CASE("grid CSV and PGM") {
    SliceSpec s;
    s.res_q1 = 7;
    s.res_q2 = 5;
    const ClassifiedGrid g = scan_slice(s);
    const std::string csv = io::grid_csv(g);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 35);
    CHECK(csv.rfind("q1,q2,class,witness,min_pt_eig,", 0) == 0);
    const std::string img = io::pgm(g);
    const std::string header = "P5\n7 5\n255\n";
    REQUIRE(img.rfind(header, 0) == 0);
    CHECK(img.size() == header.size() + 35);
    // first pixel row is the top of the window, q2 maximal
    const auto px = static_cast<unsigned char>(img[header.size()]);
    const CellClass top_left = g.at(0, 4).cls;
    CHECK(px == (top_left == CellClass::Unphysical ? 0 : top_left == CellClass::FreeEntangled ? 85 : top_left == CellClass::SeparableOrUndetected ? 170 : 255));
}

TEST_CASE("tomography counts CSV round trip") {
    const TomographySet set = tomography_settings(2);
    std::vector<double> counts(set.pairs());
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] = static_cast<double>(i * 7 % 13);
    CHECK(io::parse_tomography_counts_csv(io::tomography_counts_csv(counts, set)) == counts);
    CHECK_THROWS_AS(io::parse_tomography_counts_csv("setting,a,b,count\n1,0,1,5\n"), InvalidConfig);
    CHECK_THROWS_AS(io::parse_tomography_counts_csv("0,0,0\n"), InvalidConfig);
}

TEST_CASE("MCP counts CSV layout") {
    const auto recs = retroactive_mix(expected_mcp(mub_family(3), NoiseModel{}), SimplexCoeffs::uniform(3));
    const std::string csv = io::mcp_counts_csv(recs, 3);
    CHECK(csv.rfind("setting,basis,i,j,count_0_0,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 37);
    CHECK(csv.find("\n35,3,2,2,") != std::string::npos);
}

TEST_CASE("file helpers") {
    const auto path = (std::filesystem::temp_directory_path() / "boundsim_io_test.txt").string();
    io::write_file(path, "abc\n");
    CHECK(io::read_file(path) == "abc\n");
    std::remove(path.c_str());
    CHECK_THROWS_AS(io::read_file("/nonexistent/dir/file"), InvalidConfig);
    CHECK_THROWS_AS(io::write_file("/nonexistent/dir/file", "x"), InvalidConfig);
}
