#include "boundsim/cli.hpp"
#include "boundsim/io.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

using namespace boundsim;
namespace io = boundsim::io;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "boundsim");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("boundsim_cli_" + name)).string();
}

}  // namespace

TEST_CASE("witness of the featured state") {
    const Result r = run({"witness", "--d", "3", "--q", "-0.07,-1.73,-0.5774", "--labeling", "methods"});
    REQUIRE(r.code == cli::kExitOk);
    const io::json j = io::json::parse(r.out);
    CHECK(std::abs(j.at("report").at("witness").get<double>() + 0.079) <= 0.001);
    CHECK(j.at("physical") == true);
}

TEST_CASE("budget output") {
    const Result r = run({"budget", "--d", "3"});
    CHECK(r.code == cli::kExitOk);
    CHECK(r.out == "n_qst,n_mcp1,n_mcp2\n225,12,36\n");
}

TEST_CASE("variants lists 72 rows") {
    const Result r = run({"variants", "--q", "-0.07,-1.73,-0.5774"});
    REQUIRE(r.code == cli::kExitOk);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 73);
}

TEST_CASE("state and ppt") {
    const Result csv = run({"state", "--lambda", "3.5", "--format", "csv"});
    REQUIRE(csv.code == cli::kExitOk);
    CHECK(csv.out.rfind("k,l,c\n", 0) == 0);
    const Result ppt = run({"ppt", "--lambda", "3.5"});
    REQUIRE(ppt.code == cli::kExitOk);
    const io::json j = io::json::parse(ppt.out);
    CHECK(j.at("ppt") == true);
    CHECK(j.at("min_pt_eig").get<double>() == doctest::Approx(0.012568).epsilon(1e-4));

    const auto path = temp_path("state.csv");
    io::write_file(path, csv.out);
    const Result from_file = run({"ppt", "--state", path});
    CHECK(from_file.code == cli::kExitOk);
    CHECK(io::json::parse(from_file.out).at("min_pt_eig").get<double>() ==
          doctest::Approx(j.at("min_pt_eig").get<double>()).epsilon(1e-9));
    std::remove(path.c_str());
}

TEST_CASE("mubs verify") {
    const Result r = run({"mubs", "verify", "--d", "4"});
    REQUIRE(r.code == cli::kExitOk);
    const io::json j = io::json::parse(r.out);
    CHECK(j.at("num_bases") == 5);
    CHECK(j.at("report").at("max_overlap_deviation").get<double>() <= 1e-10);
}

TEST_CASE("validation failures exit with status 2") {
    CHECK(run({"witness", "--d", "3"}).code == cli::kExitValidation);
    CHECK(run({"witness", "--d", "3", "--q", "0,0"}).code == cli::kExitValidation);
    CHECK(run({"mubs", "--d", "10"}).code == cli::kExitValidation);
    CHECK(run({"budget", "--d", "3", "--bogus"}).code == cli::kExitValidation);
    CHECK(run({"nonsense"}).code == cli::kExitValidation);
    CHECK(run({}).code == cli::kExitValidation);
    CHECK(run({"simulate", "--q", "0,0,0", "--noise", "-1,5"}).code == cli::kExitValidation);
    CHECK(run({"witness", "--d", "4", "--q", "0,0,0,0", "--labeling", "methods"}).code == cli::kExitValidation);
    const Result r = run({"horodecki", "--from", "-1"});
    CHECK(r.code == cli::kExitValidation);
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("numerical failures exit with status 3") {
    const auto path = temp_path("zeros.csv");
    std::string text = "setting,a,b,count\n";
    for (int p = 0; p < 36; ++p) text += std::to_string(p) + "," + std::to_string(p / 6) + "," + std::to_string(p % 6) + ",0\n";
    io::write_file(path, text);
    CHECK(run({"tomography", "--d", "2", "--counts", path}).code == cli::kExitNumerical);
    std::remove(path.c_str());
}

TEST_CASE("seeded runs are byte identical") {
    const std::vector<std::string> args = {"simulate", "--q", "-0.07,-1.73,-0.5774", "--seed", "17"};
    const Result a = run(args);
    const Result b = run(args);
    REQUIRE(a.code == cli::kExitOk);
    CHECK(a.out == b.out);
    const Result c = run({"simulate", "--q", "-0.07,-1.73,-0.5774", "--seed", "18"});
    CHECK(c.out != a.out);
}

TEST_CASE("config files and precedence") {
    const auto path = temp_path("config.json");
    io::write_file(path, R"({"d": 3, "q": [-0.07, -1.73, -0.5774], "labeling": "max"})");
    const Result from_config = run({"witness", "--config", path});
    REQUIRE(from_config.code == cli::kExitOk);
    CHECK(io::json::parse(from_config.out).at("report").at("labeling_mode") == "max");
    const Result overridden = run({"witness", "--config", path, "--labeling", "methods"});
    REQUIRE(overridden.code == cli::kExitOk);
    CHECK(io::json::parse(overridden.out).at("report").at("labeling_mode") == "methods");

    io::write_file(path, R"({"budget": {"d": 5}})");
    const Result nested = run({"budget", "--config", path});
    CHECK(nested.code == cli::kExitOk);
    CHECK(nested.out == "n_qst,n_mcp1,n_mcp2\n2025,30,150\n");

    io::write_file(path, R"({"d": 3, "unknown_key": 1})");
    CHECK(run({"budget", "--config", path}).code == cli::kExitValidation);
    io::write_file(path, "not json");
    CHECK(run({"budget", "--config", path}).code == cli::kExitValidation);
    std::remove(path.c_str());
}

TEST_CASE("help lists the flags") {
    const Result top = run({"--help"});
    CHECK(top.code == cli::kExitOk);
    for (const char* cmd : {"mubs", "state", "witness", "ppt", "scan", "optimize", "horodecki", "simulate",
                            "tomography", "variants", "budget"})
        CHECK(top.out.find(cmd) != std::string::npos);
    const Result scan = run({"scan", "--help"});
    CHECK(scan.code == cli::kExitOk);
    for (const char* flag : {"--q3", "--q1-range", "--res", "--labeling", "--threads", "--pgm"})
        CHECK(scan.out.find(flag) != std::string::npos);
}

TEST_CASE("small scan writes its artifacts") {
    const auto csv = temp_path("grid.csv");
    const auto img = temp_path("grid.pgm");
    const Result r = run({"scan", "--res", "12", "--out", csv, "--pgm", img, "--threads", "2"});
    REQUIRE(r.code == cli::kExitOk);
    const io::json j = io::json::parse(r.out);
    int total = 0;
    for (const auto& [k, v] : j.at("counts").items()) total += v.get<int>();
    CHECK(total == 144);
    CHECK(io::read_file(img).rfind("P5\n12 12\n255\n", 0) == 0);
    std::remove(csv.c_str());
    std::remove(img.c_str());
}
