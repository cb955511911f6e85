#include "doctest.h"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef CONEBOOK_BIN
#define CONEBOOK_BIN "conebook"
#endif

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(CONEBOOK_BIN) + " " + args + " >cli_stdout.txt 2>cli_stderr.txt";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("reach command emits the unit radius row") {
    REQUIRE(run("reach --set theta=1.5707963267948966 --set t=1 --set n=500 "
                "--out cli_reach") == 0);
    const std::string csv = slurp("cli_reach.csv");
    CHECK(contains(csv, "theta,t,radius,alt_radius,mc_max_radius,n"));
    // parse the radius cell of the data row
    std::istringstream in(csv);
    std::string line, data;
    while (std::getline(in, line)) {
        if (!line.empty() && (std::isdigit(line[0]) || line[0] == '-')) data = line;
    }
    REQUIRE(!data.empty());
    std::istringstream row(data);
    std::string cell;
    std::getline(row, cell, ',');  // theta
    std::getline(row, cell, ',');  // t
    CHECK(std::stod(cell) == 1.0);
    std::getline(row, cell, ',');  // radius
    CHECK(std::abs(std::stod(cell) - 1.0) < 1e-12);
    CHECK(contains(slurp("cli_reach.json"), "\"columns\""));
    CHECK(contains(slurp("cli_reach.svg"), "<svg"));
    CHECK(contains(slurp("cli_reach.config"), "theta = 1.5707963267948966"));
}

TEST_CASE("identical seed and config give byte-identical output") {
    const std::string args =
        "prob --set A.center=0.3,0 --set A.radius=0.1 --set B.kind=disk "
        "--set B.center=0.2,0.1 --set B.radius=0.3 --set t=0.7 --set theta=0.4 "
        "--set n=300 --seed 12";
    setenv("CONEBOOK_THREADS", "1", 1);
    REQUIRE(run(args + " --out cli_a") == 0);
    setenv("CONEBOOK_THREADS", "6", 1);
    REQUIRE(run(args + " --out cli_b") == 0);
    unsetenv("CONEBOOK_THREADS");
    CHECK(slurp("cli_a.csv") == slurp("cli_b.csv"));
    CHECK(slurp("cli_a.json") == slurp("cli_b.json"));
    CHECK(!slurp("cli_a.csv").empty());
}

TEST_CASE("unknown config keys are a hard error") {
    CHECK(run("reach --set theta=0.5 --set t=1 --set n=10 --set reachh.typo=1 "
              "--out cli_bad") == 2);
    CHECK(contains(slurp("cli_bad.json"), "unknown config key"));
    CHECK(contains(slurp("cli_bad.json"), "\"kind\": \"config\""));
}

TEST_CASE("unknown command and malformed values exit with status 2") {
    CHECK(run("frobnicate --out cli_cmd") == 2);
    CHECK(run("reach --set theta=banana --out cli_val") == 2);
}

TEST_CASE("numerical domain errors exit with status 3") {
    // theta = pi is the infinite-radius case
    CHECK(run("reach --set theta=3.141592653589793 --set t=1 --set n=10 "
              "--out cli_num") == 3);
    CHECK(contains(slurp("cli_num.json"), "\"kind\": \"numerical\""));
}

TEST_CASE("conventions listing is stable") {
    REQUIRE(run("--list-conventions") == 0);
    const std::string text = slurp("cli_stdout.txt");
    CHECK(contains(text, "inner angle: full opening angle"));
    CHECK(contains(text, "radius = t * tan(theta/2)"));
    CHECK(contains(text, "minkowski = t*tan(theta/2) + r(A)"));
    CHECK(contains(text, "contact volume of S^3: 4*pi^2"));
    CHECK(contains(text, "mu(P)^2/12"));
    CHECK(contains(text, "project (minimal rotation onto the cone shell)"));
    CHECK(contains(text, "seeds: default 0"));
}

TEST_CASE("config files round-trip through the resolved echo") {
    {
        std::ofstream out("cli_roundtrip.cfg");
        out << "# comment line\n"
            << "theta = 0.5\n"
            << "t = 2.0\n"
            << "n = 200\n";
    }
    REQUIRE(run("reach --config cli_roundtrip.cfg --out cli_r1") == 0);
    // feed the resolved echo back in as the config file
    REQUIRE(run("reach --config cli_r1.config --out cli_r2") == 0);
    CHECK(slurp("cli_r1.csv") == slurp("cli_r2.csv"));
    CHECK(slurp("cli_r1.config") == slurp("cli_r2.config"));
}

TEST_CASE("qstats reports both variance readings") {
    REQUIRE(run("qstats --out cli_q") == 0);
    const std::string csv = slurp("cli_q.csv");
    CHECK(contains(csv, "variance_measured"));
    CHECK(contains(csv, "variance_interval_formula"));
    CHECK(contains(csv, "0.0833333333333333"));
    CHECK(contains(csv, "0.159154943"));
}

TEST_CASE("check-adapted flags the constructed violation") {
    REQUIRE(run("check-adapted --set field.kind=collared --set samples=500 "
                "--out cli_ok") == 0);
    const std::string ok = slurp("cli_ok.csv");
    CHECK(contains(ok, "binding_tangency,1"));
    CHECK(contains(ok, "dtheta_positive,1"));
    CHECK(contains(ok, "alpha_positive,1"));
    CHECK(contains(ok, "reeb_interior,1"));

    REQUIRE(run("check-adapted --set field.kind=violation_dtheta --set samples=500 "
                "--out cli_viol") == 0);
    const std::string viol = slurp("cli_viol.csv");
    CHECK(contains(viol, "dtheta_positive,0"));
    CHECK(contains(viol, "binding_tangency,1"));
}
