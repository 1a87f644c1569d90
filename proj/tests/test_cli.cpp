#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Run run(const std::string& args) {
    const auto dir = std::filesystem::temp_directory_path();
    const auto out = dir / "morsim_cli_test.out";
    const auto err = dir / "morsim_cli_test.err";
    const std::string cmd =
        std::string(MORSIM_CLI_PATH) + " " + args + " > " + out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    return {WEXITSTATUS(status), slurp(out), slurp(err)};
}

bool contains(const std::string& text, const std::string& needle) { return text.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("fringe command") {
    const auto r = run("fringe --source collinear --r 0.8 --points 5 --mode both");
    CHECK(r.code == 0);
    CHECK(r.out.rfind("theta,value,value_exact\n", 0) == 0);
    CHECK(r.err.empty());

    const auto file = std::filesystem::temp_directory_path() / "morsim_cli_fringe.csv";
    const auto f = run("fringe --source collinear --r 0.8 --points 5 --mode both --out " + file.string());
    CHECK(f.code == 0);
    CHECK(f.out.empty());
    CHECK(slurp(file) == r.out);
}

TEST_CASE("validation errors exit with status 1") {
    for (const char* args : {"fringe --source laser", "fringe --points 1", "fringe --theta-min 2 --theta-max 1",
                             "fringe --observable three_photon", "fringe --source coherent --observable two_photon",
                             "fringe --source noncollinear --geometry collinear", "fringe --r -1",
                             "sensitivity --mean-n-min 0.5", "visibility --r-min 0", "fringe --threads 0"}) {
        CAPTURE(args);
        const auto r = run(args);
        CHECK(r.code == 1);
        CHECK(contains(r.err, "error: "));
        CHECK(r.out.empty());
    }
    CHECK(run("").code == 1);
    CHECK(run("fringe --no-such-flag").code == 1);
    CHECK(run("bogus").code == 1);
}

TEST_CASE("unreachable truncation is reported") {
    const auto r = run("fringe --source collinear --r 3 --observable glauber4 --points 3");
    CHECK(r.code == 1);
    CHECK(contains(r.err, "cannot reach truncation target"));
}

TEST_CASE("direct angles overriding susceptibilities warn") {
    const auto r = run("fringe --points 3 --chi-plus 0.2 --chi-minus 0.1 --k 1 --l 1 --theta-plus 0.4");
    CHECK(r.code == 0);
    CHECK(contains(r.err, "warning: direct angles override"));
}

TEST_CASE("sweeps are byte-identical across runs and thread counts") {
    for (const std::string args : {"fringe --source noncollinear --observable projection --r 1 --points 101",
                                   "visibility --points 4 --theta-points 257 --mode both",
                                   "envelope --points 31 --mode both", "sensitivity --points 11 --mode exact"}) {
        CAPTURE(args);
        const auto a = run(args);
        REQUIRE(a.code == 0);
        CHECK(run(args).out == a.out);
        CHECK(run(args + " --threads 3").out == a.out);
    }
}

TEST_CASE("verify detects an injected b-mode sign error") {
    const auto r = run("verify --inject-fault b-sign");
    CHECK(r.code == 2);
    CHECK(contains(r.out, "FAIL oracle_noncollinear_projection"));
    CHECK(contains(r.out, "verify: FAILED"));
    CHECK(run("verify --inject-fault nonsense").code == 1);
}
