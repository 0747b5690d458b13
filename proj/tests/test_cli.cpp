// End-to-end checks of the installed CLI binary (path passed via --cli).
#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include "soilc/io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string g_cli;

int run(const std::string& args) {
    const std::string cmd = g_cli + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("soilc_cli_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("simulate then fit, diagnose, summarize") {
    TempDir dir;
    const std::string base = dir.path.string();
    REQUIRE(run("simulate --model one --site tarlee --horizon 10 --seed 3 --dense --out-dir " +
                base + "/sim") == 0);
    REQUIRE(fs::exists(dir.path / "sim/data.csv"));
    REQUIRE(fs::exists(dir.path / "sim/truth.csv"));

    const std::string fit_args = " --data " + base + "/sim/data.csv --schedule " + base +
                                 "/sim/schedule.csv --model one --site tarlee --chains 2 "
                                 "--iterations 300 --burn-in 100 --stride 10 --particles 40 "
                                 "--seed 5 --out-dir ";
    REQUIRE(run("fit" + fit_args + base + "/fit") == 0);
    REQUIRE(fs::exists(dir.path / "fit/chain_0.csv"));
    REQUIRE(fs::exists(dir.path / "fit/trajectories_1.csv"));

    // byte-identical rerun with the same master seed
    REQUIRE(run("fit" + fit_args + base + "/fit2") == 0);
    for (const char* name : {"chain_0.csv", "chain_1.csv", "trajectories_0.csv",
                             "trajectories_1.csv"})
        CHECK(slurp(dir.path / "fit" / name) == slurp(dir.path / "fit2" / name));

    REQUIRE(run("diagnose --chain " + base + "/fit/chain_0.csv --chain " + base +
                "/fit/chain_1.csv --out " + base + "/rhat.csv") == 0);
    const auto rhat = slurp(dir.path / "rhat.csv");
    CHECK(rhat.find("parameter,rhat,upper_ci") == 0);
    CHECK(rhat.find("K_C,") != std::string::npos);

    REQUIRE(run("summarize --model one --site tarlee --chains 2 --fit-dir " + base +
                "/fit --out-dir " + base + "/bands") == 0);
    const auto bands = slurp(dir.path / "bands/soc_bands.csv");
    CHECK(bands.find("year,field,q2.5,q25,q50,q75,q97.5") == 0);
    CHECK(fs::exists(dir.path / "bands/soc_change_bands.csv"));
    CHECK(fs::exists(dir.path / "bands/co2_bands.csv"));
}

TEST_CASE("exit codes separate usage, data, and numeric failures") {
    TempDir dir;
    const std::string base = dir.path.string();
    CHECK(run("unknown-subcommand") == 1);
    CHECK(run("fit --model one") == 1);  // missing required flags

    std::ofstream(dir.path / "bad.csv") << "year,field,variable,value\n1979,1,TOC,-3\n";
    std::ofstream(dir.path / "sched.csv")
        << "year,field,treatment\n1979,1,Fallow\n1979,2,Fallow\n1979,3,Fallow\n";
    CHECK(run("fit --data " + base + "/bad.csv --schedule " + base + "/sched.csv") == 2);
}

TEST_CASE("config file keys are honoured and flags override them") {
    TempDir dir;
    const std::string base = dir.path.string();
    std::ofstream(dir.path / "sim.cfg") << "model=two\nsite=tarlee\nhorizon=8\nseed=11\n"
                                        << "out-dir=" << base << "/simcfg\n";
    REQUIRE(run("simulate --config " + base + "/sim.cfg") == 0);
    REQUIRE(fs::exists(dir.path / "simcfg/manifest.txt"));
    const auto manifest = slurp(dir.path / "simcfg/manifest.txt");
    CHECK(manifest.find("model = two") != std::string::npos);
    CHECK(manifest.find("horizon = 8") != std::string::npos);

    // flag wins over the config file
    REQUIRE(run("simulate --config " + base + "/sim.cfg --horizon 6 --out-dir " + base +
                "/simcfg2") == 0);
    CHECK(slurp(dir.path / "simcfg2/manifest.txt").find("horizon = 6") != std::string::npos);
}

int main(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--cli") g_cli = argv[i + 1];
    if (g_cli.empty()) {
        std::fprintf(stderr, "usage: test_cli --cli <path-to-soilc>\n");
        return 1;
    }
    doctest::Context context;
    return context.run();
}
