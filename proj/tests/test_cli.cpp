#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vlfs/export.hpp"
#include "vlfs/scenarios.hpp"

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(VLFS_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    std::stringstream buf;
    buf << is.rdbuf();
    return buf.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("cli exit codes") {
    CHECK(run_cli("definitely-not-a-subcommand") == 2);
    CHECK(run_cli("run --config /no/such/file.json --out /tmp/vlfs_cli_none") == 3);
    // invalid override key
    TempDir dir("vlfs_cli_badkey");
    CHECK(run_cli("run --scenario periodic_beam --k 2 --set bogus.key=1 --out " +
                  dir.path.string()) == 3);
}

TEST_CASE("cli run writes outputs and metadata") {
    TempDir dir("vlfs_cli_run");
    const int code = run_cli(
        "run --scenario periodic_beam --k 2 --r 2 "
        "--set discretization.nx=8 --set discretization.nz=4 --out " +
        dir.path.string());
    REQUIRE(code == 0);
    CHECK(fs::exists(dir.path / "periodic_beam_eta_gauges.csv"));
    CHECK(fs::exists(dir.path / "periodic_beam_energies.csv"));
    CHECK(fs::exists(dir.path / "metadata.json"));
    const std::string meta = slurp(dir.path / "metadata.json");
    CHECK(meta.find("config_hash") != std::string::npos);
    CHECK(meta.find("solver_residuals") != std::string::npos);
}

TEST_CASE("identical argv and config give bitwise-identical csv output") {
    TempDir a("vlfs_cli_det_a"), b("vlfs_cli_det_b");
    const std::string args =
        "run --scenario periodic_beam --k 2 --r 2 "
        "--set discretization.nx=8 --set discretization.nz=4 --out ";
    REQUIRE(run_cli(args + a.path.string()) == 0);
    REQUIRE(run_cli(args + b.path.string()) == 0);
    for (const char* f : {"periodic_beam_eta_gauges.csv", "periodic_beam_energies.csv",
                          "periodic_beam_errors.csv"}) {
        CHECK(slurp(a.path / f) == slurp(b.path / f));
        CHECK(!slurp(a.path / f).empty());
    }
}

TEST_CASE("config file round trip through the cli") {
    TempDir dir("vlfs_cli_cfg");
    auto cfg = vlfs::build_scenario_periodic_beam(2.0);
    cfg.disc = {8, 4, 1.0, 2, 2};
    const double T = cfg.wave.period();
    cfg.mode = vlfs::TimeMode{T / 10.0, T / 50.0};
    const fs::path cfg_path = dir.path / "scenario.json";
    {
        std::ofstream os(cfg_path);
        os << cfg.to_json();
    }
    const int code =
        run_cli("run --config " + cfg_path.string() + " --out " + dir.path.string());
    CHECK(code == 0);
    CHECK(fs::exists(dir.path / "periodic_beam_eta_gauges.csv"));
}

TEST_CASE("cli override precedence: --set wins over the config file") {
    TempDir dir("vlfs_cli_override");
    auto cfg = vlfs::build_scenario_periodic_beam(2.0);
    cfg.disc = {8, 4, 1.0, 2, 2};
    const double T = cfg.wave.period();
    cfg.mode = vlfs::TimeMode{T / 10.0, T / 50.0};
    const fs::path cfg_path = dir.path / "scenario.json";
    {
        std::ofstream os(cfg_path);
        os << cfg.to_json();
    }
    const int code = run_cli("run --config " + cfg_path.string() +
                             " --set discretization.nx=12 --out " + dir.path.string());
    REQUIRE(code == 0);
    const std::string meta = slurp(dir.path / "metadata.json");
    CHECK(meta.find("\"nx\": 12") != std::string::npos);
}

TEST_CASE("sweep runs points into separate subdirectories") {
    TempDir dir("vlfs_cli_sweep");
    const int code = run_cli(
        "sweep --scenario periodic_beam --k 2 --r 2 "
        "--set discretization.nz=4 --set mode.t_final=0.1 --set mode.dt=0.05 "
        "--grid discretization.nx=8,12 --threads 2 --out " +
        dir.path.string());
    REQUIRE(code == 0);
    CHECK(fs::exists(dir.path / "point_0" / "metadata.json"));
    CHECK(fs::exists(dir.path / "point_1" / "metadata.json"));
    const std::string m0 = slurp(dir.path / "point_0" / "metadata.json");
    const std::string m1 = slurp(dir.path / "point_1" / "metadata.json");
    CHECK(m0.find("\"nx\": 8") != std::string::npos);
    CHECK(m1.find("\"nx\": 12") != std::string::npos);
}
