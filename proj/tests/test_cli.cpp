#include "hebbsync/cli.hpp"
#include "hebbsync/csv.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace hebbsync;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "hebbsync");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("hebbsync_cli_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::map<std::string, std::string> read_summary(const fs::path& p) {
    std::map<std::string, std::string> kv;
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find(" = ");
        if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 3);
    }
    return kv;
}

csv::Table read_table(const fs::path& p) {
    std::ifstream in(p);
    return csv::read(in);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("simulate the two-cluster and locking runs") {
    const auto d6 = scratch("two_cluster");
    const auto r6 = run_cli({"simulate", "--omega", "1.2247448713915890,1.2247448713915890,-2.449489742783178",
                             "--out", d6.string()});
    REQUIRE(r6.code == cli::kSuccess);
    const auto s6 = read_summary(d6 / "summary.txt");
    CHECK(s6.at("locked") == "false");
    CHECK(csv::to_double(s6.at("terminal_residual")) > 0.1);

    const auto d7 = scratch("locking");
    const auto r7 = run_cli({"simulate", "--omega=-1,-0.5,1.5", "--out", d7.string()});
    REQUIRE(r7.code == cli::kSuccess);
    const auto s7 = read_summary(d7 / "summary.txt");
    CHECK(s7.at("locked") == "true");
    CHECK(csv::to_double(s7.at("terminal_residual")) < 1e-6);
    const auto traj = read_table(d7 / "trajectory.csv");
    CHECK(traj.rows.size() == 7501);
    CHECK(fs::exists(d7 / "manifest.txt"));
}

TEST_CASE("zero-length simulation writes one sample") {
    const auto d = scratch("t0");
    const auto r = run_cli({"simulate", "--t-end", "0", "--out", d.string()});
    REQUIRE(r.code == cli::kSuccess);
    const auto traj = read_table(d / "trajectory.csv");
    CHECK(traj.rows.size() == 1);
    CHECK(read_summary(d / "summary.txt").at("samples") == "1");
}

TEST_CASE("manifest reproduces the run") {
    const auto d = scratch("manifest");
    const auto first = run_cli({"simulate", "--omega=0.3,-0.1,-0.2", "--gamma0", "2", "--t-end",
                                "5", "--method", "rk45", "--out", d.string()});
    REQUIRE(first.code == cli::kSuccess);
    const std::string original = slurp(d / "trajectory.csv");
    const fs::path config = d.parent_path() / "hebbsync_cli_test_manifest.cfg";
    fs::copy_file(d / "manifest.txt", config, fs::copy_options::overwrite_existing);
    fs::remove(d / "trajectory.csv");

    const auto again = run_cli({"simulate", "--config", config.string()});
    REQUIRE(again.code == cli::kSuccess);
    CHECK(slurp(d / "trajectory.csv") == original);
    CHECK(slurp(d / "manifest.txt") == slurp(config));
}

TEST_CASE("config errors exit with code 2") {
    const auto d = scratch("errors");
    CHECK(run_cli({}).code == cli::kConfigError);
    CHECK(run_cli({"bogus"}).code == cli::kConfigError);
    CHECK(run_cli({"simulate", "--alpha", "abc", "--out", d.string()}).code == cli::kConfigError);
    CHECK(run_cli({"simulate", "--alpha", "-1", "--out", d.string()}).code == cli::kConfigError);
    CHECK(run_cli({"simulate", "--omega=1,2", "--out", d.string()}).code == cli::kConfigError);
    CHECK(run_cli({"simulate", "--method", "euler", "--out", d.string()}).code ==
          cli::kConfigError);
    CHECK(run_cli({"simulate", "--graph", "nope.txt", "--out", d.string()}).code ==
          cli::kConfigError);
    CHECK(run_cli({"lock-scan", "--graph", "complete:4", "--out", d.string()}).code ==
          cli::kConfigError);
    CHECK(run_cli({"feasibility", "--a-range", "1:2", "--out", d.string()}).code ==
          cli::kConfigError);

    const fs::path bad = d.parent_path() / "hebbsync_cli_test_bad.cfg";
    std::ofstream(bad) << "no-such-key = 3\n";
    CHECK(run_cli({"simulate", "--config", bad.string()}).code == cli::kConfigError);

    const auto help = run_cli({"--help"});
    CHECK(help.code == cli::kSuccess);
    CHECK(help.out.find("theorem-check") != std::string::npos);
}

TEST_CASE("divergence exits with code 3") {
    const auto d = scratch("diverge");
    const auto r = run_cli({"simulate", "--alpha", "1e4", "--omega=-1,-0.5,1.5", "--out",
                            d.string()});
    CHECK(r.code == cli::kNumericFailure);
    CHECK(r.err.find("simulate") != std::string::npos);
}

TEST_CASE("stability") {
    const auto d = scratch("stability");
    const auto ok = run_cli({"stability", "--omega=0.2,-0.2,0", "--out", d.string()});
    REQUIRE(ok.code == cli::kSuccess);
    const auto t = read_table(d / "stability.csv");
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0].back() == "stable");
    const auto fp = read_table(d / "fixed_points.csv");
    CHECK(fp.header.front() == "branch");
    CHECK(fp.header.back() == "residual");
    CHECK(csv::to_double(fp.rows[0].back()) < 1e-12);

    const auto census = run_cli({"stability", "--multistart", "16", "--out", d.string()});
    REQUIRE(census.code == cli::kSuccess);
    CHECK(read_table(d / "stability.csv").rows.size() >= 2);

    CHECK(run_cli({"stability", "--omega=10,-10,0", "--out", d.string()}).code ==
          cli::kNumericFailure);
}

TEST_CASE("feasibility and lock scans") {
    const auto d = scratch("grids");
    REQUIRE(run_cli({"feasibility", "--a-range", "-1:1:3", "--b-range", "-1:1:3", "--out",
                     d.string()})
                .code == cli::kSuccess);
    const auto f = read_table(d / "feasibility.csv");
    REQUIRE(f.rows.size() == 9);
    CHECK(f.rows[4][f.column("feasible")] == "1");
    CHECK(f.rows[4][f.column("stable")] == "1");

    REQUIRE(run_cli({"lock-scan", "--a-range", "0:0:1", "--b-range", "0:0:1", "--gamma0", "3",
                     "--threads", "2", "--out", d.string()})
                .code == cli::kSuccess);
    const auto l = read_table(d / "lock_scan.csv");
    REQUIRE(l.rows.size() == 1);
    CHECK(l.rows[0][l.column("locked")] == "1");
    CHECK(l.rows[0][l.column("gamma0")] == "3");
}

TEST_CASE("theorem-check") {
    const auto d = scratch("theorem");
    const auto k3 = run_cli({"theorem-check", "--count", "50", "--seed", "7", "--out", d.string()});
    CHECK(k3.code == cli::kSuccess);
    CHECK(read_table(d / "theorem_check.csv").rows.size() == 50);
    CHECK(run_cli({"theorem-check", "--graph", "complete:6", "--alpha", "1", "--count", "25",
                   "--out", d.string()})
              .code == cli::kSuccess);
    const auto none = run_cli({"theorem-check", "--count", "0", "--out", d.string()});
    CHECK(none.code == cli::kSuccess);
    CHECK(read_table(d / "theorem_check.csv").rows.empty());
}

TEST_CASE("installed binary") {
    const auto d = scratch("binary");
    const std::string cmd = std::string("\"") + HEBBSYNC_CLI_PATH + "\" simulate --t-end 1 --out \"" +
                            d.string() + "\" > /dev/null";
    CHECK(std::system(cmd.c_str()) == 0);
    CHECK(fs::exists(d / "trajectory.csv"));
    const std::string bad = std::string("\"") + HEBBSYNC_CLI_PATH + "\" nothing 2> /dev/null";
    const int status = std::system(bad.c_str());
    CHECK(WEXITSTATUS(status) == cli::kConfigError);
}

}  // TEST_SUITE
