#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace hebbsync::cli {

inline constexpr std::string_view kVersion = "0.1.0";

enum ExitCode : int {
    kSuccess = 0,
    kConfigError = 2,
    kNumericFailure = 3,
    kVerificationFailure = 4,
};

/// Every option the command line and config files understand. Defaults are
/// the three-oscillator experiment: alpha = 0.3, mu = 1, theta0 = 0,
/// gamma0 = 1, T = 75.
struct RunConfig {
    std::string command;
    std::string graph = "complete:3";
    double alpha = 0.3;
    double mu = 1.0;
    std::vector<double> omega;  ///< empty: use `plane`, else zero
    std::vector<double> plane;  ///< (a, b) for three oscillators
    std::vector<double> theta0{0.0};
    std::vector<double> gamma0{1.0};
    std::string method = "rk4";
    double step = 1e-2;
    double t_end = 75.0;
    std::size_t sample_every = 1;
    double threshold = 1e-4;
    double tail_fraction = 1.0 / 3.0;
    std::string a_range = "-3:3:61";
    std::string b_range = "-3:3:61";
    std::size_t multistart = 0;
    unsigned threads = 1;
    std::size_t count = 50;
    std::uint64_t seed = 1;
    std::string out = ".";
};

/// Parses arguments (and any --config file) and runs the chosen subcommand.
/// Messages go to `log` and `err`; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& log, std::ostream& err);

int cmd_simulate(const RunConfig& cfg, std::ostream& log, std::ostream& err);
int cmd_lock_scan(const RunConfig& cfg, std::ostream& log, std::ostream& err);
int cmd_feasibility(const RunConfig& cfg, std::ostream& log, std::ostream& err);
int cmd_stability(const RunConfig& cfg, std::ostream& log, std::ostream& err);
int cmd_theorem_check(const RunConfig& cfg, std::ostream& log, std::ostream& err);

/// Key-value text in the same syntax --config accepts, so feeding a manifest
/// back reproduces the run.
void write_manifest(std::ostream& out, const RunConfig& cfg);

}  // namespace hebbsync::cli
