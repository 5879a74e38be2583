#pragma once

#include "hebbsync/dynamics.hpp"
#include "hebbsync/equilibria.hpp"
#include "hebbsync/spectral.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace hebbsync {

struct LockScanSettings {
    double alpha = 0.3;
    double mu = 1.0;
    double theta0 = 0.0;
    double gamma0 = 1.0;
    double threshold = kDefaultLockThreshold;
    IntegratorConfig integrator{};  ///< t_end defaults to 75
    unsigned threads = 1;           ///< 0 picks hardware concurrency
};

struct LockScanRecord {
    PlanePoint point;
    double terminal_residual = 0.0;  ///< NaN if the integration diverged
    bool locked = false;
};

/// Integrates the three-oscillator complete graph from uniform initial data
/// at every grid point and records the terminal residual. Output order is
/// plane_grid order regardless of thread scheduling.
[[nodiscard]] std::vector<LockScanRecord> lock_scan(const GridAxis& a, const GridAxis& b,
                                                    const LockScanSettings& settings);

/// Header `a,b,gamma0,terminal_residual,locked`.
void write_lock_scan_csv(std::ostream& out, const std::vector<LockScanRecord>& records,
                         double gamma0);

struct TheoremCase {
    Vector theta;
    Vector omega;
    StabilityReport report;
    bool passed = false;
};

/// Draws `count` random phase vectors, takes the frequencies they solve, and
/// checks that the full Hebbian Jacobian and the classical Jacobian at the
/// doubled phases (K = 1/(2 alpha)) agree: n+ and n0 equal, n- differing by E.
[[nodiscard]] std::vector<TheoremCase> theorem_battery(const Graph& g, double alpha,
                                                       std::size_t count, std::uint64_t seed);

[[nodiscard]] bool theorem_relation_holds(const StabilityReport& r, std::size_t n_edges) noexcept;

/// Header `case,n_plus_full,n_zero_full,n_minus_full,n_plus_classical,
/// n_zero_classical,n_minus_classical,passed`.
void write_theorem_csv(std::ostream& out, const std::vector<TheoremCase>& cases);

}  // namespace hebbsync
