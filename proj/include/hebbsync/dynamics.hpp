#pragma once

#include "hebbsync/graph.hpp"
#include "hebbsync/model.hpp"

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace hebbsync {

enum class IntegrationMethod {
    RK4,   ///< fixed-step classical Runge-Kutta
    RK45,  ///< adaptive Dormand-Prince 5(4)
};

[[nodiscard]] std::string_view to_string(IntegrationMethod m) noexcept;
[[nodiscard]] IntegrationMethod parse_integration_method(std::string_view name);

struct IntegratorConfig {
    IntegrationMethod method = IntegrationMethod::RK4;
    /// Fixed step for RK4; initial step for RK45.
    double step = 1e-2;
    double t_end = 75.0;
    /// Record every k-th accepted step. The final state is always recorded.
    std::size_t sample_every = 1;
    double abs_tol = 1e-9;
    double rel_tol = 1e-7;

    /// Throws std::invalid_argument. t_end = 0 is accepted and yields the
    /// initial sample only.
    void validate() const;
};

struct Diagnostics {
    double diameter = 0.0;
    double residual = 0.0;
    double energy = 0.0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<HebbState> states;
    std::vector<Diagnostics> diagnostics;

    [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
};

/// Raised when the state stops being finite.
class IntegrationDiverged : public std::runtime_error {
public:
    IntegrationDiverged(double last_good_time);
    [[nodiscard]] double last_good_time() const noexcept { return last_good_time_; }

private:
    double last_good_time_;
};

/// Integrates from t = 0 to cfg.t_end. Fixed-step RK4 uses
/// ceil(t_end / step) equal steps so the last sample lands on t_end exactly.
/// Deterministic: identical inputs give bit-identical trajectories.
[[nodiscard]] Trajectory integrate(const Graph& g, const SystemParams& p, const HebbState& s0,
                                   const IntegratorConfig& cfg);

/// Same integration as `integrate` but keeps only the terminal state.
[[nodiscard]] HebbState integrate_final(const Graph& g, const SystemParams& p,
                                        const HebbState& s0, const IntegratorConfig& cfg);

inline constexpr double kDefaultLockThreshold = 1e-4;
inline constexpr double kDefaultLockTime = 75.0;

struct LockReport {
    bool locked = false;
    double terminal_residual = 0.0;
    HebbState terminal_state;
    double threshold = kDefaultLockThreshold;
};

/// Integrates to t_end (other integrator settings from `base`) and compares
/// the terminal residual against `threshold`.
[[nodiscard]] LockReport detect_phase_lock(const Graph& g, const SystemParams& p,
                                           const HebbState& s0, double t_end = kDefaultLockTime,
                                           double threshold = kDefaultLockThreshold,
                                           IntegratorConfig base = {});

struct PairVariation {
    std::size_t i;
    std::size_t j;
    double variation;  ///< max - min of theta_i - theta_j over the window
};

struct EdgeOscillation {
    std::size_t edge;
    double peak_to_peak;
    double mean;
};

struct SynchronyReport {
    double window_start = 0.0;
    std::size_t window_samples = 0;
    std::vector<PairVariation> pairs;  ///< all vertex pairs i < j
    std::vector<EdgeOscillation> edges;
};

/// Summarizes the trailing `tail_fraction` of the samples.
[[nodiscard]] SynchronyReport synchrony_report(const Trajectory& traj,
                                               double tail_fraction = 1.0 / 3.0);

/// Header `t,theta_0..,gamma_0..,diameter,residual,energy`; one row per sample.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace hebbsync
