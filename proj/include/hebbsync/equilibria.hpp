#pragma once

#include "hebbsync/graph.hpp"
#include "hebbsync/model.hpp"
#include "hebbsync/spectral.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace hebbsync {

// ---------------------------------------------------------------------------
// Mean-zero frequency plane for three oscillators
// ---------------------------------------------------------------------------

/// Coordinates in the plane spanned by x = (1,-1,0)/sqrt2, y = (1,1,-2)/sqrt6.
struct PlanePoint {
    double a = 0.0;
    double b = 0.0;
};

[[nodiscard]] Vector frequency_from_plane(PlanePoint p);
/// Orthogonal projection of a 3-vector onto the plane basis.
[[nodiscard]] PlanePoint plane_from_frequency(const Vector& omega);

/// `lo:hi:n` inclusive lattice axis.
struct GridAxis {
    double lo = -3.0;
    double hi = 3.0;
    std::size_t n = 61;

    [[nodiscard]] double at(std::size_t k) const;
};

[[nodiscard]] GridAxis parse_grid_axis(std::string_view text);

/// Row-major lattice: b is the slow index, a the fast one.
[[nodiscard]] std::vector<PlanePoint> plane_grid(const GridAxis& a, const GridAxis& b);

// ---------------------------------------------------------------------------
// Fixed points of the sine model
// ---------------------------------------------------------------------------

/// r_i = omega_i + 1/(2 alpha) sum_j sin(2(theta_j - theta_i)). The Hebbian
/// fixed points are exactly the zeros of r (with gamma eliminated).
[[nodiscard]] Vector reduced_residual(const Vector& theta, const Vector& omega, double alpha,
                                      const Graph& g);

/// The frequency vector for which `theta` is a fixed point.
[[nodiscard]] Vector induced_frequency(const Vector& theta, double alpha, const Graph& g);

/// gamma_k = cos(theta_i - theta_j) / alpha in canonical edge order.
[[nodiscard]] Vector gamma_at_fixed_point(const Vector& theta, double alpha, const Graph& g);

struct FixedPoint {
    Vector theta;  ///< gauge fixed: sum theta = 0
    Vector gamma;
    Vector omega;
    double alpha = 0.0;
    double residual = 0.0;  ///< l-inf norm of the full Hebbian vector field

    [[nodiscard]] HebbState state() const { return {theta, gamma}; }
};

enum class SolveStatus { Converged, NoConvergence, Degenerate };

[[nodiscard]] std::string_view to_string(SolveStatus s) noexcept;

struct NewtonOptions {
    int max_iterations = 50;
    double tolerance = 1e-12;
};

struct SolveResult {
    SolveStatus status = SolveStatus::NoConvergence;
    /// On failure holds the last iterate.
    FixedPoint point;
    int iterations = 0;
    double residual = 0.0;  ///< l-inf norm of reduced_residual at the last iterate

    [[nodiscard]] bool converged() const noexcept { return status == SolveStatus::Converged; }
};

/// Newton iteration on reduced_residual restricted to sum(theta) = 0.
/// Requires a connected graph. Steps are damped by backtracking on the
/// residual norm.
[[nodiscard]] SolveResult solve_fixed_point(const Vector& omega, double alpha, const Graph& g,
                                            const Vector& initial_guess,
                                            const NewtonOptions& opts = {});

struct ClassicalSolveResult {
    SolveStatus status = SolveStatus::NoConvergence;
    Vector theta;
    int iterations = 0;
    double residual = 0.0;

    [[nodiscard]] bool converged() const noexcept { return status == SolveStatus::Converged; }
};

/// Newton iteration for fixed points of the classical model with uniform
/// coupling K, in the same gauge.
[[nodiscard]] ClassicalSolveResult solve_classical_fixed_point(const Vector& omega, double K,
                                                               const Graph& g,
                                                               const Vector& initial_guess,
                                                               const NewtonOptions& opts = {});

/// Maps a classical fixed point (coupling 1/(2 alpha)) for `omega` to the
/// Hebbian fixed point with halved, gauge-normalized phases. Throws
/// std::invalid_argument if `theta_classical` has classical residual >= 1e-10.
[[nodiscard]] FixedPoint lift_to_hebbian(const Vector& theta_classical, const Vector& omega,
                                         double alpha, const Graph& g);

/// Inverse direction: doubled phases, a classical fixed point with K = 1/(2 alpha).
[[nodiscard]] Vector double_to_classical(const FixedPoint& fp);

/// True when some |omega_i| > deg(i) / (2 alpha), which no fixed point can
/// satisfy.
[[nodiscard]] bool exceeds_frequency_bound(const Vector& omega, double alpha, const Graph& g);

/// Wraps to (-pi, pi].
[[nodiscard]] double wrap_angle(double x);

/// l-inf distance between two phase configurations after aligning vertex 0
/// and wrapping each difference into (-pi, pi].
[[nodiscard]] double aligned_phase_distance(const Vector& a, const Vector& b);

// ---------------------------------------------------------------------------
// Feasibility sweep over the frequency plane
// ---------------------------------------------------------------------------

struct SweepOptions {
    /// Random-seed census per point; 0 disables the multi-start pass.
    std::size_t multistart_seeds = 0;
    std::uint64_t seed = 1;
    double distinct_tol = 1e-6;
    /// Worker threads for the multi-start pass; 0 picks hardware concurrency.
    unsigned threads = 1;
};

struct SweepRecord {
    PlanePoint point;
    bool feasible = false;
    bool stable = false;
    std::optional<Inertia> reduced;  ///< present when feasible
    long long branches_found = -1;   ///< -1 when the multi-start pass did not run
    double newton_residual = 0.0;    ///< NaN when the bound rejected the point
    Vector theta;                    ///< continuation solution, empty if none
};

/// Solves every grid point on the primary branch by continuation outward
/// from the origin, classifies each solution, and optionally counts distinct
/// branches from random seeds. Records come back in plane_grid order.
[[nodiscard]] std::vector<SweepRecord> feasibility_sweep(const GridAxis& a, const GridAxis& b,
                                                         double alpha, const Graph& g,
                                                         const SweepOptions& opts = {});

/// CSV header `a,b,feasible,stable,n_plus,n_zero,n_minus,branches_found,newton_residual`.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records);

/// Counts distinct fixed points (compared by doubled phases) reached by Newton
/// from `seeds` uniformly random starting phases.
[[nodiscard]] std::vector<Vector> multistart_census(const Vector& omega, double alpha,
                                                    const Graph& g, std::size_t seeds,
                                                    std::uint64_t seed, double distinct_tol);

/// Largest radius r along the direction `angle` (radians, measured from the
/// a-axis) for which a stable fixed point exists, tracking the primary branch
/// by continuation from the origin. Bisection to `tol`.
[[nodiscard]] double critical_radius(double angle, double alpha, const Graph& g,
                                     double tol = 1e-4, double r_max = 10.0);

/// Same search on the classical model with K = 1/(2 alpha), using the
/// classical Jacobian for stability.
[[nodiscard]] double classical_critical_radius(double angle, double alpha, const Graph& g,
                                               double tol = 1e-4, double r_max = 10.0);

}  // namespace hebbsync
