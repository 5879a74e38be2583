#pragma once

#include "hebbsync/graph.hpp"
#include "hebbsync/model.hpp"

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string_view>

namespace hebbsync {

inline constexpr double kDefaultZeroTol = 1e-9;

/// Signature (n+, n0, n-) of a symmetric matrix together with the relative
/// tolerance used to call an eigenvalue zero.
struct Inertia {
    std::size_t n_plus = 0;
    std::size_t n_zero = 0;
    std::size_t n_minus = 0;
    double zero_tol = kDefaultZeroTol;

    [[nodiscard]] std::size_t dimension() const noexcept { return n_plus + n_zero + n_minus; }

    /// Compares the counts only.
    friend bool operator==(const Inertia& a, const Inertia& b) noexcept {
        return a.n_plus == b.n_plus && a.n_zero == b.n_zero && a.n_minus == b.n_minus;
    }
};

[[nodiscard]] Inertia operator+(const Inertia& a, const Inertia& b) noexcept;

/// Jacobian of the sine model (mu = 1) at (theta, gamma), split as
///
///     [ A   B ]      A: N x N (theta-theta), B: N x E (theta-gamma),
///     [ B^T C ]      C: E x E = -alpha I.
struct BlockJacobian {
    Matrix A;
    Matrix B;
    Matrix C;

    [[nodiscard]] Matrix full() const;
};

[[nodiscard]] BlockJacobian assemble_jacobian(const Graph& g, double alpha, const Vector& theta,
                                              const Vector& gamma);

/// Actual linearization of the model for a general mu > 0, i.e.
/// diag(1,..,1, mu,..,mu) * S where S is the assembly with C = -(alpha/mu) I.
/// Not symmetric unless mu = 1.
[[nodiscard]] Matrix linearization(const Graph& g, const SystemParams& p, const HebbState& s);

/// A - B C^{-1} B^T evaluated from the blocks. C must be invertible.
[[nodiscard]] Matrix schur_complement(const Matrix& A, const Matrix& B, const Matrix& C);

/// Closed form of A + (1/alpha) B B^T at a fixed point of the sine model:
/// off-diagonal cos(2(theta_i - theta_j)) / alpha on edges, rows summing to zero.
[[nodiscard]] Matrix schur_reduced(const Graph& g, double alpha, const Vector& theta);

/// Reduced matrix for a generalized coupling: off-diagonal
/// -(f^2 + F f')(theta_i - theta_j) / alpha on edges, rows summing to zero.
[[nodiscard]] Matrix generalized_reduced_jacobian(const Graph& g, double alpha,
                                                  const Vector& theta, const Coupling& coupling);

/// Jacobian of the classical model with uniform coupling K.
[[nodiscard]] Matrix classical_jacobian(const Graph& g, double K, const Vector& theta);

/// Eigenvalue sign count of (M + M^T)/2. An eigenvalue is zero when
/// |lambda| <= zero_tol * max(1, max |lambda|).
/// Throws std::invalid_argument if M is not symmetric to 1e-12 (relative).
[[nodiscard]] Inertia inertia_direct(const Matrix& M, double zero_tol = kDefaultZeroTol);

/// Inertia of [A B; B^T C] as inertia(C) + inertia(A - B C^{-1} B^T).
/// Throws std::domain_error if C is numerically singular.
[[nodiscard]] Inertia inertia_haynsworth(const Matrix& A, const Matrix& B, const Matrix& C,
                                         double zero_tol = kDefaultZeroTol);

enum class Stability { Stable, Degenerate, Unstable };

[[nodiscard]] std::string_view to_string(Stability s) noexcept;

struct StabilityReport {
    Inertia reduced;    ///< N x N Schur-reduced matrix
    Inertia full;       ///< (N+E) x (N+E) Jacobian
    Inertia classical;  ///< classical Jacobian at 2 theta with K = 1/(2 alpha)
    Stability classification = Stability::Stable;
    std::size_t unstable_dimension = 0;
    /// Set when an eigenvalue sits close enough to the zero threshold that
    /// the counts could legitimately differ between the reduced and full
    /// matrices.
    bool near_threshold = false;
};

/// Raised when the full and reduced inertias violate the Schur additivity
/// relation with no eigenvalue near the zero threshold to explain it.
class InternalConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Stability of the sine-model fixed point with phases `theta` for
/// frequencies `omega`. Classification: degenerate if n0 > 1, otherwise
/// unstable if n+ >= 1, otherwise stable. Throws std::invalid_argument if
/// theta is not a fixed point (reduced residual above 1e-8).
[[nodiscard]] StabilityReport classify_stability(const Graph& g, double alpha,
                                                 const Vector& theta, const Vector& omega,
                                                 double zero_tol = kDefaultZeroTol);

/// Header for the per-fixed-point stability CSV.
void write_stability_header(std::ostream& out);
void write_stability_row(std::ostream& out, const StabilityReport& r);

}  // namespace hebbsync
