#pragma once

#include "hebbsync/graph.hpp"

#include <functional>
#include <variant>

namespace hebbsync {

/// Full dynamical state: phases (unwrapped, radians) and per-edge couplings in
/// canonical edge order.
struct HebbState {
    Vector theta;
    Vector gamma;
};

struct SineCoupling {};

/// General even periodic interaction potential F with f = F' and f' = f''.
/// The sine model is the special case F = -cos, f = sin, f' = cos.
struct GeneralizedCoupling {
    std::function<double(double)> F;
    std::function<double(double)> f;
    std::function<double(double)> f_prime;
};

using Coupling = std::variant<SineCoupling, GeneralizedCoupling>;

/// The sine interaction written in generalized form.
[[nodiscard]] GeneralizedCoupling sine_as_generalized();

/// Spot-checks f = F' and f' = f'' with central differences on a 32-point grid
/// over one period. Throws std::invalid_argument on mismatch above 1e-6.
void check_generalized_coupling(const GeneralizedCoupling& c);

/// Natural frequencies, damping, plasticity rate and interaction kind.
///
/// Frequencies are shifted to the co-rotating (mean-zero) frame on
/// construction; the removed mean is kept in omega_mean().
class SystemParams {
public:
    SystemParams(Vector omega, double alpha, double mu = 1.0, Coupling coupling = SineCoupling{});

    [[nodiscard]] const Vector& omega() const noexcept { return omega_; }
    [[nodiscard]] double omega_mean() const noexcept { return omega_mean_; }
    [[nodiscard]] double alpha() const noexcept { return alpha_; }
    [[nodiscard]] double mu() const noexcept { return mu_; }
    [[nodiscard]] const Coupling& coupling() const noexcept { return coupling_; }
    [[nodiscard]] bool is_sine() const noexcept {
        return std::holds_alternative<SineCoupling>(coupling_);
    }

private:
    Vector omega_;
    double omega_mean_;
    double alpha_;
    double mu_;
    Coupling coupling_;
};

/// Concatenated layout [theta; gamma] used by the integrators.
[[nodiscard]] Vector pack(const HebbState& s);
[[nodiscard]] HebbState unpack(const Graph& g, const Vector& x);

/// Evaluates the model right-hand side for the packed state `x` into `dx`.
/// Dispatches on the coupling kind. Does not allocate.
void evaluate_field(const Graph& g, const SystemParams& p, const Eigen::Ref<const Vector>& x,
                    Eigen::Ref<Vector> dx);

/// d theta_i = omega_i + sum_j gamma_ij sin(theta_j - theta_i)
/// d gamma_ij = mu cos(theta_i - theta_j) - alpha gamma_ij
/// The coupling kind of `p` is ignored; this is always the sine model.
[[nodiscard]] HebbState hebbian_vector_field(const Graph& g, const SystemParams& p,
                                             const HebbState& s);

/// Classical Kuramoto model with uniform fixed coupling K.
[[nodiscard]] Vector classical_vector_field(const Graph& g, const Vector& omega, double K,
                                            const Vector& theta);

/// d theta_i = omega_i - sum_j gamma_ij f(theta_i - theta_j)
/// d gamma_ij = -mu F(theta_i - theta_j) - alpha gamma_ij
/// Throws std::invalid_argument if `p` carries the sine coupling.
[[nodiscard]] HebbState generalized_vector_field(const Graph& g, const SystemParams& p,
                                                 const HebbState& s);

/// Right-hand side for whichever coupling `p` carries.
[[nodiscard]] HebbState vector_field(const Graph& g, const SystemParams& p, const HebbState& s);

/// Lyapunov function of the gradient flow:
///   H = -theta.omega - sum gamma cos(dtheta) + alpha/(2 mu) sum gamma^2   (sine)
///   H = -theta.omega + sum gamma F(dtheta) + alpha/(2 mu) sum gamma^2     (generalized)
/// so that theta' = -dH/dtheta and gamma' = -mu dH/dgamma.
[[nodiscard]] double lyapunov_energy(const Graph& g, const SystemParams& p, const HebbState& s);

/// Max pairwise difference of the raw phases.
[[nodiscard]] double phase_diameter(const Vector& theta);

/// l-infinity norm of the full vector field (theta and gamma parts).
[[nodiscard]] double residual_norm(const Graph& g, const SystemParams& p, const HebbState& s);

}  // namespace hebbsync
