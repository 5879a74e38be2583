#include "hebbsync/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hebbsync {

namespace {

void check_shapes(const Graph& g, const Vector& theta, const Vector& gamma) {
    if (static_cast<std::size_t>(theta.size()) != g.n_vertices() ||
        static_cast<std::size_t>(gamma.size()) != g.n_edges()) {
        throw std::invalid_argument("state shape does not match graph");
    }
}

void check_shapes(const Graph& g, const SystemParams& p, const HebbState& s) {
    check_shapes(g, s.theta, s.gamma);
    if (static_cast<std::size_t>(p.omega().size()) != g.n_vertices()) {
        throw std::invalid_argument("omega length does not match graph");
    }
}

void sine_field(const Graph& g, const SystemParams& p, const Eigen::Ref<const Vector>& x,
                Eigen::Ref<Vector> dx) {
    const auto n = static_cast<Eigen::Index>(g.n_vertices());
    const double alpha = p.alpha();
    const double mu = p.mu();
    dx.head(n) = p.omega();
    const auto edges = g.edges();
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const auto i = static_cast<Eigen::Index>(edges[k].i);
        const auto j = static_cast<Eigen::Index>(edges[k].j);
        const auto ek = n + static_cast<Eigen::Index>(k);
        const double gamma = x(ek);
        const double diff = x(i) - x(j);
        const double s = std::sin(diff);
        dx(i) -= gamma * s;
        dx(j) += gamma * s;
        dx(ek) = mu * std::cos(diff) - alpha * gamma;
    }
}

void generalized_field(const Graph& g, const SystemParams& p, const GeneralizedCoupling& c,
                       const Eigen::Ref<const Vector>& x, Eigen::Ref<Vector> dx) {
    const auto n = static_cast<Eigen::Index>(g.n_vertices());
    const double alpha = p.alpha();
    const double mu = p.mu();
    dx.head(n) = p.omega();
    const auto edges = g.edges();
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const auto i = static_cast<Eigen::Index>(edges[k].i);
        const auto j = static_cast<Eigen::Index>(edges[k].j);
        const auto ek = n + static_cast<Eigen::Index>(k);
        const double gamma = x(ek);
        const double diff = x(i) - x(j);
        dx(i) -= gamma * c.f(diff);
        dx(j) -= gamma * c.f(-diff);
        dx(ek) = -mu * c.F(diff) - alpha * gamma;
    }
}

}  // namespace

GeneralizedCoupling sine_as_generalized() {
    return {[](double x) { return -std::cos(x); }, [](double x) { return std::sin(x); },
            [](double x) { return std::cos(x); }};
}

void check_generalized_coupling(const GeneralizedCoupling& c) {
    if (!c.F || !c.f || !c.f_prime) {
        throw std::invalid_argument("generalized coupling requires F, f and f'");
    }
    constexpr int points = 32;
    constexpr double h = 1e-5;
    constexpr double tol = 1e-6;
    for (int k = 0; k < points; ++k) {
        const double x = 2.0 * std::numbers::pi * k / points;
        const double dF = (c.F(x + h) - c.F(x - h)) / (2.0 * h);
        const double df = (c.f(x + h) - c.f(x - h)) / (2.0 * h);
        if (std::abs(dF - c.f(x)) > tol) {
            throw std::invalid_argument("generalized coupling: f does not match F' at x = " +
                                        std::to_string(x));
        }
        if (std::abs(df - c.f_prime(x)) > tol) {
            throw std::invalid_argument("generalized coupling: f' does not match f' at x = " +
                                        std::to_string(x));
        }
    }
}

SystemParams::SystemParams(Vector omega, double alpha, double mu, Coupling coupling)
    : omega_(std::move(omega)), omega_mean_(0.0), alpha_(alpha), mu_(mu),
      coupling_(std::move(coupling)) {
    if (!(alpha_ > 0.0) || !std::isfinite(alpha_)) {
        throw std::invalid_argument("alpha must be positive");
    }
    if (!(mu_ > 0.0) || !std::isfinite(mu_)) {
        throw std::invalid_argument("mu must be positive");
    }
    if (omega_.size() == 0 || !omega_.allFinite()) {
        throw std::invalid_argument("omega must be a non-empty finite vector");
    }
    omega_mean_ = omega_.mean();
    omega_.array() -= omega_mean_;
    if (const auto* gen = std::get_if<GeneralizedCoupling>(&coupling_)) {
        check_generalized_coupling(*gen);
    }
}

Vector pack(const HebbState& s) {
    Vector x(s.theta.size() + s.gamma.size());
    x << s.theta, s.gamma;
    return x;
}

HebbState unpack(const Graph& g, const Vector& x) {
    const auto n = static_cast<Eigen::Index>(g.n_vertices());
    const auto e = static_cast<Eigen::Index>(g.n_edges());
    if (x.size() != n + e) {
        throw std::invalid_argument("packed state length does not match graph");
    }
    return {x.head(n), x.tail(e)};
}

void evaluate_field(const Graph& g, const SystemParams& p, const Eigen::Ref<const Vector>& x,
                    Eigen::Ref<Vector> dx) {
    if (const auto* gen = std::get_if<GeneralizedCoupling>(&p.coupling())) {
        generalized_field(g, p, *gen, x, dx);
    } else {
        sine_field(g, p, x, dx);
    }
}

HebbState hebbian_vector_field(const Graph& g, const SystemParams& p, const HebbState& s) {
    check_shapes(g, p, s);
    const Vector x = pack(s);
    Vector dx(x.size());
    sine_field(g, p, x, dx);
    return unpack(g, dx);
}

Vector classical_vector_field(const Graph& g, const Vector& omega, double K,
                              const Vector& theta) {
    const auto n = static_cast<std::size_t>(g.n_vertices());
    if (static_cast<std::size_t>(omega.size()) != n ||
        static_cast<std::size_t>(theta.size()) != n) {
        throw std::invalid_argument("classical_vector_field: shape mismatch");
    }
    Vector d = omega;
    for (const auto& e : g.edges()) {
        const auto i = static_cast<Eigen::Index>(e.i);
        const auto j = static_cast<Eigen::Index>(e.j);
        const double s = K * std::sin(theta(j) - theta(i));
        d(i) += s;
        d(j) -= s;
    }
    return d;
}

HebbState generalized_vector_field(const Graph& g, const SystemParams& p, const HebbState& s) {
    const auto* gen = std::get_if<GeneralizedCoupling>(&p.coupling());
    if (gen == nullptr) {
        throw std::invalid_argument(
            "generalized_vector_field requires a generalized coupling; use hebbian_vector_field");
    }
    check_shapes(g, p, s);
    const Vector x = pack(s);
    Vector dx(x.size());
    generalized_field(g, p, *gen, x, dx);
    return unpack(g, dx);
}

HebbState vector_field(const Graph& g, const SystemParams& p, const HebbState& s) {
    check_shapes(g, p, s);
    const Vector x = pack(s);
    Vector dx(x.size());
    evaluate_field(g, p, x, dx);
    return unpack(g, dx);
}

double lyapunov_energy(const Graph& g, const SystemParams& p, const HebbState& s) {
    check_shapes(g, p, s);
    const auto* gen = std::get_if<GeneralizedCoupling>(&p.coupling());
    double h = -s.theta.dot(p.omega());
    for (std::size_t k = 0; k < g.n_edges(); ++k) {
        const auto& e = g.edge(k);
        const double diff = s.theta(static_cast<Eigen::Index>(e.i)) -
                            s.theta(static_cast<Eigen::Index>(e.j));
        const double gamma = s.gamma(static_cast<Eigen::Index>(k));
        h += gen != nullptr ? gamma * gen->F(diff) : -gamma * std::cos(diff);
    }
    h += p.alpha() / (2.0 * p.mu()) * s.gamma.squaredNorm();
    return h;
}

double phase_diameter(const Vector& theta) {
    if (theta.size() == 0) {
        throw std::invalid_argument("phase_diameter: empty phase vector");
    }
    return theta.maxCoeff() - theta.minCoeff();
}

double residual_norm(const Graph& g, const SystemParams& p, const HebbState& s) {
    check_shapes(g, p, s);
    const Vector x = pack(s);
    Vector dx(x.size());
    evaluate_field(g, p, x, dx);
    return dx.lpNorm<Eigen::Infinity>();
}

}  // namespace hebbsync
