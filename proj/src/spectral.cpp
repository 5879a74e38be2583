#include "hebbsync/spectral.hpp"

#include "hebbsync/csv.hpp"
#include "hebbsync/equilibria.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace hebbsync {

Inertia operator+(const Inertia& a, const Inertia& b) noexcept {
    return {a.n_plus + b.n_plus, a.n_zero + b.n_zero, a.n_minus + b.n_minus, a.zero_tol};
}

Matrix BlockJacobian::full() const {
    const auto n = A.rows();
    const auto e = C.rows();
    Matrix j(n + e, n + e);
    j.topLeftCorner(n, n) = A;
    j.topRightCorner(n, e) = B;
    j.bottomLeftCorner(e, n) = B.transpose();
    j.bottomRightCorner(e, e) = C;
    return j;
}

namespace {

void check_theta(const Graph& g, const Vector& theta) {
    if (static_cast<std::size_t>(theta.size()) != g.n_vertices()) {
        throw std::invalid_argument("theta length does not match graph");
    }
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0)) {
        throw std::invalid_argument("alpha must be positive");
    }
}

/// Symmetric N x N matrix with the given per-edge off-diagonal values and
/// each diagonal entry the negated off-diagonal row sum.
Matrix zero_row_sum_matrix(const Graph& g, const Vector& off_diagonal) {
    return -laplacian_from_weights(g, off_diagonal);
}

Vector symmetric_eigenvalues(const Matrix& M) {
    if (M.size() == 0) return Vector();
    const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
    const double asym = (M - M.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale) {
        throw std::invalid_argument("inertia: matrix is not symmetric");
    }
    const Matrix sym = 0.5 * (M + M.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("inertia: symmetric eigensolver failed");
    }
    return solver.eigenvalues();
}

double zero_threshold(const Vector& eigenvalues, double zero_tol) {
    const double radius = eigenvalues.size() == 0 ? 0.0 : eigenvalues.cwiseAbs().maxCoeff();
    return zero_tol * std::max(1.0, radius);
}

Inertia count_signs(const Vector& eigenvalues, double zero_tol) {
    const double cut = zero_threshold(eigenvalues, zero_tol);
    Inertia in{0, 0, 0, zero_tol};
    for (const double lambda : eigenvalues) {
        if (std::abs(lambda) <= cut) {
            ++in.n_zero;
        } else if (lambda > 0.0) {
            ++in.n_plus;
        } else {
            ++in.n_minus;
        }
    }
    return in;
}

bool has_eigenvalue_near_threshold(const Vector& eigenvalues, double zero_tol) {
    const double cut = zero_threshold(eigenvalues, zero_tol);
    return std::any_of(eigenvalues.begin(), eigenvalues.end(), [&](double lambda) {
        const double a = std::abs(lambda);
        return a > 1e-3 * cut && a < 1e3 * cut;
    });
}

}  // namespace

BlockJacobian assemble_jacobian(const Graph& g, double alpha, const Vector& theta,
                                const Vector& gamma) {
    check_theta(g, theta);
    check_alpha(alpha);
    if (static_cast<std::size_t>(gamma.size()) != g.n_edges()) {
        throw std::invalid_argument("gamma length does not match graph");
    }
    const auto e = static_cast<Eigen::Index>(g.n_edges());
    Vector a_weights(e);
    Vector b_weights(e);
    for (Eigen::Index k = 0; k < e; ++k) {
        const auto& edge = g.edge(static_cast<std::size_t>(k));
        const double diff = theta(static_cast<Eigen::Index>(edge.i)) -
                            theta(static_cast<Eigen::Index>(edge.j));
        a_weights(k) = gamma(k) * std::cos(diff);
        b_weights(k) = std::sin(diff);
    }
    return {zero_row_sum_matrix(g, a_weights), incidence_matrix(g, b_weights),
            -alpha * Matrix::Identity(e, e)};
}

Matrix linearization(const Graph& g, const SystemParams& p, const HebbState& s) {
    // Symmetric part is the negative Hessian of the energy, whose gamma block
    // carries alpha / mu.
    Matrix j = assemble_jacobian(g, p.alpha() / p.mu(), s.theta, s.gamma).full();
    const auto n = static_cast<Eigen::Index>(g.n_vertices());
    j.bottomRows(j.rows() - n) *= p.mu();
    return j;
}

Matrix schur_complement(const Matrix& A, const Matrix& B, const Matrix& C) {
    if (A.rows() != A.cols() || C.rows() != C.cols() || B.rows() != A.rows() ||
        B.cols() != C.rows()) {
        throw std::invalid_argument("schur_complement: block shapes are inconsistent");
    }
    Eigen::FullPivLU<Matrix> lu(C);
    if (!lu.isInvertible()) {
        throw std::domain_error("schur_complement: C is singular");
    }
    const Matrix s = A - B * lu.solve(B.transpose());
    return 0.5 * (s + s.transpose());
}

Matrix schur_reduced(const Graph& g, double alpha, const Vector& theta) {
    check_theta(g, theta);
    check_alpha(alpha);
    const auto e = static_cast<Eigen::Index>(g.n_edges());
    Vector w(e);
    for (Eigen::Index k = 0; k < e; ++k) {
        const auto& edge = g.edge(static_cast<std::size_t>(k));
        const double diff = theta(static_cast<Eigen::Index>(edge.i)) -
                            theta(static_cast<Eigen::Index>(edge.j));
        w(k) = std::cos(2.0 * diff) / alpha;
    }
    return zero_row_sum_matrix(g, w);
}

Matrix generalized_reduced_jacobian(const Graph& g, double alpha, const Vector& theta,
                                    const Coupling& coupling) {
    const auto* c = std::get_if<GeneralizedCoupling>(&coupling);
    if (c == nullptr) {
        throw std::invalid_argument(
            "generalized_reduced_jacobian requires a generalized coupling; use schur_reduced");
    }
    check_theta(g, theta);
    check_alpha(alpha);
    const auto e = static_cast<Eigen::Index>(g.n_edges());
    Vector w(e);
    for (Eigen::Index k = 0; k < e; ++k) {
        const auto& edge = g.edge(static_cast<std::size_t>(k));
        const double diff = theta(static_cast<Eigen::Index>(edge.i)) -
                            theta(static_cast<Eigen::Index>(edge.j));
        const double f = c->f(diff);
        w(k) = -(f * f + c->F(diff) * c->f_prime(diff)) / alpha;
    }
    return zero_row_sum_matrix(g, w);
}

Matrix classical_jacobian(const Graph& g, double K, const Vector& theta) {
    check_theta(g, theta);
    const auto e = static_cast<Eigen::Index>(g.n_edges());
    Vector w(e);
    for (Eigen::Index k = 0; k < e; ++k) {
        const auto& edge = g.edge(static_cast<std::size_t>(k));
        w(k) = K * std::cos(theta(static_cast<Eigen::Index>(edge.j)) -
                            theta(static_cast<Eigen::Index>(edge.i)));
    }
    return zero_row_sum_matrix(g, w);
}

Inertia inertia_direct(const Matrix& M, double zero_tol) {
    if (M.rows() != M.cols()) {
        throw std::invalid_argument("inertia: matrix is not square");
    }
    if (!(zero_tol > 0.0)) {
        throw std::invalid_argument("inertia: zero tolerance must be positive");
    }
    return count_signs(symmetric_eigenvalues(M), zero_tol);
}

Inertia inertia_haynsworth(const Matrix& A, const Matrix& B, const Matrix& C, double zero_tol) {
    if (A.rows() != A.cols() || C.rows() != C.cols() || B.rows() != A.rows() ||
        B.cols() != C.rows()) {
        throw std::invalid_argument("inertia_haynsworth: block shapes are inconsistent");
    }
    const Vector c_eigen = symmetric_eigenvalues(C);
    const Inertia c_inertia = count_signs(c_eigen, zero_tol);
    if (c_inertia.n_zero != 0) {
        throw std::domain_error("inertia_haynsworth: C is numerically singular");
    }
    return c_inertia + inertia_direct(schur_complement(A, B, C), zero_tol);
}

std::string_view to_string(Stability s) noexcept {
    switch (s) {
        case Stability::Stable: return "stable";
        case Stability::Degenerate: return "degenerate";
        case Stability::Unstable: return "unstable";
    }
    return "unknown";
}

StabilityReport classify_stability(const Graph& g, double alpha, const Vector& theta,
                                   const Vector& omega, double zero_tol) {
    check_theta(g, theta);
    check_alpha(alpha);
    if (reduced_residual(theta, omega, alpha, g).lpNorm<Eigen::Infinity>() >= 1e-8) {
        throw std::invalid_argument("classify_stability: theta is not a fixed point for omega");
    }

    const Vector reduced_eigen = symmetric_eigenvalues(schur_reduced(g, alpha, theta));
    const Vector gamma = gamma_at_fixed_point(theta, alpha, g);
    const Vector full_eigen = symmetric_eigenvalues(assemble_jacobian(g, alpha, theta, gamma).full());
    const Vector classical_eigen =
        symmetric_eigenvalues(classical_jacobian(g, 1.0 / (2.0 * alpha), 2.0 * theta));

    StabilityReport r;
    r.reduced = count_signs(reduced_eigen, zero_tol);
    r.full = count_signs(full_eigen, zero_tol);
    r.classical = count_signs(classical_eigen, zero_tol);
    r.near_threshold = has_eigenvalue_near_threshold(reduced_eigen, zero_tol) ||
                       has_eigenvalue_near_threshold(full_eigen, zero_tol);

    const bool additive = r.full.n_plus == r.reduced.n_plus &&
                          r.full.n_minus == r.reduced.n_minus + g.n_edges();
    if (!additive && !r.near_threshold) {
        throw InternalConsistencyError(
            "classify_stability: full and reduced inertia violate Schur additivity");
    }

    if (r.reduced.n_zero > 1) {
        r.classification = Stability::Degenerate;
    } else if (r.reduced.n_plus >= 1) {
        r.classification = Stability::Unstable;
    } else {
        r.classification = Stability::Stable;
    }
    r.unstable_dimension = r.reduced.n_plus;
    return r;
}

void write_stability_header(std::ostream& out) {
    out << "n_plus_reduced,n_zero_reduced,n_minus_reduced,n_plus_full,n_zero_full,n_minus_full,"
           "classification\n";
}

void write_stability_row(std::ostream& out, const StabilityReport& r) {
    csv::Writer w(out);
    w.field(r.reduced.n_plus).field(r.reduced.n_zero).field(r.reduced.n_minus);
    w.field(r.full.n_plus).field(r.full.n_zero).field(r.full.n_minus);
    w.field(to_string(r.classification));
    w.end_row();
}

}  // namespace hebbsync
