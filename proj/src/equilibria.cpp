#include "hebbsync/equilibria.hpp"

#include "hebbsync/csv.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>

namespace hebbsync {

namespace {

const double kSqrt2 = std::sqrt(2.0);
const double kSqrt6 = std::sqrt(6.0);

void require_plane_graph(const Graph& g) {
    if (g.n_vertices() != 3) {
        throw std::invalid_argument("frequency-plane experiments need exactly three oscillators");
    }
}

void check_inputs(const Vector& theta, const Vector& omega, const Graph& g) {
    if (static_cast<std::size_t>(theta.size()) != g.n_vertices() ||
        static_cast<std::size_t>(omega.size()) != g.n_vertices()) {
        throw std::invalid_argument("phase/frequency length does not match graph");
    }
}

/// sum_j sin(2(theta_j - theta_i)) scaled by `scale`, plus `omega`.
/// With `doubling` = 1 this is the classical field.
Vector sine_sum(const Graph& g, const Vector& omega, const Vector& theta, double scale,
                double doubling) {
    Vector r = omega;
    for (const auto& e : g.edges()) {
        const auto i = static_cast<Eigen::Index>(e.i);
        const auto j = static_cast<Eigen::Index>(e.j);
        const double s = scale * std::sin(doubling * (theta(j) - theta(i)));
        r(i) += s;
        r(j) -= s;
    }
    return r;
}

struct NewtonOutcome {
    SolveStatus status;
    Vector theta;
    int iterations;
    double residual;
};

/// Gauge-fixed damped Newton for a residual whose Jacobian is symmetric with
/// the constant vector in its kernel. Solves the bordered system
/// [J 1; 1^T 0] [d; l] = [-r; 0].
template <typename Residual, typename Jacobian>
NewtonOutcome gauge_newton(const Graph& g, Vector theta, const NewtonOptions& opts,
                           Residual&& residual, Jacobian&& jacobian) {
    if (!g.is_connected()) {
        throw std::invalid_argument("fixed-point solver requires a connected graph");
    }
    const auto n = theta.size();
    theta.array() -= theta.mean();
    Vector r = residual(theta);
    double norm_inf = r.lpNorm<Eigen::Infinity>();
    Matrix bordered = Matrix::Zero(n + 1, n + 1);
    Vector rhs = Vector::Zero(n + 1);
    int it = 0;
    for (; it < opts.max_iterations && norm_inf >= opts.tolerance; ++it) {
        bordered.topLeftCorner(n, n) = jacobian(theta);
        bordered.col(n).head(n).setOnes();
        bordered.row(n).head(n).setOnes();
        rhs.head(n) = -r;
        Eigen::FullPivLU<Matrix> lu(bordered);
        if (!lu.isInvertible()) {
            return {SolveStatus::Degenerate, theta, it, norm_inf};
        }
        const Vector step = lu.solve(rhs).head(n);
        if (!step.allFinite()) {
            return {SolveStatus::Degenerate, theta, it, norm_inf};
        }
        const double norm2 = r.norm();
        double t = 1.0;
        Vector trial = theta + step;
        Vector r_trial = residual(trial);
        while (r_trial.norm() > (1.0 - 1e-4 * t) * norm2 && t > 1.0 / 1024.0) {
            t *= 0.5;
            trial = theta + t * step;
            r_trial = residual(trial);
        }
        theta = std::move(trial);
        theta.array() -= theta.mean();
        r = residual(theta);
        norm_inf = r.lpNorm<Eigen::Infinity>();
    }
    const auto status =
        norm_inf < opts.tolerance ? SolveStatus::Converged : SolveStatus::NoConvergence;
    return {status, theta, it, norm_inf};
}

void check_mean_zero(const Vector& omega) {
    const double scale = std::max(1.0, omega.lpNorm<Eigen::Infinity>());
    if (std::abs(omega.sum()) > 1e-9 * scale * static_cast<double>(omega.size())) {
        throw std::invalid_argument("frequencies must sum to zero (co-rotating frame)");
    }
}

}  // namespace

Vector frequency_from_plane(PlanePoint p) {
    Vector w(3);
    w << p.a / kSqrt2 + p.b / kSqrt6, -p.a / kSqrt2 + p.b / kSqrt6, -2.0 * p.b / kSqrt6;
    return w;
}

PlanePoint plane_from_frequency(const Vector& omega) {
    if (omega.size() != 3) {
        throw std::invalid_argument("plane_from_frequency needs a 3-vector");
    }
    return {(omega(0) - omega(1)) / kSqrt2, (omega(0) + omega(1) - 2.0 * omega(2)) / kSqrt6};
}

double GridAxis::at(std::size_t k) const {
    if (n == 1) return lo;
    return lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
}

GridAxis parse_grid_axis(std::string_view text) {
    const auto first = text.find(':');
    const auto second = first == std::string_view::npos ? first : text.find(':', first + 1);
    if (second == std::string_view::npos) {
        throw std::invalid_argument("grid axis must look like lo:hi:n, got '" + std::string(text) +
                                    "'");
    }
    auto number = [&](std::string_view s, auto& out) {
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        if (ec != std::errc{} || ptr != s.data() + s.size()) {
            throw std::invalid_argument("grid axis: cannot parse '" + std::string(s) + "'");
        }
    };
    GridAxis axis;
    number(text.substr(0, first), axis.lo);
    number(text.substr(first + 1, second - first - 1), axis.hi);
    number(text.substr(second + 1), axis.n);
    if (axis.n == 0 || !std::isfinite(axis.lo) || !std::isfinite(axis.hi) || axis.hi < axis.lo) {
        throw std::invalid_argument("grid axis: need finite lo <= hi and n >= 1");
    }
    return axis;
}

std::vector<PlanePoint> plane_grid(const GridAxis& a, const GridAxis& b) {
    std::vector<PlanePoint> pts;
    pts.reserve(a.n * b.n);
    for (std::size_t j = 0; j < b.n; ++j) {
        for (std::size_t i = 0; i < a.n; ++i) {
            pts.push_back({a.at(i), b.at(j)});
        }
    }
    return pts;
}

Vector reduced_residual(const Vector& theta, const Vector& omega, double alpha, const Graph& g) {
    check_inputs(theta, omega, g);
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    return sine_sum(g, omega, theta, 1.0 / (2.0 * alpha), 2.0);
}

Vector induced_frequency(const Vector& theta, double alpha, const Graph& g) {
    return -reduced_residual(theta, Vector::Zero(theta.size()), alpha, g);
}

Vector gamma_at_fixed_point(const Vector& theta, double alpha, const Graph& g) {
    if (static_cast<std::size_t>(theta.size()) != g.n_vertices()) {
        throw std::invalid_argument("theta length does not match graph");
    }
    Vector gamma(static_cast<Eigen::Index>(g.n_edges()));
    for (std::size_t k = 0; k < g.n_edges(); ++k) {
        const auto& e = g.edge(k);
        gamma(static_cast<Eigen::Index>(k)) =
            std::cos(theta(static_cast<Eigen::Index>(e.i)) - theta(static_cast<Eigen::Index>(e.j))) /
            alpha;
    }
    return gamma;
}

std::string_view to_string(SolveStatus s) noexcept {
    switch (s) {
        case SolveStatus::Converged: return "converged";
        case SolveStatus::NoConvergence: return "no-convergence";
        case SolveStatus::Degenerate: return "degenerate";
    }
    return "unknown";
}

namespace {

FixedPoint make_fixed_point(const Vector& theta, const Vector& omega, double alpha,
                            const Graph& g) {
    FixedPoint fp;
    fp.theta = theta;
    fp.gamma = gamma_at_fixed_point(theta, alpha, g);
    fp.omega = omega;
    fp.alpha = alpha;
    const SystemParams params(omega, alpha);
    fp.residual = residual_norm(g, params, fp.state());
    return fp;
}

}  // namespace

SolveResult solve_fixed_point(const Vector& omega, double alpha, const Graph& g,
                              const Vector& initial_guess, const NewtonOptions& opts) {
    check_inputs(initial_guess, omega, g);
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    check_mean_zero(omega);
    const double scale = 1.0 / (2.0 * alpha);
    auto outcome = gauge_newton(
        g, initial_guess, opts,
        [&](const Vector& th) { return sine_sum(g, omega, th, scale, 2.0); },
        [&](const Vector& th) { return schur_reduced(g, alpha, th); });
    SolveResult res;
    res.status = outcome.status;
    res.iterations = outcome.iterations;
    res.residual = outcome.residual;
    res.point = make_fixed_point(outcome.theta, omega, alpha, g);
    return res;
}

ClassicalSolveResult solve_classical_fixed_point(const Vector& omega, double K, const Graph& g,
                                                 const Vector& initial_guess,
                                                 const NewtonOptions& opts) {
    check_inputs(initial_guess, omega, g);
    check_mean_zero(omega);
    auto outcome = gauge_newton(
        g, initial_guess, opts,
        [&](const Vector& th) { return sine_sum(g, omega, th, K, 1.0); },
        [&](const Vector& th) { return classical_jacobian(g, K, th); });
    return {outcome.status, outcome.theta, outcome.iterations, outcome.residual};
}

FixedPoint lift_to_hebbian(const Vector& theta_classical, const Vector& omega, double alpha,
                           const Graph& g) {
    check_inputs(theta_classical, omega, g);
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    const double K = 1.0 / (2.0 * alpha);
    const double classical_res =
        classical_vector_field(g, omega, K, theta_classical).lpNorm<Eigen::Infinity>();
    if (!(classical_res < 1e-10)) {
        throw std::invalid_argument("lift_to_hebbian: input is not a classical fixed point");
    }
    Vector half = 0.5 * theta_classical;
    half.array() -= half.mean();
    return make_fixed_point(half, omega, alpha, g);
}

Vector double_to_classical(const FixedPoint& fp) { return 2.0 * fp.theta; }

bool exceeds_frequency_bound(const Vector& omega, double alpha, const Graph& g) {
    if (static_cast<std::size_t>(omega.size()) != g.n_vertices()) {
        throw std::invalid_argument("omega length does not match graph");
    }
    for (std::size_t v = 0; v < g.n_vertices(); ++v) {
        const double bound = static_cast<double>(g.degree(v)) / (2.0 * alpha);
        if (std::abs(omega(static_cast<Eigen::Index>(v))) > bound) return true;
    }
    return false;
}

double wrap_angle(double x) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double y = std::fmod(x, two_pi);
    if (y <= -std::numbers::pi) y += two_pi;
    if (y > std::numbers::pi) y -= two_pi;
    return y;
}

double aligned_phase_distance(const Vector& a, const Vector& b) {
    if (a.size() != b.size() || a.size() == 0) {
        throw std::invalid_argument("aligned_phase_distance: size mismatch");
    }
    double d = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        d = std::max(d, std::abs(wrap_angle((a(i) - a(0)) - (b(i) - b(0)))));
    }
    return d;
}

std::vector<Vector> multistart_census(const Vector& omega, double alpha, const Graph& g,
                                      std::size_t seeds, std::uint64_t seed,
                                      double distinct_tol) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    const NewtonOptions opts{100, 1e-12};
    std::vector<Vector> found;
    const auto n = static_cast<Eigen::Index>(g.n_vertices());
    for (std::size_t s = 0; s < seeds; ++s) {
        Vector guess(n);
        for (Eigen::Index i = 0; i < n; ++i) guess(i) = angle(rng);
        const auto res = solve_fixed_point(omega, alpha, g, guess, opts);
        if (!res.converged()) continue;
        const Vector doubled = 2.0 * res.point.theta;
        const bool seen = std::any_of(found.begin(), found.end(), [&](const Vector& f) {
            return aligned_phase_distance(2.0 * f, doubled) <= distinct_tol;
        });
        if (!seen) found.push_back(res.point.theta);
    }
    return found;
}

std::vector<SweepRecord> feasibility_sweep(const GridAxis& a, const GridAxis& b, double alpha,
                                           const Graph& g, const SweepOptions& opts) {
    require_plane_graph(g);
    const auto points = plane_grid(a, b);
    std::vector<SweepRecord> records(points.size());

    // Continuation pass: nearest-first from the origin.
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    auto key = [&](std::size_t k) {
        const auto& p = points[k];
        return std::make_tuple(p.a * p.a + p.b * p.b, std::atan2(p.b, p.a), k);
    };
    std::sort(order.begin(), order.end(),
              [&](std::size_t l, std::size_t r) { return key(l) < key(r); });

    std::vector<std::size_t> stable_solved;
    const Vector zero = Vector::Zero(3);
    for (const std::size_t k : order) {
        auto& rec = records[k];
        rec.point = points[k];
        const Vector omega = frequency_from_plane(rec.point);
        if (exceeds_frequency_bound(omega, alpha, g)) {
            rec.newton_residual = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        const Vector* seed = &zero;
        double best = std::numeric_limits<double>::infinity();
        for (const std::size_t s : stable_solved) {
            const double da = points[s].a - rec.point.a;
            const double db = points[s].b - rec.point.b;
            const double d = da * da + db * db;
            if (d < best) {
                best = d;
                seed = &records[s].theta;
            }
        }
        auto res = solve_fixed_point(omega, alpha, g, *seed);
        if (!res.converged() && seed != &zero) {
            auto retry = solve_fixed_point(omega, alpha, g, zero);
            if (retry.converged() || retry.residual < res.residual) res = std::move(retry);
        }
        rec.newton_residual = res.residual;
        if (!res.converged()) continue;
        rec.feasible = true;
        rec.theta = res.point.theta;
        try {
            const auto report = classify_stability(g, alpha, rec.theta, omega);
            rec.reduced = report.reduced;
            rec.stable = report.classification == Stability::Stable;
        } catch (const InternalConsistencyError&) {
            rec.stable = false;
        }
        if (rec.stable) stable_solved.push_back(k);
    }

    if (opts.multistart_seeds > 0) {
        const unsigned workers =
            opts.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opts.threads;
        std::atomic<std::size_t> next{0};
        auto work = [&] {
            for (std::size_t k = next++; k < records.size(); k = next++) {
                auto& rec = records[k];
                const Vector omega = frequency_from_plane(rec.point);
                if (exceeds_frequency_bound(omega, alpha, g)) {
                    rec.branches_found = 0;
                    continue;
                }
                std::seed_seq seq{static_cast<std::uint32_t>(opts.seed),
                                  static_cast<std::uint32_t>(opts.seed >> 32),
                                  static_cast<std::uint32_t>(k)};
                std::uint64_t point_seed = 0;
                std::array<std::uint32_t, 2> words{};
                seq.generate(words.begin(), words.end());
                point_seed = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
                auto found = multistart_census(omega, alpha, g, opts.multistart_seeds, point_seed,
                                               opts.distinct_tol);
                if (rec.feasible) {
                    const Vector doubled = 2.0 * rec.theta;
                    const bool seen = std::any_of(found.begin(), found.end(), [&](const Vector& f) {
                        return aligned_phase_distance(2.0 * f, doubled) <= opts.distinct_tol;
                    });
                    if (!seen) found.push_back(rec.theta);
                }
                rec.branches_found = static_cast<long long>(found.size());
            }
        };
        std::vector<std::thread> pool;
        for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
        work();
        for (auto& t : pool) t.join();
    }
    return records;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
    out << "a,b,feasible,stable,n_plus,n_zero,n_minus,branches_found,newton_residual\n";
    csv::Writer w(out);
    for (const auto& r : records) {
        w.field(r.point.a).field(r.point.b).field(r.feasible).field(r.stable);
        if (r.reduced) {
            w.field(r.reduced->n_plus).field(r.reduced->n_zero).field(r.reduced->n_minus);
        } else {
            w.field(-1).field(-1).field(-1);
        }
        w.field(r.branches_found).field(r.newton_residual);
        w.end_row();
    }
}

namespace {

/// Walks outward along a ray with continuation, then bisects the last
/// bracket. `step_ok(omega, seed, out)` must return true when a stable
/// solution is found from `seed`, storing it in `out`.
template <typename StableStep>
double ray_search(double angle, double tol, double r_max, StableStep&& step_ok) {
    const double ca = std::cos(angle);
    const double sa = std::sin(angle);
    auto omega_at = [&](double r) { return frequency_from_plane({r * ca, r * sa}); };

    Vector theta = Vector::Zero(3);
    Vector next;
    if (!step_ok(omega_at(0.0), theta, next)) {
        throw std::runtime_error("critical radius: origin has no stable solution");
    }
    theta = next;
    constexpr double march = 0.05;
    double lo = 0.0;
    double hi = r_max;
    for (double r = march; r <= r_max; r += march) {
        if (!step_ok(omega_at(r), theta, next)) {
            hi = r;
            break;
        }
        lo = r;
        theta = next;
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (step_ok(omega_at(mid), theta, next)) {
            lo = mid;
            theta = next;
        } else {
            hi = mid;
        }
    }
    return lo;
}

}  // namespace

double critical_radius(double angle, double alpha, const Graph& g, double tol, double r_max) {
    require_plane_graph(g);
    return ray_search(angle, tol, r_max, [&](const Vector& omega, const Vector& seed, Vector& out) {
        if (exceeds_frequency_bound(omega, alpha, g)) return false;
        const auto res = solve_fixed_point(omega, alpha, g, seed);
        if (!res.converged()) return false;
        const auto report = classify_stability(g, alpha, res.point.theta, omega);
        if (report.classification != Stability::Stable) return false;
        out = res.point.theta;
        return true;
    });
}

double classical_critical_radius(double angle, double alpha, const Graph& g, double tol,
                                 double r_max) {
    require_plane_graph(g);
    const double K = 1.0 / (2.0 * alpha);
    return ray_search(angle, tol, r_max, [&](const Vector& omega, const Vector& seed, Vector& out) {
        const auto res = solve_classical_fixed_point(omega, K, g, seed);
        if (!res.converged()) return false;
        const auto in = inertia_direct(classical_jacobian(g, K, res.theta));
        if (in.n_plus != 0 || in.n_zero != 1) return false;
        out = res.theta;
        return true;
    });
}

}  // namespace hebbsync
