#include "hebbsync/dynamics.hpp"

#include "hebbsync/csv.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

namespace hebbsync {

std::string_view to_string(IntegrationMethod m) noexcept {
    switch (m) {
        case IntegrationMethod::RK4: return "rk4";
        case IntegrationMethod::RK45: return "rk45";
    }
    return "unknown";
}

IntegrationMethod parse_integration_method(std::string_view name) {
    if (name == "rk4") return IntegrationMethod::RK4;
    if (name == "rk45") return IntegrationMethod::RK45;
    throw std::invalid_argument("unknown integration method: " + std::string(name));
}

void IntegratorConfig::validate() const {
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw std::invalid_argument("integrator step must be positive");
    }
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
        throw std::invalid_argument("t_end must be finite and non-negative");
    }
    if (sample_every < 1) {
        throw std::invalid_argument("sample_every must be at least 1");
    }
    if (method == IntegrationMethod::RK45 && (!(abs_tol > 0.0) || !(rel_tol > 0.0))) {
        throw std::invalid_argument("adaptive tolerances must be positive");
    }
}

IntegrationDiverged::IntegrationDiverged(double last_good_time)
    : std::runtime_error("integration diverged after t = " + std::to_string(last_good_time)),
      last_good_time_(last_good_time) {}

namespace {

/// Receives (t, x) for every recorded sample.
template <typename Sink>
void run_rk4(const Graph& g, const SystemParams& p, Vector x, const IntegratorConfig& cfg,
             Sink&& sink) {
    sink(0.0, x);
    if (cfg.t_end == 0.0) return;

    const double ratio = cfg.t_end / cfg.step;
    const double nearest = std::round(ratio);
    const auto steps = static_cast<long long>(
        std::max(1.0, std::abs(ratio - nearest) < 1e-9 * std::max(1.0, ratio) ? nearest
                                                                               : std::ceil(ratio)));
    const double h = cfg.t_end / static_cast<double>(steps);

    const auto dim = x.size();
    Vector k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    for (long long n = 1; n <= steps; ++n) {
        evaluate_field(g, p, x, k1);
        tmp.noalias() = x + (0.5 * h) * k1;
        evaluate_field(g, p, tmp, k2);
        tmp.noalias() = x + (0.5 * h) * k2;
        evaluate_field(g, p, tmp, k3);
        tmp.noalias() = x + h * k3;
        evaluate_field(g, p, tmp, k4);
        tmp.noalias() = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!tmp.allFinite()) {
            throw IntegrationDiverged(static_cast<double>(n - 1) * h);
        }
        x.swap(tmp);
        const bool last = n == steps;
        if (last || n % static_cast<long long>(cfg.sample_every) == 0) {
            sink(last ? cfg.t_end : static_cast<double>(n) * h, x);
        }
    }
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

template <typename Sink>
void run_rk45(const Graph& g, const SystemParams& p, Vector x, const IntegratorConfig& cfg,
              Sink&& sink) {
    sink(0.0, x);
    if (cfg.t_end == 0.0) return;

    const auto dim = x.size();
    Vector k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim), tmp(dim), y(dim),
        err(dim);
    double t = 0.0;
    double h = std::min(cfg.step, cfg.t_end);
    std::size_t accepted = 0;
    evaluate_field(g, p, x, k1);
    while (t < cfg.t_end) {
        const bool final_step = t + h >= cfg.t_end;
        if (final_step) h = cfg.t_end - t;

        tmp.noalias() = x + h * a21 * k1;
        evaluate_field(g, p, tmp, k2);
        tmp.noalias() = x + h * (a31 * k1 + a32 * k2);
        evaluate_field(g, p, tmp, k3);
        tmp.noalias() = x + h * (a41 * k1 + a42 * k2 + a43 * k3);
        evaluate_field(g, p, tmp, k4);
        tmp.noalias() = x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        evaluate_field(g, p, tmp, k5);
        tmp.noalias() = x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        evaluate_field(g, p, tmp, k6);
        y.noalias() = x + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        evaluate_field(g, p, y, k7);
        err.noalias() = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double err_norm = 0.0;
        for (Eigen::Index i = 0; i < dim; ++i) {
            const double scale =
                cfg.abs_tol + cfg.rel_tol * std::max(std::abs(x(i)), std::abs(y(i)));
            err_norm = std::max(err_norm, std::abs(err(i)) / scale);
        }
        if (!std::isfinite(err_norm) || !y.allFinite()) {
            throw IntegrationDiverged(t);
        }

        if (err_norm <= 1.0) {
            t = final_step ? cfg.t_end : t + h;
            x.swap(y);
            k1.swap(k7);  // first-same-as-last
            ++accepted;
            if (final_step || accepted % cfg.sample_every == 0) {
                sink(t, x);
            }
        }
        const double factor =
            err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
        h *= factor;
        if (h < 1e-14 * std::max(1.0, t)) {
            throw IntegrationDiverged(t);
        }
    }
}

template <typename Sink>
void run(const Graph& g, const SystemParams& p, const HebbState& s0, const IntegratorConfig& cfg,
         Sink&& sink) {
    cfg.validate();
    if (static_cast<std::size_t>(s0.theta.size()) != g.n_vertices() ||
        static_cast<std::size_t>(s0.gamma.size()) != g.n_edges() ||
        static_cast<std::size_t>(p.omega().size()) != g.n_vertices()) {
        throw std::invalid_argument("initial state shape does not match graph");
    }
    Vector x = pack(s0);
    if (!x.allFinite()) {
        throw std::invalid_argument("initial state is not finite");
    }
    if (cfg.method == IntegrationMethod::RK4) {
        run_rk4(g, p, std::move(x), cfg, sink);
    } else {
        run_rk45(g, p, std::move(x), cfg, sink);
    }
}

}  // namespace

Trajectory integrate(const Graph& g, const SystemParams& p, const HebbState& s0,
                     const IntegratorConfig& cfg) {
    Trajectory traj;
    Vector dx(static_cast<Eigen::Index>(g.n_vertices() + g.n_edges()));
    run(g, p, s0, cfg, [&](double t, const Vector& x) {
        HebbState s = unpack(g, x);
        evaluate_field(g, p, x, dx);
        traj.times.push_back(t);
        traj.diagnostics.push_back(
            {phase_diameter(s.theta), dx.lpNorm<Eigen::Infinity>(), lyapunov_energy(g, p, s)});
        traj.states.push_back(std::move(s));
    });
    return traj;
}

HebbState integrate_final(const Graph& g, const SystemParams& p, const HebbState& s0,
                          const IntegratorConfig& cfg) {
    IntegratorConfig quiet = cfg;
    quiet.sample_every = std::numeric_limits<std::size_t>::max();
    Vector last;
    run(g, p, s0, quiet, [&](double, const Vector& x) { last = x; });
    return unpack(g, last);
}

LockReport detect_phase_lock(const Graph& g, const SystemParams& p, const HebbState& s0,
                             double t_end, double threshold, IntegratorConfig base) {
    if (!(threshold > 0.0)) {
        throw std::invalid_argument("lock threshold must be positive");
    }
    base.t_end = t_end;
    LockReport report;
    report.terminal_state = integrate_final(g, p, s0, base);
    report.terminal_residual = residual_norm(g, p, report.terminal_state);
    report.threshold = threshold;
    report.locked = report.terminal_residual < threshold;
    return report;
}

SynchronyReport synchrony_report(const Trajectory& traj, double tail_fraction) {
    if (traj.size() < 2) {
        throw std::invalid_argument("synchrony_report needs at least two samples");
    }
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
        throw std::invalid_argument("tail_fraction must lie in (0, 1]");
    }
    const std::size_t total = traj.size();
    const auto wanted = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(total)));
    const std::size_t window = std::clamp<std::size_t>(wanted, 2, total);
    const std::size_t first = total - window;

    SynchronyReport report;
    report.window_start = traj.times[first];
    report.window_samples = window;

    const auto n = static_cast<std::size_t>(traj.states.front().theta.size());
    const auto e = static_cast<std::size_t>(traj.states.front().gamma.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            for (std::size_t s = first; s < total; ++s) {
                const auto& th = traj.states[s].theta;
                const double d = th(static_cast<Eigen::Index>(i)) - th(static_cast<Eigen::Index>(j));
                lo = std::min(lo, d);
                hi = std::max(hi, d);
            }
            report.pairs.push_back({i, j, hi - lo});
        }
    }
    for (std::size_t k = 0; k < e; ++k) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        double sum = 0.0;
        for (std::size_t s = first; s < total; ++s) {
            const double v = traj.states[s].gamma(static_cast<Eigen::Index>(k));
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            sum += v;
        }
        report.edges.push_back({k, hi - lo, sum / static_cast<double>(window)});
    }
    return report;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    csv::Writer w(out);
    const auto n = traj.states.empty() ? 0 : traj.states.front().theta.size();
    const auto e = traj.states.empty() ? 0 : traj.states.front().gamma.size();
    w.field("t");
    for (Eigen::Index i = 0; i < n; ++i) w.field("theta_" + std::to_string(i));
    for (Eigen::Index k = 0; k < e; ++k) w.field("gamma_" + std::to_string(k));
    w.field("diameter").field("residual").field("energy");
    w.end_row();
    for (std::size_t s = 0; s < traj.size(); ++s) {
        w.field(traj.times[s]);
        for (Eigen::Index i = 0; i < n; ++i) w.field(traj.states[s].theta(i));
        for (Eigen::Index k = 0; k < e; ++k) w.field(traj.states[s].gamma(k));
        const auto& d = traj.diagnostics[s];
        w.field(d.diameter).field(d.residual).field(d.energy);
        w.end_row();
    }
}

}  // namespace hebbsync
