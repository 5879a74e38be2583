#include "helpers.hpp"

#include "hebbsync/csv.hpp"
#include "hebbsync/dynamics.hpp"
#include "hebbsync/equilibria.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

using namespace hebbsync;

namespace {

Vector two_cluster_omega() {
    Vector w(3);
    w << 3.0, 3.0, -6.0;
    return w / std::sqrt(6.0);
}

Vector locking_omega() {
    Vector w(3);
    w << -1.0, -0.5, 1.5;
    return w;
}

HebbState k3_start(double gamma0) { return {Vector::Zero(3), Vector::Constant(3, gamma0)}; }

double state_distance(const HebbState& a, const HebbState& b) {
    return std::max((a.theta - b.theta).lpNorm<Eigen::Infinity>(),
                    (a.gamma - b.gamma).lpNorm<Eigen::Infinity>());
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("integrator configuration") {
    CHECK(parse_integration_method("rk4") == IntegrationMethod::RK4);
    CHECK(parse_integration_method("rk45") == IntegrationMethod::RK45);
    CHECK(to_string(IntegrationMethod::RK45) == "rk45");
    CHECK_THROWS_AS((void)parse_integration_method("euler"), std::invalid_argument);

    IntegratorConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.step = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.t_end = -1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.sample_every = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("trajectory layout") {
    const Graph k3 = complete_graph(3);
    const SystemParams p(locking_omega(), 0.3);
    IntegratorConfig cfg;
    cfg.t_end = 1.0;
    cfg.step = 0.03;  // not a divisor of t_end
    cfg.sample_every = 4;
    const Trajectory tr = integrate(k3, p, k3_start(1.0), cfg);
    REQUIRE(tr.size() >= 2);
    CHECK(tr.times.front() == 0.0);
    CHECK(tr.times.back() == 1.0);
    CHECK(tr.states.size() == tr.size());
    CHECK(tr.diagnostics.size() == tr.size());
    for (std::size_t k = 1; k < tr.size(); ++k) CHECK(tr.times[k] > tr.times[k - 1]);
    // ceil(1/0.03) = 34 steps, every 4th plus the endpoints.
    CHECK(tr.size() == 1 + 8 + 1);

    cfg.t_end = 0.0;
    const Trajectory single = integrate(k3, p, k3_start(1.0), cfg);
    REQUIRE(single.size() == 1);
    CHECK(single.times[0] == 0.0);
    CHECK(single.diagnostics[0].residual == residual_norm(k3, p, k3_start(1.0)));

    CHECK_THROWS_AS((void)integrate(k3, p, {Vector::Zero(2), Vector::Ones(3)}, {}),
                    std::invalid_argument);
}

TEST_CASE("fixed points are invariant") {
    const Graph k3 = complete_graph(3);
    Vector w(3);
    w << 0.2, -0.2, 0.0;
    const auto sol = solve_fixed_point(w, 0.3, k3, Vector::Zero(3));
    REQUIRE(sol.converged());
    const SystemParams p(w, 0.3);
    for (auto method : {IntegrationMethod::RK4, IntegrationMethod::RK45}) {
        IntegratorConfig cfg;
        cfg.method = method;
        cfg.t_end = 20.0;
        const Trajectory tr = integrate(k3, p, sol.point.state(), cfg);
        for (const auto& s : tr.states) CHECK(state_distance(s, sol.point.state()) < 1e-8);
        // Adaptive steps grow until the fast mode sits at the stability
        // boundary, so the RK45 residual is only bounded by its tolerances.
        const double bound = method == IntegrationMethod::RK4 ? 1e-8 : 1e-7;
        CHECK(tr.diagnostics.back().residual < bound);
    }
}

TEST_CASE("two-cluster run does not lock") {
    const Graph k3 = complete_graph(3);
    const SystemParams p(two_cluster_omega(), 0.3);
    const LockReport r = detect_phase_lock(k3, p, k3_start(1.0));
    CHECK_FALSE(r.locked);
    CHECK(r.terminal_residual > 0.1);
    CHECK(std::abs(r.terminal_state.theta(0) - r.terminal_state.theta(1)) < 0.01);
    CHECK(r.threshold == kDefaultLockThreshold);
}

TEST_CASE("phase-locking run converges") {
    const Graph k3 = complete_graph(3);
    const SystemParams p(locking_omega(), 0.3);
    const LockReport r = detect_phase_lock(k3, p, k3_start(1.0));
    CHECK(r.locked);
    CHECK(r.terminal_residual < 1e-6);
    CHECK(r.locked == (r.terminal_residual < r.threshold));
}

TEST_CASE("integration is deterministic") {
    const Graph k3 = complete_graph(3);
    const SystemParams p(two_cluster_omega(), 0.3);
    for (auto method : {IntegrationMethod::RK4, IntegrationMethod::RK45}) {
        IntegratorConfig cfg;
        cfg.method = method;
        cfg.t_end = 10.0;
        const Trajectory a = integrate(k3, p, k3_start(1.0), cfg);
        const Trajectory b = integrate(k3, p, k3_start(1.0), cfg);
        REQUIRE(a.size() == b.size());
        for (std::size_t k = 0; k < a.size(); ++k) {
            CHECK(a.times[k] == b.times[k]);
            CHECK(a.states[k].theta == b.states[k].theta);
            CHECK(a.states[k].gamma == b.states[k].gamma);
        }
        CHECK(integrate_final(k3, p, k3_start(1.0), cfg).theta == a.states.back().theta);
    }
}

TEST_CASE("RK4 is fourth order") {
    // The run is measured before it settles onto the fixed point, where the
    // global error would otherwise decay to rounding level.
    const Graph k3 = complete_graph(3);
    const SystemParams p(locking_omega(), 0.3);
    auto final_at = [&](double h) {
        IntegratorConfig cfg;
        cfg.step = h;
        cfg.t_end = 5.0;
        return integrate_final(k3, p, k3_start(1.0), cfg);
    };
    const HebbState ref = final_at(1e-2 / 8);
    const double e1 = state_distance(final_at(1e-2), ref);
    const double e2 = state_distance(final_at(5e-3), ref);
    const double ratio = e1 / e2;
    CHECK(ratio >= 8.0);
    CHECK(ratio <= 32.0);
}

TEST_CASE("energy never increases along trajectories") {
    std::mt19937_64 rng(4);
    const Graph k3 = complete_graph(3);
    const Graph k4 = complete_graph(4);
    for (int trial = 0; trial < 20; ++trial) {
        const Graph& g = trial % 2 == 0 ? k3 : k4;
        const auto n = static_cast<Eigen::Index>(g.n_vertices());
        const SystemParams p(test::uniform_vector(n, -2, 2, rng), 0.3);
        const HebbState s0{test::uniform_vector(n, -3, 3, rng),
                           test::uniform_vector(static_cast<Eigen::Index>(g.n_edges()), 0, 3, rng)};
        IntegratorConfig cfg;
        cfg.step = 1e-3;
        cfg.t_end = 5.0;
        const Trajectory tr = integrate(g, p, s0, cfg);
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 1; k < tr.size(); ++k)
            worst = std::max(worst, tr.diagnostics[k].energy - tr.diagnostics[k - 1].energy);
        CHECK(worst <= 1e-9);
    }
}

TEST_CASE("identical oscillators lock from a narrow arc") {
    std::mt19937_64 rng(12);
    const double alpha = 0.3;
    for (std::size_t n : {3u, 5u}) {
        const Graph g = complete_graph(n);
        const SystemParams p(Vector::Zero(static_cast<Eigen::Index>(n)), alpha);
        const HebbState s0{
            test::uniform_vector(static_cast<Eigen::Index>(n), 0, std::numbers::pi / 4, rng),
            Vector::Constant(static_cast<Eigen::Index>(g.n_edges()), 1 / alpha)};
        const LockReport r = detect_phase_lock(g, p, s0);
        CHECK(r.locked);
        CHECK(phase_diameter(r.terminal_state.theta) < 1e-6);
    }
}

TEST_CASE("synchrony_report") {
    Trajectory flat;
    for (int k = 0; k < 6; ++k) {
        flat.times.push_back(k);
        flat.states.push_back({Vector::Constant(3, 0.5), Vector::Constant(3, 2.0)});
        flat.diagnostics.push_back({});
    }
    const SynchronyReport fr = synchrony_report(flat);
    CHECK(fr.pairs.size() == 3);
    CHECK(fr.edges.size() == 3);
    CHECK(fr.window_samples == 2);
    CHECK(fr.window_start == 4.0);
    for (const auto& pv : fr.pairs) CHECK(pv.variation == 0.0);
    for (const auto& eo : fr.edges) {
        CHECK(eo.peak_to_peak == 0.0);
        CHECK(eo.mean == 2.0);
    }

    Trajectory ramp = flat;
    for (int k = 0; k < 6; ++k) ramp.states[k].theta(2) = 0.5 + k;
    const SynchronyReport rr = synchrony_report(ramp, 0.5);
    CHECK(rr.window_samples == 3);
    CHECK(rr.pairs[0].variation == 0.0);
    CHECK(rr.pairs[1].variation == 2.0);
    CHECK(rr.pairs[2].variation == 2.0);

    Trajectory one;
    one.times = {0.0};
    one.states = {flat.states[0]};
    one.diagnostics = {{}};
    CHECK_THROWS_AS((void)synchrony_report(one), std::invalid_argument);
    CHECK_THROWS_AS((void)synchrony_report(flat, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)synchrony_report(flat, 1.5), std::invalid_argument);
}

TEST_CASE("coupling oscillation pattern in the two-cluster run") {
    const Graph k3 = complete_graph(3);
    const SystemParams p(two_cluster_omega(), 0.3);
    IntegratorConfig rk4;
    IntegratorConfig rk45;
    rk45.method = IntegrationMethod::RK45;
    for (const auto& cfg : {rk4, rk45}) {
        const SynchronyReport r = synchrony_report(integrate(k3, p, k3_start(1.0), cfg));
        REQUIRE(r.edges.size() == 3);
        CHECK(r.edges[0].peak_to_peak < 0.05);
        CHECK(r.edges[1].peak_to_peak > 0.2);
        CHECK(r.edges[2].peak_to_peak > 0.2);
        // Values read off the computed trajectory.
        CHECK(r.edges[0].peak_to_peak < 1e-5);
        CHECK(r.edges[1].peak_to_peak == doctest::Approx(0.591).epsilon(0.01));
        CHECK(r.pairs[0].variation < 1e-6);
    }
}

TEST_CASE("coupling settles in the phase-locking run") {
    const Graph k3 = complete_graph(3);
    const SystemParams p(locking_omega(), 0.3);
    const SynchronyReport r = synchrony_report(integrate(k3, p, k3_start(1.0), {}));
    for (const auto& e : r.edges) CHECK(e.peak_to_peak < 1e-4);
}

TEST_CASE("divergence is reported") {
    // Explicit RK4 far outside its stability region on the stiff gamma decay.
    const Graph k3 = complete_graph(3);
    const SystemParams p(locking_omega(), 1e4);
    IntegratorConfig cfg;
    cfg.t_end = 10.0;
    try {
        (void)integrate(k3, p, k3_start(1.0), cfg);
        FAIL("expected divergence");
    } catch (const IntegrationDiverged& e) {
        CHECK(e.last_good_time() > 0.0);
        CHECK(e.last_good_time() < 10.0);
    }
    cfg.method = IntegrationMethod::RK45;
    CHECK(integrate_final(k3, p, k3_start(1.0), cfg).theta.allFinite());
}

TEST_CASE("trajectory CSV schema") {
    const Graph k3 = complete_graph(3);
    const SystemParams p(locking_omega(), 0.3);
    IntegratorConfig cfg;
    cfg.t_end = 0.05;
    const Trajectory tr = integrate(k3, p, k3_start(1.0), cfg);
    std::stringstream ss;
    write_trajectory_csv(ss, tr);
    const csv::Table t = csv::read(ss);
    CHECK(t.header == std::vector<std::string>{"t", "theta_0", "theta_1", "theta_2", "gamma_0",
                                               "gamma_1", "gamma_2", "diameter", "residual",
                                               "energy"});
    REQUIRE(t.rows.size() == tr.size());
    for (std::size_t k = 0; k < tr.size(); ++k) {
        CHECK(csv::to_double(t.rows[k][0]) == tr.times[k]);
        CHECK(csv::to_double(t.rows[k][4]) == tr.states[k].gamma(0));
        CHECK(csv::to_double(t.rows[k][9]) == tr.diagnostics[k].energy);
    }
}

}  // TEST_SUITE
