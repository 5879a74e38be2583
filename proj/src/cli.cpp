#include "hebbsync/cli.hpp"

#include "hebbsync/csv.hpp"
#include "hebbsync/dynamics.hpp"
#include "hebbsync/equilibria.hpp"
#include "hebbsync/experiments.hpp"
#include "hebbsync/graph.hpp"
#include "hebbsync/model.hpp"
#include "hebbsync/spectral.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace hebbsync::cli {

namespace {

namespace fs = std::filesystem;

Vector broadcast(const std::vector<double>& values, std::size_t n, std::string_view name) {
    if (values.size() == 1) {
        return Vector::Constant(static_cast<Eigen::Index>(n), values.front());
    }
    if (values.size() != n) {
        throw std::invalid_argument(std::string(name) + " needs 1 or " + std::to_string(n) +
                                    " values, got " + std::to_string(values.size()));
    }
    return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(n));
}

Vector resolve_omega(const RunConfig& cfg, const Graph& g) {
    if (!cfg.omega.empty() && !cfg.plane.empty()) {
        throw std::invalid_argument("give either --omega or --plane, not both");
    }
    if (!cfg.omega.empty()) {
        if (cfg.omega.size() != g.n_vertices()) {
            throw std::invalid_argument("--omega length does not match the graph");
        }
        return Eigen::Map<const Vector>(cfg.omega.data(), static_cast<Eigen::Index>(g.n_vertices()));
    }
    if (!cfg.plane.empty()) {
        if (cfg.plane.size() != 2 || g.n_vertices() != 3) {
            throw std::invalid_argument("--plane takes a,b and needs a three-vertex graph");
        }
        return frequency_from_plane({cfg.plane[0], cfg.plane[1]});
    }
    return Vector::Zero(static_cast<Eigen::Index>(g.n_vertices()));
}

IntegratorConfig resolve_integrator(const RunConfig& cfg) {
    IntegratorConfig ic;
    ic.method = parse_integration_method(cfg.method);
    ic.step = cfg.step;
    ic.t_end = cfg.t_end;
    ic.sample_every = cfg.sample_every;
    ic.validate();
    return ic;
}

void check_alpha(const RunConfig& cfg) {
    if (!(cfg.alpha > 0.0)) throw std::invalid_argument("--alpha must be positive");
    if (!(cfg.mu > 0.0)) throw std::invalid_argument("--mu must be positive");
}

fs::path prepare_out(const RunConfig& cfg) {
    const fs::path dir(cfg.out);
    fs::create_directories(dir);
    std::ofstream manifest(dir / "manifest.txt");
    if (!manifest) {
        throw std::invalid_argument("cannot write to output directory " + cfg.out);
    }
    write_manifest(manifest, cfg);
    return dir;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path.string());
    return f;
}

std::string join(const std::vector<double>& values) {
    std::string s;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (k) s += ',';
        s += csv::format(values[k]);
    }
    return s;
}

std::string describe(const Vector& v) {
    std::string s = "(";
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        if (k) s += ", ";
        s += csv::format(v(k));
    }
    return s + ")";
}

}  // namespace

void write_manifest(std::ostream& out, const RunConfig& cfg) {
    out << "# hebbsync run manifest\n";
    out << "# version: " << kVersion << '\n';
    out << "# command: " << cfg.command << '\n';
    out << "graph = \"" << cfg.graph << "\"\n";
    out << "alpha = " << csv::format(cfg.alpha) << '\n';
    out << "mu = " << csv::format(cfg.mu) << '\n';
    if (!cfg.omega.empty()) out << "omega = " << join(cfg.omega) << '\n';
    if (!cfg.plane.empty()) out << "plane = " << join(cfg.plane) << '\n';
    out << "theta0 = " << join(cfg.theta0) << '\n';
    out << "gamma0 = " << join(cfg.gamma0) << '\n';
    out << "method = \"" << cfg.method << "\"\n";
    out << "step = " << csv::format(cfg.step) << '\n';
    out << "t-end = " << csv::format(cfg.t_end) << '\n';
    out << "sample-every = " << cfg.sample_every << '\n';
    out << "threshold = " << csv::format(cfg.threshold) << '\n';
    out << "tail-fraction = " << csv::format(cfg.tail_fraction) << '\n';
    out << "a-range = \"" << cfg.a_range << "\"\n";
    out << "b-range = \"" << cfg.b_range << "\"\n";
    out << "multistart = " << cfg.multistart << '\n';
    out << "threads = " << cfg.threads << '\n';
    out << "count = " << cfg.count << '\n';
    out << "seed = " << cfg.seed << '\n';
    out << "out = \"" << cfg.out << "\"\n";
}

int cmd_simulate(const RunConfig& cfg, std::ostream& log, std::ostream&) {
    check_alpha(cfg);
    const Graph g = parse_graph_spec(cfg.graph);
    const SystemParams p(resolve_omega(cfg, g), cfg.alpha, cfg.mu);
    const HebbState s0{broadcast(cfg.theta0, g.n_vertices(), "theta0"),
                       broadcast(cfg.gamma0, g.n_edges(), "gamma0")};
    const IntegratorConfig ic = resolve_integrator(cfg);
    if (!(cfg.threshold > 0.0)) throw std::invalid_argument("--threshold must be positive");
    const auto dir = prepare_out(cfg);

    const Trajectory traj = integrate(g, p, s0, ic);
    {
        auto f = open_out(dir / "trajectory.csv");
        write_trajectory_csv(f, traj);
    }
    const double terminal = traj.diagnostics.back().residual;
    const bool locked = terminal < cfg.threshold;

    auto summary = open_out(dir / "summary.txt");
    summary << "locked = " << (locked ? "true" : "false") << '\n';
    summary << "terminal_residual = " << csv::format(terminal) << '\n';
    summary << "threshold = " << csv::format(cfg.threshold) << '\n';
    summary << "t_end = " << csv::format(traj.times.back()) << '\n';
    summary << "samples = " << traj.size() << '\n';
    summary << "omega_mean = " << csv::format(p.omega_mean()) << '\n';
    if (traj.size() >= 2) {
        const auto sync = synchrony_report(traj, cfg.tail_fraction);
        summary << "window_start = " << csv::format(sync.window_start) << '\n';
        for (const auto& pv : sync.pairs) {
            summary << "phase_variation_" << pv.i << '_' << pv.j << " = "
                    << csv::format(pv.variation) << '\n';
        }
        for (const auto& eo : sync.edges) {
            summary << "gamma_peak_to_peak_" << eo.edge << " = " << csv::format(eo.peak_to_peak)
                    << '\n';
            summary << "gamma_mean_" << eo.edge << " = " << csv::format(eo.mean) << '\n';
        }
    }
    log << "simulate: " << (locked ? "locked" : "not locked")
        << ", terminal residual " << csv::format(terminal) << '\n';
    return kSuccess;
}

int cmd_lock_scan(const RunConfig& cfg, std::ostream& log, std::ostream&) {
    check_alpha(cfg);
    if (cfg.graph != "complete:3") {
        throw std::invalid_argument("lock-scan runs on complete:3 only");
    }
    if (cfg.gamma0.size() != 1 || cfg.theta0.size() != 1) {
        throw std::invalid_argument("lock-scan takes scalar theta0 and gamma0");
    }
    LockScanSettings s;
    s.alpha = cfg.alpha;
    s.mu = cfg.mu;
    s.theta0 = cfg.theta0.front();
    s.gamma0 = cfg.gamma0.front();
    s.threshold = cfg.threshold;
    s.integrator = resolve_integrator(cfg);
    s.threads = cfg.threads;
    const auto a = parse_grid_axis(cfg.a_range);
    const auto b = parse_grid_axis(cfg.b_range);
    const auto dir = prepare_out(cfg);

    const auto records = lock_scan(a, b, s);
    auto f = open_out(dir / "lock_scan.csv");
    write_lock_scan_csv(f, records, s.gamma0);
    const auto locked = std::count_if(records.begin(), records.end(),
                                      [](const LockScanRecord& r) { return r.locked; });
    log << "lock-scan: " << locked << " of " << records.size() << " points locked\n";
    return kSuccess;
}

int cmd_feasibility(const RunConfig& cfg, std::ostream& log, std::ostream&) {
    check_alpha(cfg);
    const Graph g = parse_graph_spec(cfg.graph);
    const auto a = parse_grid_axis(cfg.a_range);
    const auto b = parse_grid_axis(cfg.b_range);
    SweepOptions opts;
    opts.multistart_seeds = cfg.multistart;
    opts.seed = cfg.seed;
    opts.threads = cfg.threads;
    if (g.n_vertices() != 3) {
        throw std::invalid_argument("feasibility sweeps need a three-vertex graph");
    }
    const auto dir = prepare_out(cfg);

    const auto records = feasibility_sweep(a, b, cfg.alpha, g, opts);
    auto f = open_out(dir / "feasibility.csv");
    write_sweep_csv(f, records);
    const auto stable = std::count_if(records.begin(), records.end(),
                                      [](const SweepRecord& r) { return r.stable; });
    log << "feasibility: " << stable << " of " << records.size() << " points stable\n";
    return kSuccess;
}

int cmd_stability(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
    check_alpha(cfg);
    const Graph g = parse_graph_spec(cfg.graph);
    const Vector omega = resolve_omega(cfg, g);
    const Vector guess = broadcast(cfg.theta0, g.n_vertices(), "theta0");
    const auto dir = prepare_out(cfg);

    std::vector<Vector> solutions;
    const auto primary = solve_fixed_point(omega, cfg.alpha, g, guess);
    if (primary.converged()) solutions.push_back(primary.point.theta);
    if (cfg.multistart > 0) {
        for (auto& th : multistart_census(omega, cfg.alpha, g, cfg.multistart, cfg.seed, 1e-6)) {
            const Vector doubled = 2.0 * th;
            const bool seen = std::any_of(solutions.begin(), solutions.end(), [&](const Vector& s) {
                return aligned_phase_distance(2.0 * s, doubled) <= 1e-6;
            });
            if (!seen) solutions.push_back(std::move(th));
        }
    }

    auto stab = open_out(dir / "stability.csv");
    write_stability_header(stab);
    auto fps = open_out(dir / "fixed_points.csv");
    {
        csv::Writer w(fps);
        w.field("branch");
        for (std::size_t i = 0; i < g.n_vertices(); ++i) w.field("theta_" + std::to_string(i));
        for (std::size_t k = 0; k < g.n_edges(); ++k) w.field("gamma_" + std::to_string(k));
        w.field("residual");
        w.end_row();
    }
    for (std::size_t s = 0; s < solutions.size(); ++s) {
        const auto report = classify_stability(g, cfg.alpha, solutions[s], omega);
        write_stability_row(stab, report);
        const Vector gamma = gamma_at_fixed_point(solutions[s], cfg.alpha, g);
        const Vector r = reduced_residual(solutions[s], omega, cfg.alpha, g);
        csv::Writer w(fps);
        w.field(s);
        for (Eigen::Index i = 0; i < solutions[s].size(); ++i) w.field(solutions[s](i));
        for (Eigen::Index k = 0; k < gamma.size(); ++k) w.field(gamma(k));
        w.field(r.lpNorm<Eigen::Infinity>());
        w.end_row();
        log << "fixed point " << s << ": " << to_string(report.classification)
            << " (n+ = " << report.reduced.n_plus << ", n0 = " << report.reduced.n_zero << ")\n";
    }
    if (solutions.empty()) {
        err << "stability: no fixed point found (" << to_string(primary.status)
            << ", residual " << csv::format(primary.residual) << ")\n";
        return kNumericFailure;
    }
    return kSuccess;
}

int cmd_theorem_check(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
    check_alpha(cfg);
    const Graph g = parse_graph_spec(cfg.graph);
    const auto dir = prepare_out(cfg);

    const auto cases = theorem_battery(g, cfg.alpha, cfg.count, cfg.seed);
    auto f = open_out(dir / "theorem_check.csv");
    write_theorem_csv(f, cases);
    std::size_t failed = 0;
    for (const auto& c : cases) {
        if (!c.passed) {
            ++failed;
            err << "theorem-check: mismatch at theta = " << describe(c.theta) << '\n';
        }
    }
    log << "theorem-check: " << cases.size() - failed << " of " << cases.size() << " passed\n";
    return failed == 0 ? kSuccess : kVerificationFailure;
}

int run(int argc, const char* const* argv, std::ostream& log, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Kuramoto oscillators with Hebbian adaptive coupling"};
    app.fallthrough();
    app.set_version_flag("--version", std::string(kVersion));
    app.set_config("--config", "", "Read options from a key = value file");
    app.allow_config_extras(CLI::config_extras_mode::error);

    app.add_option("--graph", cfg.graph, "complete:N, path:N, cycle:N or an edge-list file")
        ->capture_default_str();
    app.add_option("--alpha", cfg.alpha, "Coupling damping")->capture_default_str();
    app.add_option("--mu", cfg.mu, "Plasticity rate")->capture_default_str();
    app.add_option("--omega", cfg.omega, "Natural frequencies, comma separated")->delimiter(',');
    app.add_option("--plane", cfg.plane, "Frequency-plane point a,b (three oscillators)")
        ->delimiter(',');
    app.add_option("--theta0", cfg.theta0, "Initial phases (scalar or per vertex)")
        ->delimiter(',');
    app.add_option("--gamma0", cfg.gamma0, "Initial couplings (scalar or per edge)")
        ->delimiter(',');
    app.add_option("--method", cfg.method, "rk4 or rk45")->capture_default_str();
    app.add_option("--step", cfg.step, "Integrator step")->capture_default_str();
    app.add_option("--t-end", cfg.t_end, "Final time")->capture_default_str();
    app.add_option("--sample-every", cfg.sample_every, "Record every k-th step")
        ->capture_default_str();
    app.add_option("--threshold", cfg.threshold, "Lock threshold on the terminal residual")
        ->capture_default_str();
    app.add_option("--tail-fraction", cfg.tail_fraction, "Trailing window for synchrony summary")
        ->capture_default_str();
    app.add_option("--a-range", cfg.a_range, "Grid axis lo:hi:n")->capture_default_str();
    app.add_option("--b-range", cfg.b_range, "Grid axis lo:hi:n")->capture_default_str();
    app.add_option("--multistart", cfg.multistart, "Random seeds per point for branch census")
        ->capture_default_str();
    app.add_option("--threads", cfg.threads, "Worker threads (0 = all cores)")
        ->capture_default_str();
    app.add_option("--count", cfg.count, "Random fixed points for theorem-check")
        ->capture_default_str();
    app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    app.add_option("--out", cfg.out, "Output directory")->capture_default_str();

    struct Sub {
        const char* name;
        const char* help;
        int (*fn)(const RunConfig&, std::ostream&, std::ostream&);
    };
    const Sub subs[] = {
        {"simulate", "Integrate one configuration and write its trajectory", cmd_simulate},
        {"lock-scan", "Terminal residual over the frequency plane", cmd_lock_scan},
        {"feasibility", "Fixed-point existence and stability over the frequency plane",
         cmd_feasibility},
        {"stability", "Solve for a fixed point and classify it", cmd_stability},
        {"theorem-check", "Compare Hebbian and classical stability at random fixed points",
         cmd_theorem_check},
    };
    for (const auto& s : subs) app.add_subcommand(s.name, s.help);
    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        std::ostringstream o;
        app.exit(e, o, err);
        log << o.str();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        std::ostringstream o;
        app.exit(e, o, err);
        log << o.str();
        return kConfigError;
    }

    for (const auto& s : subs) {
        if (app.got_subcommand(s.name)) {
            cfg.command = s.name;
            try {
                return s.fn(cfg, log, err);
            } catch (const IntegrationDiverged& e) {
                err << cfg.command << ": " << e.what() << '\n';
                return kNumericFailure;
            } catch (const std::invalid_argument& e) {
                err << cfg.command << ": " << e.what() << '\n';
                return kConfigError;
            } catch (const std::filesystem::filesystem_error& e) {
                err << cfg.command << ": " << e.what() << '\n';
                return kConfigError;
            } catch (const std::exception& e) {
                err << cfg.command << ": " << e.what() << '\n';
                return kNumericFailure;
            }
        }
    }
    return kConfigError;
}

}  // namespace hebbsync::cli
