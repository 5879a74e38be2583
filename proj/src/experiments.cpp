#include "hebbsync/experiments.hpp"

#include "hebbsync/csv.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <thread>

namespace hebbsync {

std::vector<LockScanRecord> lock_scan(const GridAxis& a, const GridAxis& b,
                                      const LockScanSettings& settings) {
    const Graph g = complete_graph(3);
    const auto points = plane_grid(a, b);
    std::vector<LockScanRecord> records(points.size());
    const HebbState s0{Vector::Constant(3, settings.theta0),
                       Vector::Constant(static_cast<Eigen::Index>(g.n_edges()), settings.gamma0)};

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k = next++; k < points.size(); k = next++) {
            auto& rec = records[k];
            rec.point = points[k];
            const SystemParams p(frequency_from_plane(rec.point), settings.alpha, settings.mu);
            try {
                const auto report = detect_phase_lock(g, p, s0, settings.integrator.t_end,
                                                      settings.threshold, settings.integrator);
                rec.terminal_residual = report.terminal_residual;
                rec.locked = report.locked;
            } catch (const IntegrationDiverged&) {
                rec.terminal_residual = std::numeric_limits<double>::quiet_NaN();
                rec.locked = false;
            }
        }
    };
    const unsigned workers = settings.threads == 0
                                 ? std::max(1u, std::thread::hardware_concurrency())
                                 : settings.threads;
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    return records;
}

void write_lock_scan_csv(std::ostream& out, const std::vector<LockScanRecord>& records,
                         double gamma0) {
    out << "a,b,gamma0,terminal_residual,locked\n";
    csv::Writer w(out);
    for (const auto& r : records) {
        w.field(r.point.a).field(r.point.b).field(gamma0).field(r.terminal_residual).field(r.locked);
        w.end_row();
    }
}

bool theorem_relation_holds(const StabilityReport& r, std::size_t n_edges) noexcept {
    return r.full.n_plus == r.classical.n_plus && r.full.n_zero == r.classical.n_zero &&
           r.full.n_minus == r.classical.n_minus + n_edges;
}

std::vector<TheoremCase> theorem_battery(const Graph& g, double alpha, std::size_t count,
                                         std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    const auto n = static_cast<Eigen::Index>(g.n_vertices());
    std::vector<TheoremCase> cases;
    cases.reserve(count);
    for (std::size_t c = 0; c < count; ++c) {
        TheoremCase tc;
        tc.theta = Vector(n);
        for (Eigen::Index i = 0; i < n; ++i) tc.theta(i) = angle(rng);
        tc.theta.array() -= tc.theta.mean();
        tc.omega = induced_frequency(tc.theta, alpha, g);
        try {
            tc.report = classify_stability(g, alpha, tc.theta, tc.omega);
            tc.passed = theorem_relation_holds(tc.report, g.n_edges());
        } catch (const InternalConsistencyError&) {
            tc.passed = false;
        }
        cases.push_back(std::move(tc));
    }
    return cases;
}

void write_theorem_csv(std::ostream& out, const std::vector<TheoremCase>& cases) {
    out << "case,n_plus_full,n_zero_full,n_minus_full,n_plus_classical,n_zero_classical,"
           "n_minus_classical,passed\n";
    csv::Writer w(out);
    for (std::size_t c = 0; c < cases.size(); ++c) {
        const auto& r = cases[c].report;
        w.field(c);
        w.field(r.full.n_plus).field(r.full.n_zero).field(r.full.n_minus);
        w.field(r.classical.n_plus).field(r.classical.n_zero).field(r.classical.n_minus);
        w.field(cases[c].passed);
        w.end_row();
    }
}

}  // namespace hebbsync
