#pragma once

// Convergence studies, energy experiments and timing benchmarks, plus their
// CSV emitters. Floats are written with 17 significant digits.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "kgs/errors.hpp"
#include "kgs/integrator.hpp"
#include "kgs/reference.hpp"
#include "kgs/run_config.hpp"
#include "kgs/scenarios.hpp"

namespace kgs {

// ---------------------------------------------------------------------------
// Error norms on coincident nodes

/// Index on a grid refined `factor` times of the node with the same coordinates
/// as coarse index i.
inline std::size_t coincident_index(const GridSpec& coarse, const GridSpec& fine, std::size_t i, std::size_t factor)
{
    std::size_t out = 0;
    for (int axis = 0; axis < coarse.dim(); ++axis)
        out += coarse.coord(i, axis) * factor * fine.stride(axis);
    return out;
}

struct SolutionError {
    double u = 0.0;   // ||U_c - U_f||_h
    double psi = 0.0; // max(||P_c - P_f||_h, ||Q_c - Q_f||_h)
};

/// Discrete L2 differences on the coarse grid's nodes, coarse h.
inline SolutionError coincident_error(const FieldState& coarse_state, const GridSpec& coarse,
                                      const FieldState& fine_state, const GridSpec& fine)
{
    const std::size_t factor = fine.n() / coarse.n();
    if (factor * coarse.n() != fine.n() || fine.dim() != coarse.dim())
        throw ContractViolation("fine grid does not refine the coarse grid by an integer factor");
    double su = 0.0, sp = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        const std::size_t f = coincident_index(coarse, fine, i, factor);
        const double du = coarse_state.u[i] - fine_state.u[f];
        const double dp = coarse_state.p[i] - fine_state.p[f];
        const double dq = coarse_state.q[i] - fine_state.q[f];
        su += du * du;
        sp += dp * dp;
        sq += dq * dq;
    }
    const double w = coarse.cell_volume();
    return {std::sqrt(w * su), std::sqrt(w * std::max(sp, sq))};
}

inline double convergence_order(double coarse_error, double fine_error) { return std::log2(coarse_error / fine_error); }

// ---------------------------------------------------------------------------
// Convergence

struct ConvergenceRow {
    std::size_t level;
    std::size_t n;
    double h;
    double tau;
    SolutionError self;      // vs the next finer DP-AVF2 level
    SolutionError reference; // vs RK4 on the finest tested grid
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    bool has_reference = false;
    double reference_tau = 0.0;
    double reference_drift = 0.0;

    double self_order_u(std::size_t k) const { return convergence_order(rows[k - 1].self.u, rows[k].self.u); }
    double self_order_psi(std::size_t k) const { return convergence_order(rows[k - 1].self.psi, rows[k].self.psi); }
    double ref_order_u(std::size_t k) const
    {
        return convergence_order(rows[k - 1].reference.u, rows[k].reference.u);
    }
    double ref_order_psi(std::size_t k) const
    {
        return convergence_order(rows[k - 1].reference.psi, rows[k].reference.psi);
    }
};

/// DP-AVF2 at (h, tau), (h/2, tau/2), ... for `levels` levels plus one extra
/// finer level that serves as the self-convergence partner of the last one.
/// When base.reference is set, every level is also compared with RK4 on the
/// finest tested grid at tau_ref = tau0 / 200.
inline ConvergenceReport run_convergence(const RunConfig& base, std::size_t levels)
{
    if (levels < 3)
        throw ConfigError("convergence study needs levels >= 3");

    std::vector<GridSpec> grids;
    std::vector<FieldState> finals;
    for (std::size_t k = 0; k <= levels; ++k) {
        RunConfig cfg = base;
        cfg.n = base.n << k;
        cfg.tau = base.tau / static_cast<double>(1u << k);
        cfg.record_stride = std::max<std::size_t>(step_count(cfg.t_final, cfg.tau), 1);
        cfg.snapshot_stride = 0;
        const GridSpec grid = cfg.grid();
        FieldState state = make_initial_state(cfg.scenario, grid, cfg.seed, cfg.amplitude);
        integrate(state, cfg);
        grids.push_back(grid);
        finals.push_back(std::move(state));
    }

    ConvergenceReport report;
    for (std::size_t k = 0; k < levels; ++k) {
        ConvergenceRow row{k, grids[k].n(), grids[k].h(), base.tau / static_cast<double>(1u << k), {}, {}};
        row.self = coincident_error(finals[k], grids[k], finals[k + 1], grids[k + 1]);
        report.rows.push_back(row);
    }

    if (base.reference) {
        const GridSpec& finest = grids[levels - 1];
        const FieldState init = make_initial_state(base.scenario, finest, base.seed, base.amplitude);
        const double tau_ref = base.tau / 200.0;
        const ReferenceSolution ref = rk4_reference(init, base.params, finest, tau_ref, base.t_final);
        report.has_reference = true;
        report.reference_tau = tau_ref;
        report.reference_drift = ref.energy_drift;
        for (std::size_t k = 0; k < levels; ++k)
            report.rows[k].reference = coincident_error(finals[k], grids[k], ref.states.back(), finest);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Energy

/// One trace for the configured schedule, or `config.orders` traces for
/// seeded random schedules with seeds seed, seed+1, ...
inline std::vector<EnergyTrace> run_energy_experiment(const RunConfig& config)
{
    std::vector<EnergyTrace> traces;
    const GridSpec grid = config.grid();
    const FieldState init = make_initial_state(config.scenario, grid, config.seed, config.amplitude);
    if (config.orders == 0) {
        FieldState state = init;
        traces.push_back(integrate(state, config));
        return traces;
    }
    for (std::size_t k = 0; k < config.orders; ++k) {
        RunConfig cfg = config;
        cfg.strategy = Strategy::SeededRandom;
        cfg.seed = config.seed + k;
        FieldState state = init;
        traces.push_back(integrate(state, cfg));
    }
    return traces;
}

/// Largest relative deviation of the mass column from its first entry.
inline double max_mass_drift(const EnergyTrace& trace)
{
    if (trace.records.empty())
        return 0.0;
    const double m0 = trace.records.front().mass;
    double worst = 0.0;
    for (const auto& r : trace.records)
        worst = std::max(worst, m0 != 0.0 ? std::abs(r.mass - m0) / std::abs(m0) : std::abs(r.mass - m0));
    return worst;
}

// ---------------------------------------------------------------------------
// Benchmarks

struct BenchRow {
    std::size_t n;
    std::size_t workers;
    Strategy strategy;
    ExecutorMode executor;
    double seconds_per_step; // median over repetitions
    double speedup;          // t(1 worker) / t(workers), same N
};

struct ScalingRow {
    std::size_t n_from;
    std::size_t n_to;
    std::size_t workers;
    double ratio; // t(n_to) / t(n_from)
};

struct BenchReport {
    std::vector<BenchRow> rows;
    std::vector<ScalingRow> scaling;
};

inline double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size();
    return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

/// Median wall-clock seconds per DP-AVF2 step; initialization is not timed.
inline double time_per_step(const RunConfig& config, std::size_t n, std::size_t workers, std::size_t repetitions)
{
    RunConfig cfg = config;
    cfg.n = n;
    cfg.workers = workers;
    const GridSpec grid = cfg.grid();
    const Stepper stepper(grid, cfg.params, cfg.tau, make_schedule(cfg, grid), cfg.executor_config());
    const FieldState init = make_initial_state(cfg.scenario, grid, cfg.seed, cfg.amplitude);
    const std::size_t steps = std::max<std::size_t>(step_count(cfg.t_final, cfg.tau), 1);
    std::vector<double> samples;
    for (std::size_t r = 0; r < repetitions; ++r) {
        FieldState state = init;
        const auto start = std::chrono::steady_clock::now();
        stepper.advance(state, steps);
        const auto stop = std::chrono::steady_clock::now();
        if (has_non_finite(state))
            throw NumericalError("non-finite state during benchmark at N = " + std::to_string(n));
        samples.push_back(std::chrono::duration<double>(stop - start).count() / static_cast<double>(steps));
    }
    return median(samples);
}

/// Times every (N, workers) pair with the configured strategy and executor.
/// Reports only; asserts nothing.
inline BenchReport run_bench(const RunConfig& config, const std::vector<std::size_t>& n_list,
                             const std::vector<std::size_t>& worker_list, std::size_t repetitions)
{
    if (repetitions < 3)
        throw ConfigError("bench needs repetitions >= 3");
    if (n_list.empty() || worker_list.empty())
        throw ConfigError("bench needs non-empty N and worker lists");
    BenchReport report;
    for (std::size_t n : n_list) {
        double t1 = std::numeric_limits<double>::quiet_NaN();
        std::vector<BenchRow> rows;
        for (std::size_t w : worker_list) {
            const double t = time_per_step(config, n, w, repetitions);
            if (w == 1)
                t1 = t;
            rows.push_back({n, w, config.strategy, config.executor, t, 0.0});
        }
        if (std::isnan(t1))
            t1 = time_per_step(config, n, 1, repetitions);
        for (auto& row : rows) {
            row.speedup = t1 / row.seconds_per_step;
            report.rows.push_back(row);
        }
    }
    for (const auto& from : report.rows)
        for (const auto& to : report.rows)
            if (to.n == 2 * from.n && to.workers == from.workers)
                report.scaling.push_back({from.n, to.n, from.workers, to.seconds_per_step / from.seconds_per_step});
    return report;
}

// ---------------------------------------------------------------------------
// CSV

inline std::string fmt17(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace detail {

inline std::ofstream open_csv(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw IoError("cannot open for writing: " + path.string());
    return out;
}

inline void finish_csv(std::ofstream& out, const std::filesystem::path& path)
{
    out.flush();
    if (!out)
        throw IoError("failed writing: " + path.string());
}

} // namespace detail

/// Header `step,time,energy,relative_error,mass`; the fourth column is named
/// `absolute_error` when the initial energy vanishes.
inline void write_trace_csv(const EnergyTrace& trace, const std::filesystem::path& path)
{
    auto out = detail::open_csv(path);
    out << "step,time,energy," << (trace.absolute_error ? "absolute_error" : "relative_error") << ",mass\n";
    for (const auto& r : trace.records)
        out << r.step << ',' << fmt17(r.t) << ',' << fmt17(r.energy) << ',' << fmt17(r.error) << ','
            << fmt17(r.mass) << '\n';
    detail::finish_csv(out, path);
}

/// `kind=error` rows hold errors per level; `kind=order` rows hold
/// log2(E_{k-1}/E_k) in the same columns. Reference columns are empty without
/// an RK4 reference.
inline void write_convergence_csv(const ConvergenceReport& report, const std::filesystem::path& path)
{
    auto out = detail::open_csv(path);
    out << "kind,level,N,h,tau,self_u,self_psi,ref_u,ref_psi\n";
    auto ref = [&](double x) { return report.has_reference ? fmt17(x) : std::string(); };
    for (const auto& row : report.rows)
        out << "error," << row.level << ',' << row.n << ',' << fmt17(row.h) << ',' << fmt17(row.tau) << ','
            << fmt17(row.self.u) << ',' << fmt17(row.self.psi) << ',' << ref(row.reference.u) << ','
            << ref(row.reference.psi) << '\n';
    for (std::size_t k = 1; k < report.rows.size(); ++k) {
        const auto& row = report.rows[k];
        out << "order," << row.level << ',' << row.n << ',' << fmt17(row.h) << ',' << fmt17(row.tau) << ','
            << fmt17(report.self_order_u(k)) << ',' << fmt17(report.self_order_psi(k)) << ','
            << ref(report.has_reference ? report.ref_order_u(k) : 0.0) << ','
            << ref(report.has_reference ? report.ref_order_psi(k) : 0.0) << '\n';
    }
    detail::finish_csv(out, path);
}

inline void write_bench_csv(const BenchReport& report, const std::filesystem::path& path)
{
    auto out = detail::open_csv(path);
    out << "N,workers,strategy,executor,seconds_per_step,speedup\n";
    for (const auto& r : report.rows)
        out << r.n << ',' << r.workers << ',' << to_string(r.strategy) << ',' << to_string(r.executor) << ','
            << fmt17(r.seconds_per_step) << ',' << fmt17(r.speedup) << '\n';
    detail::finish_csv(out, path);
}

inline void write_scaling_csv(const BenchReport& report, const std::filesystem::path& path)
{
    auto out = detail::open_csv(path);
    out << "N_from,N_to,workers,time_ratio\n";
    for (const auto& s : report.scaling)
        out << s.n_from << ',' << s.n_to << ',' << s.workers << ',' << fmt17(s.ratio) << '\n';
    detail::finish_csv(out, path);
}

} // namespace kgs
