#pragma once

// DP-AVF sweeps and the DP-AVF2 time loop.
//
//   step_base    : one sweep of the base kernel along the forward schedule
//   step_adjoint : one sweep of the adjoint kernel along the reversed schedule
//   step_dpavf2  : step_base(tau/2) then step_adjoint(tau/2)
//
// Every sweep conserves energy_raw exactly (up to rounding) for any schedule.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "kgs/executor.hpp"
#include "kgs/grid.hpp"
#include "kgs/kernels.hpp"
#include "kgs/run_config.hpp"
#include "kgs/schedule.hpp"
#include "kgs/snapshot.hpp"

namespace kgs {

inline void step_base(FieldState& state, const SweepPlan& plan, const StepCoefficients& coeffs,
                      const ExecutorConfig& exec = {})
{
    const GridSpec& grid = plan.forward.grid();
    detail::require_state(grid, state);
    dispatch_dim(grid, [&]<int Dim>() {
        execute(plan.forward, make_point_update<Dim, false>(state, coeffs, grid), exec);
    });
    state.t += coeffs.tau;
}

inline void step_adjoint(FieldState& state, const SweepPlan& plan, const StepCoefficients& coeffs,
                         const ExecutorConfig& exec = {})
{
    const GridSpec& grid = plan.reverse.grid();
    detail::require_state(grid, state);
    dispatch_dim(grid, [&]<int Dim>() {
        execute(plan.reverse, make_point_update<Dim, true>(state, coeffs, grid), exec);
    });
    state.t += coeffs.tau;
}

/// Second-order symmetric composition; `coeffs_half` must be built with tau/2.
inline void step_dpavf2(FieldState& state, const SweepPlan& plan, const StepCoefficients& coeffs_half,
                        const ExecutorConfig& exec = {})
{
    step_base(state, plan, coeffs_half, exec);
    step_adjoint(state, plan, coeffs_half, exec);
}

/// ceil(T / tau), ignoring rounding noise in the quotient.
inline std::size_t step_count(double t_final, double tau)
{
    if (t_final <= 0.0)
        return 0;
    const double ratio = t_final / tau;
    const double nearest = std::round(ratio);
    if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest))
        return static_cast<std::size_t>(nearest);
    return static_cast<std::size_t>(std::ceil(ratio));
}

/// Fixed-step DP-AVF2 driver.
class Stepper {
public:
    Stepper(const GridSpec& grid, const PhysParams& params, double tau, UpdateSchedule schedule,
            ExecutorConfig exec = {})
        : plan_(std::move(schedule), grid), coeffs_half_(precompute_coefficients(params, 0.5 * tau, grid)),
          exec_(exec)
    {}

    void step(FieldState& state) const { step_dpavf2(state, plan_, coeffs_half_, exec_); }

    void advance(FieldState& state, std::size_t steps) const
    {
        for (std::size_t k = 0; k < steps; ++k)
            step(state);
    }

    const SweepPlan& plan() const { return plan_; }

private:
    SweepPlan plan_;
    StepCoefficients coeffs_half_;
    ExecutorConfig exec_;
};

struct EnergyRecord {
    std::size_t step;
    double t;
    double energy;
    double error; // relative, or absolute when EnergyTrace::absolute_error
    double mass;
};

struct EnergyTrace {
    std::vector<EnergyRecord> records;
    double initial_energy = 0.0;
    /// Set when |E0| < 1e-300; `error` then holds |E_n - E_0|.
    bool absolute_error = false;

    double max_error() const
    {
        double worst = 0.0;
        for (const auto& r : records)
            worst = std::max(worst, r.error);
        return worst;
    }
};

inline bool has_non_finite(const FieldState& s)
{
    // x * 0 is NaN exactly when x is NaN or Inf.
    double acc = 0.0;
    for (const Field* f : {&s.p, &s.q, &s.u, &s.v})
        for (double x : *f)
            acc += x * 0.0;
    return !(acc == 0.0);
}

inline std::filesystem::path snapshot_path(const std::filesystem::path& dir, std::size_t step)
{
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%06zu.kgs", step);
    return dir / name;
}

/// Runs ceil(T/tau) DP-AVF2 steps from `state`, recording energy every
/// record_stride steps (plus step 0) and writing snapshots every
/// snapshot_stride steps when that is nonzero.
inline EnergyTrace integrate(FieldState& state, const RunConfig& config)
{
    const GridSpec grid = config.grid();
    detail::require_state(grid, state);
    if (config.record_stride == 0)
        throw ConfigError("record_stride must be positive");
    const Stepper stepper(grid, config.params, config.tau, make_schedule(config, grid), config.executor_config());
    const std::size_t steps = step_count(config.t_final, config.tau);

    EnergyTrace trace;
    trace.initial_energy = discrete_energy(state, config.params, grid);
    trace.absolute_error = std::abs(trace.initial_energy) < 1e-300;
    auto record = [&](std::size_t step) {
        const double e = discrete_energy(state, config.params, grid);
        const double diff = std::abs(e - trace.initial_energy);
        trace.records.push_back(
            {step, state.t, e, trace.absolute_error ? diff : diff / std::abs(trace.initial_energy),
             discrete_mass(state, grid)});
    };
    auto snapshot = [&](std::size_t step) {
        if (config.snapshot_stride != 0 && step % config.snapshot_stride == 0)
            write_snapshot(state, grid, snapshot_path(config.output_dir, step));
    };

    record(0);
    snapshot(0);
    const double t0 = state.t;
    for (std::size_t step = 1; step <= steps; ++step) {
        stepper.step(state);
        state.t = t0 + static_cast<double>(step) * config.tau;
        if (has_non_finite(state))
            throw NumericalError("non-finite value in state after step " + std::to_string(step) + " (t = "
                                 + std::to_string(state.t) + ")");
        if (step % config.record_stride == 0)
            record(step);
        snapshot(step);
    }
    return trace;
}

} // namespace kgs
