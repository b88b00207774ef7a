#pragma once

// Classical RK4 on the semi-discrete system, used as the temporal reference
// for convergence studies. Not energy conserving; drift is O(tau_ref^4).

#include <cmath>
#include <string>
#include <vector>

#include "kgs/errors.hpp"
#include "kgs/grid.hpp"
#include "kgs/integrator.hpp"

namespace kgs {

struct ReferenceSolution {
    std::vector<double> times;
    std::vector<FieldState> states;
    double tau_ref = 0.0;
    std::string method = "rk4";
    /// max |E(t) - E(0)| / |E(0)| over all RK4 steps (absolute when E(0) = 0).
    double energy_drift = 0.0;
};

namespace detail {

inline void axpy_into(FieldState& out, const FieldState& base, double w, const FieldQuad& k)
{
    const std::size_t m = base.p.size();
    for (std::size_t i = 0; i < m; ++i) {
        out.p[i] = base.p[i] + w * k.p[i];
        out.q[i] = base.q[i] + w * k.q[i];
        out.u[i] = base.u[i] + w * k.u[i];
        out.v[i] = base.v[i] + w * k.v[i];
    }
}

} // namespace detail

/// Integrates from state0 to T with step tau_ref and stores states at `output_times`
/// (each must be a multiple of tau_ref; T itself is always stored last).
inline ReferenceSolution rk4_reference(const FieldState& state0, const PhysParams& params, const GridSpec& grid,
                                       double tau_ref, double t_final, std::vector<double> output_times = {})
{
    detail::require_state(grid, state0);
    if (!(tau_ref > 0.0))
        throw ConfigError("tau_ref must be positive");
    const std::size_t steps = step_count(t_final, tau_ref);
    if (std::abs(static_cast<double>(steps) * tau_ref - t_final) > 1e-9 * std::max(1.0, t_final))
        throw ConfigError("T must be a multiple of tau_ref");

    std::vector<std::size_t> output_steps;
    for (double t : output_times)
        output_steps.push_back(step_count(t, tau_ref));

    ReferenceSolution ref;
    ref.tau_ref = tau_ref;
    FieldState y = state0;
    FieldState stage = state0;
    const double e0 = energy_raw(y, params, grid);

    auto store = [&] {
        ref.times.push_back(y.t);
        ref.states.push_back(y);
    };
    for (std::size_t s : output_steps)
        if (s == 0)
            store();

    const double t0 = state0.t;
    FieldQuad k1, k2, k3, k4;
    for (std::size_t step = 1; step <= steps; ++step) {
        rhs_semi_discrete_into(y, params, grid, k1);
        detail::axpy_into(stage, y, 0.5 * tau_ref, k1);
        rhs_semi_discrete_into(stage, params, grid, k2);
        detail::axpy_into(stage, y, 0.5 * tau_ref, k2);
        rhs_semi_discrete_into(stage, params, grid, k3);
        detail::axpy_into(stage, y, tau_ref, k3);
        rhs_semi_discrete_into(stage, params, grid, k4);
        const double w = tau_ref / 6.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            y.p[i] += w * (k1.p[i] + 2.0 * k2.p[i] + 2.0 * k3.p[i] + k4.p[i]);
            y.q[i] += w * (k1.q[i] + 2.0 * k2.q[i] + 2.0 * k3.q[i] + k4.q[i]);
            y.u[i] += w * (k1.u[i] + 2.0 * k2.u[i] + 2.0 * k3.u[i] + k4.u[i]);
            y.v[i] += w * (k1.v[i] + 2.0 * k2.v[i] + 2.0 * k3.v[i] + k4.v[i]);
        }
        y.t = t0 + static_cast<double>(step) * tau_ref;
        if (has_non_finite(y))
            throw NumericalError("RK4 reference produced a non-finite value at step " + std::to_string(step));
        const double e = energy_raw(y, params, grid);
        const double drift = std::abs(e0) > 1e-300 ? std::abs(e - e0) / std::abs(e0) : std::abs(e - e0);
        ref.energy_drift = std::max(ref.energy_drift, drift);
        for (std::size_t s : output_steps)
            if (s == step && step != steps)
                store();
    }
    store();
    return ref;
}

} // namespace kgs
