#pragma once

// Slow, independent reference implementations used only by the tests.

#include <cstddef>
#include <vector>

#include "kgs/grid.hpp"
#include "kgs/kernels.hpp"
#include "kgs/schedule.hpp"

namespace kgs::oracle {

/// Entry (r, c) of the 1D forward-difference matrix with periodic wrap.
inline double diff_1d(std::size_t r, std::size_t c, std::size_t n, double h)
{
    double x = 0.0;
    if (c == (r + 1) % n)
        x += 1.0 / h;
    if (c == r)
        x -= 1.0 / h;
    return x;
}

/// Entry (r, c) of I x .. x D1 x .. x I with D1 on `axis` (axis 0 outermost).
inline double kron_diff(const GridSpec& g, int axis, std::size_t r, std::size_t c)
{
    double x = 1.0;
    for (int k = 0; k < g.dim(); ++k) {
        const std::size_t rk = g.coord(r, k), ck = g.coord(c, k);
        if (k == axis)
            x *= diff_1d(rk, ck, g.n(), g.h());
        else if (rk != ck)
            return 0.0;
        if (x == 0.0)
            return 0.0;
    }
    return x;
}

/// sum_axis |D_axis f|^2 by dense matrix-vector products over all M^2 entries.
inline double dense_gradient_square(const Field& f, const GridSpec& g)
{
    double total = 0.0;
    for (int axis = 0; axis < g.dim(); ++axis)
        for (std::size_t r = 0; r < g.size(); ++r) {
            double row = 0.0;
            for (std::size_t c = 0; c < g.size(); ++c)
                row += kron_diff(g, axis, r, c) * f[c];
            total += row * row;
        }
    return total;
}

/// h^d * E_raw assembled from dense Kronecker difference matrices. M <= 4096.
inline double dense_energy(const FieldState& s, const PhysParams& prm, const GridSpec& g)
{
    if (g.size() > 4096)
        throw ContractViolation("dense_energy refuses grids with more than 4096 points");
    double sq_u = 0.0, sq_v = 0.0, coupling = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        sq_u += s.u[i] * s.u[i];
        sq_v += s.v[i] * s.v[i];
        coupling += (s.p[i] * s.p[i] + s.q[i] * s.q[i]) * s.u[i];
    }
    const double e = 0.5 * (prm.kappa1 * dense_gradient_square(s.p, g) + prm.kappa1 * dense_gradient_square(s.q, g)
                            + prm.kappa2 * dense_gradient_square(s.u, g) + sq_v + prm.mu * prm.mu * sq_u)
                     - prm.gamma * coupling;
    return g.cell_volume() * e;
}

/// One point of a sweep. `own` supplies the point's old values, `nbr(k)` the
/// state each neighbor is read from.
template <typename NbrState>
void update_from(const FieldState& own, FieldState& out, std::size_t i, const StepCoefficients& c,
                 const GridSpec& g, bool adjoint, NbrState&& nbr)
{
    double sp = 0.0, sq = 0.0, su = 0.0;
    for (std::size_t nb : neighbor_indices(g, i)) {
        const FieldState& src = nbr(nb);
        sp += src.p[nb];
        sq += src.q[nb];
        su += src.u[nb];
    }
    double p = own.p[i], q = own.q[i], u = own.u[i], v = own.v[i];
    if (!adjoint) {
        solve_psi(c, p, q, u, u, sp, sq);
        solve_uv(c, u, v, su, p * p + q * q);
    } else {
        solve_uv(c, u, v, su, p * p + q * q);
        solve_psi(c, p, q, u, u, sp, sq);
    }
    out.p[i] = p;
    out.q[i] = q;
    out.u[i] = u;
    out.v[i] = v;
}

/// Per-neighbor superscript flags of point i: 1 where the neighbor's new value
/// is used. Base sweeps use new values of lower-ranked neighbors, adjoint
/// sweeps (run along the reversed order) of higher-ranked ones.
inline std::vector<int> superscript_flags(const UpdateSchedule& s, const GridSpec& g, std::size_t i, bool adjoint)
{
    std::vector<int> flags;
    for (std::size_t nb : neighbor_indices(g, i))
        flags.push_back(adjoint ? s.rank[nb] > s.rank[i] : s.rank[nb] < s.rank[i]);
    return flags;
}

/// Two-buffer sweep: old values stay untouched, new values land in a second
/// buffer, and each neighbor is read from the buffer its superscript selects.
/// `schedule` is the forward schedule for both variants.
inline FieldState explicit_superscript_sweep(const FieldState& old, const UpdateSchedule& schedule,
                                             const StepCoefficients& c, const GridSpec& g, bool adjoint)
{
    const std::size_t m = g.size();
    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i)
        order[adjoint ? m - 1 - schedule.rank[i] : schedule.rank[i]] = i;

    FieldState fresh = old;
    for (std::size_t i : order) {
        const auto flags = superscript_flags(schedule, g, i, adjoint);
        const auto nbrs = neighbor_indices(g, i);
        update_from(old, fresh, i, c, g, adjoint, [&](std::size_t nb) -> const FieldState& {
            for (std::size_t k = 0; k < nbrs.size(); ++k)
                if (nbrs[k] == nb)
                    return flags[k] ? fresh : old;
            return old;
        });
    }
    fresh.t = old.t + c.tau;
    return fresh;
}

/// Checkerboard as two Jacobi half-sweeps: every point of one color is
/// computed from a frozen copy, then the other color. Red goes first for the
/// base sweep, blue first for the adjoint.
inline FieldState two_phase_checkerboard(const FieldState& old, const StepCoefficients& c, const GridSpec& g,
                                         bool adjoint)
{
    FieldState cur = old;
    for (int phase = 0; phase < 2; ++phase) {
        const bool red_phase = (phase == 0) != adjoint;
        const FieldState frozen = cur;
        for (std::size_t i = 0; i < g.size(); ++i)
            if (is_red(g, i) == red_phase)
                update_from(frozen, cur, i, c, g, adjoint, [&](std::size_t) -> const FieldState& { return frozen; });
    }
    cur.t = old.t + c.tau;
    return cur;
}

} // namespace kgs::oracle
