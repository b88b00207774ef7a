#pragma once

// Pointwise-explicit DP-AVF updates.
//
// Base kernel at point i (variable order p > q > u > v):
//
//   (i - alpha + gcoef U_n) Psi_new = (i + alpha - gcoef U_n) Psi_old - beta * sum_nbr Psi
//
//   [ 1     -tau/2 ] [U_new]   [ U + tau/2 V                               ]
//   [ c_uv   1     ] [V_new] = [ V - c_uv U + uv_nbr sum_nbr U + gU |Psi_new|^2 ]
//
// Adjoint kernel (variable order v > u > q > p): the U-V system first with
// |Psi_old|^2, then the Psi equation with U_new on both sides.
//
// Neighbor sums read whatever the arrays currently hold, so the sweep order
// alone decides which neighbors contribute new or old values.
//
// With c = gcoef*U - alpha, the complex division is carried out in real arithmetic:
//   rhs_re = -c p - q - beta Sp,  rhs_im = p - c q - beta Sq
//   p_new  = (c rhs_re + rhs_im) / (c^2 + 1)
//   q_new  = (c rhs_im - rhs_re) / (c^2 + 1)

#include <cmath>
#include <cstddef>
#include <sstream>

#include "kgs/errors.hpp"
#include "kgs/grid.hpp"

namespace kgs {

struct StepCoefficients {
    double tau = 0.0;
    double alpha = 0.0;  // tau k1 d / (2 h^2)
    double beta = 0.0;   // tau k1 / (2 h^2)
    double gcoef = 0.0;  // tau g / 2
    double c_uv = 0.0;   // tau k2 d / h^2 + tau mu^2 / 2
    double uv_nbr = 0.0; // tau k2 / h^2
    double g_u = 0.0;    // tau g
    /// Row-major inverse of [[1, -tau/2], [c_uv, 1]].
    double uv_inv[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
};

inline StepCoefficients precompute_coefficients(const PhysParams& params, double tau, const GridSpec& grid)
{
    if (tau == 0.0 || !std::isfinite(tau))
        throw ConfigError("time step tau must be finite and nonzero");
    const double h2 = grid.h() * grid.h();
    const double d = grid.dim();
    StepCoefficients c;
    c.tau = tau;
    c.alpha = tau * params.kappa1 * d / (2.0 * h2);
    c.beta = tau * params.kappa1 / (2.0 * h2);
    c.gcoef = tau * params.gamma / 2.0;
    c.c_uv = tau * params.kappa2 * d / h2 + tau * params.mu * params.mu / 2.0;
    c.uv_nbr = tau * params.kappa2 / h2;
    c.g_u = tau * params.gamma;

    const double det = 1.0 + 0.5 * tau * c.c_uv;
    if (det == 0.0 || !std::isfinite(det))
        throw ConfigError("U-V system is singular for tau = " + std::to_string(tau));
    c.uv_inv[0][0] = 1.0 / det;
    c.uv_inv[0][1] = 0.5 * tau / det;
    c.uv_inv[1][0] = -c.c_uv / det;
    c.uv_inv[1][1] = 1.0 / det;
    return c;
}

namespace detail {

[[noreturn]] inline void throw_singular(const StepCoefficients& c, double u)
{
    std::ostringstream os;
    os << "singular pointwise Psi solve (tau = " << c.tau << ", U = " << u << ")";
    throw SingularStep(os.str());
}

} // namespace detail

/// Solves the complex scalar Psi equation. `u_pivot` multiplies Psi_new,
/// `u_rhs` multiplies Psi_old.
inline void solve_psi(const StepCoefficients& c, double& p, double& q, double u_pivot, double u_rhs, double sum_p,
                      double sum_q)
{
    const double c_piv = c.gcoef * u_pivot - c.alpha;
    const double c_rhs = c.gcoef * u_rhs - c.alpha;
    const double rhs_re = -c_rhs * p - q - c.beta * sum_p;
    const double rhs_im = p - c_rhs * q - c.beta * sum_q;
    const double denom = c_piv * c_piv + 1.0;
    if (!(denom >= 1.0))
        detail::throw_singular(c, u_pivot);
    const double inv = 1.0 / denom;
    p = (c_piv * rhs_re + rhs_im) * inv;
    q = (c_piv * rhs_im - rhs_re) * inv;
}

/// Solves the 2x2 U-V system with the precomputed inverse.
inline void solve_uv(const StepCoefficients& c, double& u, double& v, double sum_u, double psi_sq)
{
    const double r0 = u + 0.5 * c.tau * v;
    const double r1 = v - c.c_uv * u + c.uv_nbr * sum_u + c.g_u * psi_sq;
    u = c.uv_inv[0][0] * r0 + c.uv_inv[0][1] * r1;
    v = c.uv_inv[1][0] * r0 + c.uv_inv[1][1] * r1;
}

/// Raw view of the four field arrays, shared by concurrent lanes.
struct FieldView {
    double* p;
    double* q;
    double* u;
    double* v;

    explicit FieldView(FieldState& s) : p(s.p.data()), q(s.q.data()), u(s.u.data()), v(s.v.data()) {}
};

/// In-place per-point update; writes only index i, reads its 2*Dim neighbors.
template <int Dim, bool Adjoint>
struct PointUpdate {
    FieldView f;
    const StepCoefficients* coef;
    Stencil<Dim> stencil;

    void operator()(std::size_t i) const
    {
        const StepCoefficients& c = *coef;
        const auto nbrs = stencil(i);
        double sp = 0.0, sq = 0.0, su = 0.0;
        for (std::size_t nb : nbrs) {
            sp += f.p[nb];
            sq += f.q[nb];
            su += f.u[nb];
        }
        double p = f.p[i], q = f.q[i], u = f.u[i], v = f.v[i];
        if constexpr (!Adjoint) {
            const double u_old = u;
            solve_psi(c, p, q, u_old, u_old, sp, sq);
            solve_uv(c, u, v, su, p * p + q * q);
        } else {
            solve_uv(c, u, v, su, p * p + q * q);
            solve_psi(c, p, q, u, u, sp, sq);
        }
        f.p[i] = p;
        f.q[i] = q;
        f.u[i] = u;
        f.v[i] = v;
    }
};

template <int Dim, bool Adjoint>
PointUpdate<Dim, Adjoint> make_point_update(FieldState& s, const StepCoefficients& c, const GridSpec& grid)
{
    return PointUpdate<Dim, Adjoint>{FieldView(s), &c, Stencil<Dim>(grid)};
}

inline void update_point_base(FieldState& s, std::size_t i, const StepCoefficients& c, const GridSpec& grid)
{
    detail::require_state(grid, s);
    detail::require_index(grid, i);
    dispatch_dim(grid, [&]<int Dim>() { make_point_update<Dim, false>(s, c, grid)(i); });
}

inline void update_point_adjoint(FieldState& s, std::size_t i, const StepCoefficients& c, const GridSpec& grid)
{
    detail::require_state(grid, s);
    detail::require_index(grid, i);
    dispatch_dim(grid, [&]<int Dim>() { make_point_update<Dim, true>(s, c, grid)(i); });
}

} // namespace kgs
