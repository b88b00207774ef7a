#pragma once

// Periodic Cartesian grid, field storage and the matrix-free stencil
// operators of the semi-discrete Klein-Gordon-Schroedinger system
//
//   P' = -k1/2 Lap Q - g U Q
//   Q' =  k1/2 Lap P + g U P
//   U' =  V
//   V' =  k2 Lap U - mu^2 U + g (P^2 + Q^2)
//
// with Psi = P + iQ. Linear index convention: first axis slowest,
// i = x * N^(d-1) + y * N^(d-2) + ..., 0-based.

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "kgs/errors.hpp"

namespace kgs {

using Field = std::vector<double>;

/// Uniform periodic grid on (a, b)^d with N points per axis, h = (b - a) / N.
/// Node coordinates are a + j*h for j = 0..N-1.
class GridSpec {
public:
    GridSpec(int dim, double a, double b, std::size_t n)
        : dim_(dim), a_(a), b_(b), n_(n)
    {
        if (dim < 1 || dim > 3)
            throw ConfigError("grid dimension must be 1, 2 or 3 (got " + std::to_string(dim) + ")");
        if (n == 0)
            throw ConfigError("grid points per axis must be positive");
        if (!(std::isfinite(a) && std::isfinite(b)) || !(b > a))
            throw ConfigError("grid domain requires finite a < b");
        h_ = (b - a) / static_cast<double>(n);
        size_ = 1;
        for (int axis = dim - 1; axis >= 0; --axis) {
            stride_[axis] = size_;
            if (size_ > static_cast<std::size_t>(-1) / n)
                throw ConfigError("grid point count N^d overflows the index type");
            size_ *= n;
        }
    }

    int dim() const { return dim_; }
    double a() const { return a_; }
    double b() const { return b_; }
    std::size_t n() const { return n_; }
    double h() const { return h_; }
    /// Total number of points M = N^d.
    std::size_t size() const { return size_; }
    std::size_t stride(int axis) const { return stride_[axis]; }

    /// Measure of one cell, h^d.
    double cell_volume() const { return std::pow(h_, dim_); }

    std::size_t coord(std::size_t i, int axis) const { return (i / stride_[axis]) % n_; }
    double node(std::size_t j) const { return a_ + static_cast<double>(j) * h_; }

    bool operator==(const GridSpec&) const = default;

private:
    int dim_;
    double a_, b_;
    std::size_t n_;
    double h_ = 0.0;
    std::size_t size_ = 0;
    std::array<std::size_t, 3> stride_{0, 0, 0};
};

/// Constants of the KGS system. No sign restrictions.
struct PhysParams {
    double kappa1 = 1.0;
    double kappa2 = 1.0;
    double mu = 1.0;
    double gamma = 1.0;
};

/// The four real fields and the current time.
struct FieldState {
    Field p, q, u, v;
    double t = 0.0;

    static FieldState zeros(const GridSpec& grid)
    {
        FieldState s;
        s.p.assign(grid.size(), 0.0);
        s.q.assign(grid.size(), 0.0);
        s.u.assign(grid.size(), 0.0);
        s.v.assign(grid.size(), 0.0);
        return s;
    }

    bool all_finite() const
    {
        for (const Field* f : {&p, &q, &u, &v})
            for (double x : *f)
                if (!std::isfinite(x))
                    return false;
        return true;
    }

    bool operator==(const FieldState&) const = default;
};

/// Four fields without a time stamp (gradients, time derivatives).
struct FieldQuad {
    Field p, q, u, v;
};

namespace detail {

inline void require_index(const GridSpec& grid, std::size_t i)
{
    if (i >= grid.size())
        throw ContractViolation("linear index " + std::to_string(i) + " out of range [0, "
                                + std::to_string(grid.size()) + ")");
}

inline void require_size(const GridSpec& grid, const Field& f, const char* what)
{
    if (f.size() != grid.size())
        throw ContractViolation(std::string(what) + " has " + std::to_string(f.size())
                                + " entries, grid has " + std::to_string(grid.size()));
}

inline void require_state(const GridSpec& grid, const FieldState& s)
{
    require_size(grid, s.p, "P");
    require_size(grid, s.q, "Q");
    require_size(grid, s.u, "U");
    require_size(grid, s.v, "V");
}

} // namespace detail

/// Compile-time dimension neighbor lookup used by the hot loops.
/// Neighbors come back in canonical order -x, +x, -y, +y, -z, +z.
template <int Dim>
struct Stencil {
    std::size_t n;
    std::array<std::size_t, Dim> stride;

    explicit Stencil(const GridSpec& grid) : n(grid.n())
    {
        for (int axis = 0; axis < Dim; ++axis)
            stride[axis] = grid.stride(axis);
    }

    std::array<std::size_t, 2 * Dim> operator()(std::size_t i) const
    {
        std::array<std::size_t, 2 * Dim> out;
        for (int axis = 0; axis < Dim; ++axis) {
            const std::size_t s = stride[axis];
            const std::size_t c = (i / s) % n;
            out[2 * axis] = c == 0 ? i + (n - 1) * s : i - s;
            out[2 * axis + 1] = c == n - 1 ? i - (n - 1) * s : i + s;
        }
        return out;
    }
};

/// Calls fn.template operator()<Dim>() with the grid's dimension as a constant.
template <typename Fn>
decltype(auto) dispatch_dim(const GridSpec& grid, Fn&& fn)
{
    switch (grid.dim()) {
    case 1: return fn.template operator()<1>();
    case 2: return fn.template operator()<2>();
    default: return fn.template operator()<3>();
    }
}

inline std::vector<std::size_t> neighbor_indices(const GridSpec& grid, std::size_t i)
{
    detail::require_index(grid, i);
    std::vector<std::size_t> out;
    out.reserve(2 * grid.dim());
    const std::size_t n = grid.n();
    for (int axis = 0; axis < grid.dim(); ++axis) {
        const std::size_t s = grid.stride(axis);
        const std::size_t c = grid.coord(i, axis);
        out.push_back(c == 0 ? i + (n - 1) * s : i - s);
        out.push_back(c == n - 1 ? i - (n - 1) * s : i + s);
    }
    return out;
}

/// (sum of 2d neighbors - 2d f[i]) / h^2
inline double laplacian_at(const Field& field, const GridSpec& grid, std::size_t i)
{
    detail::require_size(grid, field, "field");
    detail::require_index(grid, i);
    double sum = 0.0;
    for (std::size_t nb : neighbor_indices(grid, i))
        sum += field[nb];
    return (sum - 2.0 * grid.dim() * field[i]) / (grid.h() * grid.h());
}

inline Field laplacian(const Field& field, const GridSpec& grid)
{
    detail::require_size(grid, field, "field");
    Field out(grid.size());
    const double inv_h2 = 1.0 / (grid.h() * grid.h());
    const double center = 2.0 * grid.dim();
    dispatch_dim(grid, [&]<int Dim>() {
        const Stencil<Dim> stencil(grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            double sum = 0.0;
            for (std::size_t nb : stencil(i))
                sum += field[nb];
            out[i] = (sum - center * field[i]) * inv_h2;
        }
    });
    return out;
}

/// h^d * sum_i f[i] g[i]
inline double inner_product(const Field& f, const Field& g, const GridSpec& grid)
{
    detail::require_size(grid, f, "first field");
    detail::require_size(grid, g, "second field");
    double sum = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        sum += f[i] * g[i];
    return grid.cell_volume() * sum;
}

inline double norm(const Field& f, const GridSpec& grid) { return std::sqrt(inner_product(f, f, grid)); }

/// Forward-difference gradient inner product (grad_h f, grad_h g)_h.
inline double gradient_inner_product(const Field& f, const Field& g, const GridSpec& grid)
{
    detail::require_size(grid, f, "first field");
    detail::require_size(grid, g, "second field");
    const double inv_h2 = 1.0 / (grid.h() * grid.h());
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto nbrs = neighbor_indices(grid, i);
        for (int axis = 0; axis < grid.dim(); ++axis) {
            const std::size_t fwd = nbrs[2 * axis + 1];
            sum += (f[fwd] - f[i]) * (g[fwd] - g[i]);
        }
    }
    return grid.cell_volume() * inv_h2 * sum;
}

/// Semi-discrete energy without the h^d measure:
///   1/2 (k1|grad P|^2 + k1|grad Q|^2 + k2|grad U|^2 + |V|^2 + mu^2|U|^2) - g sum (P^2+Q^2) U
/// with unscaled sums and forward differences. Equals the quadratic form built
/// from the periodic second-difference matrix after summation by parts.
inline double energy_raw(const FieldState& s, const PhysParams& params, const GridSpec& grid)
{
    detail::require_state(grid, s);
    const double inv_h2 = 1.0 / (grid.h() * grid.h());
    const double mu2 = params.mu * params.mu;
    return dispatch_dim(grid, [&]<int Dim>() {
        const Stencil<Dim> stencil(grid);
        double grad_pq = 0.0, grad_u = 0.0, local = 0.0, coupling = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto nbrs = stencil(i);
            for (int axis = 0; axis < Dim; ++axis) {
                const std::size_t fwd = nbrs[2 * axis + 1];
                const double dp = s.p[fwd] - s.p[i];
                const double dq = s.q[fwd] - s.q[i];
                const double du = s.u[fwd] - s.u[i];
                grad_pq += dp * dp + dq * dq;
                grad_u += du * du;
            }
            local += s.v[i] * s.v[i] + mu2 * s.u[i] * s.u[i];
            coupling += (s.p[i] * s.p[i] + s.q[i] * s.q[i]) * s.u[i];
        }
        return 0.5 * (params.kappa1 * inv_h2 * grad_pq + params.kappa2 * inv_h2 * grad_u + local)
               - params.gamma * coupling;
    });
}

/// Reported energy h^d * energy_raw; approximates the continuous energy integral.
inline double discrete_energy(const FieldState& s, const PhysParams& params, const GridSpec& grid)
{
    return grid.cell_volume() * energy_raw(s, params, grid);
}

/// Discrete mass ||Psi||_h^2. Diagnostic only.
inline double discrete_mass(const FieldState& s, const GridSpec& grid)
{
    return inner_product(s.p, s.p, grid) + inner_product(s.q, s.q, grid);
}

/// Gradient of energy_raw with respect to (P, Q, U, V), componentwise.
inline FieldQuad energy_gradient(const FieldState& s, const PhysParams& params, const GridSpec& grid)
{
    detail::require_state(grid, s);
    const Field lap_p = laplacian(s.p, grid);
    const Field lap_q = laplacian(s.q, grid);
    const Field lap_u = laplacian(s.u, grid);
    const std::size_t m = grid.size();
    const double mu2 = params.mu * params.mu;
    FieldQuad g{Field(m), Field(m), Field(m), Field(m)};
    for (std::size_t i = 0; i < m; ++i) {
        g.p[i] = -params.kappa1 * lap_p[i] - 2.0 * params.gamma * s.u[i] * s.p[i];
        g.q[i] = -params.kappa1 * lap_q[i] - 2.0 * params.gamma * s.u[i] * s.q[i];
        g.u[i] = -params.kappa2 * lap_u[i] + mu2 * s.u[i]
                 - params.gamma * (s.p[i] * s.p[i] + s.q[i] * s.q[i]);
        g.v[i] = s.v[i];
    }
    return g;
}

/// Time derivative of the semi-discrete system, written out directly from the PDE.
/// `d` is resized to the grid; reusing it across calls avoids reallocation.
inline void rhs_semi_discrete_into(const FieldState& s, const PhysParams& params, const GridSpec& grid,
                                   FieldQuad& d)
{
    detail::require_state(grid, s);
    const std::size_t m = grid.size();
    const double mu2 = params.mu * params.mu;
    for (Field* f : {&d.p, &d.q, &d.u, &d.v})
        f->resize(m);
    const double inv_h2 = 1.0 / (grid.h() * grid.h());
    const double center = 2.0 * grid.dim();
    dispatch_dim(grid, [&]<int Dim>() {
        const Stencil<Dim> stencil(grid);
        for (std::size_t i = 0; i < m; ++i) {
            double sp = 0.0, sq = 0.0, su = 0.0;
            for (std::size_t nb : stencil(i)) {
                sp += s.p[nb];
                sq += s.q[nb];
                su += s.u[nb];
            }
            const double lap_p = (sp - center * s.p[i]) * inv_h2;
            const double lap_q = (sq - center * s.q[i]) * inv_h2;
            const double lap_u = (su - center * s.u[i]) * inv_h2;
            d.p[i] = -0.5 * params.kappa1 * lap_q - params.gamma * s.u[i] * s.q[i];
            d.q[i] = 0.5 * params.kappa1 * lap_p + params.gamma * s.u[i] * s.p[i];
            d.u[i] = s.v[i];
            d.v[i] = params.kappa2 * lap_u - mu2 * s.u[i]
                     + params.gamma * (s.p[i] * s.p[i] + s.q[i] * s.q[i]);
        }
    });
}

inline FieldQuad rhs_semi_discrete(const FieldState& s, const PhysParams& params, const GridSpec& grid)
{
    FieldQuad d;
    rhs_semi_discrete_into(s, params, grid, d);
    return d;
}

} // namespace kgs
