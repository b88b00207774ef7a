#pragma once

// Initial-condition presets and seeded random states.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kgs/errors.hpp"
#include "kgs/grid.hpp"
#include "kgs/rng.hpp"

namespace kgs {

namespace detail {

inline void require_dim(const GridSpec& grid, int dim, std::string_view preset)
{
    if (grid.dim() != dim)
        throw ConfigError(std::string(preset) + " is a " + std::to_string(dim) + "D preset, grid is "
                          + std::to_string(grid.dim()) + "D");
}

/// Calls fn(i, x, y) for every node of a 2D grid.
template <typename Fn>
void for_each_node_2d(const GridSpec& grid, Fn&& fn)
{
    const std::size_t n = grid.n();
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
            fn(j * n + k, grid.node(j), grid.node(k));
}

template <typename Fn>
void for_each_node_3d(const GridSpec& grid, Fn&& fn)
{
    const std::size_t n = grid.n();
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t l = 0; l < n; ++l)
                fn((j * n + k) * n + l, grid.node(j), grid.node(k), grid.node(l));
}

} // namespace detail

/// psi0 = (1+i) exp(-(x^2+y^2)), u0 = tanh(x^2+y^2), v0 = sin(x+y) exp(-2(x^2+y^2)).
inline FieldState preset_gaussian2d(const GridSpec& grid)
{
    detail::require_dim(grid, 2, "gaussian2d");
    FieldState s = FieldState::zeros(grid);
    detail::for_each_node_2d(grid, [&](std::size_t i, double x, double y) {
        const double r2 = x * x + y * y;
        s.p[i] = std::exp(-r2);
        s.q[i] = s.p[i];
        s.u[i] = std::tanh(r2);
        s.v[i] = std::sin(x + y) * std::exp(-2.0 * r2);
    });
    return s;
}

/// Four Gaussians and tanh bumps centered at (0,-3), (3,0), (0,3), (-3,0);
/// v0 = exp(-x^2-y^2).
inline FieldState preset_fourpeak2d(const GridSpec& grid)
{
    detail::require_dim(grid, 2, "fourpeak2d");
    static constexpr double centers[4][2] = {{0.0, -3.0}, {3.0, 0.0}, {0.0, 3.0}, {-3.0, 0.0}};
    FieldState s = FieldState::zeros(grid);
    detail::for_each_node_2d(grid, [&](std::size_t i, double x, double y) {
        double psi = 0.0, u = 0.0;
        for (const auto& c : centers) {
            const double r2 = (x - c[0]) * (x - c[0]) + (y - c[1]) * (y - c[1]);
            psi += std::exp(-r2);
            u += std::tanh(r2);
        }
        s.p[i] = psi;
        s.q[i] = psi;
        s.u[i] = u;
        s.v[i] = std::exp(-x * x - y * y);
    });
    return s;
}

/// psi0 = sum_{j=0,1} exp(-(x + 2(-1)^j)^2 - y^2 - z^2) * exp(0.01 j (x+y+z)),
/// with the second factor taken literally as a real exponential (so Q = 0);
/// u0 = exp(-x^2-y^2-(z-2)^2) + sum_{j=0,1} exp(-(x + (-1)^j sqrt3)^2 - y^2 - (z+1)^2);
/// v0 = exp(-x^2-y^2-z^2).
inline FieldState preset_ellipsoids3d(const GridSpec& grid)
{
    detail::require_dim(grid, 3, "ellipsoids3d");
    const double sqrt3 = std::sqrt(3.0);
    FieldState s = FieldState::zeros(grid);
    detail::for_each_node_3d(grid, [&](std::size_t i, double x, double y, double z) {
        double psi = 0.0;
        double u = std::exp(-x * x - y * y - (z - 2.0) * (z - 2.0));
        for (int j = 0; j < 2; ++j) {
            const double sign = j == 0 ? 1.0 : -1.0;
            const double xs = x + 2.0 * sign;
            psi += std::exp(-xs * xs - y * y - z * z) * std::exp(0.01 * j * (x + y + z));
            const double xu = x + sign * sqrt3;
            u += std::exp(-xu * xu - y * y - (z + 1.0) * (z + 1.0));
        }
        s.p[i] = psi;
        s.u[i] = u;
        s.v[i] = std::exp(-x * x - y * y - z * z);
    });
    return s;
}

/// P, Q, U, V filled in that order with uniforms in [-amplitude, amplitude]
/// drawn from xoshiro256**(seed).
inline FieldState seeded_random_state(const GridSpec& grid, std::uint64_t seed, double amplitude)
{
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
        throw ConfigError("random state amplitude must be finite and non-negative");
    Xoshiro256 rng(seed);
    FieldState s = FieldState::zeros(grid);
    for (Field* f : {&s.p, &s.q, &s.u, &s.v})
        for (double& x : *f)
            x = amplitude * (2.0 * rng.uniform01() - 1.0);
    return s;
}

struct ScenarioSpec {
    std::string name;
    int dimension; // 0 = any
    double a;
    double b;
    PhysParams params;
};

inline const std::vector<ScenarioSpec>& scenario_catalog()
{
    static const std::vector<ScenarioSpec> catalog = {
        {"gaussian2d", 2, -10.0, 10.0, {1.0, 1.0, 1.0, 1.0}},
        {"fourpeak2d", 2, -10.0, 10.0, {0.5, 0.5, 0.5, 0.5}},
        {"ellipsoids3d", 3, -10.0, 10.0, {-0.4, 0.1, 0.1, 0.2}},
        {"random", 0, 0.0, 2.0 * 3.14159265358979323846, {1.0, 1.0, 1.0, 1.0}},
    };
    return catalog;
}

inline std::optional<ScenarioSpec> find_scenario(std::string_view name)
{
    for (const auto& spec : scenario_catalog())
        if (spec.name == name)
            return spec;
    return std::nullopt;
}

/// Initial state for a named scenario. `seed` and `amplitude` apply to "random" only.
inline FieldState make_initial_state(std::string_view name, const GridSpec& grid, std::uint64_t seed = 0,
                                     double amplitude = 1.0)
{
    if (name == "gaussian2d")
        return preset_gaussian2d(grid);
    if (name == "fourpeak2d")
        return preset_fourpeak2d(grid);
    if (name == "ellipsoids3d")
        return preset_ellipsoids3d(grid);
    if (name == "random")
        return seeded_random_state(grid, seed, amplitude);
    throw ConfigError("unknown scenario '" + std::string(name) + "'");
}

} // namespace kgs
