#pragma once

#include <algorithm>
#include <cmath>

#include "kgs/grid.hpp"
#include "kgs/scenarios.hpp"

namespace kgs::test {

inline GridSpec periodic_grid(int dim, std::size_t n) { return GridSpec(dim, 0.0, 2.0 * M_PI, n); }

inline FieldState random_state(const GridSpec& g, std::uint64_t seed, double amplitude = 1.0)
{
    return seeded_random_state(g, seed, amplitude);
}

/// max_i |a_i - b_i| / max(max_i |b_i|, tiny) over all four fields.
inline double rel_diff(const FieldState& a, const FieldState& b)
{
    double diff = 0.0, scale = 0.0;
    const Field* fa[] = {&a.p, &a.q, &a.u, &a.v};
    const Field* fb[] = {&b.p, &b.q, &b.u, &b.v};
    for (int k = 0; k < 4; ++k)
        for (std::size_t i = 0; i < fa[k]->size(); ++i) {
            diff = std::max(diff, std::abs((*fa[k])[i] - (*fb[k])[i]));
            scale = std::max(scale, std::abs((*fb[k])[i]));
        }
    return diff / std::max(scale, 1e-300);
}

inline bool same_fields(const FieldState& a, const FieldState& b)
{
    return a.p == b.p && a.q == b.q && a.u == b.u && a.v == b.v;
}

inline double rel_change(double now, double before) { return std::abs(now - before) / std::abs(before); }

} // namespace kgs::test
