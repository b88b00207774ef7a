#pragma once

// Update schedules: a permutation of grid points plus a phase plan.
//
// The order in which points are swept determines which neighbor values are
// already at the new time level when a point is solved, and thereby which
// discrete gradient the step realizes. Every order conserves the discrete
// energy. Parallel phases group lanes that never read each other's writes.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kgs/errors.hpp"
#include "kgs/grid.hpp"
#include "kgs/rng.hpp"

namespace kgs {

enum class Strategy { LexicographicForward, LexicographicReverse, SeededRandom, BlockSplit, Checkerboard };

inline std::string_view to_string(Strategy s)
{
    switch (s) {
    case Strategy::LexicographicForward: return "lexicographic";
    case Strategy::LexicographicReverse: return "reverse";
    case Strategy::SeededRandom: return "random";
    case Strategy::BlockSplit: return "block-split";
    case Strategy::Checkerboard: return "checkerboard";
    }
    return "?";
}

inline std::optional<Strategy> parse_strategy(std::string_view name)
{
    for (Strategy s : {Strategy::LexicographicForward, Strategy::LexicographicReverse, Strategy::SeededRandom,
                       Strategy::BlockSplit, Strategy::Checkerboard})
        if (to_string(s) == name)
            return s;
    return std::nullopt;
}

using Lane = std::vector<std::size_t>;

struct Phase {
    bool parallel = false;
    std::vector<Lane> lanes;

    std::size_t point_count() const
    {
        std::size_t total = 0;
        for (const auto& lane : lanes)
            total += lane.size();
        return total;
    }

    bool operator==(const Phase&) const = default;
};

struct UpdateSchedule {
    Strategy strategy = Strategy::LexicographicForward;
    /// rank[i] = position of point i in the serial linearization.
    std::vector<std::size_t> rank;
    std::vector<Phase> phases;
    std::optional<std::uint64_t> seed;
    std::size_t workers = 1;

    bool operator==(const UpdateSchedule&) const = default;
};

namespace detail {

/// Fills rank from the concatenation of all lanes in phase order.
inline void assign_rank_from_phases(UpdateSchedule& s, std::size_t m)
{
    s.rank.assign(m, 0);
    std::size_t pos = 0;
    for (const auto& phase : s.phases)
        for (const auto& lane : phase.lanes)
            for (std::size_t i : lane)
                s.rank[i] = pos++;
}

inline Lane slab_range(const GridSpec& grid, std::size_t first_slab, std::size_t last_slab_exclusive)
{
    const std::size_t slab = grid.stride(0);
    Lane lane(slab * (last_slab_exclusive - first_slab));
    for (std::size_t k = 0; k < lane.size(); ++k)
        lane[k] = first_slab * slab + k;
    return lane;
}

} // namespace detail

/// Single serial phase in index order (forward) or reverse index order.
inline UpdateSchedule lexicographic_schedule(const GridSpec& grid, bool forward = true)
{
    const std::size_t m = grid.size();
    UpdateSchedule s;
    s.strategy = forward ? Strategy::LexicographicForward : Strategy::LexicographicReverse;
    Lane lane(m);
    for (std::size_t k = 0; k < m; ++k)
        lane[k] = forward ? k : m - 1 - k;
    s.phases.push_back(Phase{false, {std::move(lane)}});
    detail::assign_rank_from_phases(s, m);
    return s;
}

/// Single serial phase visiting a Fisher-Yates permutation drawn from xoshiro256**(seed).
inline UpdateSchedule random_schedule(const GridSpec& grid, std::uint64_t seed)
{
    UpdateSchedule s;
    s.strategy = Strategy::SeededRandom;
    s.seed = seed;
    s.phases.push_back(Phase{false, {random_permutation(grid.size(), seed)}});
    detail::assign_rank_from_phases(s, grid.size());
    return s;
}

/// Smallest N accepted by block_split_schedule for the given worker count.
inline std::size_t block_split_min_n(std::size_t workers) { return 3 * workers + 1; }

/// Slab decomposition along the first axis:
///   [serial]   slab 0 (leading boundary)
///   [parallel] `workers` lanes, each a contiguous run of slabs
///   [serial]   one separator slab after each block, ascending
/// Block slab counts differ by at most one. Each block sees only the boundary
/// slab (already updated) and separator slabs (not yet updated) across its x faces.
inline UpdateSchedule block_split_schedule(const GridSpec& grid, std::size_t workers)
{
    if (workers == 0)
        throw ConfigError("block-split needs at least one worker");
    const std::size_t n = grid.n();
    if (n < block_split_min_n(workers))
        throw ConfigError("block-split with " + std::to_string(workers) + " workers needs N >= "
                          + std::to_string(block_split_min_n(workers)) + " (got N = " + std::to_string(n) + ")");

    UpdateSchedule s;
    s.strategy = Strategy::BlockSplit;
    s.workers = workers;

    const std::size_t block_slabs = n - 1 - workers;
    const std::size_t base = block_slabs / workers;
    const std::size_t extra = block_slabs % workers;

    Phase boundary{false, {detail::slab_range(grid, 0, 1)}};
    Phase blocks{true, {}};
    Phase separators{false, {}};
    std::size_t slab = 1;
    Lane sep_lane;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t width = base + (w < extra ? 1 : 0);
        blocks.lanes.push_back(detail::slab_range(grid, slab, slab + width));
        slab += width;
        const Lane sep = detail::slab_range(grid, slab, slab + 1);
        sep_lane.insert(sep_lane.end(), sep.begin(), sep.end());
        ++slab;
    }
    separators.lanes.push_back(std::move(sep_lane));

    s.phases = {std::move(boundary), std::move(blocks), std::move(separators)};
    detail::assign_rank_from_phases(s, grid.size());
    return s;
}

/// True when the point's index sum is odd ("red").
inline bool is_red(const GridSpec& grid, std::size_t i)
{
    std::size_t sum = 0;
    for (int axis = 0; axis < grid.dim(); ++axis)
        sum += grid.coord(i, axis);
    return sum % 2 == 1;
}

/// Two parallel phases: all red points, then all blue points. Each color is
/// striped into `lanes` contiguous chunks in index order.
inline UpdateSchedule checkerboard_schedule(const GridSpec& grid, std::size_t lanes = 1)
{
    if (grid.n() % 2 != 0)
        throw ConfigError("checkerboard ordering requires even N so the periodic 2-coloring is consistent (got N = "
                          + std::to_string(grid.n()) + ")");
    if (lanes == 0)
        throw ConfigError("checkerboard needs at least one lane");

    Lane red, blue;
    red.reserve(grid.size() / 2);
    blue.reserve(grid.size() / 2);
    for (std::size_t i = 0; i < grid.size(); ++i)
        (is_red(grid, i) ? red : blue).push_back(i);

    auto stripe = [lanes](const Lane& color) {
        Phase phase{true, {}};
        const std::size_t count = std::min(lanes, std::max<std::size_t>(color.size(), 1));
        const std::size_t base = color.size() / count;
        const std::size_t extra = color.size() % count;
        std::size_t pos = 0;
        for (std::size_t l = 0; l < count; ++l) {
            const std::size_t len = base + (l < extra ? 1 : 0);
            phase.lanes.emplace_back(color.begin() + static_cast<std::ptrdiff_t>(pos),
                                     color.begin() + static_cast<std::ptrdiff_t>(pos + len));
            pos += len;
        }
        return phase;
    };

    UpdateSchedule s;
    s.strategy = Strategy::Checkerboard;
    s.workers = lanes;
    s.phases = {stripe(red), stripe(blue)};
    detail::assign_rank_from_phases(s, grid.size());
    return s;
}

/// Phases, lanes and in-lane order all reversed; rank' = M - 1 - rank.
/// Lexicographic forward and reverse map onto each other.
inline UpdateSchedule reverse_schedule(const UpdateSchedule& s)
{
    UpdateSchedule r = s;
    if (s.strategy == Strategy::LexicographicForward)
        r.strategy = Strategy::LexicographicReverse;
    else if (s.strategy == Strategy::LexicographicReverse)
        r.strategy = Strategy::LexicographicForward;
    std::reverse(r.phases.begin(), r.phases.end());
    for (auto& phase : r.phases) {
        std::reverse(phase.lanes.begin(), phase.lanes.end());
        for (auto& lane : phase.lanes)
            std::reverse(lane.begin(), lane.end());
    }
    const std::size_t m = s.rank.size();
    for (auto& rk : r.rank)
        rk = m - 1 - rk;
    return r;
}

enum class ViolationKind { None, Coverage, Rank, PhaseSafety };

struct ValidationReport {
    ViolationKind kind = ViolationKind::None;
    std::size_t first = 0;
    std::size_t second = 0;
    std::string message;

    bool ok() const { return kind == ViolationKind::None; }
    explicit operator bool() const { return ok(); }
};

/// Checks coverage (each index exactly once), that rank is a permutation
/// consistent with the phase plan, and that within every parallel phase no
/// lane reads (via its stencil) or writes a point written by another lane.
inline ValidationReport validate_schedule(const UpdateSchedule& s, const GridSpec& grid)
{
    const std::size_t m = grid.size();
    constexpr std::size_t unseen = static_cast<std::size_t>(-1);
    auto fail = [](ViolationKind kind, std::size_t a, std::size_t b, std::string msg) {
        return ValidationReport{kind, a, b, std::move(msg)};
    };

    // Coverage.
    std::vector<std::size_t> first_pos(m, unseen);
    std::size_t pos = 0;
    for (const auto& phase : s.phases)
        for (const auto& lane : phase.lanes)
            for (std::size_t i : lane) {
                if (i >= m)
                    return fail(ViolationKind::Coverage, i, pos,
                                "index " + std::to_string(i) + " at position " + std::to_string(pos)
                                    + " is outside the grid");
                if (first_pos[i] != unseen)
                    return fail(ViolationKind::Coverage, i, pos,
                                "index " + std::to_string(i) + " scheduled twice (positions "
                                    + std::to_string(first_pos[i]) + " and " + std::to_string(pos) + ")");
                first_pos[i] = pos++;
            }
    if (pos != m) {
        const auto missing = static_cast<std::size_t>(
            std::find(first_pos.begin(), first_pos.end(), unseen) - first_pos.begin());
        return fail(ViolationKind::Coverage, missing, missing,
                    "index " + std::to_string(missing) + " is never scheduled");
    }

    // Rank is a permutation.
    if (s.rank.size() != m)
        return fail(ViolationKind::Rank, s.rank.size(), m,
                    "rank has " + std::to_string(s.rank.size()) + " entries, grid has " + std::to_string(m));
    std::vector<std::size_t> holder(m, unseen);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t r = s.rank[i];
        if (r >= m || holder[r] != unseen)
            return fail(ViolationKind::Rank, i, r < m ? holder[r] : r,
                        "rank of index " + std::to_string(i) + " is not a permutation entry");
        holder[r] = i;
    }

    // Rank consistent with one interleaving: phases ordered, lanes increasing,
    // serial phases increasing across their lane concatenation.
    std::size_t prev_phase_max = 0;
    bool have_prev = false;
    for (const auto& phase : s.phases) {
        std::size_t lo = unseen, hi = 0;
        bool have_last = false;
        std::size_t last = 0, last_index = 0;
        for (const auto& lane : phase.lanes) {
            if (phase.parallel)
                have_last = false;
            for (std::size_t i : lane) {
                const std::size_t r = s.rank[i];
                if (have_last && r <= last)
                    return fail(ViolationKind::Rank, last_index, i,
                                "rank order of indices " + std::to_string(last_index) + " and "
                                    + std::to_string(i) + " contradicts their sweep order");
                have_last = true;
                last = r;
                last_index = i;
                lo = std::min(lo, r);
                hi = std::max(hi, r);
            }
        }
        if (lo == unseen)
            continue;
        if (have_prev && lo <= prev_phase_max)
            return fail(ViolationKind::Rank, holder[lo], holder[prev_phase_max],
                        "index " + std::to_string(holder[lo]) + " is ranked before index "
                            + std::to_string(holder[prev_phase_max]) + " of an earlier phase");
        prev_phase_max = hi;
        have_prev = true;
    }

    // Phase safety.
    std::vector<std::size_t> owner(m, unseen);
    for (const auto& phase : s.phases) {
        if (!phase.parallel || phase.lanes.size() < 2)
            continue;
        for (std::size_t l = 0; l < phase.lanes.size(); ++l)
            for (std::size_t i : phase.lanes[l])
                owner[i] = l;
        for (std::size_t l = 0; l < phase.lanes.size(); ++l)
            for (std::size_t i : phase.lanes[l])
                for (std::size_t nb : neighbor_indices(grid, i))
                    if (owner[nb] != unseen && owner[nb] != l)
                        return fail(ViolationKind::PhaseSafety, i, nb,
                                    "index " + std::to_string(i) + " (lane " + std::to_string(l)
                                        + ") reads neighbor " + std::to_string(nb) + " written by lane "
                                        + std::to_string(owner[nb]) + " in the same phase");
        for (const auto& lane : phase.lanes)
            for (std::size_t i : lane)
                owner[i] = unseen;
    }
    return {};
}

/// A schedule that passed validate_schedule against a specific grid.
/// Executors only accept this type.
class CheckedSchedule {
public:
    CheckedSchedule(UpdateSchedule schedule, const GridSpec& grid) : schedule_(std::move(schedule)), grid_(grid)
    {
        const ValidationReport report = validate_schedule(schedule_, grid);
        if (!report)
            throw ScheduleError("invalid " + std::string(to_string(schedule_.strategy))
                                + " schedule: " + report.message);
    }

    const UpdateSchedule& schedule() const { return schedule_; }
    const GridSpec& grid() const { return grid_; }

private:
    UpdateSchedule schedule_;
    GridSpec grid_;
};

/// Forward schedule and its reverse, both validated. The reverse drives the adjoint sweep.
struct SweepPlan {
    CheckedSchedule forward;
    CheckedSchedule reverse;

    SweepPlan(UpdateSchedule schedule, const GridSpec& grid)
        : forward(schedule, grid), reverse(reverse_schedule(schedule), grid)
    {}
};

} // namespace kgs
