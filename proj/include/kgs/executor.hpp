#pragma once

// Executors for checked schedules.
//
// Serial: every lane of every phase in order on the calling thread.
// Phased: phases strictly in order with a barrier between them; the lanes of a
// parallel phase are block-distributed over up to `workers` OpenMP threads.
// Lanes of a parallel phase have disjoint write sets and never read each
// other's same-phase writes, so the result is bitwise independent of the
// worker count and of the actual interleaving.

#include <algorithm>
#include <cstddef>
#include <exception>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "kgs/errors.hpp"
#include "kgs/schedule.hpp"

namespace kgs {

enum class ExecutorMode { Serial, Phased };

inline std::string_view to_string(ExecutorMode m) { return m == ExecutorMode::Serial ? "serial" : "phased"; }

inline std::optional<ExecutorMode> parse_executor(std::string_view name)
{
    if (name == "serial")
        return ExecutorMode::Serial;
    if (name == "phased")
        return ExecutorMode::Phased;
    return std::nullopt;
}

struct ExecutorConfig {
    ExecutorMode mode = ExecutorMode::Serial;
    std::size_t workers = 1;
};

namespace detail {

template <typename Kernel>
void run_lane(const Lane& lane, Kernel& kernel)
{
    for (std::size_t i : lane)
        kernel(i);
}

} // namespace detail

template <typename Kernel>
void execute_serial(const CheckedSchedule& checked, Kernel&& kernel)
{
    for (const auto& phase : checked.schedule().phases)
        for (const auto& lane : phase.lanes)
            detail::run_lane(lane, kernel);
}

/// Kernel errors thrown inside a parallel phase are collected per lane and the
/// one from the lowest lane index is rethrown after the phase barrier.
template <typename Kernel>
void execute_phased(const CheckedSchedule& checked, Kernel&& kernel, std::size_t workers)
{
    if (workers == 0)
        throw ConfigError("phased executor needs at least one worker");
    for (const auto& phase : checked.schedule().phases) {
        const auto lane_count = static_cast<long>(phase.lanes.size());
        if (!phase.parallel || lane_count < 2 || workers == 1) {
            for (const auto& lane : phase.lanes)
                detail::run_lane(lane, kernel);
            continue;
        }
        const int threads = static_cast<int>(std::min<std::size_t>(workers, phase.lanes.size()));
        std::vector<std::exception_ptr> errors(phase.lanes.size());
#pragma omp parallel for num_threads(threads) schedule(static)
        for (long l = 0; l < lane_count; ++l) {
            try {
                detail::run_lane(phase.lanes[static_cast<std::size_t>(l)], kernel);
            } catch (...) {
                errors[static_cast<std::size_t>(l)] = std::current_exception();
            }
        }
        for (const auto& e : errors)
            if (e)
                std::rethrow_exception(e);
    }
}

/// Validates first; refuses schedules that fail phase safety.
template <typename Kernel>
void execute_phased(const UpdateSchedule& schedule, const GridSpec& grid, Kernel&& kernel, std::size_t workers)
{
    const CheckedSchedule checked(schedule, grid);
    execute_phased(checked, std::forward<Kernel>(kernel), workers);
}

template <typename Kernel>
void execute(const CheckedSchedule& checked, Kernel&& kernel, const ExecutorConfig& config)
{
    if (config.mode == ExecutorMode::Serial)
        execute_serial(checked, std::forward<Kernel>(kernel));
    else
        execute_phased(checked, std::forward<Kernel>(kernel), config.workers);
}

/// Number of hardware threads OpenMP would use by default.
inline int available_cores()
{
#ifdef _OPENMP
    return omp_get_num_procs();
#else
    return 1;
#endif
}

} // namespace kgs
