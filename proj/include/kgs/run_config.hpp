#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kgs/executor.hpp"
#include "kgs/grid.hpp"
#include "kgs/schedule.hpp"

namespace kgs {

/// Everything a run needs. Built by parse_config; defaults are the documented
/// defaults for optional keys.
struct RunConfig {
    int dimension = 2;
    double a = -10.0;
    double b = 10.0;
    std::size_t n = 0;
    double tau = 0.0;
    double t_final = 0.0;
    PhysParams params;
    std::string scenario = "gaussian2d";
    Strategy strategy = Strategy::LexicographicForward;
    std::uint64_t seed = 0;
    ExecutorMode executor = ExecutorMode::Serial;
    std::size_t workers = 1;
    std::size_t record_stride = 1;
    std::size_t snapshot_stride = 0; // 0 = off
    std::string output_dir = ".";

    // seeded random scenario
    double amplitude = 1.0;

    // convergence
    std::size_t levels = 3;
    bool reference = true;

    // energy
    std::size_t orders = 0; // > 0 runs that many seeded random orders

    // bench
    std::vector<std::size_t> bench_n;
    std::vector<std::size_t> bench_workers;
    std::size_t repetitions = 3;

    GridSpec grid() const { return GridSpec(dimension, a, b, n); }
    ExecutorConfig executor_config() const { return {executor, workers}; }
};

/// Builds the configured schedule on `grid`. Checkerboard colors are striped
/// into `workers` lanes; block-split uses `workers` blocks.
inline UpdateSchedule make_schedule(Strategy strategy, const GridSpec& grid, std::uint64_t seed, std::size_t workers)
{
    switch (strategy) {
    case Strategy::LexicographicForward: return lexicographic_schedule(grid, true);
    case Strategy::LexicographicReverse: return lexicographic_schedule(grid, false);
    case Strategy::SeededRandom: return random_schedule(grid, seed);
    case Strategy::BlockSplit: return block_split_schedule(grid, workers);
    case Strategy::Checkerboard: return checkerboard_schedule(grid, workers);
    }
    throw ConfigError("unknown strategy");
}

inline UpdateSchedule make_schedule(const RunConfig& config, const GridSpec& grid)
{
    return make_schedule(config.strategy, grid, config.seed, config.workers);
}

} // namespace kgs
