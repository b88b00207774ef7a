#include <gtest/gtest.h>

#include <filesystem>

#include "kgs/integrator.hpp"
#include "kgs/reference.hpp"
#include "oracle/oracle.hpp"
#include "test_util.hpp"

using namespace kgs;
using kgs::test::periodic_grid;
using kgs::test::random_state;
using kgs::test::rel_change;
using kgs::test::rel_diff;

namespace {

const PhysParams kParams{0.9, 1.1, 0.8, 1.2};

std::vector<UpdateSchedule> schedules_for(const GridSpec& g)
{
    return {lexicographic_schedule(g, true), lexicographic_schedule(g, false), random_schedule(g, 1),
            random_schedule(g, 2), block_split_schedule(g, 2), checkerboard_schedule(g, 3)};
}

FieldState smooth_1d(const GridSpec& g)
{
    FieldState s = FieldState::zeros(g);
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double x = g.node(j);
        s.p[j] = std::cos(x);
        s.q[j] = 0.5 * std::sin(2 * x);
        s.u[j] = 0.5 * std::cos(x);
        s.v[j] = 0.2 * std::sin(x);
    }
    return s;
}

} // namespace

TEST(Sweep, ZeroStateIsFixedPoint)
{
    const GridSpec g = periodic_grid(2, 8);
    const SweepPlan plan(random_schedule(g, 3), g);
    const auto c = precompute_coefficients(kParams, 0.1, g);
    FieldState s = FieldState::zeros(g);
    step_base(s, plan, c);
    step_adjoint(s, plan, c);
    EXPECT_TRUE(kgs::test::same_fields(s, FieldState::zeros(g)));
    EXPECT_DOUBLE_EQ(s.t, 0.2);
}

TEST(Sweep, EnergyPreservedForEverySchedule)
{
    const GridSpec g = periodic_grid(2, 8);
    const auto c = precompute_coefficients(kParams, 0.1, g);
    for (const auto& sched : schedules_for(g)) {
        const SweepPlan plan(sched, g);
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            FieldState s = random_state(g, seed);
            const double e0 = discrete_energy(s, kParams, g);
            step_base(s, plan, c);
            const double e1 = discrete_energy(s, kParams, g);
            EXPECT_LE(rel_change(e1, e0), 1e-12) << to_string(sched.strategy);
            step_adjoint(s, plan, c);
            EXPECT_LE(rel_change(discrete_energy(s, kParams, g), e0), 1e-12) << to_string(sched.strategy);
        }
    }
}

TEST(Sweep, LexicographicMatchesSuperscriptOracle)
{
    const GridSpec g = periodic_grid(2, 8);
    const auto sched = lexicographic_schedule(g, true);
    const SweepPlan plan(sched, g);
    const auto c = precompute_coefficients(kParams, 0.1, g);
    const FieldState s0 = random_state(g, 21);
    FieldState s = s0;
    step_base(s, plan, c);
    EXPECT_EQ(s, oracle::explicit_superscript_sweep(s0, sched, c, g, false));
}

TEST(Sweep, InPlaceEqualsOracleForAllStrategies)
{
    for (int d = 1; d <= 3; ++d) {
        const GridSpec g = periodic_grid(d, 8);
        const auto c = precompute_coefficients(kParams, 0.1, g);
        std::vector<UpdateSchedule> scheds = schedules_for(g);
        for (std::uint64_t seed = 100; seed < 120; ++seed)
            scheds.push_back(random_schedule(g, seed));
        for (const auto& sched : scheds) {
            const SweepPlan plan(sched, g);
            const FieldState s0 = random_state(g, 7 + d);
            FieldState a = s0, b = s0;
            step_base(a, plan, c);
            step_adjoint(b, plan, c);
            EXPECT_EQ(a, oracle::explicit_superscript_sweep(s0, sched, c, g, false)) << to_string(sched.strategy);
            EXPECT_EQ(b, oracle::explicit_superscript_sweep(s0, sched, c, g, true)) << to_string(sched.strategy);
        }
    }
}

TEST(Sweep, AdjointThenNegativeBaseRoundTrip)
{
    const GridSpec g = periodic_grid(2, 8);
    for (const auto& sched : schedules_for(g)) {
        const SweepPlan plan(sched, g);
        const FieldState z = random_state(g, 17);
        FieldState y = z;
        step_adjoint(y, plan, precompute_coefficients(kParams, 0.1, g));
        step_base(y, plan, precompute_coefficients(kParams, -0.1, g));
        EXPECT_LE(rel_diff(y, z), 1e-11) << to_string(sched.strategy);
        EXPECT_NEAR(y.t, 0.0, 1e-15);
    }
}

TEST(Dpavf2, TimeSymmetric)
{
    for (int d = 1; d <= 3; ++d) {
        const GridSpec g = periodic_grid(d, 8);
        for (const auto& sched : schedules_for(g)) {
            const SweepPlan plan(sched, g);
            const FieldState z = random_state(g, 3 * d);
            FieldState y = z;
            step_dpavf2(y, plan, precompute_coefficients(kParams, 0.05, g));
            step_dpavf2(y, plan, precompute_coefficients(kParams, -0.05, g));
            EXPECT_LE(rel_diff(y, z), 1e-10);
        }
    }
}

TEST(Dpavf2, EnergyOverThousandSteps)
{
    const GridSpec g = periodic_grid(2, 16);
    const Stepper stepper(g, kParams, 0.05, random_schedule(g, 5));
    FieldState s = random_state(g, 8, 0.5);
    const double e0 = discrete_energy(s, kParams, g);
    double worst_step = 0.0, worst = 0.0;
    double prev = e0;
    for (int k = 0; k < 1000; ++k) {
        stepper.step(s);
        const double e = discrete_energy(s, kParams, g);
        worst_step = std::max(worst_step, rel_change(e, prev));
        worst = std::max(worst, rel_change(e, e0));
        prev = e;
    }
    EXPECT_LE(worst_step, 1e-12);
    EXPECT_LE(worst, 1e-11);
}

TEST(Dpavf2, SecondOrderInTime)
{
    const GridSpec g(1, 0.0, 2.0 * M_PI, 64);
    const PhysParams prm{1.0, 1.0, 1.0, 1.0};
    const FieldState s0 = smooth_1d(g);
    const double t_end = 0.5, tau = 0.05;
    const auto ref = rk4_reference(s0, prm, g, tau / 200, t_end);
    std::vector<double> err;
    for (double dt : {tau, tau / 2}) {
        FieldState s = s0;
        Stepper(g, prm, dt, lexicographic_schedule(g)).advance(s, step_count(t_end, dt));
        err.push_back(rel_diff(s, ref.states.back()));
    }
    const double ratio = err[0] / err[1];
    EXPECT_GE(ratio, 3.2) << err[0] << " " << err[1];
    EXPECT_LE(ratio, 4.8) << err[0] << " " << err[1];
}

TEST(StepCount, RoundsNoiseAndCeils)
{
    EXPECT_EQ(step_count(10.0, 0.1), 100u);
    EXPECT_EQ(step_count(1.0, 1.0 / 3.0), 3u);
    EXPECT_EQ(step_count(1.05, 0.1), 11u);
    EXPECT_EQ(step_count(0.0, 0.1), 0u);
}

namespace {

RunConfig small_config()
{
    RunConfig c;
    c.dimension = 2;
    c.a = 0.0;
    c.b = 2 * M_PI;
    c.n = 8;
    c.tau = 0.1;
    c.t_final = 1.0;
    c.params = kParams;
    c.scenario = "random";
    return c;
}

} // namespace

TEST(Integrate, ZeroFinalTimeKeepsState)
{
    RunConfig c = small_config();
    c.t_final = 0.0;
    FieldState s = random_state(c.grid(), 1);
    const FieldState s0 = s;
    const EnergyTrace tr = integrate(s, c);
    ASSERT_EQ(tr.records.size(), 1u);
    EXPECT_EQ(tr.records[0].error, 0.0);
    EXPECT_EQ(s, s0);
}

TEST(Integrate, TraceLengthFollowsStride)
{
    for (std::size_t stride : {1u, 3u, 4u, 10u, 11u}) {
        RunConfig c = small_config();
        c.record_stride = stride;
        FieldState s = random_state(c.grid(), 1);
        const EnergyTrace tr = integrate(s, c);
        EXPECT_EQ(tr.records.size(), 10 / stride + 1);
        EXPECT_EQ(tr.records.front().error, 0.0);
        EXPECT_LE(tr.max_error(), 1e-12);
        EXPECT_NEAR(s.t, 1.0, 1e-12);
    }
}

TEST(Integrate, ZeroEnergyUsesAbsoluteError)
{
    RunConfig c = small_config();
    FieldState s = FieldState::zeros(c.grid());
    const EnergyTrace tr = integrate(s, c);
    EXPECT_TRUE(tr.absolute_error);
    EXPECT_EQ(tr.max_error(), 0.0);
}

TEST(Integrate, WritesSnapshots)
{
    const auto dir = std::filesystem::temp_directory_path() / "kgs_integrate_snapshots";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    RunConfig c = small_config();
    c.snapshot_stride = 4;
    c.output_dir = dir.string();
    FieldState s = random_state(c.grid(), 1);
    integrate(s, c);
    for (std::size_t step : {0u, 4u, 8u})
        EXPECT_TRUE(std::filesystem::exists(snapshot_path(dir, step)));
    EXPECT_FALSE(std::filesystem::exists(snapshot_path(dir, 10)));
    EXPECT_EQ(read_snapshot(snapshot_path(dir, 8)).state.t, 0.8);
    std::filesystem::remove_all(dir);
}

TEST(Integrate, NonFiniteStateFails)
{
    RunConfig c = small_config();
    FieldState s = random_state(c.grid(), 1);
    s.v[63] = std::numeric_limits<double>::infinity();
    EXPECT_TRUE(has_non_finite(s));
    EXPECT_THROW(integrate(s, c), Error);
}

TEST(Reference, ZeroStateStaysZero)
{
    const GridSpec g = periodic_grid(2, 6);
    const auto ref = rk4_reference(FieldState::zeros(g), PhysParams{}, g, 0.01, 0.1, {0.05});
    ASSERT_EQ(ref.states.size(), 2u);
    for (const auto& s : ref.states)
        EXPECT_TRUE(kgs::test::same_fields(s, FieldState::zeros(g)));
    EXPECT_NEAR(ref.times[0], 0.05, 1e-15);
}

TEST(Reference, DecoupledOscillator)
{
    const GridSpec g = periodic_grid(2, 4);
    const FieldState s0 = random_state(g, 2);
    const auto ref = rk4_reference(s0, PhysParams{0.0, 0.0, 1.0, 0.0}, g, 1e-3, 1.0);
    const FieldState& s = ref.states.back();
    for (std::size_t i = 0; i < g.size(); ++i)
        EXPECT_NEAR(s.u[i], std::cos(1.0) * s0.u[i] + std::sin(1.0) * s0.v[i], 1e-12);
}

TEST(Reference, EnergyDriftSmallOnGaussian)
{
    const GridSpec g(2, -10.0, 10.0, 64);
    const auto ref = rk4_reference(preset_gaussian2d(g), PhysParams{}, g, 1e-3, 1.0);
    EXPECT_LT(ref.energy_drift, 1e-10);
}

TEST(Reference, FourthOrderSelfConsistency)
{
    const GridSpec g(1, 0.0, 2.0 * M_PI, 32);
    const PhysParams prm{};
    const FieldState s0 = smooth_1d(g);
    const auto fine = rk4_reference(s0, prm, g, 0.0025, 0.5);
    const double e1 = rel_diff(rk4_reference(s0, prm, g, 0.02, 0.5).states.back(), fine.states.back());
    const double e2 = rel_diff(rk4_reference(s0, prm, g, 0.01, 0.5).states.back(), fine.states.back());
    EXPECT_GT(e1 / e2, 12.0);
    EXPECT_LT(e1 / e2, 20.0);
}

TEST(Reference, RejectsNonMultipleHorizon)
{
    const GridSpec g = periodic_grid(1, 4);
    EXPECT_THROW(rk4_reference(FieldState::zeros(g), PhysParams{}, g, 0.3, 1.0), ConfigError);
}
