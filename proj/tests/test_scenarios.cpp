#include <gtest/gtest.h>

#include "kgs/scenarios.hpp"
#include "test_util.hpp"

using namespace kgs;

TEST(Gaussian2d, OriginValues)
{
    const GridSpec g(2, -10.0, 10.0, 128);
    const FieldState s = preset_gaussian2d(g);
    const std::size_t origin = 64 * 128 + 64;
    EXPECT_EQ(g.node(64), 0.0);
    EXPECT_EQ(s.p[origin], 1.0);
    EXPECT_EQ(s.q[origin], 1.0);
    EXPECT_EQ(s.u[origin], 0.0);
    EXPECT_EQ(s.v[origin], 0.0);
    EXPECT_EQ(s.p, s.q);
}

TEST(Gaussian2d, EnergyMatchesIndependentQuadrature)
{
    const std::size_t n = 128;
    const GridSpec g(2, -10.0, 10.0, n);
    const PhysParams prm{};
    const double h = 20.0 / n;
    auto x = [&](std::size_t j) { return -10.0 + h * static_cast<double>(j); };
    auto psi = [&](std::size_t j, std::size_t k) { return std::exp(-(x(j) * x(j) + x(k) * x(k))); };
    auto u = [&](std::size_t j, std::size_t k) { return std::tanh(x(j) * x(j) + x(k) * x(k)); };
    auto v = [&](std::size_t j, std::size_t k) { return std::sin(x(j) + x(k)) * std::exp(-2 * (x(j) * x(j) + x(k) * x(k))); };
    double e = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t jp = (j + 1) % n, kp = (k + 1) % n;
            const double dpx = (psi(jp, k) - psi(j, k)) / h, dpy = (psi(j, kp) - psi(j, k)) / h;
            const double dux = (u(jp, k) - u(j, k)) / h, duy = (u(j, kp) - u(j, k)) / h;
            const double p2 = 2 * psi(j, k) * psi(j, k);
            e += 0.5 * (2 * (dpx * dpx + dpy * dpy) + dux * dux + duy * duy + v(j, k) * v(j, k) + u(j, k) * u(j, k))
                 - p2 * u(j, k);
        }
    e *= h * h;
    EXPECT_NEAR(discrete_energy(preset_gaussian2d(g), prm, g), e, 1e-10 * std::abs(e));
}

TEST(Fourpeak2d, QuarterTurnSymmetry)
{
    const std::size_t n = 64;
    const GridSpec g(2, -10.0, 10.0, n);
    const FieldState s = preset_fourpeak2d(g);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t i = j * n + k;
            const std::size_t r = ((n - k) % n) * n + j;
            EXPECT_NEAR(s.p[i], s.p[r], 1e-12);
            EXPECT_NEAR(s.u[i], s.u[r], 1e-12);
            EXPECT_NEAR(s.v[i], s.v[r], 1e-12);
        }
}

TEST(Fourpeak2d, PeakValueAndVMaximum)
{
    const GridSpec g(2, -10.0, 10.0, 40);
    const FieldState s = preset_fourpeak2d(g);
    const std::size_t i = 20 * 40 + 14; // (0, -3)
    EXPECT_EQ(g.node(20), 0.0);
    EXPECT_EQ(g.node(14), -3.0);
    EXPECT_NEAR(s.p[i], 1.0 + 2 * std::exp(-18.0) + std::exp(-36.0), 1e-15);
    EXPECT_EQ(s.p[i], s.q[i]);
    EXPECT_NEAR(s.u[i], 2 * std::tanh(18.0) + std::tanh(36.0), 1e-15);
    const std::size_t origin = 20 * 40 + 20;
    for (double v : s.v)
        EXPECT_LE(v, s.v[origin]);
    EXPECT_EQ(s.v[origin], 1.0);
}

TEST(Ellipsoids3d, LiteralRealPhase)
{
    const std::size_t n = 40;
    const GridSpec g(3, -10.0, 10.0, n);
    const FieldState s = preset_ellipsoids3d(g);
    for (double q : s.q)
        EXPECT_EQ(q, 0.0);
    auto idx = [&](std::size_t j, std::size_t k, std::size_t l) { return (j * n + k) * n + l; };
    EXPECT_EQ(s.v[idx(20, 20, 20)], 1.0);
    // (0,0,2): top ellipsoid plus two tails exp(-3 - 9)
    EXPECT_NEAR(s.u[idx(20, 20, 24)], 1.0 + 2 * std::exp(-12.0), 1e-15);
    // (-2,0,0): j=0 term equals 1, j=1 term exp(-16) exp(-0.02)
    EXPECT_NEAR(s.p[idx(16, 20, 20)], 1.0 + std::exp(-16.0) * std::exp(-0.02), 1e-15);
}

TEST(Presets, WrongDimensionRejected)
{
    EXPECT_THROW(preset_gaussian2d(GridSpec(3, -10, 10, 4)), ConfigError);
    EXPECT_THROW(preset_ellipsoids3d(GridSpec(2, -10, 10, 4)), ConfigError);
    EXPECT_THROW(make_initial_state("nope", GridSpec(2, -10, 10, 4)), ConfigError);
}

TEST(Presets, FiniteAndReproducible)
{
    for (const auto& spec : scenario_catalog()) {
        const GridSpec g(spec.dimension == 0 ? 2 : spec.dimension, spec.a, spec.b, spec.dimension == 3 ? 16 : 32);
        const FieldState a = make_initial_state(spec.name, g, 5);
        EXPECT_TRUE(a.all_finite()) << spec.name;
        EXPECT_EQ(discrete_energy(a, spec.params, g), discrete_energy(make_initial_state(spec.name, g, 5), spec.params, g));
    }
}

TEST(RandomState, SeedAndAmplitude)
{
    const GridSpec g = kgs::test::periodic_grid(2, 8);
    EXPECT_EQ(seeded_random_state(g, 42, 1.0), seeded_random_state(g, 42, 1.0));
    EXPECT_NE(seeded_random_state(g, 42, 1.0), seeded_random_state(g, 43, 1.0));
    EXPECT_EQ(seeded_random_state(g, 42, 0.0), FieldState::zeros(g));
    for (double x : seeded_random_state(g, 1, 0.25).u)
        EXPECT_LE(std::abs(x), 0.25);
    EXPECT_THROW(seeded_random_state(g, 1, -1.0), ConfigError);
}
