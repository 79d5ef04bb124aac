#include "oracles.hpp"

#include <biait/sampling.hpp>
#include <biait/worlds.hpp>

#include <gtest/gtest.h>

using namespace biait;

namespace
{
    ProblemDef fixtureA() { return builtinWorld("wallgap2d").problem; }

    ProblemDef foci04()
    {
        ProblemDef p;
        p.dim = 2;
        p.bounds = {{-5.0, -5.0}, {9.0, 5.0}};
        p.start = {0.0, 0.0};
        p.goals = {{4.0, 0.0}};
        return p;
    }

    /** Distance from x to the polyline through pts. */
    double polylineDistance(const std::vector<StateVec> &pts, const StateVec &x)
    {
        double best = kInf;
        for (std::size_t i = 1; i < pts.size(); ++i)
        {
            const StateVec &a = pts[i - 1];
            const StateVec &b = pts[i];
            const double dx = b[0] - a[0], dy = b[1] - a[1];
            double t = ((x[0] - a[0]) * dx + (x[1] - a[1]) * dy) / (dx * dx + dy * dy);
            t = std::clamp(t, 0.0, 1.0);
            best = std::min(best, std::hypot(x[0] - a[0] - t * dx, x[1] - a[1] - t * dy));
        }
        return best;
    }
}  // namespace

TEST(SampleUniform, ValidStateInBounds)
{
    const ProblemDef p = fixtureA();
    Rng rng(1);
    const StateVec x = sampleUniform(p, rng);
    EXPECT_TRUE(stateValid(p, x));
}

TEST(SampleUniform, SaturatedSpaceThrows)
{
    ProblemDef p = fixtureA();
    p.obstacles.push_back(Obstacle::aabb({0.0, 0.0}, {10.0, 10.0}));
    Rng rng(1);
    EXPECT_THROW(sampleUniform(p, rng), SpaceSaturated);
}

TEST(SampleUniform, LeftHalfFractionMatchesFreeArea)
{
    // free area left of x=5: 50 - 0.2*8 = 48.4 of 96.8 in total, i.e. exactly one half
    const ProblemDef p = fixtureA();
    const double expected = (50.0 - 0.2 * 8.0) / (100.0 - 0.4 * 8.0);
    Rng rng(2);
    int left = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i)
        left += sampleUniform(p, rng)[0] < 5.0;
    const double frac = static_cast<double>(left) / n;
    const double sigma = std::sqrt(expected * (1.0 - expected) / n);
    EXPECT_NEAR(frac, expected, 4.0 * sigma);
    EXPECT_GE(frac, 0.46);
    EXPECT_LE(frac, 0.54);
}

TEST(SampleInformed, StaysInsideEllipse)
{
    const ProblemDef p = foci04();
    Rng rng(3);
    const double a = 2.5;
    const double b = std::sqrt(25.0 - 16.0) / 2.0;
    for (int i = 0; i < 10000; ++i)
    {
        const StateVec x = sampleInformed(p, 5.0, rng);
        const auto [f, r] = heuristicBounds(p, x);
        ASSERT_LE(f + r, 5.0 + 1e-9);
        // semi-axes about the centre (2, 0)
        ASSERT_LE(std::abs(x[0] - 2.0), a + 1e-9);
        ASSERT_LE(std::abs(x[1]), b + 1e-9);
    }
}

TEST(SampleInformed, InfiniteCostDelegatesToUniform)
{
    const ProblemDef p = fixtureA();
    Rng r1(9), r2(9);
    for (int i = 0; i < 100; ++i)
        ASSERT_EQ(sampleInformed(p, kInf, r1), sampleUniform(p, r2));
}

TEST(SampleInformed, ThinEllipseHugsSegment)
{
    const ProblemDef p = foci04();
    Rng rng(4);
    const double b = std::sqrt(4.0001 * 4.0001 - 16.0) / 2.0;
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i)
        worst = std::max(worst, std::abs(sampleInformed(p, 4.0001, rng)[1]));
    EXPECT_LE(worst, b + 1e-9);
    EXPECT_LE(worst, 0.02);
}

TEST(SampleInformed, HigherDimensionSoundness)
{
    const Scenario s = builtinWorld("empty-7");
    Rng rng(5);
    const double c = 9.0;
    for (int i = 0; i < 5000; ++i)
        ASSERT_TRUE(inInformedSet(s.problem, sampleInformed(s.problem, c, rng), c + 1e-9));
}

TEST(SampleNearPath, MostlyWithinTwoSigma)
{
    ProblemDef p;
    p.dim = 2;
    p.bounds = {{0.0, 0.0}, {10.0, 10.0}};
    p.start = {1.0, 5.0};
    p.goals = {{9.0, 5.0}};
    const std::vector<StateVec> path{{1.0, 5.0}, {5.0, 8.0}, {9.0, 5.0}};
    Rng rng(6);
    const double twoSigma = 2.0 * 0.05 * 10.0 / 2.0;
    int inside = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i)
    {
        const StateVec x = sampleNearPath(p, path, 10.0, 0.05, rng);
        ASSERT_TRUE(inInformedSet(p, x, 10.0 + 1e-9));
        inside += polylineDistance(path, x) <= twoSigma;
    }
    EXPECT_NEAR(static_cast<double>(inside) / n, 0.95, 0.02);
}

TEST(SampleNearPath, VanishingNoiseLandsOnPolyline)
{
    ProblemDef p;
    p.dim = 2;
    p.bounds = {{0.0, 0.0}, {10.0, 10.0}};
    p.start = {1.0, 5.0};
    p.goals = {{9.0, 5.0}};
    const std::vector<StateVec> path{{1.0, 5.0}, {5.0, 8.0}, {9.0, 5.0}};
    Rng rng(7);
    for (int i = 0; i < 1000; ++i)
        ASSERT_LE(polylineDistance(path, sampleNearPath(p, path, 10.0, 1e-9, rng)), 1e-6);
}

TEST(SampleNearPath, SinglePointPath)
{
    ProblemDef p;
    p.dim = 2;
    p.bounds = {{0.0, 0.0}, {10.0, 10.0}};
    p.start = {1.0, 5.0};
    p.goals = {{9.0, 5.0}};
    Rng rng(8);
    for (int i = 0; i < 1000; ++i)
    {
        const StateVec x = sampleNearPath(p, {{5.0, 5.0}}, 10.0, 0.05, rng);
        ASSERT_LE(euclidCost(x, {5.0, 5.0}), 5.0 * 0.05 * 10.0 / 2.0);
    }
}

TEST(BatchSchedule, VariationalAndConstant)
{
    SamplerConfig cfg;
    cfg.variational = VariationalSchedule{10, 1.5, 100000};
    EXPECT_EQ(batchSchedule(cfg, 0), 10u);
    EXPECT_EQ(batchSchedule(cfg, 1), 25u);
    EXPECT_EQ(batchSchedule(cfg, 2), 63u);
    EXPECT_EQ(batchSchedule(cfg, 3), 156u);
    EXPECT_EQ(batchSchedule(cfg, 40), 100000u);
    SamplerConfig constant;
    constant.batchSize = 300;
    for (std::size_t n = 0; n < 20; ++n)
        EXPECT_EQ(batchSchedule(constant, n), 300u);
}

TEST(SampleBatch, UniformBatch)
{
    const ProblemDef p = fixtureA();
    SamplerConfig cfg;
    cfg.batchSize = 100;
    Rng rng(10);
    const auto xs = sampleBatch(p, cfg, 0, kInf, {}, rng);
    ASSERT_EQ(xs.size(), 100u);
    for (const auto &x : xs)
        EXPECT_TRUE(stateValid(p, x));
}

TEST(SampleBatch, NearPathDrawFraction)
{
    ProblemDef p = fixtureA();
    SamplerConfig cfg;
    cfg.batchSize = 10000;
    cfg.pNear = 0.5;
    const std::vector<StateVec> path{{1.0, 5.0}, {4.8, 8.0}, {5.2, 8.0}, {9.0, 5.0}};
    Rng rng(12);
    std::size_t near = 0;
    sampleBatch(p, cfg, 0, 11.0, path, rng, &near);
    const double frac = static_cast<double>(near) / 10000.0;
    EXPECT_GE(frac, 0.47);
    EXPECT_LE(frac, 0.53);
}

TEST(SampleBatch, VariationalSizes)
{
    const ProblemDef p = fixtureA();
    SamplerConfig cfg;
    cfg.variational = VariationalSchedule{10, 1.5, 100000};
    Rng rng(13);
    const std::size_t expected[] = {10, 25, 63, 156};
    for (std::size_t n = 0; n < 4; ++n)
        EXPECT_EQ(sampleBatch(p, cfg, n, kInf, {}, rng).size(), expected[n]);
}
