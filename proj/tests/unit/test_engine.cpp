#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bcp/engine.hpp"
#include "bcp/error.hpp"
#include "bcp/oracles.hpp"

namespace {

using bcp::Scheme;

const bcp::UnitDiffusion& bm() {
    static const auto u = bcp::to_unit_diffusion(bcp::models::brownian());
    return u;
}

const bcp::UnitDiffusion& ou() {
    static const auto u = bcp::to_unit_diffusion(bcp::models::ornstein_uhlenbeck());
    return u;
}

bcp::BoundaryPair flat(double c, int n) {
    return bcp::make_boundary_pair([c](double) { return -c; }, [c](double) { return c; }, 0.0, n);
}

bcp::LatticeLadder flat_ladder(double c, int n, double gamma = 2.0, double delta = 0.0) {
    return bcp::build_ladder(bcp::uniform_time_grid(n), flat(c, n), 0.0, {gamma, delta});
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

TEST(Normalizer, FineLatticeIsOne) {
    const double sd = 0.3;
    const double c = bcp::normalizer_direct(0.1, sd, 1.0, sd / 100);
    EXPECT_NEAR(c, 1.0, 1e-12);
    EXPECT_NEAR(1.0 + bcp::normalizer_deviation(0.1, sd, 1.0, sd / 100), 1.0, 1e-12);
}

TEST(Normalizer, DualAndDirectAgree) {
    for (const double ratio : {0.5, 0.6, 0.8, 1.0}) {
        const double h = 0.1;
        const double sd = ratio * h;
        for (const double mean : {0.0, 0.013, 0.05, 0.071}) {
            const double direct = bcp::normalizer_direct(mean, sd, 0.3, h) - 1.0;
            const double dual = bcp::normalizer_dual_deviation(mean, sd, 0.3, h);
            EXPECT_NEAR(direct, dual, 1e-14) << "ratio " << ratio << " mean " << mean;
        }
    }
}

TEST(Normalizer, BoundHoldsForBrownianAtDeltaZero) {
    const int n = 64;
    const auto ladder = flat_ladder(1.0, n, 1.0, 0.0);
    const double bound = bcp::normalizer_bound(n, 0.0, 1.0, 1.0);
    for (int k = 1; k <= n; ++k) {
        for (const double x : ladder.levels[k - 1].states()) {
            const double c = bcp::normalizer(bm(), ladder, k, x, Scheme::taylor2);
            EXPECT_LE(std::abs(c - 1.0), bound);
        }
    }
    // The leading Poisson term is visible at gamma = 1.
    const double c = bcp::normalizer(bm(), ladder, 1, 0.0, Scheme::taylor2);
    const double h = ladder.levels[1].h;
    const double sd = std::sqrt(1.0 / n);
    EXPECT_NEAR(std::abs(c - 1.0),
                2.0 * std::exp(-2.0 * std::numbers::pi * std::numbers::pi * sd * sd / (h * h)),
                1e-14);
}

TEST(Normalizer, TranslationInvariantForBrownian) {
    const auto ladder = flat_ladder(1.0, 16, 1.0, 0.0);
    const auto& level = ladder.levels[3];
    const double a = bcp::normalizer(bm(), ladder, 4, level.state(2), Scheme::taylor2);
    const double b = bcp::normalizer(bm(), ladder, 4, level.state(3), Scheme::taylor2);
    EXPECT_NEAR(a, b, 1e-15);
}

TEST(Stage, NoBridgeNormalizedRowSumsAreStripMass) {
    const int n = 16;
    const auto ladder = flat_ladder(1.0, n);
    bcp::StageOptions options;
    options.bridge = false;
    options.normalized = true;
    const auto stage = bcp::build_stage(bm(), ladder, 5, Scheme::taylor2, options);
    const double sd = std::sqrt(1.0 / n);
    for (std::size_t r = 0; r < stage.rows; ++r) {
        const double x = ladder.levels[4].state(r);
        double sum = 0.0;
        for (std::size_t c = 0; c < stage.cols; ++c) sum += stage.at(r, c);
        // Gaussian mass of the lattice cells strictly inside the strip.
        const auto& next = ladder.levels[5];
        double inside = 0.0;
        for (std::size_t j = 0; j < next.size(); ++j) {
            const double z = next.state(j);
            inside += std::exp(-0.5 * (z - x) * (z - x) / (sd * sd)) /
                      (sd * std::sqrt(2.0 * std::numbers::pi)) * next.h;
        }
        EXPECT_NEAR(sum, inside, 1e-12) << "row " << r;
        EXPECT_NEAR(inside, normal_cdf((1.0 - x) / sd) - normal_cdf((-1.0 - x) / sd), 0.1);
    }
}

TEST(Stage, BridgeFactorNextToTheUpperBoundary) {
    const int n = 16;
    const auto ladder = flat_ladder(1.0, n);
    bcp::StageOptions with;
    bcp::StageOptions without;
    without.bridge = false;
    const auto a = bcp::build_stage(bm(), ladder, 5, Scheme::taylor2, with);
    const auto b = bcp::build_stage(bm(), ladder, 5, Scheme::taylor2, without);
    const double h = ladder.levels[5].h;
    ASSERT_EQ(ladder.levels[4].h, h);
    // Row 0 and column 0 are the states one step below the upper boundary.
    const double far = std::exp(-2.0 * (2.0 - h) * (2.0 - h) * n);
    EXPECT_NEAR(a.at(0, 0) / b.at(0, 0), 1.0 - std::exp(-2.0 * h * h * n) - far, 1e-14);
}

TEST(Stage, AbsorbingRowIsAUnitSelfLoop) {
    const int n = 8;
    const auto bounds = bcp::make_boundary_pair({}, [](double) { return 1.0; }, 0.0, n);
    const auto ladder = bcp::build_ladder(bcp::uniform_time_grid(n), bounds, 0.0, {2.0, 0.0},
                                          {bcp::AbsorbingLower{-2.0}});
    const auto stage = bcp::build_stage(bm(), ladder, 3, Scheme::taylor2, {});
    ASSERT_TRUE(stage.absorbing);
    const std::size_t last = stage.rows - 1;
    for (std::size_t c = 0; c + 1 < stage.cols; ++c) EXPECT_EQ(stage.at(last, c), 0.0);
    EXPECT_EQ(stage.at(last, stage.cols - 1), 1.0);
    for (std::size_t r = 0; r < last; ++r) EXPECT_GE(stage.at(r, stage.cols - 1), 0.0);
}

TEST(Stage, CutoffZeroesSmallEntries) {
    const auto ladder = flat_ladder(1.0, 16);
    bcp::StageOptions options;
    options.cutoff = 1e-6;
    const auto stage = bcp::build_stage(bm(), ladder, 4, Scheme::taylor2, options);
    for (const double q : stage.entries) EXPECT_TRUE(q == 0.0 || q >= 1e-6);
}

TEST(Stage, StepOutOfRange) {
    const auto ladder = flat_ladder(1.0, 4);
    EXPECT_THROW(bcp::build_stage(bm(), ladder, 0, Scheme::taylor2, {}), bcp::Error);
    EXPECT_THROW(bcp::build_stage(bm(), ladder, 5, Scheme::taylor2, {}), bcp::Error);
}

TEST(Sweep, WideStripWithoutBridgeIsOne) {
    const auto ladder = flat_ladder(50.0, 2);
    bcp::SolveOptions options;
    options.stage.bridge = false;
    EXPECT_NEAR(bcp::solve(bm(), ladder, options).probability, 1.0, 1e-9);
}

TEST(Sweep, SweepOfBuiltStagesEqualsSolve) {
    const int n = 12;
    const auto ladder = flat_ladder(1.0, n);
    std::vector<bcp::TransitionStage> stages;
    for (int k = 1; k <= n; ++k) stages.push_back(bcp::build_stage(ou(), ladder, k, Scheme::taylor2, {}));
    bcp::SolveOptions options;
    const auto fused = bcp::solve(ou(), ladder, options);
    const auto stored = bcp::sweep(stages, ladder);
    EXPECT_EQ(fused.probability, stored.probability);
}

TEST(Sweep, DimensionMismatch) {
    const auto ladder = flat_ladder(1.0, 6);
    std::vector<bcp::TransitionStage> stages;
    for (int k = 1; k <= 6; ++k) stages.push_back(bcp::build_stage(bm(), ladder, k, Scheme::taylor2, {}));
    std::swap(stages[4], stages[5]);  // the terminal stage is wider
    try {
        bcp::sweep(stages, ladder);
        FAIL();
    } catch (const bcp::Error& e) {
        EXPECT_EQ(e.code(), bcp::ErrorCode::DimensionMismatch);
    }
    stages.pop_back();
    EXPECT_THROW(bcp::sweep(stages, ladder), bcp::Error);
}

TEST(Sweep, ThreadCountDoesNotChangeTheResult) {
    const auto ladder = flat_ladder(1.0, 64);
    bcp::SolveOptions one;
    bcp::SolveOptions four;
    four.threads = 4;
    EXPECT_EQ(bcp::solve(ou(), ladder, one).probability, bcp::solve(ou(), ladder, four).probability);
}

TEST(Sweep, FullTerminalIntervalMatchesPlainProbability) {
    const int n = 64;
    const auto bounds = flat(1.0, n);
    bcp::LadderOptions options;
    options.terminal = bcp::TerminalInterval{-1.0, 1.0};
    const auto restricted = bcp::build_ladder(bcp::uniform_time_grid(n), bounds, 0.0, {}, options);
    bcp::SolveOptions solve;
    solve.terminal = bcp::Indicator{-1.0, 1.0};
    const double a = bcp::solve(bm(), restricted, solve).probability;
    const double b = bcp::solve(bm(), flat_ladder(1.0, n), {}).probability;
    EXPECT_NEAR(a, b, 1e-12);
}

TEST(Sweep, TerminalHalfIntervalIsHalfBySymmetry) {
    const int n = 64;
    bcp::LadderOptions options;
    options.terminal = bcp::TerminalInterval{0.0, 1.0};
    const auto ladder = bcp::build_ladder(bcp::uniform_time_grid(n), flat(1.0, n), 0.0, {}, options);
    bcp::SolveOptions solve;
    solve.terminal = bcp::Indicator{0.0, 1.0};
    const double half = bcp::solve(bm(), ladder, solve).probability;
    const double full = bcp::flat_barrier_series(1.0);
    // The state at 0 is counted on this side, so allow one cell of mass.
    EXPECT_NEAR(half, 0.5 * full, 2e-2);
    EXPECT_GT(half, 0.5 * full - 1e-4);
}

TEST(Sweep, OddPayoffIntegratesToZero) {
    const int n = 32;
    bcp::SolveOptions solve;
    solve.terminal = bcp::Payoff{[](double y) { return y; }};
    EXPECT_NEAR(bcp::solve(bm(), flat_ladder(1.0, n), solve).probability, 0.0, 1e-12);
}

TEST(Sweep, SurfacesAndDiagnostics) {
    const int n = 32;
    const auto ladder = flat_ladder(1.0, n);
    bcp::SolveOptions options;
    options.keep_surfaces = true;
    const auto r = bcp::solve(bm(), ladder, options);
    ASSERT_EQ(r.surfaces.size(), static_cast<std::size_t>(n));
    double last = 0.0;
    for (const auto& s : r.surfaces) {
        for (const double m : s.mass) EXPECT_GE(m, 0.0);
        EXPECT_EQ(s.states.size(), ladder.levels[s.step].size());
        last = 0.0;
        for (const double m : s.mass) last += m;
    }
    EXPECT_NEAR(last, r.probability, 1e-15);
    EXPECT_GE(r.diagnostics.rho, 1.0);
    EXPECT_LE(r.diagnostics.max_normalizer_deviation, r.diagnostics.normalizer_bound);
}

TEST(Sweep, BoundaryAdjacentDensityShrinksWithN) {
    double previous = std::numeric_limits<double>::infinity();
    for (const int n : {16, 64, 256}) {
        bcp::SolveOptions options;
        options.keep_surfaces = true;
        const auto r = bcp::solve(bm(), flat_ladder(1.0, n), options);
        const auto& s = r.surfaces[n / 2 - 1];
        const double edge = s.mass.front() / s.h;
        EXPECT_LT(edge, previous);
        previous = edge;
    }
}

TEST(Bounds, DropNormalizerFormula) {
    const double M = std::numbers::pi * std::numbers::pi;
    const double c0 = 2.0 / (1.0 - std::exp(-M));
    EXPECT_NEAR(bcp::drop_normalizer_bound(64, 0.25, 2.0, 1.0, 1.0) / (c0 * 64 * std::exp(-M * 8)),
                1.0, 1e-13);
    EXPECT_NEAR(bcp::normalizer_bound(64, 0.25, 2.0, 1.0) / (c0 * std::exp(-M * 8)), 1.0, 1e-13);
    EXPECT_EQ(bcp::drop_normalizer_bound(64, 0.25, 1e6, 1.0, 1.0), 0.0);
}

// Randomized invariants on small problems.

struct Case {
    bcp::LatticeLadder ladder;
    bcp::UnitDiffusion process;
    bcp::Scheme scheme;
};

TEST(EngineInvariants, MassMonotoneRowsSubstochasticBridgeKills) {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int cases = 0;
    while (cases < 500) {
        const int n = 3 + static_cast<int>(u(rng) * 10);
        const double c = 0.5 + 1.5 * u(rng);
        const double tilt = 0.5 * (u(rng) - 0.5);
        const double gamma = 1.5 + 1.5 * u(rng);
        const double delta = 0.5 * u(rng);
        const bool use_ou = u(rng) < 0.5;
        const auto bounds = bcp::make_boundary_pair([=](double t) { return -c + tilt * t; },
                                                    [=](double t) { return c + tilt * t * t; }, 0.0, n);
        const auto ladder = bcp::build_ladder(bcp::uniform_time_grid(n), bounds, 0.0, {gamma, delta});
        const auto& process = use_ou ? ou() : bm();

        bcp::SolveOptions on;
        const auto with = bcp::solve(process, ladder, on);
        bcp::SolveOptions off;
        off.stage.bridge = false;
        const auto without = bcp::solve(process, ladder, off);

        ASSERT_GE(with.probability, 0.0);
        ASSERT_LE(with.probability, 1.0 + 1e-12);
        ASSERT_LE(with.probability, without.probability + 1e-15);
        double previous = 1.0;
        for (const double m : with.total_mass) {
            ASSERT_LE(m, previous + 1e-12);
            previous = m;
        }
        const auto stage = bcp::build_stage(process, ladder, 1 + cases % n, bcp::Scheme::taylor2, {});
        for (std::size_t r = 0; r < stage.rows; ++r) {
            double sum = 0.0;
            for (std::size_t col = 0; col < stage.cols; ++col) {
                ASSERT_GE(stage.at(r, col), 0.0);
                sum += stage.at(r, col);
            }
            ASSERT_LE(sum, 1.0 + 1e-9);
        }
        ++cases;
    }
}

TEST(EngineInvariants, NestedStripsAreOrdered) {
    std::mt19937_64 rng(52);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const int n = 4 + static_cast<int>(u(rng) * 12);
        const double inner = 0.4 + 1.2 * u(rng);
        const double outer = inner + 0.05 + u(rng);
        const double gamma = 1.5 + 1.5 * u(rng);
        const auto& process = u(rng) < 0.5 ? ou() : bm();
        const double a = bcp::solve(process, flat_ladder(inner, n, gamma), {}).probability;
        const double b = bcp::solve(process, flat_ladder(outer, n, gamma), {}).probability;
        ASSERT_LE(a, b) << "n=" << n << " inner=" << inner << " outer=" << outer;
    }
}

}  // namespace
