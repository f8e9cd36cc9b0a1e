#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bcp/error.hpp"
#include "bcp/model.hpp"

namespace {

using bcp::DiffusionModel;
using bcp::Error;
using bcp::ErrorCode;

// sigma_Y = 1 + y^2, so psi_t(y) = arctan(y) and no closed form is registered.
DiffusionModel arctan_model() {
    DiffusionModel m;
    m.name = "arctan";
    m.mu_y = [](double, double y) { return -0.5 * y; };
    m.sigma_y = [](double, double y) { return 1.0 + y * y; };
    m.y0 = 0.0;
    return m;
}

DiffusionModel constant_sigma(double s) {
    DiffusionModel m;
    m.name = "scaled";
    m.mu_y = [](double, double) { return 0.0; };
    m.sigma_y = [s](double, double) { return s; };
    m.sigma_y_dt = [](double, double) { return 0.0; };
    m.sigma_y_dy = [](double, double) { return 0.0; };
    m.derivative_mode = bcp::ExactDerivatives{};
    return m;
}

// sigma depends on time as well as space.
DiffusionModel time_varying() {
    DiffusionModel m;
    m.name = "tv";
    m.mu_y = [](double t, double y) { return std::sin(t) - 0.3 * y; };
    m.sigma_y = [](double t, double y) { return 1.0 + 0.5 * t + 0.2 * std::tanh(y); };
    m.y0 = 0.1;
    return m;
}

void expect_code(ErrorCode code, const auto& f) {
    try {
        f();
        FAIL() << "expected " << bcp::to_string(code);
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), code) << e.what();
    }
}

TEST(Lamperti, UnitDiffusionIsIdentity) {
    const auto m = bcp::models::brownian();
    EXPECT_DOUBLE_EQ(bcp::lamperti(m, 0.4, 0.7), 0.7);
}

TEST(Lamperti, ConstantScaling) {
    EXPECT_NEAR(bcp::lamperti(constant_sigma(2.0), 0.3, 1.0), 0.5, 1e-14);
}

TEST(Lamperti, QuadratureMatchesArctan) {
    EXPECT_NEAR(bcp::lamperti(arctan_model(), 0.0, 1.0), std::numbers::pi / 4, 1e-12);
    EXPECT_NEAR(bcp::lamperti(arctan_model(), 0.5, -3.0), std::atan(-3.0), 1e-12);
}

TEST(Lamperti, NonPositiveDiffusionIsRejected) {
    DiffusionModel m = constant_sigma(1.0);
    m.sigma_y = [](double, double y) { return 1.0 - y; };
    m.derivative_mode = bcp::CentralDifference{};
    expect_code(ErrorCode::NonPositiveDiffusion, [&] { bcp::lamperti(m, 0.0, 2.0); });
}

TEST(Lamperti, InverseFailsOutsideTheRange) {
    // arctan never reaches 2.
    expect_code(ErrorCode::InversionFailure,
                [&] { bcp::lamperti_inverse(arctan_model(), 0.0, 2.0); });
}

TEST(TransformedDrift, Brownian) {
    EXPECT_EQ(bcp::transformed_drift(bcp::models::brownian(), 0.3, 1.7), 0.0);
}

TEST(TransformedDrift, OrnsteinUhlenbeck) {
    EXPECT_DOUBLE_EQ(bcp::transformed_drift(bcp::models::ornstein_uhlenbeck(), 0.5, 2.0), -2.0);
}

TEST(TransformedDrift, ConstantScaleHasNoDrift) {
    EXPECT_NEAR(bcp::transformed_drift(constant_sigma(2.0), 0.2, 0.5), 0.0, 1e-12);
}

TEST(TransformedDrift, ArctanModelClosedForm) {
    // x = arctan y, y = tan x: mu = mu_Y / sigma_Y - sigma_Y' / 2
    //   = -tan(x) / (2 (1 + tan^2 x)) - tan(x).
    const double x = 0.6;
    const double y = std::tan(x);
    const double expected = -0.5 * y / (1.0 + y * y) - y;
    EXPECT_NEAR(bcp::transformed_drift(arctan_model(), 0.1, x), expected, 1e-7);
}

TEST(UnitDiffusion, BuiltInModels) {
    const auto bm = bcp::to_unit_diffusion(bcp::models::brownian(0.25));
    EXPECT_EQ(bm.x0, 0.25);
    EXPECT_EQ(bm.mu(0.3, 4.0), 0.0);

    const auto ou = bcp::to_unit_diffusion(bcp::models::ornstein_uhlenbeck());
    EXPECT_EQ(ou.mu(0.3, 1.5), -1.5);
    EXPECT_EQ(ou.mu_dx(0.3, 1.5), -1.0);
    EXPECT_EQ(ou.mu_dt(0.3, 1.5), 0.0);
    EXPECT_EQ(ou.mu_dxx(0.3, 1.5), 0.0);
    ASSERT_TRUE(ou.exact_transition.has_value());
    const auto moments = (*ou.exact_transition)(0.0, 0.05, 1.0);
    EXPECT_NEAR(moments.mean, std::exp(-0.05), 1e-15);
    EXPECT_NEAR(moments.variance, -0.5 * std::expm1(-0.1), 1e-15);
}

TEST(UnitDiffusion, NumericalTransformOfScaledModel) {
    DiffusionModel m = constant_sigma(2.0);
    m.y0 = 1.0;
    const auto u = bcp::to_unit_diffusion(m);
    EXPECT_NEAR(u.x0, 0.5, 1e-14);
    EXPECT_NEAR(u.mu(0.4, 0.3), 0.0, 1e-9);
}

TEST(Boundaries, ScaledBoundaries) {
    const auto pair = bcp::transform_boundaries(
        constant_sigma(2.0), [](double) { return -2.0; }, [](double) { return 2.0; }, 8);
    for (const double t : {0.0, 0.3, 1.0}) {
        EXPECT_NEAR(pair.upper_at(t), 1.0, 1e-14);
        EXPECT_NEAR(pair.lower_at(t), -1.0, 1e-14);
    }
    EXPECT_NEAR(pair.gap_inf, 2.0, 1e-12);
}

TEST(Boundaries, IdentityTransformLeavesBoundariesUnchanged) {
    const auto upper = [](double t) { return 1.0 + t * t; };
    const auto pair = bcp::transform_boundaries(bcp::models::brownian(), {}, upper, 8);
    EXPECT_TRUE(pair.one_sided());
    EXPECT_DOUBLE_EQ(pair.upper_at(0.7), upper(0.7));
}

TEST(Boundaries, StartOnTheLowerBoundaryIsRejected) {
    expect_code(ErrorCode::BoundaryClassViolation, [] {
        bcp::make_boundary_pair([](double) { return 0.0; }, [](double) { return 1.0; }, 0.0, 4);
    });
}

TEST(Boundaries, CrossingBoundariesAreRejected) {
    expect_code(ErrorCode::BoundaryClassViolation, [] {
        bcp::make_boundary_pair([](double t) { return -1.0 + 3.0 * t; },
                                [](double) { return 1.0; }, 0.0, 4);
    });
}

TEST(Registry, BuiltInsAndCustom) {
    auto& registry = bcp::ModelRegistry::instance();
    EXPECT_TRUE(registry.contains("brownian"));
    EXPECT_TRUE(registry.contains("ou"));
    registry.add("test_scaled", [](const bcp::ModelRegistry::Parameters& p) {
        return constant_sigma(p.count("s") ? p.at("s") : 1.0);
    });
    const auto m = registry.make("test_scaled", {{"s", 4.0}});
    EXPECT_NEAR(bcp::lamperti(m, 0.0, 2.0), 0.5, 1e-14);
    const auto ou = registry.make("ou", {{"theta", 2.0}});
    EXPECT_DOUBLE_EQ(bcp::transformed_drift(ou, 0.0, 1.0), -2.0);
    expect_code(ErrorCode::InvalidArgument, [&] { registry.make("nope", {}); });
}

// Invariants.

TEST(ModelInvariants, RoundTrip) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> t_dist(0.0, 1.0);
    std::uniform_real_distribution<double> y_dist(-3.0, 3.0);
    const std::vector<DiffusionModel> models{bcp::models::brownian(), bcp::models::ornstein_uhlenbeck(),
                                             arctan_model(), constant_sigma(2.0), time_varying()};
    for (const auto& m : models) {
        for (int i = 0; i < 200; ++i) {
            const double t = t_dist(rng);
            const double y = y_dist(rng);
            const double x = bcp::lamperti(m, t, y);
            EXPECT_NEAR(bcp::lamperti_inverse(m, t, x), y, 1e-9) << m.name << " t=" << t;
        }
    }
}

TEST(ModelInvariants, StrictlyIncreasing) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> t_dist(0.0, 1.0);
    std::uniform_real_distribution<double> y_dist(-3.0, 3.0);
    const std::vector<DiffusionModel> models{arctan_model(), time_varying(), constant_sigma(3.0)};
    for (const auto& m : models) {
        for (int i = 0; i < 500; ++i) {
            const double t = t_dist(rng);
            double y1 = y_dist(rng);
            double y2 = y_dist(rng);
            if (y1 == y2) continue;
            if (y1 > y2) std::swap(y1, y2);
            EXPECT_LT(bcp::lamperti(m, t, y1), bcp::lamperti(m, t, y2)) << m.name;
        }
    }
}

TEST(ModelInvariants, FiniteDifferencesMatchExactDerivatives) {
    // OU with theta = 1.3 has drift -theta x; a smooth nonlinear drift checks
    // the second derivative.
    bcp::UnitDiffusion smooth;
    smooth.mu = [](double t, double x) { return std::sin(x) * (1.0 + t * t); };
    const auto exact_dt = [](double t, double x) { return std::sin(x) * 2.0 * t; };
    const auto exact_dx = [](double t, double x) { return std::cos(x) * (1.0 + t * t); };
    const auto exact_dxx = [](double t, double x) { return -std::sin(x) * (1.0 + t * t); };
    const double h = bcp::CentralDifference{}.step_scale;
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> t_dist(0.05, 0.95);
    std::uniform_real_distribution<double> x_dist(-2.0, 2.0);
    for (int i = 0; i < 500; ++i) {
        const double t = t_dist(rng);
        const double x = x_dist(rng);
        auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
        EXPECT_LE(rel(bcp::detail::central_dx(smooth.mu, t, x, h), exact_dx(t, x)), 1e-6);
        EXPECT_LE(rel(bcp::detail::central_dt(smooth.mu, t, x, h), exact_dt(t, x)), 1e-6);
        EXPECT_LE(rel(bcp::detail::central_dxx(smooth.mu, t, x, h), exact_dxx(t, x)), 1e-6);
    }

    // Numerical transform of the OU model against its exact closures.
    DiffusionModel ou = bcp::models::ornstein_uhlenbeck(1.3);
    ou.unit_form.reset();
    ou.derivative_mode = bcp::CentralDifference{};
    const auto numeric = bcp::to_unit_diffusion(ou);
    for (int i = 0; i < 50; ++i) {
        const double t = t_dist(rng);
        const double x = x_dist(rng);
        EXPECT_NEAR(numeric.mu(t, x), -1.3 * x, 1e-6 * std::max(1.0, std::abs(x)));
        EXPECT_NEAR(numeric.mu_dx(t, x), -1.3, 1e-6);
    }
}

}  // namespace
