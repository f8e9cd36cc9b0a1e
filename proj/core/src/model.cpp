#include "bcp/model.hpp"

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>
#include <cstdint>
#include <cstdio>
#include <string>

#include "bcp/error.hpp"

namespace bcp {

namespace {

constexpr double kQuadratureTolerance = 1e-12;
// With finite-difference sigma_t the integrand carries rounding noise of
// order eps^(2/3), so the time derivative of psi gets a looser target.
constexpr double kNumericalDerivativeTolerance = 1e-9;
constexpr std::size_t kMaxQuadratureLevels = 15;
constexpr int kMaxBracketExpansions = 60;

std::string format_short(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double checked_sigma(const DiffusionModel& model, double t, double y) {
    const double s = model.sigma_y(t, y);
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw Error(ErrorCode::NonPositiveDiffusion, "model",
                    "sigma_Y(" + std::to_string(t) + ", " + std::to_string(y) +
                        ") = " + std::to_string(s));
    }
    return s;
}

// int_a^b f(u) du for a <= b, failing when the error estimate exceeds the
// absolute tolerance.
template <class F>
double integrate(F&& f, double a, double b, double tolerance) {
    if (a == b) return 0.0;
    // The level-difference estimate of tanh-sinh tracks the true error.
    // Gauss-Kronrod's QUADPACK-style estimate overstates it by orders of
    // magnitude on short intervals where the integrand is nearly constant.
    thread_local boost::math::quadrature::tanh_sinh<double> integrator(kMaxQuadratureLevels);
    double error = 0.0;
    const double value = integrator.integrate(f, a, b, 1e-14, &error);
    if (!std::isfinite(value) || error > tolerance) {
        throw Error(ErrorCode::QuadratureFailure, "model",
                    "error estimate " + format_short(error) + " over [" + format_short(a) + ", " +
                        format_short(b) + "]");
    }
    return value;
}

// Signed integral int_0^y f(u) du.
template <class F>
double integrate_from_zero(F&& f, double y, double tolerance = kQuadratureTolerance) {
    return y >= 0.0 ? integrate(f, 0.0, y, tolerance) : -integrate(f, y, 0.0, tolerance);
}

double step_scale_of(const DiffusionModel& model) {
    if (const auto* cd = std::get_if<CentralDifference>(&model.derivative_mode)) {
        return cd->step_scale;
    }
    return CentralDifference{}.step_scale;
}

bool exact_mode(const DiffusionModel& model) {
    return std::holds_alternative<ExactDerivatives>(model.derivative_mode);
}

double sigma_dt(const DiffusionModel& model, double t, double y) {
    if (exact_mode(model) && model.sigma_y_dt) return model.sigma_y_dt(t, y);
    return detail::central_dt(model.sigma_y, t, y, step_scale_of(model));
}

double sigma_dy(const DiffusionModel& model, double t, double y) {
    if (exact_mode(model) && model.sigma_y_dy) return model.sigma_y_dy(t, y);
    return detail::central_dx(model.sigma_y, t, y, step_scale_of(model));
}

// d/dt psi_t(y) = -int_0^y d_t sigma_Y / sigma_Y^2 du
double lamperti_dt(const DiffusionModel& model, double t, double y) {
    if (model.unit_diffusion) return 0.0;
    return integrate_from_zero(
        [&](double u) {
            const double s = checked_sigma(model, t, u);
            return -sigma_dt(model, t, u) / (s * s);
        },
        y, exact_mode(model) && model.sigma_y_dt ? kQuadratureTolerance : kNumericalDerivativeTolerance);
}

}  // namespace

namespace detail {

double central_dx(const SpaceTimeFunction& f, double t, double x, double step_scale) {
    const double h = step_scale * std::max(1.0, std::abs(x));
    return (f(t, x + h) - f(t, x - h)) / (2.0 * h);
}

double central_dt(const SpaceTimeFunction& f, double t, double x, double step_scale) {
    const double h = step_scale * std::max(1.0, std::abs(t));
    return (f(t + h, x) - f(t - h, x)) / (2.0 * h);
}

// The 3-point second difference loses two orders of the step to rounding, so
// it runs on step_scale^(3/4) (eps^(1/4) by default).
double central_dxx(const SpaceTimeFunction& f, double t, double x, double step_scale) {
    const double h = std::pow(step_scale, 0.75) * std::max(1.0, std::abs(x));
    return (f(t, x + h) - 2.0 * f(t, x) + f(t, x - h)) / (h * h);
}

}  // namespace detail

double lamperti(const DiffusionModel& model, double t, double y) {
    if (model.unit_diffusion) return y;
    if (model.lamperti_closed_form) return model.lamperti_closed_form(t, y);
    return integrate_from_zero([&](double u) { return 1.0 / checked_sigma(model, t, u); }, y);
}

double lamperti_inverse(const DiffusionModel& model, double t, double x) {
    if (model.unit_diffusion) return x;
    if (model.lamperti_inverse_closed_form) return model.lamperti_inverse_closed_form(t, x);
    if (x == 0.0) return 0.0;

    auto residual = [&](double y) { return lamperti(model, t, y) - x; };
    auto inv_sigma = [&](double u) { return 1.0 / checked_sigma(model, t, u); };
    const double direction = x > 0.0 ? 1.0 : -1.0;
    double lo = 0.0;
    double hi = direction;
    double f_lo = -x;
    double f_hi = residual(hi);
    int expansions = 0;
    // Doubling the bracket adds psi over [hi, 2 hi] to the running value so
    // no single quadrature spans the whole range.
    while (f_lo * f_hi > 0.0) {
        if (++expansions > kMaxBracketExpansions) {
            throw Error(ErrorCode::InversionFailure, "model",
                        "could not bracket psi_t^{-1}(" + std::to_string(x) + ")");
        }
        lo = hi;
        f_lo = f_hi;
        hi *= 2.0;
        const double piece = direction > 0.0 ? integrate(inv_sigma, lo, hi, kQuadratureTolerance)
                                              : -integrate(inv_sigma, hi, lo, kQuadratureTolerance);
        f_hi = f_lo + piece;
    }
    if (f_hi == 0.0) return hi;
    if (lo > hi) {
        std::swap(lo, hi);
        std::swap(f_lo, f_hi);
    }

    std::uintmax_t max_iter = 200;
    auto tol = [](double a, double b) {
        return std::abs(b - a) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                      std::max(1.0, std::abs(a));
    };
    const auto [a, b] =
        boost::math::tools::toms748_solve(residual, lo, hi, f_lo, f_hi, tol, max_iter);
    if (max_iter >= 200) {
        throw Error(ErrorCode::InversionFailure, "model",
                    "root finding did not converge for x = " + std::to_string(x));
    }
    return 0.5 * (a + b);
}

double transformed_drift(const DiffusionModel& model, double t, double x) {
    if (model.unit_diffusion) return model.mu_y(t, x);
    const double y = lamperti_inverse(model, t, x);
    const double s = checked_sigma(model, t, y);
    return lamperti_dt(model, t, y) + model.mu_y(t, y) / s - 0.5 * sigma_dy(model, t, y);
}

UnitDiffusion to_unit_diffusion(const DiffusionModel& model) {
    if (model.unit_form && exact_mode(model)) return *model.unit_form;

    const double scale = step_scale_of(model);
    UnitDiffusion u;
    if (model.unit_form) {
        u.mu = model.unit_form->mu;
        u.x0 = model.unit_form->x0;
        u.exact_transition = model.unit_form->exact_transition;
    } else {
        u.mu = [model](double t, double x) { return transformed_drift(model, t, x); };
        u.x0 = lamperti(model, 0.0, model.y0);
    }
    u.mu_dt = [mu = u.mu, scale](double t, double x) { return detail::central_dt(mu, t, x, scale); };
    u.mu_dx = [mu = u.mu, scale](double t, double x) { return detail::central_dx(mu, t, x, scale); };
    u.mu_dxx = [mu = u.mu, scale](double t, double x) {
        return detail::central_dxx(mu, t, x, scale);
    };
    return u;
}

BoundaryPair make_boundary_pair(BoundaryFunction lower, BoundaryFunction upper, double x0,
                                int n_max) {
    if (!upper) {
        throw Error(ErrorCode::BoundaryClassViolation, "model", "upper boundary is required");
    }
    if (n_max < 1) {
        throw Error(ErrorCode::InvalidArgument, "model", "n_max must be positive");
    }
    const double up0 = upper(0.0);
    const double lo0 = lower ? lower(0.0) : -std::numeric_limits<double>::infinity();
    if (!(lo0 < x0 && x0 < up0)) {
        throw Error(ErrorCode::BoundaryClassViolation, "model",
                    "initial point " + std::to_string(x0) + " is not strictly inside (" +
                        std::to_string(lo0) + ", " + std::to_string(up0) + ")");
    }

    BoundaryPair pair{std::move(lower), std::move(upper),
                      std::numeric_limits<double>::infinity()};
    const int points = 10 * n_max + 1;
    for (int i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / (points - 1);
        const double u = pair.upper(t);
        if (!std::isfinite(u)) {
            throw Error(ErrorCode::BoundaryClassViolation, "model",
                        "upper boundary is not finite at t = " + std::to_string(t));
        }
        if (!pair.one_sided()) {
            const double l = pair.lower(t);
            if (!std::isfinite(l)) {
                throw Error(ErrorCode::BoundaryClassViolation, "model",
                            "lower boundary is not finite at t = " + std::to_string(t));
            }
            pair.gap_inf = std::min(pair.gap_inf, u - l);
        }
    }
    if (!(pair.gap_inf > 0.0)) {
        throw Error(ErrorCode::BoundaryClassViolation, "model",
                    "boundaries touch or cross: estimated gap " + std::to_string(pair.gap_inf));
    }
    return pair;
}

BoundaryPair transform_boundaries(const DiffusionModel& model, BoundaryFunction g0_lower,
                                  BoundaryFunction g0_upper, int n_max) {
    if (!g0_upper) {
        throw Error(ErrorCode::BoundaryClassViolation, "model", "upper boundary is required");
    }
    BoundaryFunction upper = [model, g0_upper](double t) {
        return lamperti(model, t, g0_upper(t));
    };
    BoundaryFunction lower;
    if (g0_lower) {
        lower = [model, g0_lower](double t) { return lamperti(model, t, g0_lower(t)); };
    }
    return make_boundary_pair(std::move(lower), std::move(upper), lamperti(model, 0.0, model.y0),
                              n_max);
}

namespace models {

DiffusionModel brownian(double y0) {
    DiffusionModel m;
    m.name = "brownian";
    m.mu_y = [](double, double) { return 0.0; };
    m.sigma_y = [](double, double) { return 1.0; };
    m.sigma_y_dt = [](double, double) { return 0.0; };
    m.sigma_y_dy = [](double, double) { return 0.0; };
    m.y0 = y0;
    m.derivative_mode = ExactDerivatives{};
    m.unit_diffusion = true;

    UnitDiffusion u;
    u.mu = [](double, double) { return 0.0; };
    u.mu_dt = u.mu;
    u.mu_dx = u.mu;
    u.mu_dxx = u.mu;
    u.x0 = y0;
    u.exact_transition = [](double, double dt, double x) { return GaussianMoments{x, dt}; };
    m.unit_form = std::move(u);
    return m;
}

DiffusionModel ornstein_uhlenbeck(double theta, double y0) {
    DiffusionModel m;
    m.name = "ou";
    m.mu_y = [theta](double, double y) { return -theta * y; };
    m.sigma_y = [](double, double) { return 1.0; };
    m.sigma_y_dt = [](double, double) { return 0.0; };
    m.sigma_y_dy = [](double, double) { return 0.0; };
    m.y0 = y0;
    m.derivative_mode = ExactDerivatives{};
    m.unit_diffusion = true;

    UnitDiffusion u;
    u.mu = [theta](double, double x) { return -theta * x; };
    u.mu_dt = [](double, double) { return 0.0; };
    u.mu_dx = [theta](double, double) { return -theta; };
    u.mu_dxx = [](double, double) { return 0.0; };
    u.x0 = y0;
    u.exact_transition = [theta](double, double dt, double x) {
        const double variance = theta == 0.0 ? dt : -std::expm1(-2.0 * theta * dt) / (2.0 * theta);
        return GaussianMoments{x * std::exp(-theta * dt), variance};
    };
    m.unit_form = std::move(u);
    return m;
}

}  // namespace models

ModelRegistry::ModelRegistry() {
    auto param = [](const Parameters& p, const std::string& key, double fallback) {
        const auto it = p.find(key);
        return it == p.end() ? fallback : it->second;
    };
    factories_["brownian"] = [param](const Parameters& p) {
        return models::brownian(param(p, "y0", 0.0));
    };
    factories_["ou"] = [param](const Parameters& p) {
        return models::ornstein_uhlenbeck(param(p, "theta", 1.0), param(p, "y0", 0.0));
    };
}

ModelRegistry& ModelRegistry::instance() {
    static ModelRegistry registry;
    return registry;
}

void ModelRegistry::add(const std::string& name, Factory factory) {
    factories_[name] = std::move(factory);
}

bool ModelRegistry::contains(const std::string& name) const {
    return factories_.count(name) > 0;
}

DiffusionModel ModelRegistry::make(const std::string& name, const Parameters& params) const {
    const auto it = factories_.find(name);
    if (it == factories_.end()) {
        throw Error(ErrorCode::InvalidArgument, "model", "unknown model '" + name + "'");
    }
    return it->second(params);
}

std::vector<std::string> ModelRegistry::names() const {
    std::vector<std::string> out;
    for (const auto& [name, _] : factories_) out.push_back(name);
    return out;
}

}  // namespace bcp
