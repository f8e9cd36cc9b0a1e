#include "bcp/taylor.hpp"

#include <string>

#include "bcp/error.hpp"

namespace bcp {

namespace {

void require_step(double dt) {
    if (!(dt > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "taylor", "step length must be positive");
    }
}

GaussianMoments exact_moments(const UnitDiffusion& process, double t, double dt, double x) {
    if (!process.exact_transition) {
        throw Error(ErrorCode::InvalidArgument, "taylor",
                    "exact_gaussian needs a model with a closed-form Gaussian transition");
    }
    return (*process.exact_transition)(t, dt, x);
}

}  // namespace

Scheme parse_scheme(std::string_view name) {
    if (name == "taylor2") return Scheme::taylor2;
    if (name == "euler") return Scheme::euler;
    if (name == "exact_gaussian") return Scheme::exact_gaussian;
    throw Error(ErrorCode::InvalidArgument, "taylor", "unknown scheme '" + std::string(name) + "'");
}

std::string_view to_string(Scheme scheme) noexcept {
    switch (scheme) {
        case Scheme::taylor2: return "taylor2";
        case Scheme::euler: return "euler";
        case Scheme::exact_gaussian: return "exact_gaussian";
    }
    return "unknown";
}

double drift_coefficient(const UnitDiffusion& process, double t, double dt, double x,
                         Scheme scheme) {
    require_step(dt);
    switch (scheme) {
        case Scheme::euler:
            return process.mu(t, x);
        case Scheme::taylor2: {
            const double mu = process.mu(t, x);
            return mu + 0.5 * dt *
                            (process.mu_dt(t, x) + mu * process.mu_dx(t, x) +
                             0.5 * process.mu_dxx(t, x));
        }
        case Scheme::exact_gaussian:
            return (exact_moments(process, t, dt, x).mean - x) / dt;
    }
    return 0.0;
}

double variance_coefficient(const UnitDiffusion& process, double t, double dt, double x,
                            Scheme scheme) {
    require_step(dt);
    switch (scheme) {
        case Scheme::euler:
            return 1.0;
        case Scheme::taylor2: {
            const double root = 1.0 + 0.5 * dt * process.mu_dx(t, x);
            if (!(root > 0.0)) {
                throw Error(ErrorCode::NonPositiveVariance, "taylor",
                            "1 + dt * mu_x / 2 = " + std::to_string(root) + " at t = " +
                                std::to_string(t) + ", x = " + std::to_string(x));
            }
            return root * root;
        }
        case Scheme::exact_gaussian: {
            const double v = exact_moments(process, t, dt, x).variance / dt;
            if (!(v > 0.0)) {
                throw Error(ErrorCode::NonPositiveVariance, "taylor",
                            "exact transition variance is not positive");
            }
            return v;
        }
    }
    return 1.0;
}

StepMoments step_moments(const UnitDiffusion& process, double t, double dt, double x,
                         Scheme scheme) {
    return {drift_coefficient(process, t, dt, x, scheme) * dt,
            variance_coefficient(process, t, dt, x, scheme) * dt};
}

}  // namespace bcp
