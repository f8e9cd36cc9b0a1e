#pragma once

#include <string_view>

#include "bcp/model.hpp"

namespace bcp {

/// One-step Gaussian approximations of the unit-diffusion process.
enum class Scheme {
    taylor2,         ///< second-order weak Taylor (default)
    euler,           ///< Euler-Maruyama
    exact_gaussian,  ///< exact conditional moments; needs UnitDiffusion::exact_transition
};

Scheme parse_scheme(std::string_view name);
std::string_view to_string(Scheme scheme) noexcept;

/// Moments of the increment over one step started from x.
struct StepMoments {
    double mean_shift = 0.0;  ///< drift_coefficient * dt
    double variance = 0.0;    ///< variance_coefficient * dt
};

/// Scheme drift at (t, x) for a step of length dt.
double drift_coefficient(const UnitDiffusion& process, double t, double dt, double x, Scheme scheme);

/// Squared diffusion coefficient of the scheme. Throws NonPositiveVariance
/// when 1 + dt * d_x mu / 2 <= 0 under the Taylor scheme.
double variance_coefficient(const UnitDiffusion& process, double t, double dt, double x,
                            Scheme scheme);

StepMoments step_moments(const UnitDiffusion& process, double t, double dt, double x, Scheme scheme);

}  // namespace bcp
