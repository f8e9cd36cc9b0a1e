#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace bcp {

using SpaceTimeFunction = std::function<double(double t, double x)>;
using BoundaryFunction = std::function<double(double t)>;

/// Mean and variance of a Gaussian law.
struct GaussianMoments {
    double mean = 0.0;
    double variance = 0.0;
};

/// Exact one-step law of X(t + dt) given X(t) = x, for processes whose
/// transitions are Gaussian in closed form.
using ExactTransition = std::function<GaussianMoments(double t, double dt, double x)>;

struct ExactDerivatives {};

/// Symmetric differences with step step_scale * max(1, |x|).
struct CentralDifference {
    double step_scale = std::cbrt(std::numeric_limits<double>::epsilon());
};

using DerivativeMode = std::variant<ExactDerivatives, CentralDifference>;

/// dX = mu(t, X) dt + dW after the space change. Immutable once built.
struct UnitDiffusion {
    SpaceTimeFunction mu;
    SpaceTimeFunction mu_dt;
    SpaceTimeFunction mu_dx;
    SpaceTimeFunction mu_dxx;
    double x0 = 0.0;
    std::optional<ExactTransition> exact_transition;
};

/// dY = mu_Y(t, Y) dt + sigma_Y(t, Y) dW on [0, 1], Y(0) = y0.
///
/// The derivative closures of sigma_Y are optional; when derivative_mode is
/// ExactDerivatives and a closure is present it is used verbatim, otherwise
/// central differences stand in. Built-in models also carry the closed form
/// of the transformed process in `unit_form`.
struct DiffusionModel {
    std::string name;
    SpaceTimeFunction mu_y;
    SpaceTimeFunction sigma_y;
    SpaceTimeFunction sigma_y_dt;
    SpaceTimeFunction sigma_y_dy;
    double y0 = 0.0;
    DerivativeMode derivative_mode = CentralDifference{};

    /// sigma_Y is identically one: the transform is the identity.
    bool unit_diffusion = false;

    /// Optional closed forms of psi_t(y) and its inverse in y.
    SpaceTimeFunction lamperti_closed_form;
    SpaceTimeFunction lamperti_inverse_closed_form;

    std::optional<UnitDiffusion> unit_form;
};

/// Upper and lower boundaries of the strip in transformed coordinates. An
/// empty `lower` stands for -infinity (one-sided problem).
struct BoundaryPair {
    BoundaryFunction lower;
    BoundaryFunction upper;
    double gap_inf = std::numeric_limits<double>::infinity();

    bool one_sided() const noexcept { return !lower; }
    double lower_at(double t) const {
        return lower ? lower(t) : -std::numeric_limits<double>::infinity();
    }
    double upper_at(double t) const { return upper(t); }
};

/// psi_t(y) = int_0^y du / sigma_Y(t, u).
double lamperti(const DiffusionModel& model, double t, double y);

/// Solves psi_t(y) = x for y.
double lamperti_inverse(const DiffusionModel& model, double t, double x);

/// Drift of the unit-diffusion process at (t, x).
double transformed_drift(const DiffusionModel& model, double t, double x);

/// Builds the transformed process with its drift derivatives.
UnitDiffusion to_unit_diffusion(const DiffusionModel& model);

/// Validates that (lower, upper) belongs to the admissible class for a
/// process started at x0, checking the gap on 10 * n_max + 1 grid points.
BoundaryPair make_boundary_pair(BoundaryFunction lower, BoundaryFunction upper, double x0,
                                int n_max);

/// Maps original-scale boundaries through psi_t and re-validates them.
BoundaryPair transform_boundaries(const DiffusionModel& model, BoundaryFunction g0_lower,
                                  BoundaryFunction g0_upper, int n_max);

namespace detail {
double central_dx(const SpaceTimeFunction& f, double t, double x, double step_scale);
double central_dt(const SpaceTimeFunction& f, double t, double x, double step_scale);
double central_dxx(const SpaceTimeFunction& f, double t, double x, double step_scale);
}  // namespace detail

namespace models {

/// Standard Wiener process started at y0.
DiffusionModel brownian(double y0 = 0.0);

/// dY = -theta Y dt + dW.
DiffusionModel ornstein_uhlenbeck(double theta = 1.0, double y0 = 0.0);

}  // namespace models

/// Named model factories. `brownian` and `ou` are pre-registered; code can add
/// custom models which the CLI then selects by name.
class ModelRegistry {
public:
    using Parameters = std::map<std::string, double>;
    using Factory = std::function<DiffusionModel(const Parameters&)>;

    static ModelRegistry& instance();

    void add(const std::string& name, Factory factory);
    bool contains(const std::string& name) const;
    DiffusionModel make(const std::string& name, const Parameters& params) const;
    std::vector<std::string> names() const;

private:
    ModelRegistry();
    std::map<std::string, Factory> factories_;
};

}  // namespace bcp
