#pragma once

#include <cstdint>
#include <random>

#include "bcp/model.hpp"
#include "bcp/taylor.hpp"

namespace bcp {

// Reference problems with known crossing probabilities. The published
// constants are crossing probabilities, i.e. 1 - P(stay in the strip).

/// Symmetric Wiener boundaries +-(t/a) acosh(k e^{a^2/(2t)}). They are the
/// zero set of phi_t(x) - (phi_t(x - a) + phi_t(x + a)) / (2k), which is then
/// the taboo density of W in closed form (method of images).
struct ImageBoundary {
    double a = 2.0;
    double k = 1.0;

    /// Upper boundary; a / 2 at t = 0.
    double upper(double t) const;
    /// P(|W(s)| < upper(s) for s <= horizon).
    double noncrossing(double horizon) const;
};

/// Crossing probability of the Daniels boundary for W on [0, 1], stored to
/// the eight published digits.
double daniels_reference();

/// g_D(t) = 1/2 - t log((1 + sqrt(1 + 8 exp(-1/t))) / 4); g_D(0) = 1/2.
double daniels_boundary(double t);

/// Crossing probability of the OU process dX = -X dt + dW, X(0) = 0, for the
/// strip +-ou_psi_upper, to eight published digits.
double ou_psi_reference();

/// Same quantity from the image-boundary closed form.
double ou_psi_exact_crossing();

/// theta(t) = (e^{2t} - 1) / 2, so that X(t) = e^{-t} W(theta(t)).
double ou_time_change(double t);

/// Wiener boundary psi_+(s) = s acosh(e^{2/s}) / 2 (images at +-2).
double ou_psi_wiener_upper(double s);

/// e^{-t} psi_+(theta(t)); the lower boundary is its negative.
double ou_psi_upper(double t);
double ou_psi_lower(double t);

/// g(t) = t acosh(2 e^{9/(2t)}) / 3 (images at +-3 with weight 1/2), the
/// symmetric pair used by the divergence study; g(0) = 3/2.
double gpm_upper(double t);
double gpm_lower(double t);

/// Exact non-crossing probability of the +-gpm strip for W on [0, 1].
double gpm_reference();

/// P(sup_{t <= horizon} |W(t)| < c) from the alternating reflection series
/// with terms k = -K..K.
double flat_barrier_series(double c, double horizon = 1.0, int terms = 50);

struct McEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::uint64_t paths = 0;
    std::uint64_t seed = 0;
};

struct McOptions {
    int n_steps = 256;
    std::uint64_t paths = 100000;
    std::uint64_t seed = 20240101;
    Scheme scheme = Scheme::taylor2;
    unsigned threads = 1;
};

/// Skeletons from the scheme's Gaussian increments, each weighted by the
/// product of bridge non-crossing probabilities on the piecewise-linear
/// boundaries. Deterministic in (seed, paths, n_steps) for any thread count.
McEstimate mc_bcp(const UnitDiffusion& process, const BoundaryPair& bounds,
                  const McOptions& options);

/// Product-weight and indicator estimators evaluated on the same skeletons;
/// the indicator draws an extra uniform per step to decide bridge crossings.
struct McComparison {
    McEstimate conditional;
    McEstimate indicator;
};

McComparison mc_bcp_compare(const UnitDiffusion& process, const BoundaryPair& bounds,
                            const McOptions& options);

/// Counter-based generator: SplitMix64 over a (seed, stream) key. Every path
/// owns one stream, so draws do not depend on scheduling.
class StreamRng {
public:
    using result_type = std::uint64_t;

    StreamRng(std::uint64_t seed, std::uint64_t stream) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }
    result_type operator()() noexcept;

    /// Uniform on (0, 1).
    double uniform() noexcept;
    double normal() { return normal_(*this); }

private:
    std::uint64_t state_;
    std::normal_distribution<double> normal_;
};

}  // namespace bcp
