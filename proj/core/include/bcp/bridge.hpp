#pragma once

#include <limits>

namespace bcp {

/// Linear boundaries over one time step. Infinite endpoints switch a side off.
struct BridgeSegment {
    double dt = 0.0;
    double lower_start = -std::numeric_limits<double>::infinity();
    double lower_end = -std::numeric_limits<double>::infinity();
    double upper_start = std::numeric_limits<double>::infinity();
    double upper_end = std::numeric_limits<double>::infinity();
};

enum class TwoSidedMethod {
    sum,     ///< pi- + pi+, clamped to 1
    series,  ///< image series for two linear boundaries
};

struct SeriesOptions {
    int terms = 10;
    double tolerance = 1e-16;
};

/// Probability that a Brownian bridge pinned at (0, x) and (dt, y) touches the
/// upper line. Pins must lie strictly below it.
double upper_crossing(double x, double y, const BridgeSegment& seg);

/// Mirror of upper_crossing for the lower line.
double lower_crossing(double x, double y, const BridgeSegment& seg);

/// Probability of touching either line; in [0, 1].
double crossing_probability(double x, double y, const BridgeSegment& seg,
                            TwoSidedMethod method = TwoSidedMethod::sum,
                            const SeriesOptions& series = {});

/// Upper bound on (sum - series), which is the probability of crossing both
/// boundaries. With a, b the distances of the pins below the upper line and
/// c, d their distances above the lower line (A = a + c, B = b + d), it is
/// e^{-2(aB + Ad)/dt} + e^{-2(cB + Ab)/dt}: upper then lower, or lower then upper.
double sum_approximation_bound(double x, double y, const BridgeSegment& seg);

}  // namespace bcp
