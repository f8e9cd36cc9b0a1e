#include "bcp/bridge.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bcp/error.hpp"

namespace bcp {

namespace {

void check_pins(double x, double y, const BridgeSegment& seg) {
    if (!(seg.dt > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "bridge", "segment length must be positive");
    }
    if (!(x < seg.upper_start && y < seg.upper_end && x > seg.lower_start && y > seg.lower_end)) {
        throw Error(ErrorCode::DomainViolation, "bridge",
                    "pins (" + std::to_string(x) + ", " + std::to_string(y) +
                        ") are not strictly inside the segment");
    }
}

// exp(-2 a b / dt) for start/end distances a, b to a line.
double crossing_from_distances(double a, double b, double dt) {
    if (std::isinf(a) || std::isinf(b)) return 0.0;
    return std::exp(-2.0 * a * b / dt);
}

}  // namespace

double upper_crossing(double x, double y, const BridgeSegment& seg) {
    check_pins(x, y, seg);
    return crossing_from_distances(seg.upper_start - x, seg.upper_end - y, seg.dt);
}

double lower_crossing(double x, double y, const BridgeSegment& seg) {
    check_pins(x, y, seg);
    return crossing_from_distances(x - seg.lower_start, y - seg.lower_end, seg.dt);
}

double crossing_probability(double x, double y, const BridgeSegment& seg, TwoSidedMethod method,
                            const SeriesOptions& series) {
    check_pins(x, y, seg);
    const double a = seg.upper_start - x;
    const double b = seg.upper_end - y;
    const double c = x - seg.lower_start;
    const double d = y - seg.lower_end;
    const double one_sum =
        crossing_from_distances(a, b, seg.dt) + crossing_from_distances(c, d, seg.dt);
    if (method == TwoSidedMethod::sum || std::isinf(a + c) || std::isinf(b + d)) {
        return std::min(1.0, one_sum);
    }

    // Stay probability of the bridge between two lines by repeated reflection.
    // The map (1 + kappa t) W(t / (1 + kappa t)) turns the strip into one of
    // constant width, where the flat image series applies. Back in the
    // original distances the translated images give
    //   exp(-2 k (k A B + (a d - b c)) / dt),  k in Z \ {0}
    // and the reflected images give exp(-2 (k A + a)(k B + b) / dt) together
    // with exp(-2 (k A + c)(k B + d) / dt), k >= 0.
    const double A = a + c;
    const double B = b + d;
    const double skew = a * d - b * c;
    double stay = 1.0 - one_sum;
    for (int k = 1; k <= series.terms; ++k) {
        const double kk = static_cast<double>(k);
        const double even = std::exp(-2.0 * kk * (kk * A * B + skew) / seg.dt) +
                            std::exp(-2.0 * kk * (kk * A * B - skew) / seg.dt);
        const double odd = std::exp(-2.0 * (kk * A + a) * (kk * B + b) / seg.dt) +
                           std::exp(-2.0 * (kk * A + c) * (kk * B + d) / seg.dt);
        stay += even - odd;
        if (even < series.tolerance && odd < series.tolerance) break;
    }
    return std::clamp(1.0 - stay, 0.0, 1.0);
}

double sum_approximation_bound(double x, double y, const BridgeSegment& seg) {
    check_pins(x, y, seg);
    const double a = seg.upper_start - x;
    const double b = seg.upper_end - y;
    const double c = x - seg.lower_start;
    const double d = y - seg.lower_end;
    if (std::isinf(a + c) || std::isinf(b + d)) return 0.0;
    const double A = a + c;
    const double B = b + d;
    return std::exp(-2.0 * (a * B + A * d) / seg.dt) + std::exp(-2.0 * (c * B + A * b) / seg.dt);
}

}  // namespace bcp
