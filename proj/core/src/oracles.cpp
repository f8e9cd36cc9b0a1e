#include "bcp/oracles.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "bcp/bridge.hpp"
#include "bcp/error.hpp"
#include "bcp/parallel.hpp"

namespace bcp {

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

constexpr std::uint64_t kBlockPaths = 4096;

// Running (count, mean, M2) so blocks can be merged in a fixed tree order.
struct Moments {
    double count = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        count += 1.0;
        const double delta = x - mean;
        mean += delta / count;
        m2 += delta * (x - mean);
    }
};

Moments merge(const Moments& a, const Moments& b) {
    if (a.count == 0.0) return b;
    if (b.count == 0.0) return a;
    Moments out;
    out.count = a.count + b.count;
    const double delta = b.mean - a.mean;
    out.mean = a.mean + delta * b.count / out.count;
    out.m2 = a.m2 + b.m2 + delta * delta * a.count * b.count / out.count;
    return out;
}

Moments tree_reduce(std::vector<Moments> parts) {
    if (parts.empty()) return {};
    while (parts.size() > 1) {
        std::vector<Moments> next;
        next.reserve((parts.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < parts.size(); i += 2) {
            next.push_back(merge(parts[i], parts[i + 1]));
        }
        if (parts.size() % 2 == 1) next.push_back(parts.back());
        parts.swap(next);
    }
    return parts.front();
}

McEstimate finish(const Moments& m, const McOptions& options) {
    McEstimate e;
    e.mean = m.mean;
    e.paths = options.paths;
    e.seed = options.seed;
    e.stderr_ = m.count > 1.0 ? std::sqrt(m.m2 / (m.count - 1.0) / m.count) : 0.0;
    return e;
}

McComparison simulate(const UnitDiffusion& process, const BoundaryPair& bounds,
                      const McOptions& options, bool with_indicator) {
    if (options.paths < 1) {
        throw Error(ErrorCode::InvalidArgument, "oracles", "paths must be at least 1");
    }
    if (options.n_steps < 1) {
        throw Error(ErrorCode::InvalidArgument, "oracles", "n_steps must be at least 1");
    }
    const int n = options.n_steps;
    const double dt = 1.0 / n;
    std::vector<double> upper(n + 1);
    std::vector<double> lower(n + 1);
    for (int k = 0; k <= n; ++k) {
        const double t = static_cast<double>(k) / n;
        upper[k] = bounds.upper_at(t);
        lower[k] = bounds.lower_at(t);
    }

    const std::uint64_t blocks = (options.paths + kBlockPaths - 1) / kBlockPaths;
    std::vector<Moments> conditional(blocks);
    std::vector<Moments> indicator(blocks);

    parallel_for(blocks, options.threads, [&](std::size_t b) {
        const std::uint64_t begin = b * kBlockPaths;
        const std::uint64_t end = std::min(options.paths, begin + kBlockPaths);
        for (std::uint64_t path = begin; path < end; ++path) {
            StreamRng normals(options.seed, 2 * path);
            StreamRng uniforms(options.seed, 2 * path + 1);
            double x = process.x0;
            double weight = 1.0;
            double alive = 1.0;
            for (int k = 1; k <= n; ++k) {
                const double t = static_cast<double>(k - 1) / n;
                const StepMoments m = step_moments(process, t, dt, x, options.scheme);
                const double y = x + m.mean_shift + std::sqrt(m.variance) * normals.normal();
                if (!(y < upper[k] && y > lower[k])) {
                    weight = 0.0;
                    alive = 0.0;
                    break;
                }
                const BridgeSegment seg{dt, lower[k - 1], lower[k], upper[k - 1], upper[k]};
                const double pi = crossing_probability(x, y, seg);
                weight *= 1.0 - pi;
                if (with_indicator && alive != 0.0 && uniforms.uniform() < pi) alive = 0.0;
                x = y;
            }
            conditional[b].add(weight);
            if (with_indicator) indicator[b].add(alive);
        }
    }, 1);

    McComparison out;
    out.conditional = finish(tree_reduce(std::move(conditional)), options);
    if (with_indicator) out.indicator = finish(tree_reduce(std::move(indicator)), options);
    return out;
}

std::uint64_t splitmix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

double ImageBoundary::upper(double t) const {
    return 0.5 * a + t / a * std::log(k + std::sqrt(k * k - std::exp(-a * a / t)));
}

double ImageBoundary::noncrossing(double horizon) const {
    const double g = upper(horizon);
    const double s = std::sqrt(horizon);
    return 2.0 * normal_cdf(g / s) - 1.0 -
           (normal_cdf((g - a) / s) - normal_cdf((-g - a) / s)) / k;
}

double daniels_reference() { return 0.47974935; }

double daniels_boundary(double t) {
    return 0.5 - t * std::log(0.25 * (1.0 + std::sqrt(1.0 + 8.0 * std::exp(-1.0 / t))));
}

double ou_psi_reference() { return 0.75050288; }

double ou_psi_exact_crossing() {
    return 1.0 - ImageBoundary{2.0, 1.0}.noncrossing(ou_time_change(1.0));
}

double ou_time_change(double t) { return 0.5 * std::expm1(2.0 * t); }

double ou_psi_wiener_upper(double s) { return ImageBoundary{2.0, 1.0}.upper(s); }

double ou_psi_upper(double t) { return std::exp(-t) * ou_psi_wiener_upper(ou_time_change(t)); }

double ou_psi_lower(double t) { return -ou_psi_upper(t); }

double gpm_upper(double t) { return ImageBoundary{3.0, 2.0}.upper(t); }

double gpm_lower(double t) { return -gpm_upper(t); }

double gpm_reference() { return ImageBoundary{3.0, 2.0}.noncrossing(1.0); }

double flat_barrier_series(double c, double horizon, int terms) {
    if (!(c > 0.0) || !(horizon > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "oracles", "half-width and horizon must be positive");
    }
    const double s = std::sqrt(horizon);
    double sum = 0.0;
    for (int k = -terms; k <= terms; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        sum += sign * (normal_cdf((2 * k + 1) * c / s) - normal_cdf((2 * k - 1) * c / s));
    }
    return sum;
}

McEstimate mc_bcp(const UnitDiffusion& process, const BoundaryPair& bounds,
                  const McOptions& options) {
    return simulate(process, bounds, options, false).conditional;
}

McComparison mc_bcp_compare(const UnitDiffusion& process, const BoundaryPair& bounds,
                            const McOptions& options) {
    return simulate(process, bounds, options, true);
}

StreamRng::StreamRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : state_(splitmix(seed ^ splitmix(stream + 0x9e3779b97f4a7c15ULL))) {}

StreamRng::result_type StreamRng::operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return splitmix(state_);
}

double StreamRng::uniform() noexcept {
    // 53 random bits, shifted off zero.
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace bcp
