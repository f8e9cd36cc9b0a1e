#include "bcp/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <string>

#include "bcp/error.hpp"
#include "bcp/parallel.hpp"

namespace bcp {

namespace {

constexpr double kTruncationSds = 10.0;
// exp(-z^2 / 2) is exactly zero in double beyond this.
constexpr double kUnderflowZ2 = 1500.0;
constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343819;

struct RowKernel {
    double mean = 0.0;
    double sd = 0.0;
    double deviation = 0.0;
};

RowKernel row_kernel(const UnitDiffusion& process, const LatticeLadder& ladder, int k, double x,
                     Scheme scheme) {
    const double t = ladder.grid.t[k - 1];
    const double dt = ladder.grid.dt[k - 1];
    const StepMoments m = step_moments(process, t, dt, x, scheme);
    const LatticeLevel& level = ladder.levels[k];
    RowKernel kernel;
    kernel.mean = x + m.mean_shift;
    kernel.sd = std::sqrt(m.variance);
    kernel.deviation = normalizer_deviation(kernel.mean, kernel.sd, level.anchor, level.h);
    return kernel;
}

void check_step(const LatticeLadder& ladder, int k) {
    if (k < 1 || k > ladder.steps()) {
        throw Error(ErrorCode::InvalidArgument, "engine",
                    "step " + std::to_string(k) + " outside [1, " +
                        std::to_string(ladder.steps()) + "]");
    }
}

double absorbed_terminal_value(const LatticeLadder& ladder, const TerminalFunctional& terminal) {
    return std::holds_alternative<AllOnes>(terminal) && !ladder.terminal_override ? 1.0 : 0.0;
}

std::vector<double> terminal_values(const LatticeLadder& ladder,
                                    const TerminalFunctional& terminal) {
    const LatticeLevel& level = ladder.levels.back();
    std::vector<double> values(level.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double y = level.state(i);
        if (std::holds_alternative<AllOnes>(terminal)) {
            values[i] = 1.0;
        } else if (const auto* ind = std::get_if<Indicator>(&terminal)) {
            values[i] = (y >= ind->a && y <= ind->b) ? 1.0 : 0.0;
        } else {
            values[i] = std::get<Payoff>(terminal).f(y);
        }
    }
    if (ladder.absorbing_level) values.push_back(absorbed_terminal_value(ladder, terminal));
    return values;
}

void propagate(std::span<const double> in, const TransitionStage& stage, std::vector<double>& out) {
    if (in.size() != stage.rows) {
        throw Error(ErrorCode::DimensionMismatch, "engine",
                    "stage " + std::to_string(stage.step) + " expects " +
                        std::to_string(stage.rows) + " rows, mass vector has " +
                        std::to_string(in.size()));
    }
    out.assign(stage.cols, 0.0);
    for (std::size_t r = 0; r < stage.rows; ++r) {
        const double v = in[r];
        if (v == 0.0) continue;
        const double* row = stage.entries.data() + r * stage.cols;
        for (std::size_t c = 0; c < stage.cols; ++c) out[c] += v * row[c];
    }
}

Surface make_surface(const LatticeLadder& ladder, int k, const std::vector<double>& mass) {
    const LatticeLevel& level = ladder.levels[k];
    Surface s;
    s.step = k;
    s.time = level.time;
    s.h = level.h;
    s.states = level.states();
    s.mass.assign(mass.begin(), mass.begin() + static_cast<std::ptrdiff_t>(level.size()));
    s.absorbed = ladder.absorbing_level ? mass.back() : 0.0;
    return s;
}

void accumulate_diagnostics(const TransitionStage& stage, Diagnostics& d) {
    for (const double dev : stage.normalizer_deviation) {
        d.max_normalizer_deviation = std::max(d.max_normalizer_deviation, std::abs(dev));
        d.rho = std::max(d.rho, 1.0 + dev);
    }
}

void finish_diagnostics(const LatticeLadder& ladder, Diagnostics& d) {
    const int n = ladder.steps();
    d.normalizer_bound =
        normalizer_bound(n, ladder.params.delta, ladder.params.gamma, ladder.grid.eta2);
    d.drop_normalizer_bound = drop_normalizer_bound(n, ladder.params.delta, ladder.params.gamma,
                                                    ladder.grid.eta2, d.rho);
}

}  // namespace

double normalizer_direct(double mean, double sd, double anchor, double h) {
    const long j_lo = static_cast<long>(std::ceil((anchor - (mean + kTruncationSds * sd)) / h));
    const long j_hi = static_cast<long>(std::floor((anchor - (mean - kTruncationSds * sd)) / h));
    double sum = 0.0;
    for (long j = j_lo; j <= j_hi; ++j) {
        const double z = (anchor - static_cast<double>(j) * h - mean) / sd;
        sum += std::exp(-0.5 * z * z);
    }
    return sum * kInvSqrt2Pi * h / sd;
}

double normalizer_dual_deviation(double mean, double sd, double anchor, double h) {
    const double phase = (mean - anchor) / h;
    const double frac = phase - std::round(phase);
    const double ratio = sd / h;
    const double a = 2.0 * std::numbers::pi * std::numbers::pi * ratio * ratio;
    double sum = 0.0;
    for (int l = 1; l <= 64; ++l) {
        const double term = std::exp(-a * l * l);
        if (term == 0.0) break;
        sum += term * std::cos(2.0 * std::numbers::pi * l * frac);
    }
    return 2.0 * sum;
}

double normalizer_deviation(double mean, double sd, double anchor, double h) {
    if (sd >= 0.5 * h) return normalizer_dual_deviation(mean, sd, anchor, h);
    return normalizer_direct(mean, sd, anchor, h) - 1.0;
}

double normalizer(const UnitDiffusion& process, const LatticeLadder& ladder, int k, double x,
                  Scheme scheme) {
    check_step(ladder, k);
    return 1.0 + row_kernel(process, ladder, k, x, scheme).deviation;
}

TransitionStage build_stage(const UnitDiffusion& process, const LatticeLadder& ladder, int k,
                            Scheme scheme, const StageOptions& options, unsigned threads) {
    check_step(ladder, k);
    const LatticeLevel& from = ladder.levels[k - 1];
    const LatticeLevel& to = ladder.levels[k];
    const bool absorbing = ladder.absorbing_level.has_value();
    const std::size_t interior_rows = from.size();
    const std::size_t interior_cols = to.size();

    TransitionStage stage;
    stage.step = k;
    stage.absorbing = absorbing;
    stage.normalized = options.normalized;
    stage.rows = interior_rows + (absorbing ? 1 : 0);
    stage.cols = interior_cols + (absorbing ? 1 : 0);
    stage.entries.assign(stage.rows * stage.cols, 0.0);
    stage.normalizer_deviation.assign(interior_rows, 0.0);

    BridgeSegment seg;
    seg.dt = ladder.grid.dt[k - 1];
    seg.lower_start = from.lower;
    seg.lower_end = to.lower;
    seg.upper_start = from.upper;
    seg.upper_end = to.upper;

    const std::vector<double> columns = to.states();
    const double h = to.h;

    // First lattice index at or below the absorbing level.
    long absorbed_from = 0;
    if (absorbing) {
        absorbed_from = static_cast<long>(
            std::ceil((to.anchor - *ladder.absorbing_level) / h - 1e-9));
    }

    auto entry = [&](double x, double y, const RowKernel& kernel, double scale) {
        const double z = (y - kernel.mean) / kernel.sd;
        const double z2 = z * z;
        if (z2 > kUnderflowZ2) return 0.0;
        double q = std::exp(-0.5 * z2) * scale;
        if (options.bridge) {
            q *= 1.0 - crossing_probability(x, y, seg, options.bridge_method, options.series);
        }
        return q;
    };

    parallel_for(interior_rows, threads, [&](std::size_t r) {
        const double x = from.state(r);
        const RowKernel kernel = row_kernel(process, ladder, k, x, scheme);
        stage.normalizer_deviation[r] = kernel.deviation;
        double scale = kInvSqrt2Pi * h / kernel.sd;
        if (options.normalized) scale /= 1.0 + kernel.deviation;

        double* row = stage.entries.data() + r * stage.cols;
        for (std::size_t c = 0; c < interior_cols; ++c) {
            double q = entry(x, columns[c], kernel, scale);
            if (options.cutoff > 0.0 && q < options.cutoff) q = 0.0;
            row[c] = q;
        }
        if (absorbing) {
            const double stop = kernel.mean - kTruncationSds * kernel.sd;
            double sum = 0.0;
            for (long j = absorbed_from;; ++j) {
                const double y = to.anchor - static_cast<double>(j) * h;
                if (y < stop) break;
                sum += entry(x, y, kernel, scale);
            }
            row[interior_cols] = sum;
        }
    });
    if (absorbing) stage.entries[stage.rows * stage.cols - 1] = 1.0;
    return stage;
}

SweepResult sweep(std::span<const TransitionStage> stages, const LatticeLadder& ladder,
                  const TerminalFunctional& terminal, bool keep_surfaces) {
    if (stages.size() != static_cast<std::size_t>(ladder.steps())) {
        throw Error(ErrorCode::DimensionMismatch, "engine",
                    "got " + std::to_string(stages.size()) + " stages for " +
                        std::to_string(ladder.steps()) + " steps");
    }
    const auto started = std::chrono::steady_clock::now();
    SweepResult result;
    std::vector<double> mass(1, 1.0);
    if (ladder.absorbing_level) mass.push_back(0.0);
    std::vector<double> next;
    for (const TransitionStage& stage : stages) {
        propagate(mass, stage, next);
        mass.swap(next);
        accumulate_diagnostics(stage, result.diagnostics);
        double total = 0.0;
        for (const double m : mass) total += m;
        result.total_mass.push_back(total);
        if (keep_surfaces) result.surfaces.push_back(make_surface(ladder, stage.step, mass));
    }
    const std::vector<double> values = terminal_values(ladder, terminal);
    if (values.size() != mass.size()) {
        throw Error(ErrorCode::DimensionMismatch, "engine",
                    "final stage does not match the terminal level");
    }
    for (std::size_t i = 0; i < mass.size(); ++i) result.probability += mass[i] * values[i];
    finish_diagnostics(ladder, result.diagnostics);
    result.diagnostics.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

SweepResult solve(const UnitDiffusion& process, const LatticeLadder& ladder,
                  const SolveOptions& options) {
    const auto started = std::chrono::steady_clock::now();
    SweepResult result;
    std::vector<double> mass(1, 1.0);
    if (ladder.absorbing_level) mass.push_back(0.0);
    std::vector<double> next;
    for (int k = 1; k <= ladder.steps(); ++k) {
        const TransitionStage stage =
            build_stage(process, ladder, k, options.scheme, options.stage, options.threads);
        propagate(mass, stage, next);
        mass.swap(next);
        accumulate_diagnostics(stage, result.diagnostics);
        double total = 0.0;
        for (const double m : mass) total += m;
        result.total_mass.push_back(total);
        if (options.keep_surfaces) result.surfaces.push_back(make_surface(ladder, k, mass));
    }
    const std::vector<double> values = terminal_values(ladder, options.terminal);
    for (std::size_t i = 0; i < mass.size(); ++i) result.probability += mass[i] * values[i];
    finish_diagnostics(ladder, result.diagnostics);
    result.diagnostics.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

double normalizer_bound(int n, double delta, double gamma, double eta2) {
    const double M = gamma * gamma * std::numbers::pi * std::numbers::pi /
                     (4.0 * std::pow(eta2, 2.0 * delta));
    const double c0 = 2.0 / (1.0 - std::exp(-M));
    return c0 * std::exp(-M * std::pow(static_cast<double>(n), 2.0 * delta));
}

double drop_normalizer_bound(int n, double delta, double gamma, double eta2, double rho) {
    return static_cast<double>(n) * std::pow(rho, n - 1) * normalizer_bound(n, delta, gamma, eta2);
}

}  // namespace bcp
