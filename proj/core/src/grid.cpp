#include "bcp/grid.hpp"

#include <cmath>
#include <string>

#include "bcp/error.hpp"

namespace bcp {

namespace {

TimeGrid finish_grid(std::vector<double> times) {
    TimeGrid grid;
    const int n = static_cast<int>(times.size()) - 1;
    grid.dt.reserve(n);
    double sum = 0.0;
    double min_dt = std::numeric_limits<double>::infinity();
    double max_dt = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double d = times[k] - times[k - 1];
        if (!(d > 0.0)) {
            throw Error(ErrorCode::GridRegularityViolation, "grid",
                        "times must be strictly increasing (step " + std::to_string(k) + ")");
        }
        grid.dt.push_back(d);
        sum += d;
        min_dt = std::min(min_dt, d);
        max_dt = std::max(max_dt, d);
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw Error(ErrorCode::GridRegularityViolation, "grid", "steps do not sum to one");
    }
    grid.eta1 = n * min_dt;
    grid.eta2 = n * max_dt;
    // Uniform grids land within rounding of 1 on both sides.
    if (std::abs(grid.eta1 - 1.0) < 1e-12) grid.eta1 = std::min(grid.eta1, 1.0);
    if (std::abs(grid.eta2 - 1.0) < 1e-12) grid.eta2 = std::max(grid.eta2, 1.0);
    if (!(grid.eta1 > 0.0 && grid.eta1 <= 1.0 && grid.eta2 >= 1.0)) {
        throw Error(ErrorCode::GridRegularityViolation, "grid",
                    "regularity constants out of range: eta1 = " + std::to_string(grid.eta1) +
                        ", eta2 = " + std::to_string(grid.eta2));
    }
    grid.t = std::move(times);
    return grid;
}

void validate(const LatticeParams& params) {
    if (!(params.gamma > 0.0) || !std::isfinite(params.gamma)) {
        throw Error(ErrorCode::InvalidArgument, "grid", "gamma must be positive");
    }
    if (!(params.delta >= 0.0 && params.delta <= 0.5)) {
        throw Error(ErrorCode::InvalidArgument, "grid", "delta must lie in [0, 1/2]");
    }
}

}  // namespace

TimeGrid uniform_time_grid(int n) {
    if (n < 2) {
        throw Error(ErrorCode::GridRegularityViolation, "grid", "need at least two steps");
    }
    std::vector<double> times(n + 1);
    for (int k = 0; k <= n; ++k) times[k] = static_cast<double>(k) / n;
    TimeGrid grid = finish_grid(std::move(times));
    grid.eta1 = 1.0;
    grid.eta2 = 1.0;
    return grid;
}

TimeGrid custom_time_grid(std::vector<double> times) {
    if (times.size() < 3) {
        throw Error(ErrorCode::GridRegularityViolation, "grid", "need at least two steps");
    }
    if (times.front() != 0.0 || times.back() != 1.0) {
        throw Error(ErrorCode::GridRegularityViolation, "grid", "times must run from 0 to 1");
    }
    return finish_grid(std::move(times));
}

LatticeSpacing lattice_step(int k, int n, double gap, double dt, const LatticeParams& params) {
    validate(params);
    if (!(gap > 0.0) || !(dt > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "grid", "gap and dt must be positive");
    }
    const double scale = k == n ? dt : std::pow(dt, 0.5 + params.delta);
    const double v = gap / scale;
    const double cells = std::floor(params.gamma * v);
    if (cells < 1.0) {
        throw Error(ErrorCode::LatticeTooCoarse, "grid",
                    "floor(gamma * v) = 0 at step " + std::to_string(k) + "; increase n or gamma");
    }
    LatticeSpacing s;
    s.w = v / cells;
    s.cells = static_cast<long>(cells);
    s.h = gap / cells;
    return s;
}

std::vector<double> LatticeLevel::states() const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = state(i);
    return out;
}

LatticeLadder build_ladder(const TimeGrid& grid, const BoundaryPair& bounds, double x0,
                           const LatticeParams& params, const LadderOptions& options) {
    validate(params);
    const int n = grid.steps();
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "grid", "empty time grid");

    const auto* absorbing = std::get_if<AbsorbingLower>(&options.lower);
    if (absorbing && !bounds.one_sided()) {
        throw Error(ErrorCode::InvalidArgument, "grid",
                    "an absorbing lower level needs a one-sided boundary pair");
    }
    if (!absorbing && bounds.one_sided()) {
        throw Error(ErrorCode::InvalidArgument, "grid",
                    "one-sided boundaries need an absorbing lower level");
    }
    if (absorbing && !(absorbing->level < x0)) {
        throw Error(ErrorCode::InvalidArgument, "grid", "absorbing level must lie below x0");
    }

    LatticeLadder ladder;
    ladder.grid = grid;
    ladder.params = params;
    if (absorbing) ladder.absorbing_level = absorbing->level;
    ladder.levels.reserve(n + 1);

    LatticeLevel start;
    start.time = 0.0;
    start.anchor = x0;
    start.first = 0;
    start.last = 0;
    start.lower = bounds.lower_at(0.0);
    start.upper = bounds.upper_at(0.0);
    ladder.levels.push_back(start);

    for (int k = 1; k <= n; ++k) {
        const double t = grid.t[k];
        const double upper = bounds.upper_at(t);
        const double floor_level = absorbing ? absorbing->level : bounds.lower_at(t);
        const double gap = upper - floor_level;
        if (!(gap > 0.0)) {
            throw Error(ErrorCode::BoundaryClassViolation, "grid",
                        "nonpositive gap at t = " + std::to_string(t));
        }
        const LatticeSpacing s = lattice_step(k, n, gap, grid.dt[k - 1], params);

        LatticeLevel level;
        level.time = t;
        level.anchor = upper;
        level.h = s.h;
        level.w = s.w;
        level.first = 1;
        level.last = s.cells - 1;
        level.lower = bounds.lower_at(t);
        level.upper = upper;

        if (k == n && options.terminal) {
            const auto [a, b] = *options.terminal;
            if (!(a < b) || b > upper || a < floor_level) {
                throw Error(ErrorCode::InvalidArgument, "grid",
                            "terminal interval must satisfy lower(1) <= a < b <= upper(1)");
            }
            const double cells = std::floor(params.gamma * (b - a) / grid.dt[k - 1]);
            if (cells < 1.0) {
                throw Error(ErrorCode::LatticeTooCoarse, "grid", "terminal interval too short");
            }
            const double h = (b - a) / cells;
            const double tol = 1e-9 * h;
            level.anchor = b;
            level.h = h;
            level.w = h / grid.dt[k - 1];
            level.first = 0;
            while (b - level.first * h >= upper - tol) ++level.first;
            level.last = static_cast<long>(cells);
            while (level.last >= level.first && b - level.last * h <= floor_level + tol) {
                --level.last;
            }
            ladder.terminal_override = true;
        }

        if (level.size() == 0) {
            throw Error(ErrorCode::EmptyInterior, "grid",
                        "no interior lattice points at step " + std::to_string(k));
        }
        ladder.levels.push_back(level);
    }
    return ladder;
}

}  // namespace bcp
