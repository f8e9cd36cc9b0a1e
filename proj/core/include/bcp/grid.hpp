#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "bcp/model.hpp"

namespace bcp {

/// Partition 0 = t_0 < ... < t_n = 1 with eta1/n <= dt_k <= eta2/n.
struct TimeGrid {
    std::vector<double> t;
    std::vector<double> dt;  ///< dt[k-1] = t[k] - t[k-1]
    double eta1 = 1.0;
    double eta2 = 1.0;

    int steps() const noexcept { return static_cast<int>(dt.size()); }
};

TimeGrid uniform_time_grid(int n);
TimeGrid custom_time_grid(std::vector<double> times);

/// Lattice density multiplier gamma and exponent delta in [0, 1/2]. delta = 0
/// is accepted for the divergence experiments.
struct LatticeParams {
    double gamma = 2.0;
    double delta = 0.0;
};

/// Spacing of one anchored lattice: the gap spans exactly `cells` steps of h.
struct LatticeSpacing {
    double w = 0.0;
    double h = 0.0;
    long cells = 0;
};

/// Spacing for step k of n. Steps before the last scale like dt^(1/2+delta),
/// the last one like dt.
LatticeSpacing lattice_step(int k, int n, double gap, double dt, const LatticeParams& params);

/// Interior lattice points at one grid time: anchor - j * h for j in
/// [first, last], strictly between `lower` and `upper`.
struct LatticeLevel {
    double time = 0.0;
    double anchor = 0.0;
    double h = 0.0;
    double w = 0.0;
    long first = 0;
    long last = -1;
    double lower = 0.0;  ///< lower boundary value (-inf for one-sided problems)
    double upper = 0.0;

    std::size_t size() const noexcept {
        return last >= first ? static_cast<std::size_t>(last - first + 1) : 0;
    }
    double state(std::size_t i) const noexcept {
        return anchor - static_cast<double>(first + static_cast<long>(i)) * h;
    }
    std::vector<double> states() const;
};

struct TwoSided {};

/// One-sided problem truncated below at an absorbing level.
struct AbsorbingLower {
    double level = -3.0;
};

using LowerMode = std::variant<TwoSided, AbsorbingLower>;

/// Closed interval restricting the terminal position.
struct TerminalInterval {
    double a = 0.0;
    double b = 0.0;
};

struct LadderOptions {
    LowerMode lower = TwoSided{};
    std::optional<TerminalInterval> terminal;
};

/// Per-step anchored state spaces. levels[0] holds only x0.
struct LatticeLadder {
    TimeGrid grid;
    LatticeParams params;
    std::vector<LatticeLevel> levels;
    std::optional<double> absorbing_level;
    bool terminal_override = false;

    int steps() const noexcept { return grid.steps(); }
};

LatticeLadder build_ladder(const TimeGrid& grid, const BoundaryPair& bounds, double x0,
                           const LatticeParams& params, const LadderOptions& options = {});

}  // namespace bcp
