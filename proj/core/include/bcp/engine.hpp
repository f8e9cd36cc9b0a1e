#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "bcp/bridge.hpp"
#include "bcp/grid.hpp"
#include "bcp/model.hpp"
#include "bcp/taylor.hpp"

namespace bcp {

struct StageOptions {
    bool normalized = false;  ///< divide each row by its lattice normalizer C(x)
    bool bridge = true;       ///< apply the Brownian-bridge taboo factor
    TwoSidedMethod bridge_method = TwoSidedMethod::sum;
    SeriesOptions series;
    /// Opt-in sparsification: entries below this are set to zero. 0 = off.
    double cutoff = 0.0;
};

/// Taboo transition matrix between consecutive lattice levels, row-major.
/// With an absorbing level the last row and column belong to it.
struct TransitionStage {
    int step = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    bool normalized = false;
    bool absorbing = false;
    std::vector<double> entries;
    /// C(x) - 1 for every non-absorbing row.
    std::vector<double> normalizer_deviation;

    double at(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }
};

/// Lattice mass of the N(mean, sd^2) density, sum_j phi(anchor - j h) h,
/// by direct summation over mean +- 10 sd.
double normalizer_direct(double mean, double sd, double anchor, double h);

/// C - 1 from the dual (Fourier) side of the same lattice sum:
/// 2 sum_l exp(-2 pi^2 l^2 sd^2 / h^2) cos(2 pi l (mean - anchor) / h).
double normalizer_dual_deviation(double mean, double sd, double anchor, double h);

/// C - 1 using whichever side converges faster.
double normalizer_deviation(double mean, double sd, double anchor, double h);

/// C_{n,k}(x): normalizer of the step-k transition out of state x.
double normalizer(const UnitDiffusion& process, const LatticeLadder& ladder, int k, double x,
                  Scheme scheme);

TransitionStage build_stage(const UnitDiffusion& process, const LatticeLadder& ladder, int k,
                            Scheme scheme, const StageOptions& options, unsigned threads = 1);

struct AllOnes {};

/// 1 on terminal states inside [a, b].
struct Indicator {
    double a = 0.0;
    double b = 0.0;
};

/// f sampled at the terminal states.
struct Payoff {
    std::function<double(double)> f;
};

/// Value attached to each terminal state. Mass held by the absorbing level
/// counts as 1 under AllOnes without a terminal override and 0 otherwise.
using TerminalFunctional = std::variant<AllOnes, Indicator, Payoff>;

/// Sub-probability mass carried by the interior states of one level.
struct Surface {
    int step = 0;
    double time = 0.0;
    double h = 0.0;
    std::vector<double> states;
    std::vector<double> mass;
    double absorbed = 0.0;
};

struct Diagnostics {
    double max_normalizer_deviation = 0.0;  ///< max |C(x) - 1| over all rows
    double rho = 1.0;                       ///< 1 v max C(x)
    double normalizer_bound = 0.0;          ///< c0 exp(-M n^(2 delta))
    double drop_normalizer_bound = 0.0;     ///< c0 n rho^(n-1) exp(-M n^(2 delta))
    double seconds = 0.0;
};

struct SweepResult {
    double probability = 0.0;
    std::vector<double> total_mass;  ///< mass after each step, absorbing level included
    std::vector<Surface> surfaces;
    Diagnostics diagnostics;
};

/// Propagates the unit mass at x0 through the stages and applies the
/// terminal functional.
SweepResult sweep(std::span<const TransitionStage> stages, const LatticeLadder& ladder,
                  const TerminalFunctional& terminal = AllOnes{}, bool keep_surfaces = false);

struct SolveOptions {
    Scheme scheme = Scheme::taylor2;
    StageOptions stage;
    TerminalFunctional terminal = AllOnes{};
    bool keep_surfaces = false;
    unsigned threads = 1;
};

/// Builds and applies stages one at a time, never holding more than one
/// matrix.
SweepResult solve(const UnitDiffusion& process, const LatticeLadder& ladder,
                  const SolveOptions& options = {});

/// c0 exp(-M n^(2 delta)) with M = gamma^2 pi^2 / (4 eta2^(2 delta)) and
/// c0 = 2 / (1 - exp(-M)).
double normalizer_bound(int n, double delta, double gamma, double eta2);

/// c0 n rho^(n-1) exp(-M n^(2 delta)); bounds the effect of dropping the
/// normalizers from the matrix product.
double drop_normalizer_bound(int n, double delta, double gamma, double eta2, double rho);

}  // namespace bcp
