#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bcp/engine.hpp"
#include "bcp/grid.hpp"
#include "bcp/model.hpp"
#include "bcp/oracles.hpp"
#include "cli/config.hpp"

namespace bcp::cli {

/// A named pair of boundaries in the coordinates of the configured model.
/// A missing lower boundary makes the problem one-sided.
struct BoundaryDefinition {
    BoundaryFunction lower;
    BoundaryFunction upper;
    /// Exact non-crossing probability on [0, 1], when known for `config`.
    std::function<std::optional<double>(const RunConfig&)> exact;
    /// Published crossing probability (8 digits), when one exists.
    std::function<std::optional<double>(const RunConfig&)> published;
};

/// daniels, ou_psi and gpm are pre-registered; flat(c) is built on demand.
class BoundaryRegistry {
public:
    static BoundaryRegistry& instance();

    void add(const std::string& name, BoundaryDefinition definition);
    bool contains(const std::string& name) const;
    BoundaryDefinition get(const RunConfig& config) const;
    std::vector<std::string> names() const;

private:
    BoundaryRegistry();
    std::map<std::string, BoundaryDefinition> definitions_;
};

/// Model, transformed process and validated strip for one run.
struct Problem {
    DiffusionModel model;
    UnitDiffusion process;
    BoundaryPair bounds;
    LadderOptions ladder_options;
    TerminalFunctional terminal = AllOnes{};
};

Problem make_problem(const RunConfig& config, int n);
LatticeLadder make_ladder(const Problem& problem, const RunConfig& config, int n);
SolveOptions make_solve_options(const RunConfig& config, const Problem& problem);

/// Builds and runs the chain for n steps.
SweepResult run_chain(const RunConfig& config, int n, bool keep_surfaces = false);

/// Payoffs selectable by name in payoff mode: identity, square, exp.
std::function<double(double)> payoff_by_name(const std::string& name);

/// Non-crossing reference for the AllOnes functional, or nullopt when the
/// chosen kind cannot produce one. Throws ConfigError when the kind was
/// requested explicitly but is unavailable. `max_n` drives self_richardson
/// and the MC step count.
struct ReferenceValue {
    Reference kind = Reference::none;
    double noncrossing = 0.0;
    double stderr_ = 0.0;  ///< nonzero only for MC references
};

std::optional<ReferenceValue> resolve_reference(const RunConfig& config, int max_n);

McOptions make_mc_options(const RunConfig& config);

}  // namespace bcp::cli
