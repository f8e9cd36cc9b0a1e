#include "cli/problem.hpp"

#include <cmath>

#include "bcp/error.hpp"

namespace bcp::cli {

namespace {

[[noreturn]] void fail(const std::string& message) {
    throw Error(ErrorCode::ConfigError, "cli", message);
}

double param(const RunConfig& c, const std::string& key, double fallback) {
    const auto it = c.model_params.find(key);
    return it == c.model_params.end() ? fallback : it->second;
}

bool standard_brownian(const RunConfig& c) {
    return c.model == "brownian" && param(c, "y0", 0.0) == 0.0;
}

bool standard_ou(const RunConfig& c) {
    return c.model == "ou" && param(c, "theta", 1.0) == 1.0 && param(c, "y0", 0.0) == 0.0;
}

Mode effective_mode(const RunConfig& config, const BoundaryDefinition& def) {
    if (config.mode == Mode::automatic) return def.lower ? Mode::two_sided : Mode::one_sided;
    if (config.mode == Mode::two_sided && !def.lower) {
        fail("boundary '" + config.boundary + "' has no lower side; use mode=one_sided");
    }
    return config.mode;
}

}  // namespace

BoundaryRegistry::BoundaryRegistry() {
    BoundaryDefinition daniels;
    daniels.upper = daniels_boundary;
    daniels.published = [](const RunConfig& c) -> std::optional<double> {
        if (standard_brownian(c)) return daniels_reference();
        return std::nullopt;
    };
    definitions_["daniels"] = daniels;

    BoundaryDefinition ou;
    ou.lower = ou_psi_lower;
    ou.upper = ou_psi_upper;
    ou.published = [](const RunConfig& c) -> std::optional<double> {
        if (standard_ou(c)) return ou_psi_reference();
        return std::nullopt;
    };
    ou.exact = [](const RunConfig& c) -> std::optional<double> {
        if (standard_ou(c)) return 1.0 - ou_psi_exact_crossing();
        return std::nullopt;
    };
    definitions_["ou_psi"] = ou;

    BoundaryDefinition gpm;
    gpm.lower = gpm_lower;
    gpm.upper = gpm_upper;
    gpm.exact = [](const RunConfig& c) -> std::optional<double> {
        if (standard_brownian(c)) return gpm_reference();
        return std::nullopt;
    };
    definitions_["gpm"] = gpm;
}

BoundaryRegistry& BoundaryRegistry::instance() {
    static BoundaryRegistry registry;
    return registry;
}

void BoundaryRegistry::add(const std::string& name, BoundaryDefinition definition) {
    if (name == "flat") fail("'flat' is reserved");
    definitions_[name] = std::move(definition);
}

bool BoundaryRegistry::contains(const std::string& name) const {
    return name == "flat" || definitions_.count(name) > 0;
}

BoundaryDefinition BoundaryRegistry::get(const RunConfig& config) const {
    if (config.boundary == "flat") {
        const double c = config.flat_c;
        BoundaryDefinition flat;
        flat.lower = [c](double) { return -c; };
        flat.upper = [c](double) { return c; };
        flat.exact = [c](const RunConfig& cfg) -> std::optional<double> {
            if (standard_brownian(cfg)) return flat_barrier_series(c);
            return std::nullopt;
        };
        return flat;
    }
    const auto it = definitions_.find(config.boundary);
    if (it == definitions_.end()) fail("unknown boundary '" + config.boundary + "'");
    return it->second;
}

std::vector<std::string> BoundaryRegistry::names() const {
    std::vector<std::string> out{"flat"};
    for (const auto& [name, _] : definitions_) out.push_back(name);
    return out;
}

std::function<double(double)> payoff_by_name(const std::string& name) {
    if (name == "identity") return [](double y) { return y; };
    if (name == "square") return [](double y) { return y * y; };
    if (name == "exp") return [](double y) { return std::exp(y); };
    fail("unknown payoff '" + name + "' (identity, square, exp)");
}

Problem make_problem(const RunConfig& config, int n) {
    if (!ModelRegistry::instance().contains(config.model)) {
        fail("unknown model '" + config.model + "'");
    }
    const BoundaryDefinition def = BoundaryRegistry::instance().get(config);
    const Mode mode = effective_mode(config, def);

    Problem p;
    p.model = ModelRegistry::instance().make(config.model, config.model_params);
    p.process = to_unit_diffusion(p.model);

    BoundaryFunction lower = mode == Mode::one_sided ? BoundaryFunction{} : def.lower;
    p.bounds = p.model.unit_diffusion
                   ? make_boundary_pair(lower, def.upper, p.process.x0, n)
                   : transform_boundaries(p.model, lower, def.upper, n);

    if (p.bounds.one_sided()) p.ladder_options.lower = AbsorbingLower{config.absorbing_level};
    if (mode == Mode::terminal) {
        p.ladder_options.terminal = TerminalInterval{config.terminal_a, config.terminal_b};
        p.terminal = Indicator{config.terminal_a, config.terminal_b};
    } else if (mode == Mode::payoff) {
        p.terminal = Payoff{payoff_by_name(config.payoff)};
    }
    return p;
}

LatticeLadder make_ladder(const Problem& problem, const RunConfig& config, int n) {
    return build_ladder(uniform_time_grid(n), problem.bounds, problem.process.x0,
                        LatticeParams{config.gamma, config.delta}, problem.ladder_options);
}

SolveOptions make_solve_options(const RunConfig& config, const Problem& problem) {
    SolveOptions o;
    o.scheme = config.scheme;
    o.stage.normalized = config.normalized;
    o.stage.bridge = config.bridge;
    o.stage.bridge_method = config.bridge_method;
    o.stage.series.terms = config.series_terms;
    o.stage.cutoff = config.cutoff;
    o.terminal = problem.terminal;
    o.threads = config.threads;
    return o;
}

SweepResult run_chain(const RunConfig& config, int n, bool keep_surfaces) {
    const Problem problem = make_problem(config, n);
    const LatticeLadder ladder = make_ladder(problem, config, n);
    SolveOptions options = make_solve_options(config, problem);
    options.keep_surfaces = keep_surfaces;
    return solve(problem.process, ladder, options);
}

McOptions make_mc_options(const RunConfig& config) {
    McOptions o;
    o.n_steps = config.mc_steps > 0 ? config.mc_steps : config.n;
    o.paths = config.paths;
    o.seed = config.seed;
    o.scheme = config.scheme;
    o.threads = config.threads;
    return o;
}

std::optional<ReferenceValue> resolve_reference(const RunConfig& config, int max_n) {
    const BoundaryDefinition def = BoundaryRegistry::instance().get(config);
    const bool all_ones = config.mode != Mode::terminal && config.mode != Mode::payoff;

    auto published = [&]() -> std::optional<ReferenceValue> {
        if (!all_ones || !def.published) return std::nullopt;
        const auto v = def.published(config);
        if (!v) return std::nullopt;
        return ReferenceValue{Reference::published, 1.0 - *v, 0.0};
    };
    auto exact = [&]() -> std::optional<ReferenceValue> {
        if (!all_ones || !def.exact) return std::nullopt;
        const auto v = def.exact(config);
        if (!v) return std::nullopt;
        return ReferenceValue{Reference::exact, *v, 0.0};
    };
    auto self_richardson = [&]() {
        const SweepResult r = run_chain(config, 4 * max_n);
        return ReferenceValue{Reference::self_richardson, r.probability, 0.0};
    };
    auto monte_carlo = [&]() {
        if (!all_ones) fail("the mc reference supports only the plain non-crossing probability");
        RunConfig mc_config = config;
        if (mc_config.mc_steps == 0) mc_config.mc_steps = max_n;
        const Problem problem = make_problem(mc_config, mc_config.mc_steps);
        const McEstimate e = mc_bcp(problem.process, problem.bounds, make_mc_options(mc_config));
        return ReferenceValue{Reference::mc, e.mean, e.stderr_};
    };

    switch (config.reference) {
        case Reference::none:
            return std::nullopt;
        case Reference::automatic:
            if (auto v = published()) return v;
            return exact();
        case Reference::published:
            if (auto v = published()) return v;
            fail("no published constant for boundary '" + config.boundary + "' with model '" +
                 config.model + "'");
        case Reference::exact:
            if (auto v = exact()) return v;
            fail("no exact reference for boundary '" + config.boundary + "' with model '" +
                 config.model + "'");
        case Reference::self_richardson:
            return self_richardson();
        case Reference::mc:
            return monte_carlo();
    }
    return std::nullopt;
}

}  // namespace bcp::cli
