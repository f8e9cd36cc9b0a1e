#include "cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bcp/error.hpp"
#include "bcp/parallel.hpp"
#include "cli/csv.hpp"
#include "cli/problem.hpp"
#include "cli/study.hpp"

namespace bcp::cli {

namespace {

void line(std::ostream& out, const std::string& key, double value) {
    out << key << ": " << format_double(value) << '\n';
}

void line(std::ostream& out, const std::string& key, const std::string& value) {
    out << key << ": " << value << '\n';
}

std::ofstream open_output(const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error(ErrorCode::ConfigError, "cli", "cannot write '" + path + "'");
    return file;
}

bool plain_probability(const RunConfig& config) {
    return config.mode != Mode::terminal && config.mode != Mode::payoff;
}

std::string boundary_label(const RunConfig& config) {
    if (config.boundary == "flat") return "flat(" + format_double(config.flat_c) + ")";
    return config.boundary;
}

void print_setup(const RunConfig& config, std::ostream& out) {
    line(out, "model", config.model);
    line(out, "boundary", boundary_label(config));
    line(out, "mode", to_string(config.mode));
    line(out, "scheme", std::string(to_string(config.scheme)));
    line(out, "gamma", config.gamma);
    line(out, "delta", config.delta);
    line(out, "bridge", std::string(config.bridge ? "true" : "false"));
    line(out, "normalized", std::string(config.normalized ? "true" : "false"));
}

void print_reference(const std::optional<ReferenceValue>& ref, double value, std::ostream& out) {
    if (!ref) return;
    line(out, "reference", to_string(ref->kind));
    line(out, "reference_noncrossing", ref->noncrossing);
    line(out, "abs_error", std::abs(value - ref->noncrossing));
}

}  // namespace

void cmd_compute(const RunConfig& config, std::ostream& out) {
    const SweepResult r = run_chain(config, config.n);
    print_setup(config, out);
    line(out, "n", static_cast<double>(config.n));
    if (plain_probability(config)) {
        line(out, "noncrossing", r.probability);
        line(out, "crossing", 1.0 - r.probability);
        print_reference(resolve_reference(config, config.n), r.probability, out);
    } else {
        line(out, "value", r.probability);
    }
    line(out, "max_normalizer_deviation", r.diagnostics.max_normalizer_deviation);
    line(out, "normalizer_bound", r.diagnostics.normalizer_bound);
    line(out, "drop_normalizer_bound", r.diagnostics.drop_normalizer_bound);
    line(out, "seconds", r.diagnostics.seconds);

    if (!config.out.empty()) {
        std::ofstream file = open_output(config.out);
        CsvWriter csv(file, {"model", "boundary", "n", "gamma", "delta", "scheme", "normalized",
                             "bridge", "probability", "max_normalizer_deviation",
                             "normalizer_bound", "drop_normalizer_bound", "seconds"});
        csv.cell(config.model)
            .cell(boundary_label(config))
            .cell(static_cast<long long>(config.n))
            .cell(config.gamma)
            .cell(config.delta)
            .cell(std::string(to_string(config.scheme)))
            .cell(static_cast<long long>(config.normalized))
            .cell(static_cast<long long>(config.bridge))
            .cell(r.probability)
            .cell(r.diagnostics.max_normalizer_deviation)
            .cell(r.diagnostics.normalizer_bound)
            .cell(r.diagnostics.drop_normalizer_bound)
            .cell(r.diagnostics.seconds)
            .end_row();
    }
}

void cmd_study(const RunConfig& config, std::ostream& out) {
    const StudyReport report = run_study(config);
    print_setup(config, out);
    line(out, "reference", to_string(report.reference.kind));
    line(out, "reference_noncrossing", report.reference.noncrossing);
    for (const StudyRow& row : report.rows) {
        out << "n=" << row.n << " probability=" << format_double(row.probability)
            << " abs_error=" << format_double(row.abs_error)
            << " seconds=" << format_double(row.seconds) << '\n';
    }
    line(out, "slope", report.fit.slope);
    line(out, "intercept", report.fit.intercept);

    if (!config.out.empty()) {
        std::ofstream file = open_output(config.out);
        CsvWriter csv(file, {"n", "probability", "abs_error", "seconds"});
        for (const StudyRow& row : report.rows) {
            csv.cell(static_cast<long long>(row.n))
                .cell(row.probability)
                .cell(row.abs_error)
                .cell(row.seconds)
                .end_row();
        }
    }
}

void cmd_surface(const RunConfig& config, std::ostream& out) {
    const SweepResult r = run_chain(config, config.n, true);
    auto write = [&](std::ostream& stream) {
        CsvWriter csv(stream, {"k", "t", "state", "density"});
        for (const Surface& s : r.surfaces) {
            for (std::size_t i = 0; i < s.states.size(); ++i) {
                csv.cell(static_cast<long long>(s.step))
                    .cell(s.time)
                    .cell(s.states[i])
                    .cell(s.mass[i] / s.h)
                    .end_row();
            }
        }
    };
    if (config.out.empty()) {
        write(out);
        return;
    }
    std::ofstream file = open_output(config.out);
    write(file);

    std::size_t rows = 0;
    for (const Surface& s : r.surfaces) rows += s.states.size();
    double terminal_mass = 0.0;
    for (const double m : r.surfaces.back().mass) terminal_mass += m;
    print_setup(config, out);
    line(out, "n", static_cast<double>(config.n));
    line(out, "rows", static_cast<double>(rows));
    line(out, "terminal_interior_mass", terminal_mass);
    line(out, "absorbed_mass", r.surfaces.back().absorbed);
    line(out, "probability", r.probability);
}

void cmd_mc(const RunConfig& config, std::ostream& out) {
    if (!plain_probability(config)) {
        throw Error(ErrorCode::ConfigError, "cli", "mc estimates only the non-crossing probability");
    }
    const McOptions options = make_mc_options(config);
    const Problem problem = make_problem(config, options.n_steps);
    const auto started = std::chrono::steady_clock::now();
    const McEstimate e = mc_bcp(problem.process, problem.bounds, options);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    print_setup(config, out);
    line(out, "n_steps", static_cast<double>(options.n_steps));
    line(out, "paths", static_cast<double>(e.paths));
    line(out, "seed", std::to_string(e.seed));
    line(out, "noncrossing", e.mean);
    line(out, "crossing", 1.0 - e.mean);
    line(out, "stderr", e.stderr_);
    std::optional<ReferenceValue> ref;
    if (config.reference != Reference::mc) ref = resolve_reference(config, options.n_steps);
    print_reference(ref, e.mean, out);
    if (ref && e.stderr_ > 0.0) line(out, "z", (e.mean - ref->noncrossing) / e.stderr_);
    line(out, "seconds", seconds);

    if (!config.out.empty()) {
        std::ofstream file = open_output(config.out);
        CsvWriter csv(file, {"n_steps", "paths", "seed", "probability", "stderr", "seconds"});
        csv.cell(static_cast<long long>(options.n_steps))
            .cell(static_cast<long long>(e.paths))
            .cell(std::to_string(e.seed))
            .cell(e.mean)
            .cell(e.stderr_)
            .cell(seconds)
            .end_row();
    }
}

void cmd_bound(const RunConfig& config, std::ostream& out) {
    RunConfig plain = config;
    plain.normalized = false;
    RunConfig normalized = config;
    normalized.normalized = true;
    const SweepResult a = run_chain(plain, config.n);
    const SweepResult b = run_chain(normalized, config.n);
    const Diagnostics& d = a.diagnostics;
    const double eta2 = 1.0;
    const double M = config.gamma * config.gamma * std::numbers::pi * std::numbers::pi /
                     (4.0 * std::pow(eta2, 2.0 * config.delta));
    const double difference = std::abs(a.probability - b.probability);

    print_setup(config, out);
    line(out, "n", static_cast<double>(config.n));
    line(out, "M", M);
    line(out, "c0", 2.0 / (1.0 - std::exp(-M)));
    line(out, "max_normalizer_deviation", d.max_normalizer_deviation);
    line(out, "normalizer_bound", d.normalizer_bound);
    line(out, "normalizer_bound_holds",
         std::string(d.max_normalizer_deviation <= d.normalizer_bound ? "true" : "false"));
    line(out, "rho", d.rho);
    line(out, "unnormalized", a.probability);
    line(out, "normalized", b.probability);
    line(out, "difference", difference);
    line(out, "drop_normalizer_bound", d.drop_normalizer_bound);
    line(out, "drop_bound_holds",
         std::string(difference <= d.drop_normalizer_bound ? "true" : "false"));

    if (!config.out.empty()) {
        std::ofstream file = open_output(config.out);
        CsvWriter csv(file, {"n", "gamma", "delta", "max_normalizer_deviation", "normalizer_bound",
                             "rho", "difference", "drop_normalizer_bound"});
        csv.cell(static_cast<long long>(config.n))
            .cell(config.gamma)
            .cell(config.delta)
            .cell(d.max_normalizer_deviation)
            .cell(d.normalizer_bound)
            .cell(d.rho)
            .cell(difference)
            .cell(d.drop_normalizer_bound)
            .end_row();
    }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Boundary crossing probabilities of scalar diffusions"};
    app.allow_extras();
    std::string footer =
        "Any other setting is given as --key value or --key=value and overrides the config "
        "file. Keys:";
    for (const std::string& key : known_keys()) footer += " " + key;
    app.footer(footer + " model.<param>");

    std::string command;
    std::string config_path;
    std::optional<unsigned> threads;
    std::string out_path;
    app.add_option("command", command, "compute | study | surface | mc | bound")
        ->required()
        ->check(CLI::IsMember({"compute", "study", "surface", "mc", "bound"}));
    app.add_option("--config", config_path, "flat key=value settings file");
    app.add_option("--threads", threads, "worker cap (default: BCP_THREADS or all cores)");
    app.add_option("--out", out_path, "CSV output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "bcp: [cli] ConfigError: " << e.what() << '\n';
        return kExitConfigError;
    }

    try {
        RunConfig base;
        base.threads = default_threads();
        KeyValues pairs;
        if (!config_path.empty()) pairs = read_config_file(config_path);
        for (auto& [key, value] : parse_overrides(app.remaining())) pairs[key] = value;
        if (threads) pairs["threads"] = std::to_string(*threads);
        if (!out_path.empty()) pairs["out"] = out_path;
        const RunConfig config = make_config(pairs, base);

        if (command == "compute") {
            cmd_compute(config, out);
        } else if (command == "study") {
            cmd_study(config, out);
        } else if (command == "surface") {
            cmd_surface(config, out);
        } else if (command == "mc") {
            cmd_mc(config, out);
        } else {
            cmd_bound(config, out);
        }
    } catch (const Error& e) {
        err << "bcp: " << e.what() << '\n';
        return e.code() == ErrorCode::ConfigError ? kExitConfigError : kExitComputationError;
    } catch (const std::exception& e) {
        err << "bcp: [cli] ComputationError: " << e.what() << '\n';
        return kExitComputationError;
    }
    return kExitOk;
}

}  // namespace bcp::cli
