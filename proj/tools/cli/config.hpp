#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bcp/bridge.hpp"
#include "bcp/model.hpp"
#include "bcp/taylor.hpp"

namespace bcp::cli {

enum class Mode { automatic, two_sided, one_sided, terminal, payoff };

enum class Reference { automatic, none, published, exact, self_richardson, mc };

using KeyValues = std::map<std::string, std::string>;

/// Everything a command needs. Built from key=value pairs; see
/// `known_keys()` for the accepted names.
struct RunConfig {
    std::string model = "brownian";
    ModelRegistry::Parameters model_params;

    /// daniels, ou_psi, gpm, flat, or a name added to the BoundaryRegistry.
    std::string boundary = "flat";
    double flat_c = 1.0;  ///< half-width when boundary is flat(c)

    Mode mode = Mode::automatic;
    double absorbing_level = -3.0;
    double terminal_a = 0.0;
    double terminal_b = 0.0;
    std::string payoff;

    int n = 256;
    std::vector<int> n_list{16, 32, 64, 128, 256};
    double gamma = 2.0;
    double delta = 0.0;
    Scheme scheme = Scheme::taylor2;
    bool normalized = false;
    bool bridge = true;
    TwoSidedMethod bridge_method = TwoSidedMethod::sum;
    int series_terms = 10;
    double cutoff = 0.0;

    std::uint64_t seed = 20240101;
    std::uint64_t paths = 100000;
    int mc_steps = 0;  ///< 0 means "same as n"

    Reference reference = Reference::automatic;
    unsigned threads = 1;
    std::string out;
};

const std::vector<std::string>& known_keys();

/// Reads a flat key=value file. Blank lines and lines starting with '#' are
/// skipped; unknown keys raise ConfigError naming the line.
KeyValues read_config_file(const std::string& path);

/// Parses "key=value" lines from text. `origin` labels error messages.
KeyValues parse_config_text(const std::string& text, const std::string& origin);

/// Applies the pairs on top of `base` (later pairs win) and validates every
/// field. Throws Error(ConfigError).
RunConfig make_config(const KeyValues& pairs, RunConfig base = {});

/// Splits "--key value" and "--key=value" tokens into pairs.
KeyValues parse_overrides(const std::vector<std::string>& tokens);

std::string to_string(Mode mode);
std::string to_string(Reference reference);

}  // namespace bcp::cli
