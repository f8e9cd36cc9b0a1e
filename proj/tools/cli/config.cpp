#include "cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bcp/error.hpp"

namespace bcp::cli {

namespace {

[[noreturn]] void fail(const std::string& message) {
    throw Error(ErrorCode::ConfigError, "cli", message);
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

bool is_known(const std::string& key) {
    if (key.rfind("model.", 0) == 0 && key.size() > 6) return true;
    const auto& keys = known_keys();
    return std::find(keys.begin(), keys.end(), key) != keys.end();
}

double to_double(const std::string& key, const std::string& value) {
    double out = 0.0;
    const char* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
        fail("'" + key + "' expects a finite number, got '" + value + "'");
    }
    return out;
}

template <class Int>
Int to_integer(const std::string& key, const std::string& value) {
    Int out{};
    const char* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) {
        fail("'" + key + "' expects an integer, got '" + value + "'");
    }
    return out;
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    fail("'" + key + "' expects true or false, got '" + value + "'");
}

std::vector<int> to_int_list(const std::string& key, const std::string& value) {
    std::vector<int> out;
    std::stringstream in(value);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(to_integer<int>(key, trim(item)));
    if (out.empty()) fail("'" + key + "' is empty");
    return out;
}

Mode to_mode(const std::string& value) {
    if (value == "auto") return Mode::automatic;
    if (value == "two_sided") return Mode::two_sided;
    if (value == "one_sided") return Mode::one_sided;
    if (value == "terminal") return Mode::terminal;
    if (value == "payoff") return Mode::payoff;
    fail("unknown mode '" + value + "' (auto, two_sided, one_sided, terminal, payoff)");
}

Reference to_reference(const std::string& value) {
    if (value == "auto") return Reference::automatic;
    if (value == "none") return Reference::none;
    if (value == "published" || value == "paper_constant") return Reference::published;
    if (value == "exact") return Reference::exact;
    if (value == "self_richardson") return Reference::self_richardson;
    if (value == "mc") return Reference::mc;
    fail("unknown reference '" + value +
         "' (auto, none, published, exact, self_richardson, mc)");
}

// "flat(1.5)" sets both the name and the half-width.
void set_boundary(RunConfig& config, const std::string& value) {
    const auto open = value.find('(');
    if (open == std::string::npos) {
        config.boundary = value;
        return;
    }
    if (value.back() != ')') fail("malformed boundary '" + value + "'");
    config.boundary = trim(value.substr(0, open));
    if (config.boundary != "flat") fail("only flat(c) takes a parameter, got '" + value + "'");
    config.flat_c = to_double("boundary", trim(value.substr(open + 1, value.size() - open - 2)));
}

void apply(RunConfig& c, const std::string& key, const std::string& value) {
    if (key == "model") {
        c.model = value;
    } else if (key == "theta" || key == "y0") {
        c.model_params[key] = to_double(key, value);
    } else if (key.rfind("model.", 0) == 0) {
        c.model_params[key.substr(6)] = to_double(key, value);
    } else if (key == "boundary") {
        set_boundary(c, value);
    } else if (key == "mode") {
        c.mode = to_mode(value);
    } else if (key == "L") {
        c.absorbing_level = to_double(key, value);
    } else if (key == "a") {
        c.terminal_a = to_double(key, value);
    } else if (key == "b") {
        c.terminal_b = to_double(key, value);
    } else if (key == "payoff") {
        c.payoff = value;
    } else if (key == "n") {
        c.n = to_integer<int>(key, value);
    } else if (key == "n_list") {
        c.n_list = to_int_list(key, value);
    } else if (key == "gamma") {
        c.gamma = to_double(key, value);
    } else if (key == "delta") {
        c.delta = to_double(key, value);
    } else if (key == "scheme") {
        try {
            c.scheme = parse_scheme(value);
        } catch (const Error& e) {
            fail(e.what());
        }
    } else if (key == "normalized") {
        c.normalized = to_bool(key, value);
    } else if (key == "bridge") {
        c.bridge = to_bool(key, value);
    } else if (key == "bridge_method") {
        if (value == "sum") {
            c.bridge_method = TwoSidedMethod::sum;
        } else if (value == "series") {
            c.bridge_method = TwoSidedMethod::series;
        } else {
            fail("unknown bridge_method '" + value + "' (sum, series)");
        }
    } else if (key == "series_terms") {
        c.series_terms = to_integer<int>(key, value);
    } else if (key == "cutoff") {
        c.cutoff = to_double(key, value);
    } else if (key == "seed") {
        c.seed = to_integer<std::uint64_t>(key, value);
    } else if (key == "paths") {
        c.paths = to_integer<std::uint64_t>(key, value);
    } else if (key == "mc_steps") {
        c.mc_steps = to_integer<int>(key, value);
    } else if (key == "reference") {
        c.reference = to_reference(value);
    } else if (key == "threads") {
        c.threads = to_integer<unsigned>(key, value);
    } else if (key == "out") {
        c.out = value;
    } else {
        fail("unknown key '" + key + "'");
    }
}

void validate(const RunConfig& c) {
    if (c.n < 2) fail("n must be at least 2");
    for (const int n : c.n_list) {
        if (n < 2) fail("every entry of n_list must be at least 2");
    }
    if (!(c.gamma > 0.0)) fail("gamma must be positive");
    if (!(c.delta >= 0.0 && c.delta <= 0.5)) fail("delta must lie in [0, 0.5]");
    if (!(c.flat_c > 0.0)) fail("flat(c) needs c > 0");
    if (c.series_terms < 1) fail("series_terms must be at least 1");
    if (!(c.cutoff >= 0.0 && c.cutoff < 1.0)) fail("cutoff must lie in [0, 1)");
    if (c.paths < 1) fail("paths must be at least 1");
    if (c.mc_steps < 0) fail("mc_steps must be nonnegative");
    if (c.threads < 1) fail("threads must be at least 1");
    if (c.mode == Mode::terminal && !(c.terminal_a < c.terminal_b)) {
        fail("terminal mode needs a < b");
    }
    if (c.mode == Mode::payoff && c.payoff.empty()) fail("payoff mode needs a payoff name");
}

}  // namespace

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys{
        "model",  "theta",        "y0",        "boundary",      "mode",   "L",
        "a",      "b",            "payoff",    "n",             "n_list", "gamma",
        "delta",  "scheme",       "normalized", "bridge",       "bridge_method",
        "series_terms", "cutoff", "seed",      "paths",         "mc_steps",
        "reference", "threads",   "out",
    };
    return keys;
}

KeyValues parse_config_text(const std::string& text, const std::string& origin) {
    KeyValues out;
    std::stringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        const auto eq = stripped.find('=');
        const std::string where = origin + ":" + std::to_string(number);
        if (eq == std::string::npos) fail(where + ": expected key=value");
        const std::string key = trim(std::string_view(stripped).substr(0, eq));
        const std::string value = trim(std::string_view(stripped).substr(eq + 1));
        if (!is_known(key)) fail(where + ": unknown key '" + key + "'");
        out[key] = value;
    }
    return out;
}

KeyValues read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), path);
}

KeyValues parse_overrides(const std::vector<std::string>& tokens) {
    KeyValues out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const std::string& token = tokens[i];
        if (token.rfind("--", 0) != 0 || token.size() == 2) {
            fail("unexpected argument '" + token + "'");
        }
        std::string key = token.substr(2);
        std::string value;
        if (const auto eq = key.find('='); eq != std::string::npos) {
            value = key.substr(eq + 1);
            key.resize(eq);
        } else {
            if (i + 1 >= tokens.size()) fail("missing value for --" + key);
            value = tokens[++i];
        }
        if (!is_known(key)) fail("unknown key '" + key + "'");
        out[key] = value;
    }
    return out;
}

RunConfig make_config(const KeyValues& pairs, RunConfig base) {
    for (const auto& [key, value] : pairs) {
        if (!is_known(key)) fail("unknown key '" + key + "'");
        apply(base, key, value);
    }
    validate(base);
    return base;
}

std::string to_string(Mode mode) {
    switch (mode) {
        case Mode::automatic: return "auto";
        case Mode::two_sided: return "two_sided";
        case Mode::one_sided: return "one_sided";
        case Mode::terminal: return "terminal";
        case Mode::payoff: return "payoff";
    }
    return "?";
}

std::string to_string(Reference reference) {
    switch (reference) {
        case Reference::automatic: return "auto";
        case Reference::none: return "none";
        case Reference::published: return "published";
        case Reference::exact: return "exact";
        case Reference::self_richardson: return "self_richardson";
        case Reference::mc: return "mc";
    }
    return "?";
}

}  // namespace bcp::cli
