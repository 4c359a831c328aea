/**
 * @file cli.hpp
 * @brief Command-line and key=value config-file parsing into RunConfig
 *
 *   grlw <problem> [--p N] [--c C] [--c1 C] [--c2 C] [--x1 X] [--x2 X] [--mu MU]
 *        [--h H] [--dt DT] [--tend T] [--x0 X] [--xmin A] [--xmax B]
 *        [--inner-iters K] [--report-times t1,t2,...] [--samples N] [--out DIR]
 *        [--config FILE]
 *
 * The problem may also be given as --problem. A config file holds one
 * `key = value` per line (keys are the flag names without dashes, `#` starts a
 * comment); flags on the command line override file values.
 */

#pragma once

#include "grlw/experiments.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace grlw {

/// Thrown by parse_config for -h/--help; what() is the help text.
class HelpRequested : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys{"problem", "p",    "c",   "c1",   "c2",          "x1",
                                               "x2",      "mu",   "h",   "dt",   "tend",        "x0",
                                               "xmin",    "xmax", "out", "samples", "inner-iters", "report-times"};
    return keys;
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

/// key=value lines as "--key value" tokens
inline std::vector<std::string> read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("config", "cannot read config file " + path.string());
    std::vector<std::string> tokens;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError("config", path.string() + ":" + std::to_string(lineno) + ": expected key=value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto& keys = config_keys();
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw UsageError(key, path.string() + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
        tokens.push_back("--" + key);
        tokens.push_back(value);
    }
    return tokens;
}

inline std::vector<double> parse_time_list(const std::string& text) {
    std::vector<double> out;
    std::string item;
    std::istringstream ss(text);
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        double v = 0.0;
        const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
        if (res.ec != std::errc{} || res.ptr != item.data() + item.size()) {
            throw UsageError("report-times", "invalid report time '" + item + "'");
        }
        out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline Problem parse_problem(const std::string& name) {
    for (Problem p : {Problem::soliton, Problem::interaction, Problem::maxwellian, Problem::stability,
                      Problem::convergence}) {
        if (name == to_string(p)) return p;
    }
    throw UsageError("problem", "unknown problem '" + name + "'");
}

/// Option name from a CLI11 error message, best effort
inline std::string offending_key(const CLI::Error& e) {
    const std::string msg = e.what();
    const auto pos = msg.find("--");
    if (pos == std::string::npos) return "argv";
    const auto end = msg.find_first_of(" :,=\n", pos);
    return msg.substr(pos + 2, end == std::string::npos ? std::string::npos : end - pos - 2);
}

}  // namespace detail

/// Parses arguments (without the program name). Flags override --config values;
/// GRLW_OUT_DIR supplies the output directory when --out is absent.
[[nodiscard]] inline RunConfig parse_config(const std::vector<std::string>& args) {
    std::vector<std::string> tokens;
    std::vector<std::string> cli_tokens;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a == "--config") {
            if (i + 1 >= args.size()) throw UsageError("config", "--config needs a file path");
            const auto file_tokens = detail::read_config_file(args[++i]);
            tokens.insert(tokens.end(), file_tokens.begin(), file_tokens.end());
        } else if (a.rfind("--config=", 0) == 0) {
            const auto file_tokens = detail::read_config_file(a.substr(9));
            tokens.insert(tokens.end(), file_tokens.begin(), file_tokens.end());
        } else {
            cli_tokens.push_back(a);
        }
    }
    tokens.insert(tokens.end(), cli_tokens.begin(), cli_tokens.end());

    RunConfig cfg;
    std::string problem;
    std::string report_times;
    std::optional<std::string> out;

    CLI::App app{"Petrov-Galerkin cubic B-spline solver for the generalized regularized long wave equation", "grlw"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.set_help_flag("--help", "print this help and exit");  // -h would clash with --h
    app.footer("--config FILE  key=value settings (flag names without dashes); command-line flags win");
    app.add_option("problem,--problem", problem, "soliton | interaction | maxwellian | stability | convergence");
    app.add_option("--p", cfg.p, "nonlinearity power p");
    app.add_option("--c", cfg.c, "soliton speed parameter c (speed is c+1)");
    app.add_option("--c1", cfg.c1, "first wave speed parameter");
    app.add_option("--c2", cfg.c2, "second wave speed parameter");
    app.add_option("--x1", cfg.x1, "first wave centre");
    app.add_option("--x2", cfg.x2, "second wave centre");
    app.add_option("--mu", cfg.mu, "dispersion coefficient mu");
    app.add_option("--h", cfg.h, "element size");
    app.add_option("--dt", cfg.dt, "time step");
    app.add_option("--tend", cfg.tend, "final time");
    app.add_option("--x0", cfg.x0, "initial soliton centre");
    app.add_option("--xmin", cfg.xmin, "left end of the domain");
    app.add_option("--xmax", cfg.xmax, "right end of the domain");
    app.add_option("--inner-iters", cfg.inner_iterations,
                   "corrector passes per step, 0..5 (default 2; 5 for interaction)");
    app.add_option("--report-times", report_times, "comma-separated report times (default: per-problem table rows)");
    app.add_option("--samples", cfg.samples, "stability scan samples (default 10000)");
    app.add_option("--out", out, "output directory (default $GRLW_OUT_DIR or .)");

    std::vector<std::string> reversed(tokens.rbegin(), tokens.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::Error& e) {
        throw UsageError(detail::offending_key(e), e.what());
    }

    if (problem.empty()) throw UsageError("problem", "missing required field: problem");
    cfg.problem = detail::parse_problem(problem);
    if (!report_times.empty()) cfg.report_times = detail::parse_time_list(report_times);
    if (out) {
        cfg.output_dir = *out;
    } else if (const char* env = std::getenv("GRLW_OUT_DIR"); env != nullptr && *env != '\0') {
        cfg.output_dir = env;
    }
    validate_config(cfg);
    return cfg;
}

}  // namespace grlw
