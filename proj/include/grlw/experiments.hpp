/**
 * @file experiments.hpp
 * @brief Experiment presets and CSV output for the solitary-wave, interaction,
 *        Maxwellian, stability and convergence studies
 *
 * Output files (all CSV with a header row, written atomically via temp+rename):
 *   soliton.csv          t,I1,I2,I3,L2e3,Linfe3,amplitude,peak_x
 *   interaction.csv      t,I1,I2,I3,peak1_u,peak1_x,peak2_u,peak2_x
 *   maxwellian.csv       p,mu,t,I1,I2,I3
 *   stability.csv        theta,re_g,im_g,abs_g
 *   convergence.csv      h,dt,L2,Linf,order
 *   <problem>_..._t<t>.csv   x,u snapshots at every node
 * Table numbers use the shortest round-trip representation; snapshots use 17
 * significant digits. A solver failure appends a "# solver failure: ..." line.
 */

#pragma once

#include "grlw/analytic.hpp"
#include "grlw/assembly.hpp"
#include "grlw/element_forms.hpp"
#include "grlw/errors.hpp"
#include "grlw/spline_basis.hpp"
#include "grlw/time_integrator.hpp"
#include "grlw/vonneumann.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace grlw {

enum class Problem { soliton, interaction, maxwellian, stability, convergence };

[[nodiscard]] inline std::string_view to_string(Problem p) noexcept {
    switch (p) {
        case Problem::soliton: return "soliton";
        case Problem::interaction: return "interaction";
        case Problem::maxwellian: return "maxwellian";
        case Problem::stability: return "stability";
        case Problem::convergence: return "convergence";
    }
    return "unknown";
}

/// Invalid command line or config file. key() names the offending field or flag.
class UsageError : public std::invalid_argument {
public:
    UsageError(std::string key, const std::string& what) : std::invalid_argument(what), key_(std::move(key)) {}

    [[nodiscard]] const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Flat experiment configuration. Unset optionals are "not given"; which ones
/// are required depends on the problem (see validate_config).
struct RunConfig {
    Problem problem = Problem::soliton;
    std::optional<int> p;
    std::optional<double> mu;
    std::optional<double> c;
    std::optional<double> c1;
    std::optional<double> c2;
    std::optional<double> x1;
    std::optional<double> x2;
    std::optional<double> x0;
    std::optional<double> xmin;
    std::optional<double> xmax;
    std::optional<double> h;
    std::optional<double> dt;
    std::optional<double> tend;
    std::optional<int> inner_iterations;  ///< default 2; 5 for interaction
    std::vector<double> report_times;     ///< empty: per-problem defaults
    std::size_t samples = 10000;          ///< stability scan resolution
    std::filesystem::path output_dir = ".";
};

namespace detail {

struct Requirement {
    const char* key;
    bool present;
};

inline void require(std::initializer_list<Requirement> reqs) {
    for (const auto& r : reqs) {
        if (!r.present) throw UsageError(r.key, std::string("missing required field: ") + r.key);
    }
}

inline bool integral_ratio(double num, double den) {
    const double r = num / den;
    return std::abs(r - std::round(r)) <= 1e-9;
}

}  // namespace detail

[[nodiscard]] inline int effective_inner_iterations(const RunConfig& cfg) {
    if (cfg.inner_iterations) return *cfg.inner_iterations;
    return cfg.problem == Problem::interaction ? 5 : 2;
}

/// Checks problem-specific required fields and the integrality invariants.
inline void validate_config(const RunConfig& cfg) {
    using detail::require;
    switch (cfg.problem) {
        case Problem::soliton:
        case Problem::convergence:
            require({{"p", bool(cfg.p)}, {"c", bool(cfg.c)}, {"mu", bool(cfg.mu)}, {"h", bool(cfg.h)},
                     {"dt", bool(cfg.dt)}, {"tend", bool(cfg.tend)}, {"x0", bool(cfg.x0)},
                     {"xmin", bool(cfg.xmin)}, {"xmax", bool(cfg.xmax)}});
            break;
        case Problem::interaction:
            require({{"p", bool(cfg.p)}, {"c1", bool(cfg.c1)}, {"c2", bool(cfg.c2)}, {"x1", bool(cfg.x1)},
                     {"x2", bool(cfg.x2)}, {"mu", bool(cfg.mu)}, {"h", bool(cfg.h)}, {"dt", bool(cfg.dt)},
                     {"tend", bool(cfg.tend)}, {"xmin", bool(cfg.xmin)}, {"xmax", bool(cfg.xmax)}});
            break;
        case Problem::maxwellian:
            require({{"h", bool(cfg.h)}, {"dt", bool(cfg.dt)}, {"tend", bool(cfg.tend)}, {"xmin", bool(cfg.xmin)},
                     {"xmax", bool(cfg.xmax)}});
            break;
        case Problem::stability:
            require({{"p", bool(cfg.p)}, {"c", bool(cfg.c)}, {"mu", bool(cfg.mu)}, {"h", bool(cfg.h)},
                     {"dt", bool(cfg.dt)}});
            break;
    }

    if (cfg.p && *cfg.p < 1) throw UsageError("p", "p must be >= 1");
    if (cfg.mu && !(*cfg.mu > 0.0)) throw UsageError("mu", "mu must be positive");
    if (cfg.h && !(*cfg.h > 0.0)) throw UsageError("h", "h must be positive");
    if (cfg.dt && !(*cfg.dt > 0.0)) throw UsageError("dt", "dt must be positive");
    if (cfg.tend && !(*cfg.tend >= 0.0)) throw UsageError("tend", "tend must be non-negative");
    const int inner = effective_inner_iterations(cfg);
    if (inner < 0 || inner > TimeParams::kMaxInnerIterations) {
        throw UsageError("inner-iters", "inner-iters must be in 0..5");
    }
    if (cfg.problem == Problem::stability) {
        if (cfg.samples < 2) throw UsageError("samples", "samples must be >= 2");
        return;
    }
    if (!(*cfg.xmax > *cfg.xmin)) throw UsageError("xmax", "xmax must exceed xmin");
    if (!detail::integral_ratio(*cfg.xmax - *cfg.xmin, *cfg.h)) {
        throw UsageError("h", "(xmax-xmin)/h must be an integer");
    }
    if (!detail::integral_ratio(*cfg.tend, *cfg.dt)) throw UsageError("tend", "tend/dt must be an integer");
    for (double r : cfg.report_times) {
        if (r < 0.0 || r > *cfg.tend + 1e-9 * *cfg.dt) throw UsageError("report-times", "report time outside [0, tend]");
        if (!detail::integral_ratio(r, *cfg.dt)) {
            throw UsageError("report-times", "report times must be multiples of dt");
        }
    }
    if (cfg.problem == Problem::convergence) {
        for (double div : {2.0, 4.0}) {
            if (!detail::integral_ratio(*cfg.xmax - *cfg.xmin, *cfg.h / div) ||
                !detail::integral_ratio(*cfg.tend, *cfg.dt / div)) {
                throw UsageError("h", "refined meshes h/2, h/4 (and dt/2, dt/4) must divide the domain and tend");
            }
        }
    }
}

// ---------------------------------------------------------------------------
// CSV output

/// Shortest representation that round-trips
[[nodiscard]] inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return {buf.data(), res.ptr};
}

[[nodiscard]] inline std::string format_number_17(double v) {
    if (std::isnan(v)) return "nan";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    return {buf.data(), res.ptr};
}

/// Writes content to path via a temporary file and rename.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

/// Rows of numbers under a header, one line each
class CsvTable {
public:
    explicit CsvTable(std::string header) { text_ << header << '\n'; }

    void row(std::initializer_list<double> values) {
        bool first = true;
        for (double v : values) {
            if (!first) text_ << ',';
            text_ << format_number(v);
            first = false;
        }
        text_ << '\n';
    }

    void comment(const std::string& line) { text_ << "# " << line << '\n'; }

    [[nodiscard]] std::string str() const { return text_.str(); }

private:
    std::ostringstream text_;
};

/// Two-column (x,u) nodal snapshot
inline void emit_snapshot(const SplineCoefVector& delta, const Mesh& mesh, const std::filesystem::path& path) {
    if (delta.elements() != mesh.elements()) throw ShapeError("snapshot: coefficient vector does not match mesh");
    std::string text = "x,u\n";
    for (std::size_t m = 0; m <= mesh.elements(); ++m) {
        text += format_number_17(mesh.node(m));
        text += ',';
        text += format_number_17(nodal_value(delta, static_cast<long>(m)));
        text += '\n';
    }
    write_file_atomic(path, text);
}

// ---------------------------------------------------------------------------
// Studies usable without the CLI

struct ConvergenceRow {
    double h;
    double dt;
    double L2;
    double Linf;
    double order;  ///< log2(L2_prev / L2); NaN on the first row
};

/// Single-soliton error at t_end on successively given meshes/time steps
[[nodiscard]] inline std::vector<ConvergenceRow> convergence_study(const ModelParams& params, double a, double b,
                                                                   std::span<const double> hs,
                                                                   std::span<const double> dts, double t_end,
                                                                   int inner_iterations = 2) {
    if (hs.size() != dts.size()) throw ShapeError("convergence study needs one dt per h");
    std::vector<ConvergenceRow> rows;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        const Mesh mesh = Mesh::from_spacing(a, b, hs[i]);
        const auto initial = fit_initial_coefficients([&](double x) { return exact_soliton(x, 0.0, params); }, mesh);
        const TimeParams tp{dts[i], t_end, inner_iterations, {t_end}};
        const auto result =
            run(initial, params, mesh, tp, {}, [&](double x, double t) { return exact_soliton(x, t, params); });
        if (result.failure) throw StepFailure(result.final_state.t, *result.failure);
        const auto& d = result.diagnostics.back();
        const double order = rows.empty() ? std::numeric_limits<double>::quiet_NaN() : std::log2(rows.back().L2 / d.L2);
        rows.push_back({hs[i], dts[i], d.L2, d.Linf, order});
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Experiment driver

struct ExperimentResult {
    std::vector<std::filesystem::path> files;
    std::optional<std::string> failure;
};

namespace detail {

/// Default report rows that fall inside [0, tend], with tend appended if missing
inline std::vector<double> default_times(std::initializer_list<double> rows, double tend) {
    std::vector<double> out;
    for (double r : rows) {
        if (r <= tend + 1e-12) out.push_back(r);
    }
    if (out.empty() || std::abs(out.back() - tend) > 1e-12) out.push_back(tend);
    return out;
}

inline std::vector<double> merged_times(std::vector<double> a, const std::vector<double>& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end(), [](double l, double r) { return std::abs(l - r) < 1e-12; }), a.end());
    return a;
}

inline bool contains_time(const std::vector<double>& ts, double t, double dt) {
    return std::any_of(ts.begin(), ts.end(), [&](double r) { return std::abs(r - t) <= 1e-9 * dt; });
}

inline std::string time_tag(double t) { return "t" + format_number(t); }

inline TimeParams time_params(const RunConfig& cfg, std::vector<double> reports) {
    return {*cfg.dt, *cfg.tend, effective_inner_iterations(cfg), std::move(reports)};
}

inline ExperimentResult run_soliton(const RunConfig& cfg) {
    const ModelParams params{*cfg.p, *cfg.mu, *cfg.c, *cfg.x0};
    params.validate();
    const Mesh mesh = Mesh::from_spacing(*cfg.xmin, *cfg.xmax, *cfg.h);
    const auto times =
        cfg.report_times.empty() ? default_times({0, 2, 4, 6, 8, 10}, *cfg.tend) : cfg.report_times;
    const auto initial = fit_initial_coefficients([&](double x) { return exact_soliton(x, 0.0, params); }, mesh);

    ExperimentResult out;
    const auto observer = [&](const SolverState& s, const RunDiagnostics&) {
        const auto path = cfg.output_dir / ("soliton_" + time_tag(s.t) + ".csv");
        emit_snapshot(s.delta, mesh, path);
        out.files.push_back(path);
    };
    const auto result = run(initial, params, mesh, time_params(cfg, times), observer,
                            [&](double x, double t) { return exact_soliton(x, t, params); });

    CsvTable table("t,I1,I2,I3,L2e3,Linfe3,amplitude,peak_x");
    for (const auto& d : result.diagnostics) {
        table.row({d.t, d.I1, d.I2, d.I3, d.L2 * 1e3, d.Linf * 1e3, d.amplitude, d.peak_x});
    }
    if (result.failure) table.comment("solver failure: " + *result.failure);
    const auto path = cfg.output_dir / "soliton.csv";
    write_file_atomic(path, table.str());
    out.files.insert(out.files.begin(), path);
    out.failure = result.failure;
    return out;
}

inline ExperimentResult run_interaction(const RunConfig& cfg) {
    const int p = *cfg.p;
    const double mu = *cfg.mu;
    ModelParams params{p, mu, *cfg.c1, *cfg.x1};
    params.validate();
    const Mesh mesh = Mesh::from_spacing(*cfg.xmin, *cfg.xmax, *cfg.h);
    const auto table_times = cfg.report_times.empty() ? default_times({0, 2, 4, 6}, *cfg.tend) : cfg.report_times;
    const auto snapshot_times =
        cfg.report_times.empty() ? default_times({0, 2, 3, 4, 5, 6}, *cfg.tend) : cfg.report_times;
    const auto initial = fit_initial_coefficients(
        [&](double x) { return two_soliton_initial(x, *cfg.c1, *cfg.c2, *cfg.x1, *cfg.x2, p, mu); }, mesh);

    ExperimentResult out;
    CsvTable table("t,I1,I2,I3,peak1_u,peak1_x,peak2_u,peak2_x");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const auto observer = [&](const SolverState& s, const RunDiagnostics& d) {
        if (contains_time(snapshot_times, s.t, *cfg.dt)) {
            const auto path = cfg.output_dir / ("interaction_" + time_tag(s.t) + ".csv");
            emit_snapshot(s.delta, mesh, path);
            out.files.push_back(path);
        }
        if (contains_time(table_times, s.t, *cfg.dt)) {
            const auto peaks = nodal_peaks(s.delta, mesh, 0.0);
            const Peak none{nan, nan};
            const Peak first = peaks.size() > 0 ? peaks[0] : none;
            const Peak second = peaks.size() > 1 ? peaks[1] : none;
            table.row({d.t, d.I1, d.I2, d.I3, first.u, first.x, second.u, second.x});
        }
    };
    const auto result = run(initial, params, mesh, time_params(cfg, merged_times(table_times, snapshot_times)),
                            observer);
    if (result.failure) table.comment("solver failure: " + *result.failure);
    const auto path = cfg.output_dir / "interaction.csv";
    write_file_atomic(path, table.str());
    out.files.insert(out.files.begin(), path);
    out.failure = result.failure;
    return out;
}

inline ExperimentResult run_maxwellian(const RunConfig& cfg) {
    const std::vector<int> ps = cfg.p ? std::vector<int>{*cfg.p} : std::vector<int>{2, 3, 4};
    const std::vector<double> mus = cfg.mu ? std::vector<double>{*cfg.mu} : std::vector<double>{0.1, 0.05, 0.025};
    const Mesh mesh = Mesh::from_spacing(*cfg.xmin, *cfg.xmax, *cfg.h);
    const auto times =
        cfg.report_times.empty() ? default_times({0.01, 0.03, 0.05}, *cfg.tend) : cfg.report_times;
    const auto initial = fit_initial_coefficients(maxwellian_initial, mesh);

    ExperimentResult out;
    CsvTable table("p,mu,t,I1,I2,I3");
    for (double mu : mus) {
        for (int p : ps) {
            const ModelParams params{p, mu, 0.0, 40.0};
            const auto result = run(initial, params, mesh, time_params(cfg, times));
            for (const auto& d : result.diagnostics) table.row({double(p), mu, d.t, d.I1, d.I2, d.I3});
            const auto snap = cfg.output_dir / ("maxwellian_p" + std::to_string(p) + "_mu" + format_number(mu) + "_" +
                                                time_tag(result.final_state.t) + ".csv");
            emit_snapshot(result.final_state.delta, mesh, snap);
            out.files.push_back(snap);
            if (result.failure) {
                table.comment("solver failure (p=" + std::to_string(p) + ", mu=" + format_number(mu) +
                              "): " + *result.failure);
                if (!out.failure) out.failure = result.failure;
            }
        }
    }
    const auto path = cfg.output_dir / "maxwellian.csv";
    write_file_atomic(path, table.str());
    out.files.insert(out.files.begin(), path);
    return out;
}

inline ExperimentResult run_stability(const RunConfig& cfg) {
    const double lambda_bar = lambda_from_uhat(soliton_amplitude(*cfg.p, *cfg.c), *cfg.p, *cfg.h);
    const double b = beta(*cfg.mu, *cfg.h);
    CsvTable table("theta,re_g,im_g,abs_g");
    for (const auto& s : growth_factor_samples(b, lambda_bar, *cfg.dt, *cfg.h, cfg.samples)) {
        table.row({s.theta, s.g.real(), s.g.imag(), std::abs(s.g)});
    }
    const auto path = cfg.output_dir / "stability.csv";
    write_file_atomic(path, table.str());
    return {{path}, std::nullopt};
}

inline ExperimentResult run_convergence(const RunConfig& cfg) {
    const ModelParams params{*cfg.p, *cfg.mu, *cfg.c, *cfg.x0};
    params.validate();
    const std::array<double, 3> hs{*cfg.h, *cfg.h / 2.0, *cfg.h / 4.0};
    const std::array<double, 3> dts{*cfg.dt, *cfg.dt / 2.0, *cfg.dt / 4.0};
    CsvTable table("h,dt,L2,Linf,order");
    ExperimentResult out;
    try {
        for (const auto& r : convergence_study(params, *cfg.xmin, *cfg.xmax, hs, dts, *cfg.tend,
                                               effective_inner_iterations(cfg))) {
            table.row({r.h, r.dt, r.L2, r.Linf, r.order});
        }
    } catch (const StepFailure& e) {
        table.comment(std::string("solver failure: ") + e.what());
        out.failure = e.what();
    }
    const auto path = cfg.output_dir / "convergence.csv";
    write_file_atomic(path, table.str());
    out.files.push_back(path);
    return out;
}

}  // namespace detail

/// Validates cfg, runs the experiment and writes its CSV files under cfg.output_dir.
/// Solver failures are reported in `failure` with the partial output kept.
inline ExperimentResult run_experiment(const RunConfig& cfg) {
    validate_config(cfg);
    switch (cfg.problem) {
        case Problem::soliton: return detail::run_soliton(cfg);
        case Problem::interaction: return detail::run_interaction(cfg);
        case Problem::maxwellian: return detail::run_maxwellian(cfg);
        case Problem::stability: return detail::run_stability(cfg);
        case Problem::convergence: return detail::run_convergence(cfg);
    }
    return {};
}

}  // namespace grlw
