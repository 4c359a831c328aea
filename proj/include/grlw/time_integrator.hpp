/**
 * @file time_integrator.hpp
 * @brief Crank-Nicolson time stepping with lumped, re-linearised nonlinearity
 *
 * Each step solves
 *   [A + beta(B-C) + (dt/2) lambda D] delta^{n+1} = [A + beta(B-C) - (dt/2) lambda D] delta^n
 * with lambda evaluated at a predictor delta* = delta^n + (delta^n - delta^{n-1})/2
 * (delta^n on the first step), followed by `inner_iterations` corrector solves in
 * which lambda is re-evaluated at (delta^n + delta^{n+1})/2.
 */

#pragma once

#include "grlw/analytic.hpp"
#include "grlw/assembly.hpp"
#include "grlw/banded.hpp"
#include "grlw/element_forms.hpp"
#include "grlw/errors.hpp"
#include "grlw/spline_basis.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace grlw {

struct TimeParams {
    static constexpr int kMaxInnerIterations = 5;

    double dt = 0.0;
    double t_end = 0.0;
    int inner_iterations = 2;
    std::vector<double> report_times;

    /// round(t_end/dt); throws unless t_end is an integer multiple of dt to 1e-9
    [[nodiscard]] std::size_t step_count() const { return steps_to(t_end, "t_end"); }

    /// Step index at which time t is reached
    [[nodiscard]] std::size_t steps_to(double t, const char* what) const {
        const double ratio = t / dt;
        const double rounded = std::round(ratio);
        if (std::abs(ratio - rounded) > 1e-9 || rounded < 0.0) {
            throw ConfigError(std::string(what) + "/dt = " + std::to_string(ratio) + " is not an integer");
        }
        return static_cast<std::size_t>(rounded);
    }

    void validate() const {
        if (!(dt > 0.0)) throw ConfigError("dt must be positive");
        if (!(t_end >= 0.0)) throw ConfigError("t_end must be non-negative");
        if (inner_iterations < 0 || inner_iterations > kMaxInnerIterations) {
            throw ConfigError("inner_iterations must be in 0..5");
        }
        (void)step_count();
        for (std::size_t i = 0; i < report_times.size(); ++i) {
            const double r = report_times[i];
            if (r < 0.0 || r > t_end + 1e-9 * dt) throw ConfigError("report time outside [0, t_end]");
            if (i > 0 && !(r > report_times[i - 1])) throw ConfigError("report times must be strictly increasing");
            (void)steps_to(r, "report time");
        }
    }
};

struct SolverState {
    double t = 0.0;
    std::size_t step_index = 0;
    SplineCoefVector delta;
    std::optional<SplineCoefVector> delta_prev;
};

/// One Crank-Nicolson solve with fixed per-element lambda. dt may be negative.
[[nodiscard]] inline SplineCoefVector crank_nicolson_solve(const SplineCoefVector& delta_n,
                                                           std::span<const double> element_lambda,
                                                           double beta_value, double dt) {
    const auto sys = assemble_step_system(element_lambda, beta_value, dt);
    const auto rhs = banded_matvec(sys.rhs_matrix, reduced_view(delta_n));
    return expand_reduced(BandedLU(sys.lhs).solve(rhs));
}

namespace detail {

inline SplineCoefVector blend(const SplineCoefVector& a, const SplineCoefVector& b, double wa, double wb) {
    SplineCoefVector out(a.elements());
    auto o = out.raw();
    const auto ra = a.raw();
    const auto rb = b.raw();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = wa * ra[i] + wb * rb[i];
    return out;
}

}  // namespace detail

[[nodiscard]] inline SolverState step(const SolverState& state, const ModelParams& params, const Mesh& mesh,
                                      const TimeParams& tp) {
    const double b = beta(params.mu, mesh.h());
    const auto& current = state.delta;
    try {
        SplineCoefVector predictor =
            state.delta_prev ? detail::blend(current, *state.delta_prev, 1.5, -0.5) : current;
        SplineCoefVector next =
            crank_nicolson_solve(current, element_lambdas(predictor, params, mesh), b, tp.dt);
        for (int it = 0; it < tp.inner_iterations; ++it) {
            const auto midpoint = detail::blend(current, next, 0.5, 0.5);
            next = crank_nicolson_solve(current, element_lambdas(midpoint, params, mesh), b, tp.dt);
        }
        if (!next.all_finite()) throw DivergenceError(state.t);
        SolverState out;
        out.step_index = state.step_index + 1;
        out.t = static_cast<double>(out.step_index) * tp.dt;
        out.delta = std::move(next);
        out.delta_prev = current;
        return out;
    } catch (const SingularMatrixError& e) {
        throw StepFailure(state.t, e.what());
    }
}

/// Solution at x for time t, used for error norms. Empty when no exact solution exists.
using ExactSolution = std::function<double(double x, double t)>;
using Observer = std::function<void(const SolverState&, const RunDiagnostics&)>;

[[nodiscard]] inline RunDiagnostics diagnose(const SolverState& state, const Mesh& mesh, double mu,
                                             const ExactSolution& exact) {
    RunDiagnostics d;
    d.t = state.t;
    const auto inv = invariants(state.delta, mesh, mu);
    d.I1 = inv.I1;
    d.I2 = inv.I2;
    d.I3 = inv.I3;
    if (exact) {
        const auto norms = error_norms(state.delta, mesh, [&](double x) { return exact(x, state.t); });
        d.L2 = norms.L2;
        d.Linf = norms.Linf;
    }
    const auto peak = nodal_maximum(state.delta, mesh);
    d.amplitude = peak.u;
    d.peak_x = peak.x;
    return d;
}

/// run() reports divergence once max|delta| exceeds this multiple of max(1, max|delta^0|).
inline constexpr double kBlowUpFactor = 1e6;

[[nodiscard]] inline double max_abs_coefficient(const SplineCoefVector& delta) noexcept {
    double m = 0.0;
    for (double v : delta.raw()) m = std::max(m, std::abs(v));
    return m;
}

struct RunResult {
    std::vector<RunDiagnostics> diagnostics;
    SolverState final_state;
    std::optional<std::string> failure;  ///< set when a step failed; diagnostics are then partial
};

/// Steps from t = 0 to t_end with fixed dt, recording diagnostics (and calling
/// the observer) at each report time.
[[nodiscard]] inline RunResult run(const SplineCoefVector& initial, const ModelParams& params, const Mesh& mesh,
                                   const TimeParams& tp, const Observer& observer = {},
                                   const ExactSolution& exact = {}) {
    params.validate();
    tp.validate();
    if (initial.elements() != mesh.elements()) throw ShapeError("initial coefficients do not match mesh");

    std::vector<std::size_t> report_steps;
    for (double r : tp.report_times) report_steps.push_back(tp.steps_to(r, "report time"));
    const std::size_t total = tp.step_count();

    RunResult result;
    result.final_state.delta = initial;
    auto next_report = report_steps.begin();
    const auto report_if_due = [&](const SolverState& s) {
        if (next_report != report_steps.end() && *next_report == s.step_index) {
            auto d = diagnose(s, mesh, params.mu, exact);
            if (observer) observer(s, d);
            result.diagnostics.push_back(d);
            ++next_report;
        }
    };

    report_if_due(result.final_state);
    const double blow_up = kBlowUpFactor * std::max(1.0, max_abs_coefficient(initial));
    for (std::size_t n = 0; n < total; ++n) {
        try {
            const double t_prev = result.final_state.t;
            result.final_state = step(result.final_state, params, mesh, tp);
            if (max_abs_coefficient(result.final_state.delta) > blow_up) {
                throw StepFailure(t_prev, "solution grew beyond 1e6 times its initial size");
            }
        } catch (const StepFailure& e) {
            result.failure = e.what();
            return result;
        }
        report_if_due(result.final_state);
    }
    return result;
}

}  // namespace grlw
