#include "grlw/time_integrator.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace grlw;

namespace {

SplineCoefVector soliton_state(const Mesh& mesh, const ModelParams& params) {
    return fit_initial_coefficients([&](double x) { return exact_soliton(x, 0.0, params); }, mesh);
}

double max_diff(const SplineCoefVector& a, const SplineCoefVector& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.raw()[i] - b.raw()[i]));
    return m;
}

}  // namespace

TEST(TimeParams, Validation) {
    EXPECT_EQ((TimeParams{0.025, 10.0, 2, {}}.step_count()), 400u);
    EXPECT_THROW((TimeParams{0.3, 10.0, 2, {}}.validate()), ConfigError);
    EXPECT_THROW((TimeParams{0.0, 1.0, 2, {}}.validate()), ConfigError);
    EXPECT_THROW((TimeParams{0.1, 1.0, 6, {}}.validate()), ConfigError);
    EXPECT_THROW((TimeParams{0.1, 1.0, -1, {}}.validate()), ConfigError);
    EXPECT_THROW((TimeParams{0.1, 1.0, 2, {0.5, 0.2}}.validate()), ConfigError);
    EXPECT_THROW((TimeParams{0.1, 1.0, 2, {0.25}}.validate()), ConfigError);
    EXPECT_THROW((TimeParams{0.1, 1.0, 2, {1.5}}.validate()), ConfigError);
    EXPECT_NO_THROW((TimeParams{0.1, 1.0, 0, {0.0, 0.5, 1.0}}.validate()));
}

TEST(Step, ZeroIsFixedPoint) {
    const Mesh mesh(0.0, 10.0, 50);
    SolverState s;
    s.delta = SplineCoefVector(50);
    const TimeParams tp{0.1, 1.0, 2, {}};
    for (int n = 0; n < 5; ++n) s = step(s, ModelParams{}, mesh, tp);
    for (double v : s.delta.raw()) EXPECT_EQ(v, 0.0);
    EXPECT_EQ(s.step_index, 5u);
    EXPECT_DOUBLE_EQ(s.t, 0.5);
}

TEST(CrankNicolson, ReversibleWithFrozenLambda) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::size_t n = 40;
    std::vector<double> reduced(n + 1), lam(n);
    for (auto& v : reduced) v = u(rng);
    for (auto& v : lam) v = 5.0 + 3.0 * u(rng);
    const auto d0 = expand_reduced(reduced);
    const auto d1 = crank_nicolson_solve(d0, lam, 25.0, 0.05);
    const auto back = crank_nicolson_solve(d1, lam, 25.0, -0.05);
    EXPECT_LE(max_diff(back, d0), 1e-10);
    EXPECT_GT(max_diff(d1, d0), 1e-3);
}

TEST(Step, BoundaryValuesStayZero) {
    const Mesh mesh(0.0, 40.0, 200);
    const ModelParams params{2, 1.0, 1.0, 15.0};
    SolverState s;
    s.delta = soliton_state(mesh, params);
    const TimeParams tp{0.05, 1.0, 2, {}};
    for (int k = 0; k < 10; ++k) {
        s = step(s, params, mesh, tp);
        EXPECT_NEAR(nodal_value(s.delta, 0), 0.0, 1e-14);
        EXPECT_NEAR(nodal_value(s.delta, 200), 0.0, 1e-14);
    }
    ASSERT_TRUE(s.delta_prev.has_value());
}

TEST(Step, NonFiniteStateIsDivergence) {
    const Mesh mesh(0.0, 10.0, 20);
    SolverState s;
    s.delta = SplineCoefVector(20);
    s.delta[5] = std::nan("");
    EXPECT_THROW((void)step(s, ModelParams{}, mesh, {0.1, 1.0, 2, {}}), StepFailure);
}

TEST(Run, TimeConvergesAtSecondOrder) {
    // Fixed mesh; error against a fine-dt reference. Halving dt cuts the error ~4x.
    const Mesh mesh(0.0, 60.0, 300);
    const ModelParams params{2, 1.0, 1.0, 20.0};
    const auto init = soliton_state(mesh, params);
    const auto final_at = [&](double dt) {
        return run(init, params, mesh, {dt, 1.0, 5, {}}).final_state.delta;
    };
    const auto ref = final_at(0.05 / 32.0);
    std::vector<double> err;
    for (double dt : {0.05, 0.025, 0.0125}) err.push_back(max_diff(final_at(dt), ref));
    for (std::size_t i = 1; i < err.size(); ++i) {
        const double order = std::log2(err[i - 1] / err[i]);
        EXPECT_GT(order, 1.8) << "dt level " << i;
        EXPECT_LT(order, 2.5) << "dt level " << i;
    }
}

TEST(Run, ReportsAtRequestedTimes) {
    const Mesh mesh(0.0, 40.0, 200);
    const ModelParams params{2, 1.0, 1.0, 15.0};
    const auto init = soliton_state(mesh, params);
    std::vector<double> seen;
    const auto r = run(init, params, mesh, {0.05, 1.0, 2, {0.0, 0.5, 1.0}},
                       [&](const SolverState& s, const RunDiagnostics&) { seen.push_back(s.t); });
    ASSERT_EQ(r.diagnostics.size(), 3u);
    EXPECT_EQ(seen.size(), 3u);
    EXPECT_DOUBLE_EQ(r.diagnostics[0].t, 0.0);
    EXPECT_NEAR(r.diagnostics[1].t, 0.5, 1e-12);
    EXPECT_NEAR(r.diagnostics[2].t, 1.0, 1e-12);
    EXPECT_TRUE(std::isnan(r.diagnostics[0].L2));
    EXPECT_FALSE(r.failure.has_value());
}

TEST(Run, ZeroEndTimeGivesInitialOnly) {
    const Mesh mesh(0.0, 40.0, 200);
    const ModelParams params{2, 1.0, 1.0, 15.0};
    const auto init = soliton_state(mesh, params);
    const auto r = run(init, params, mesh, {0.05, 0.0, 2, {0.0}}, {},
                       [&](double x, double t) { return exact_soliton(x, t, params); });
    ASSERT_EQ(r.diagnostics.size(), 1u);
    EXPECT_EQ(r.final_state.delta, init);
    EXPECT_LT(r.diagnostics[0].Linf, 1e-12);
}

TEST(Run, SolitonTravelsAtSpeedCPlusOne) {
    const Mesh mesh(0.0, 60.0, 600);
    const ModelParams params{2, 1.0, 1.0, 20.0};
    const auto r = run(soliton_state(mesh, params), params, mesh, {0.025, 5.0, 2, {5.0}});
    EXPECT_NEAR(r.diagnostics.back().peak_x, 30.0, 0.1);
    EXPECT_NEAR(r.diagnostics.back().amplitude, soliton_amplitude(2, 1.0), 2e-3);
}

TEST(Run, MismatchedInitialIsShapeError) {
    const Mesh mesh(0.0, 10.0, 20);
    EXPECT_THROW((void)run(SplineCoefVector(19), ModelParams{}, mesh, {0.1, 1.0, 2, {}}), ShapeError);
}

TEST(Run, BlowUpIsReportedAsFailure) {
    // Steep p=4 pair; the lumped linearisation does not converge at this dt.
    const Mesh mesh = Mesh::from_spacing(0.0, 120.0, 0.125);
    const ModelParams params{4, 1.0, 64.0 / 3.0, 20.0};
    const auto init = fit_initial_coefficients(
        [](double x) { return two_soliton_initial(x, 64.0 / 3.0, 4.0 / 3.0, 20.0, 50.0, 4, 1.0); }, mesh);
    const auto r = run(init, params, mesh, {0.01, 2.0, 5, {0.0, 2.0}});
    ASSERT_TRUE(r.failure.has_value());
    EXPECT_LT(r.final_state.t, 2.0);
    EXPECT_EQ(r.diagnostics.size(), 1u);
}

TEST(Step, CorrectorSelfConvergence) {
    // One step with lambda at the converged midpoint fixed point vs the default two corrector passes.
    const Mesh mesh(0.0, 60.0, 300);
    const ModelParams params{2, 1.0, 1.0, 20.0};
    const auto init = soliton_state(mesh, params);
    const double b = beta(params.mu, mesh.h());
    std::vector<double> diffs;
    for (double dt : {0.05, 0.025, 0.0125}) {
        SolverState s;
        s.delta = init;
        const auto two = step(s, params, mesh, {dt, dt, 2, {}}).delta;
        SplineCoefVector fixed = crank_nicolson_solve(init, element_lambdas(init, params, mesh), b, dt);
        for (int it = 0; it < 50; ++it) {
            const auto mid = detail::blend(init, fixed, 0.5, 0.5);
            fixed = crank_nicolson_solve(init, element_lambdas(mid, params, mesh), b, dt);
        }
        diffs.push_back(max_diff(two, fixed));
    }
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        const double dt = 0.05 / std::pow(2.0, static_cast<double>(i));
        EXPECT_LE(diffs[i], 1.0 * dt * dt * dt) << "dt=" << dt << " diff=" << diffs[i];
    }
    for (std::size_t i = 1; i < diffs.size(); ++i) EXPECT_GT(std::log2(diffs[i - 1] / diffs[i]), 2.8);
}
