#include "grlw/analytic.hpp"
#include "grlw/assembly.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace grlw;

namespace {

// Dense rows 0..N over columns delta_{-2}..delta_{N+3}, built element by element
// from quadrature matrices. Element e touches weights e-1..e+1 and trials e-1..e+2.
struct DenseRaw {
    oracle::Dense lhs, rhs;
};

DenseRaw oracle_raw(const std::vector<double>& lam, double b, double dt) {
    const long n = static_cast<long>(lam.size());
    const auto q = oracle::element_matrices_by_quadrature();
    DenseRaw out{oracle::Dense(n + 1, std::vector<double>(n + 6, 0.0)),
                 oracle::Dense(n + 1, std::vector<double>(n + 6, 0.0))};
    for (long e = -1; e <= n + 1; ++e) {
        const double l = (e >= 0 && e < n) ? lam[static_cast<std::size_t>(e)] : 0.0;
        for (int i = 0; i < 3; ++i) {
            const long row = e - 1 + i;
            if (row < 0 || row > n) continue;
            for (int j = 0; j < 4; ++j) {
                const long col = e - 1 + j + 2;
                const double mass = q.A[i][j] + b * (q.B[i][j] - q.C[i][j]);
                out.lhs[row][col] += mass + 0.5 * dt * l * q.D[i][j];
                out.rhs[row][col] += mass - 0.5 * dt * l * q.D[i][j];
            }
        }
    }
    return out;
}

// Substitutes the ghost relations and drops columns -2, N+2, N+3.
oracle::Dense oracle_reduce(const oracle::Dense& raw) {
    const std::size_t n1 = raw.size();
    oracle::Dense out(n1, std::vector<double>(n1, 0.0));
    for (std::size_t r = 0; r < n1; ++r) {
        for (std::size_t c = 0; c < n1; ++c) out[r][c] = raw[r][c + 2];
        const double left = raw[r][1];
        out[r][0] -= 4.0 * left;
        out[r][1] -= left;
        const double right = raw[r][n1 + 2];
        out[r][n1 - 1] -= 4.0 * right;
        out[r][n1 - 2] -= right;
    }
    return out;
}

}  // namespace

TEST(GammaStencil, UniformInteriorRowsMatch) {
    const std::vector<double> lam(12, 3.7);
    const double b = 25.0, dt = 0.025;
    const auto raw = assemble_raw_system(lam, b, dt);
    const auto g = gamma_stencil(b, 3.7, dt);
    for (std::size_t k = 2; k <= 10; ++k) {
        for (std::size_t j = 0; j < 6; ++j) {
            EXPECT_NEAR(raw.lhs[k][j], g.implicit_row[j], 1e-13 * (1.0 + std::abs(g.implicit_row[j])));
            EXPECT_NEAR(raw.rhs[k][j], g.explicit_row[j], 1e-13 * (1.0 + std::abs(g.explicit_row[j])));
        }
    }
}

TEST(GammaStencil, ExplicitIsReverseAndLambdaZeroSymmetric) {
    const auto g = gamma_stencil(2.0, 5.0, 0.1);
    for (std::size_t j = 0; j < 6; ++j) EXPECT_DOUBLE_EQ(g.explicit_row[j], g.implicit_row[5 - j]);
    const auto s = gamma_stencil(2.0, 0.0, 0.1);
    for (std::size_t j = 0; j < 6; ++j) EXPECT_DOUBLE_EQ(s.implicit_row[j], s.implicit_row[5 - j]);
    EXPECT_NEAR(s.implicit_row[0], 1.0 / 60.0 - 1.0, 1e-15);
    EXPECT_NEAR(s.implicit_row[1], 57.0 / 60.0 - 9.0, 1e-14);
    EXPECT_NEAR(s.implicit_row[2], 302.0 / 60.0 + 10.0, 1e-14);
}

TEST(GammaStencil, RowSumIsMass) {
    // Constants are annihilated by the derivative parts.
    const auto g = gamma_stencil(13.0, 4.0, 0.3);
    double s = 0.0;
    for (double v : g.implicit_row) s += v;
    EXPECT_NEAR(s, 12.0, 1e-12);
}

TEST(Assembly, RawRowsMatchElementLoopOracle) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-2.0, 6.0);
    for (std::size_t n : {5u, 8u, 13u}) {
        std::vector<double> lam(n);
        for (auto& v : lam) v = u(rng);
        const double b = 7.5, dt = 0.05;
        const auto raw = assemble_raw_system(lam, b, dt);
        const auto ref = oracle_raw(lam, b, dt);
        for (std::size_t k = 0; k <= n; ++k) {
            for (std::size_t j = 0; j < 6; ++j) {
                // stencil column j is delta_{k-2+j}, dense column k+j
                EXPECT_NEAR(raw.lhs[k][j], ref.lhs[k][k + j], 1e-13) << "n=" << n << " k=" << k << " j=" << j;
                EXPECT_NEAR(raw.rhs[k][j], ref.rhs[k][k + j], 1e-13);
            }
        }
    }
}

TEST(Assembly, ReducedSystemMatchesOracle) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    const std::size_t n = 8;
    std::vector<double> lam(n);
    for (auto& v : lam) v = u(rng);
    const double b = 3.0, dt = 0.1;
    const auto sys = assemble_step_system(lam, b, dt);
    const auto ref = oracle_raw(lam, b, dt);
    const auto lhs = oracle_reduce(ref.lhs);
    const auto rhs = oracle_reduce(ref.rhs);
    EXPECT_EQ(sys.lhs.size(), n + 1);
    EXPECT_EQ(sys.lhs.lower(), 2u);
    EXPECT_EQ(sys.lhs.upper(), 3u);
    for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = 0; j <= n; ++j) {
            const BandedMatrix& l = sys.lhs;
            const BandedMatrix& r = sys.rhs_matrix;
            EXPECT_NEAR(l(i, j), lhs[i][j], 1e-13) << i << "," << j;
            EXPECT_NEAR(r(i, j), rhs[i][j], 1e-13) << i << "," << j;
        }
    }
}

TEST(Assembly, EliminationConsistentWithFullStencil) {
    // For any delta with ghosts from the boundary relations, the reduced product
    // equals the raw stencil applied to the full vector (dropped columns set to 0).
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::size_t n = 10;
    std::vector<double> lam(n);
    for (auto& v : lam) v = u(rng) + 2.0;
    const auto raw = assemble_raw_system(lam, 4.0, 0.02);
    const auto sys = apply_boundary_elimination(raw);
    std::vector<double> reduced(n + 1);
    for (auto& v : reduced) v = u(rng);
    const auto full = expand_reduced(reduced);
    const auto got = banded_matvec(sys.lhs, reduced);
    for (std::size_t k = 0; k <= n; ++k) {
        double s = 0.0;
        for (long j = 0; j < 6; ++j) {
            const long col = static_cast<long>(k) - 2 + j;
            if (col >= -1 && col <= static_cast<long>(n) + 1) s += raw.lhs[k][static_cast<std::size_t>(j)] * full[col];
        }
        EXPECT_NEAR(got[k], s, 1e-12);
    }
}

TEST(Assembly, Errors) {
    EXPECT_THROW((void)assemble_raw_system(std::vector<double>(4, 1.0), 1.0, 0.1), ConfigError);
    const Mesh mesh(0.0, 10.0, 10);
    const SplineCoefVector d(10);
    EXPECT_THROW((void)assemble_step_system(d, ModelParams{}, mesh, 0.0), DomainError);
    EXPECT_THROW((void)assemble_step_system(SplineCoefVector(9), ModelParams{}, mesh, 0.1), ShapeError);
}

TEST(Ghosts, BoundaryValuesVanish) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> reduced(12);
    for (auto& v : reduced) v = u(rng);
    const auto full = expand_reduced(reduced);
    EXPECT_NEAR(nodal_value(full, 0), 0.0, 1e-15);
    EXPECT_NEAR(nodal_value(full, 11), 0.0, 1e-15);
    EXPECT_EQ(reduced_view(full), reduced);
    EXPECT_DOUBLE_EQ(left_ghost(1.0, 2.0), -6.0);
    EXPECT_DOUBLE_EQ(right_ghost(1.0, 2.0), -6.0);
}

TEST(InitialFit, ZeroFunction) {
    const Mesh mesh(0.0, 1.0, 10);
    const auto d = fit_initial_coefficients([](double) { return 0.0; }, mesh);
    for (double v : d.raw()) EXPECT_EQ(v, 0.0);
}

TEST(InitialFit, ConstantGivesSixth) {
    const Mesh mesh(0.0, 1.0, 10);
    const auto d = fit_initial_coefficients([](double) { return 3.0; }, mesh);
    for (double v : d.raw()) EXPECT_NEAR(v, 0.5, 1e-14);
}

TEST(InitialFit, ReproducesNodalValuesAndEndSlopes) {
    const Mesh mesh(0.0, 5.0, 50);
    const auto f = [](double x) { return std::sin(x) + 0.25 * x * x; };
    const auto d = fit_initial_coefficients(f, mesh);
    for (std::size_t m = 0; m <= 50; ++m) EXPECT_NEAR(nodal_value(d, static_cast<long>(m)), f(mesh.node(m)), 1e-12);
    EXPECT_NEAR(nodal_values(d, mesh, 0).u_x, 0.0, 1e-11);
    EXPECT_NEAR(nodal_values(d, mesh, 50).u_x, 0.0, 1e-11);
}

TEST(InitialFit, SolitonInvariantsNearAnalytic) {
    // Continuous integrals of the p=2, c=1, mu=1 soliton: sqrt(2) pi, 3.299832..., sqrt(2)
    const Mesh mesh(0.0, 100.0, 500);
    const ModelParams params{2, 1.0, 1.0, 30.0};
    const auto d = fit_initial_coefficients([&](double x) { return exact_soliton(x, 0.0, params); }, mesh);
    const auto inv = invariants(d, mesh, 1.0);
    EXPECT_NEAR(inv.I1, 4.442883, 1e-5);
    EXPECT_NEAR(inv.I2, 3.299832, 1e-5);
    EXPECT_NEAR(inv.I3, 1.414214, 1e-5);
}
