/**
 * @file assembly.hpp
 * @brief Global Crank-Nicolson step system, boundary elimination and initial fit
 *
 * Row k (k = 0..N) of the global system is the equation weighted by the
 * quadratic B-spline Phi_k, which is supported on elements k-1, k, k+1 and couples
 * delta_{k-2} .. delta_{k+3}. The unknowns delta_{-1} and delta_{N+1} are removed
 * with the Dirichlet conditions u(a) = u(b) = 0, giving an (N+1)x(N+1) system with
 * lower bandwidth 2 and upper bandwidth 3.
 */

#pragma once

#include "grlw/banded.hpp"
#include "grlw/element_forms.hpp"
#include "grlw/errors.hpp"
#include "grlw/spline_basis.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace grlw {

using Stencil = std::array<double, 6>;

/// Implicit row (gamma_1..gamma_6) and its explicit counterpart for uniform lambda.
/// The explicit row is the implicit one reversed.
struct GammaStencil {
    Stencil implicit_row;
    Stencil explicit_row;
};

[[nodiscard]] inline GammaStencil gamma_stencil(double beta_value, double lambda, double dt) {
    const double b = beta_value;
    const double l = lambda * dt;
    GammaStencil s{};
    s.implicit_row = {1.0 / 60.0 - b / 2.0 - l / 20.0,   57.0 / 60.0 - 9.0 * b / 2.0 - 25.0 * l / 20.0,
                      302.0 / 60.0 + 5.0 * b - 2.0 * l,  302.0 / 60.0 + 5.0 * b + 2.0 * l,
                      57.0 / 60.0 - 9.0 * b / 2.0 + 25.0 * l / 20.0, 1.0 / 60.0 - b / 2.0 + l / 20.0};
    for (std::size_t j = 0; j < 6; ++j) s.explicit_row[j] = s.implicit_row[5 - j];
    return s;
}

/// Step system before boundary elimination: rows k = 0..N, each a six-entry
/// stencil over columns k-2 .. k+3 (entries referring to delta_{-2},
/// delta_{N+2}, delta_{N+3} are dropped during elimination).
struct RawSystem {
    std::vector<Stencil> lhs;
    std::vector<Stencil> rhs;
};

/// Reduced (N+1)x(N+1) system over delta_0 .. delta_N:
///   lhs * delta^{n+1} = rhs_matrix * delta^n
/// with delta_{-1} = -4 delta_0 - delta_1 and delta_{N+1} = -4 delta_N - delta_{N-1}.
struct GlobalSystem {
    static constexpr std::size_t kLower = 2;
    static constexpr std::size_t kUpper = 3;

    BandedMatrix lhs;
    BandedMatrix rhs_matrix;
};

/// Per-element lumped lambda for the linearisation state delta_star
[[nodiscard]] inline std::vector<double> element_lambdas(const SplineCoefVector& delta_star, const ModelParams& params,
                                                         const Mesh& mesh) {
    std::vector<double> out(mesh.elements());
    for (std::size_t m = 0; m < out.size(); ++m) out[m] = lumped_lambda(delta_star, m, params, mesh.h());
    return out;
}

/// Assembles rows k = 0..N from the element matrices. Elements outside 0..N-1
/// contribute their mass/dispersion part with lambda = 0.
[[nodiscard]] inline RawSystem assemble_raw_system(std::span<const double> element_lambda, double beta_value,
                                                   double dt) {
    const std::size_t n_elem = element_lambda.size();
    if (n_elem < Mesh::kMinElements) {
        throw ConfigError("step system needs at least 5 elements, got " + std::to_string(n_elem));
    }
    const auto em = element_matrices();
    const auto lambda_of = [&](long e) {
        return (e < 0 || e >= static_cast<long>(n_elem)) ? 0.0 : element_lambda[static_cast<std::size_t>(e)];
    };

    RawSystem raw;
    raw.lhs.resize(n_elem + 1);
    raw.rhs.resize(n_elem + 1);
    for (std::size_t k = 0; k <= n_elem; ++k) {
        Stencil mass{};
        Stencil advection{};
        // Phi_k is weight row i = 2, 1, 0 of elements k-1, k, k+1; element e starts at column offset e-k+1.
        for (long de = -1; de <= 1; ++de) {
            const auto i = static_cast<std::size_t>(1 - de);
            const auto offset = static_cast<std::size_t>(de + 1);
            const double lam = lambda_of(static_cast<long>(k) + de);
            for (std::size_t j = 0; j < 4; ++j) {
                mass[offset + j] += em.A[i][j] + beta_value * (em.B[i][j] - em.C[i][j]);
                advection[offset + j] += lam * em.D[i][j];
            }
        }
        for (std::size_t j = 0; j < 6; ++j) {
            raw.lhs[k][j] = mass[j] + 0.5 * dt * advection[j];
            raw.rhs[k][j] = mass[j] - 0.5 * dt * advection[j];
        }
    }
    return raw;
}

/// Folds delta_{-1} and delta_{N+1} into the neighbouring columns and drops
/// columns beyond them.
[[nodiscard]] inline GlobalSystem apply_boundary_elimination(const RawSystem& raw) {
    const std::size_t rows = raw.lhs.size();
    if (rows < Mesh::kMinElements + 1 || raw.rhs.size() != rows) {
        throw ShapeError("raw system has inconsistent or too few rows");
    }
    const long n = static_cast<long>(rows) - 1;  // element count N

    const auto fold = [n, rows](const std::vector<Stencil>& stencils) {
        BandedMatrix out(rows, GlobalSystem::kLower, GlobalSystem::kUpper);
        for (long k = 0; k <= n; ++k) {
            const auto row = static_cast<std::size_t>(k);
            for (long j = 0; j < 6; ++j) {
                const long col = k - 2 + j;
                const double v = stencils[row][static_cast<std::size_t>(j)];
                if (col == -1) {
                    out(row, 0) += -4.0 * v;
                    out(row, 1) += -v;
                } else if (col == n + 1) {
                    out(row, static_cast<std::size_t>(n)) += -4.0 * v;
                    out(row, static_cast<std::size_t>(n - 1)) += -v;
                } else if (col >= 0 && col <= n) {
                    out(row, static_cast<std::size_t>(col)) += v;
                }
            }
        }
        return out;
    };
    return {fold(raw.lhs), fold(raw.rhs)};
}

[[nodiscard]] inline GlobalSystem assemble_step_system(std::span<const double> element_lambda, double beta_value,
                                                       double dt) {
    return apply_boundary_elimination(assemble_raw_system(element_lambda, beta_value, dt));
}

/// Step system linearised about delta_star
[[nodiscard]] inline GlobalSystem assemble_step_system(const SplineCoefVector& delta_star, const ModelParams& params,
                                                       const Mesh& mesh, double dt) {
    if (!(dt > 0.0)) throw DomainError("time step must be positive");
    if (delta_star.elements() != mesh.elements()) throw ShapeError("coefficient vector does not match mesh");
    const auto lambdas = element_lambdas(delta_star, params, mesh);
    return assemble_step_system(lambdas, beta(params.mu, mesh.h()), dt);
}

/// delta_{-1} from u(a) = 0
[[nodiscard]] constexpr double left_ghost(double delta0, double delta1) noexcept { return -4.0 * delta0 - delta1; }

/// delta_{N+1} from u(b) = 0
[[nodiscard]] constexpr double right_ghost(double delta_n, double delta_nm1) noexcept {
    return -4.0 * delta_n - delta_nm1;
}

/// Full coefficient vector from the reduced unknowns delta_0..delta_N
[[nodiscard]] inline SplineCoefVector expand_reduced(std::span<const double> reduced) {
    const std::size_t n = reduced.size() - 1;
    SplineCoefVector out(n);
    for (std::size_t m = 0; m <= n; ++m) out[static_cast<long>(m)] = reduced[m];
    out[-1] = left_ghost(reduced[0], reduced[1]);
    out[static_cast<long>(n) + 1] = right_ghost(reduced[n], reduced[n - 1]);
    return out;
}

/// delta_0..delta_N
[[nodiscard]] inline std::vector<double> reduced_view(const SplineCoefVector& delta) {
    const auto raw = delta.raw();
    return {raw.begin() + 1, raw.end() - 1};
}

/// Interpolates f at the nodes with zero end slopes:
///   3(-delta_{-1} + delta_1)/h = 0,  delta_{m-1} + 4 delta_m + delta_{m+1} = f(x_m),
///   3(-delta_{N-1} + delta_{N+1})/h = 0.
template <class F>
[[nodiscard]] SplineCoefVector fit_initial_coefficients(F&& f, const Mesh& mesh) {
    const std::size_t n = mesh.elements();
    const std::size_t size = n + 3;
    BandedMatrix m(size, 2, 2);
    std::vector<double> rhs(size, 0.0);
    m(0, 0) = -3.0;
    m(0, 2) = 3.0;
    for (std::size_t node = 0; node <= n; ++node) {
        const std::size_t r = node + 1;
        m(r, r - 1) = 1.0;
        m(r, r) = 4.0;
        m(r, r + 1) = 1.0;
        rhs[r] = f(mesh.node(node));
    }
    m(size - 1, size - 3) = -3.0;
    m(size - 1, size - 1) = 3.0;
    return SplineCoefVector(BandedLU(std::move(m)).solve(rhs));
}

}  // namespace grlw
