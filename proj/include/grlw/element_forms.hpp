/**
 * @file element_forms.hpp
 * @brief Constant 3x4 Petrov-Galerkin element matrices and the lumped coefficients
 *
 * Rows are the quadratic weights Phi_{m-1}, Phi_m, Phi_{m+1}; columns are the cubic
 * trials phi_{m-1} .. phi_{m+2} of the element [x_m, x_{m+1}].
 *
 *   A_ij = int_0^1 Phi_i phi_j            (mass)
 *   B_ij = int_0^1 Phi_i' phi_j'          (dispersion, after integration by parts)
 *   C_ij = [Phi_i phi_j']_0^1             (boundary term of that integration)
 *   D_ij = int_0^1 Phi_i phi_j'           (advection)
 */

#pragma once

#include "grlw/errors.hpp"
#include "grlw/spline_basis.hpp"

#include <array>
#include <string>

namespace grlw {

using ElementMatrix = std::array<std::array<double, 4>, 3>;

struct ElementMatrices {
    ElementMatrix A;
    ElementMatrix B;
    ElementMatrix C;
    ElementMatrix D;
};

/// Physical parameters of u_t + u_x + p(p+1) u^p u_x - mu u_xxt = 0 and of the soliton data
struct ModelParams {
    int p = 2;
    double mu = 1.0;
    double c = 1.0;
    double x0 = 0.0;

    void validate() const {
        if (p < 1) throw ConfigError("nonlinearity power p must be >= 1");
        if (!(mu > 0.0)) throw ConfigError("dispersion coefficient mu must be positive");
    }
};

namespace detail {

constexpr ElementMatrix scaled(const ElementMatrix& m, double s) {
    ElementMatrix out{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 4; ++j) out[i][j] = m[i][j] * s;
    return out;
}

}  // namespace detail

[[nodiscard]] constexpr ElementMatrices element_matrices() {
    // Row 3 of A is the mirror of row 1; the (1,38,71,10) entry is confirmed by quadrature.
    constexpr ElementMatrix a{{{10, 71, 38, 1}, {19, 221, 221, 19}, {1, 38, 71, 10}}};
    constexpr ElementMatrix b{{{3, 5, -7, -1}, {-2, 2, 2, -2}, {-1, -7, 5, 3}}};
    constexpr ElementMatrix c{{{1, 0, -1, 0}, {1, -1, -1, 1}, {0, -1, 0, 1}}};
    constexpr ElementMatrix d{{{-6, -7, 12, 1}, {-13, -41, 41, 13}, {-1, -12, 7, 6}}};
    return {detail::scaled(a, 1.0 / 60.0), detail::scaled(b, 0.5), detail::scaled(c, 3.0),
            detail::scaled(d, 0.1)};
}

/// x^p by repeated multiplication
[[nodiscard]] constexpr double int_pow(double x, int p) noexcept {
    double r = 1.0;
    for (int k = 0; k < p; ++k) r *= x;
    return r;
}

/// Lumped advection coefficient (1 + p(p+1) u_hat^p) / h for element m,
/// with u_hat the mean of the two end nodal values.
[[nodiscard]] inline double lumped_lambda(const SplineCoefVector& delta, std::size_t m, const ModelParams& params,
                                          double h) {
    if (m + 1 > delta.elements()) {
        throw IndexError("element index " + std::to_string(m) + " outside mesh");
    }
    const long j = static_cast<long>(m);
    const double u_hat = 0.5 * (nodal_value(delta, j) + nodal_value(delta, j + 1));
    return (1.0 + static_cast<double>(params.p * (params.p + 1)) * int_pow(u_hat, params.p)) / h;
}

/// Same coefficient from a given lumped value u_hat
[[nodiscard]] constexpr double lambda_from_uhat(double u_hat, int p, double h) noexcept {
    return (1.0 + static_cast<double>(p * (p + 1)) * int_pow(u_hat, p)) / h;
}

[[nodiscard]] inline double beta(double mu, double h) {
    if (!(h > 0.0)) throw DomainError("beta requires h > 0");
    return mu / (h * h);
}

}  // namespace grlw
