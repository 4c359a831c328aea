/**
 * @file vonneumann.hpp
 * @brief Fourier growth factor of the linearised Crank-Nicolson scheme
 *
 * Substituting delta_j^n = g^n exp(i j theta) into the uniform-lambda stencil
 * gives g = (a - ib)/(a + ib) with real a, b, so |g| = 1 whenever a + ib != 0.
 */

#pragma once

#include "grlw/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

namespace grlw {

struct GrowthFactorInputs {
    double theta = 0.0;  ///< phase k*h in radians
    double beta = 0.0;   ///< mu / h^2
    double lambda_bar = 0.0;
    double dt = 0.0;
    double h = 1.0;
};

struct GrowthFactorParts {
    double a;
    double b;
};

[[nodiscard]] inline GrowthFactorParts growth_factor_parts(const GrowthFactorInputs& in) {
    const double t = in.theta;
    const double ldt = in.lambda_bar * in.dt;
    const double a = (302.0 + 300.0 * in.beta) * std::cos(0.5 * t) + (57.0 - 270.0 * in.beta) * std::cos(1.5 * t) +
                     (1.0 - 30.0 * in.beta) * std::cos(2.5 * t);
    const double b = 120.0 * ldt * std::sin(0.5 * t) + 75.0 * ldt * std::sin(1.5 * t) + 3.0 * ldt * std::sin(2.5 * t);
    return {a, b};
}

[[nodiscard]] inline std::complex<double> growth_factor(const GrowthFactorInputs& in) {
    if (!(in.h > 0.0)) throw DomainError("growth factor requires h > 0");
    const auto [a, b] = growth_factor_parts(in);
    if (a == 0.0 && b == 0.0) throw DomainError("degenerate Fourier mode: a + ib = 0");
    const std::complex<double> num(a, -b);
    const std::complex<double> den(a, b);
    return num / den;
}

struct GrowthSample {
    double theta;
    std::complex<double> g;
};

/// g at n_samples phases spread uniformly over [0, 2pi), degenerate modes skipped
[[nodiscard]] inline std::vector<GrowthSample> growth_factor_samples(double beta_value, double lambda_bar, double dt,
                                                                      double h, std::size_t n_samples) {
    if (n_samples < 2) throw DomainError("stability scan needs at least 2 samples");
    std::vector<GrowthSample> out;
    out.reserve(n_samples);
    for (std::size_t s = 0; s < n_samples; ++s) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(s) / static_cast<double>(n_samples);
        const GrowthFactorInputs in{theta, beta_value, lambda_bar, dt, h};
        const auto [a, b] = growth_factor_parts(in);
        if (a == 0.0 && b == 0.0) continue;
        out.push_back({theta, growth_factor(in)});
    }
    return out;
}

/// max | |g(theta)| - 1 | over the scan
[[nodiscard]] inline double stability_scan(double beta_value, double lambda_bar, double dt, std::size_t n_samples,
                                           double h = 1.0) {
    double worst = 0.0;
    for (const auto& s : growth_factor_samples(beta_value, lambda_bar, dt, h, n_samples)) {
        worst = std::max(worst, std::abs(std::abs(s.g) - 1.0));
    }
    return worst;
}

}  // namespace grlw
