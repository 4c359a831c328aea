/**
 * @file analytic.hpp
 * @brief Closed-form solitary waves, initial profiles, conserved quantities and error norms
 */

#pragma once

#include "grlw/element_forms.hpp"
#include "grlw/errors.hpp"
#include "grlw/spline_basis.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace grlw {

/// Solitary wave
///   u = [ c(p+2)/(2p) sech^2( (p/2) sqrt(c/(mu(c+1))) (x - (c+1)t - x0) ) ]^{1/p}
/// with amplitude (c(p+2)/(2p))^{1/p} and speed c+1.
[[nodiscard]] inline double exact_soliton(double x, double t, const ModelParams& params) {
    const double c = params.c;
    const double radicand = c / (params.mu * (c + 1.0));
    if (!(params.mu > 0.0) || !(c > 0.0) || !(radicand > 0.0) || params.p < 1) {
        throw DomainError("soliton needs mu > 0, c > 0 and p >= 1");
    }
    const double p = static_cast<double>(params.p);
    const double k = 0.5 * p * std::sqrt(radicand);
    const double z = k * (x - (c + 1.0) * t - params.x0);
    // sech^2 via exp(-2|z|) avoids cosh overflow far from the crest.
    const double e = std::exp(-2.0 * std::abs(z));
    const double sech2 = 4.0 * e / ((1.0 + e) * (1.0 + e));
    return std::pow(c * (p + 2.0) / (2.0 * p) * sech2, 1.0 / p);
}

[[nodiscard]] inline double soliton_amplitude(int p, double c) {
    const double pd = static_cast<double>(p);
    return std::pow(c * (pd + 2.0) / (2.0 * pd), 1.0 / pd);
}

/// Superposition of two solitary waves at t = 0
[[nodiscard]] inline double two_soliton_initial(double x, double c1, double c2, double x1, double x2, int p,
                                                double mu) {
    return exact_soliton(x, 0.0, {p, mu, c1, x1}) + exact_soliton(x, 0.0, {p, mu, c2, x2});
}

/// Gaussian pulse exp(-(x-40)^2)
[[nodiscard]] inline double maxwellian_initial(double x) {
    const double d = x - 40.0;
    return std::exp(-d * d);
}

struct Invariants {
    double I1;  ///< int u
    double I2;  ///< int u^2 + mu u_x^2
    double I3;  ///< int u^4 - mu u_x^2
};

/// Conserved quantities of the spline field by 7-point Gauss-Legendre per element.
/// All three integrands are polynomials of degree <= 12 on an element, so this is exact.
[[nodiscard]] inline Invariants invariants(const SplineCoefVector& delta, const Mesh& mesh, double mu) {
    if (delta.elements() != mesh.elements()) throw ShapeError("coefficient vector does not match mesh");
    using Gauss = boost::math::quadrature::gauss<double, 7>;
    const double h = mesh.h();
    Invariants sum{0.0, 0.0, 0.0};
    for (std::size_t m = 0; m < mesh.elements(); ++m) {
        const long j = static_cast<long>(m);
        const std::array<double, 4> d{delta[j - 1], delta[j], delta[j + 1], delta[j + 2]};
        const auto field = [&](double eta) {
            const auto phi = cubic_shape_values(eta);
            const auto dphi = cubic_shape_derivs(eta, 1);
            double u = 0.0;
            double ux = 0.0;
            for (std::size_t q = 0; q < 4; ++q) {
                u += d[q] * phi[q];
                ux += d[q] * dphi[q];
            }
            return std::pair{u, ux / h};
        };
        sum.I1 += h * Gauss::integrate([&](double eta) { return field(eta).first; }, 0.0, 1.0);
        sum.I2 += h * Gauss::integrate(
                          [&](double eta) {
                              const auto [u, ux] = field(eta);
                              return u * u + mu * ux * ux;
                          },
                          0.0, 1.0);
        sum.I3 += h * Gauss::integrate(
                          [&](double eta) {
                              const auto [u, ux] = field(eta);
                              return u * u * u * u - mu * ux * ux;
                          },
                          0.0, 1.0);
    }
    return sum;
}

struct ErrorNorms {
    double L2;
    double Linf;
};

/// Discrete nodal norms: L2 = sqrt(h sum_{j=0..N} e_j^2), Linf = max_j |e_j|
template <class Exact>
[[nodiscard]] ErrorNorms error_norms(const SplineCoefVector& delta, const Mesh& mesh, Exact&& exact) {
    if (delta.elements() != mesh.elements()) throw ShapeError("coefficient vector does not match mesh");
    double sq = 0.0;
    double linf = 0.0;
    for (std::size_t m = 0; m <= mesh.elements(); ++m) {
        const double e = std::abs(exact(mesh.node(m)) - nodal_value(delta, static_cast<long>(m)));
        sq += e * e;
        linf = std::max(linf, e);
    }
    return {std::sqrt(mesh.h() * sq), linf};
}

struct Peak {
    double x;
    double u;
};

/// Largest nodal value and its node
[[nodiscard]] inline Peak nodal_maximum(const SplineCoefVector& delta, const Mesh& mesh) {
    Peak best{mesh.node(0), nodal_value(delta, 0)};
    for (std::size_t m = 1; m <= mesh.elements(); ++m) {
        const double u = nodal_value(delta, static_cast<long>(m));
        if (u > best.u) best = {mesh.node(m), u};
    }
    return best;
}

/// Interior nodal local maxima above `threshold`, largest first
[[nodiscard]] inline std::vector<Peak> nodal_peaks(const SplineCoefVector& delta, const Mesh& mesh,
                                                   double threshold) {
    std::vector<Peak> peaks;
    for (std::size_t m = 1; m < mesh.elements(); ++m) {
        const long j = static_cast<long>(m);
        const double u = nodal_value(delta, j);
        if (u > threshold && u > nodal_value(delta, j - 1) && u >= nodal_value(delta, j + 1)) {
            peaks.push_back({mesh.node(m), u});
        }
    }
    std::sort(peaks.begin(), peaks.end(), [](const Peak& l, const Peak& r) { return l.u > r.u; });
    return peaks;
}

/// One report-time record of a run. L2/Linf are NaN when no exact solution exists.
struct RunDiagnostics {
    double t = 0.0;
    double I1 = 0.0;
    double I2 = 0.0;
    double I3 = 0.0;
    double L2 = std::numeric_limits<double>::quiet_NaN();
    double Linf = std::numeric_limits<double>::quiet_NaN();
    double amplitude = 0.0;
    double peak_x = 0.0;
};

}  // namespace grlw
