/**
 * @file spline_basis.hpp
 * @brief Cubic B-spline trial functions and quadratic B-spline weights on the unit element
 *
 * The element [x_m, x_{m+1}] is mapped to eta in [0,1] by h*eta = x - x_m. On
 * it the four cubic B-splines phi_{m-1..m+2} and the three quadratic B-splines
 * Phi_{m-1..m+1} are nonzero. Normalisation follows the classic finite element
 * convention: the cubics sum to 6 and the quadratics sum to 2, so a nodal value is
 * u_m = delta_{m-1} + 4 delta_m + delta_{m+1}.
 */

#pragma once

#include "grlw/errors.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace grlw {

/// Reference coordinate on the unit element, validated to lie in [0,1]
class LocalCoordinate {
public:
    // NOLINTNEXTLINE(google-explicit-constructor)
    LocalCoordinate(double eta) : eta_(eta) {
        if (!(eta >= 0.0 && eta <= 1.0)) {
            throw DomainError("local coordinate eta=" + std::to_string(eta) + " outside [0,1]");
        }
    }

    [[nodiscard]] double value() const noexcept { return eta_; }

private:
    double eta_;
};

/// Uniform grid a = x_0 < x_1 < ... < x_N = b
class Mesh {
public:
    static constexpr std::size_t kMinElements = 5;

    Mesh(double a, double b, std::size_t elements) : a_(a), b_(b), n_(elements) {
        if (!(b > a)) {
            throw ConfigError("mesh requires b > a");
        }
        if (elements < kMinElements) {
            throw ConfigError("mesh requires at least 5 elements, got " + std::to_string(elements));
        }
        h_ = (b - a) / static_cast<double>(elements);
    }

    /// Builds the mesh with spacing h; (b-a)/h must be an integer to within 1e-9.
    static Mesh from_spacing(double a, double b, double h) {
        if (!(h > 0.0)) {
            throw ConfigError("mesh spacing h must be positive");
        }
        const double ratio = (b - a) / h;
        const double rounded = std::round(ratio);
        if (std::abs(ratio - rounded) > 1e-9 || rounded < 1.0) {
            throw ConfigError("(b-a)/h = " + std::to_string(ratio) + " is not an integer");
        }
        return Mesh(a, b, static_cast<std::size_t>(rounded));
    }

    [[nodiscard]] double a() const noexcept { return a_; }
    [[nodiscard]] double b() const noexcept { return b_; }
    [[nodiscard]] std::size_t elements() const noexcept { return n_; }
    [[nodiscard]] double h() const noexcept { return h_; }
    [[nodiscard]] double node(std::size_t m) const noexcept { return a_ + static_cast<double>(m) * h_; }

private:
    double a_;
    double b_;
    std::size_t n_;
    double h_;
};

/// Coefficients delta_{-1} .. delta_{N+1} of the cubic B-spline expansion.
///
/// Indexed with the mathematical (signed) index, so `delta[-1]` is the first entry.
class SplineCoefVector {
public:
    SplineCoefVector() = default;

    /// Zero vector for a mesh with `elements` elements (N+3 coefficients)
    explicit SplineCoefVector(std::size_t elements) : values_(elements + 3, 0.0) {}

    explicit SplineCoefVector(std::vector<double> values) : values_(std::move(values)) {
        if (values_.size() < Mesh::kMinElements + 3) {
            throw ShapeError("spline coefficient vector needs at least 8 entries");
        }
    }

    [[nodiscard]] std::size_t elements() const noexcept { return values_.size() - 3; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }

    double& operator[](long j) { return values_[static_cast<std::size_t>(j + 1)]; }
    double operator[](long j) const { return values_[static_cast<std::size_t>(j + 1)]; }

    [[nodiscard]] std::span<const double> raw() const noexcept { return values_; }
    [[nodiscard]] std::span<double> raw() noexcept { return values_; }

    [[nodiscard]] bool all_finite() const noexcept {
        for (double v : values_) {
            if (!std::isfinite(v)) return false;
        }
        return true;
    }

    friend bool operator==(const SplineCoefVector&, const SplineCoefVector&) = default;

private:
    std::vector<double> values_;
};

/// Cubic shapes (phi_{m-1}, phi_m, phi_{m+1}, phi_{m+2}) at eta. They sum to 6.
[[nodiscard]] inline std::array<double, 4> cubic_shape_values(LocalCoordinate coord) {
    const double e = coord.value();
    const double r = 1.0 - e;
    return {r * r * r,
            1.0 + 3.0 * r + 3.0 * r * r - 3.0 * r * r * r,
            1.0 + 3.0 * e + 3.0 * e * e - 3.0 * e * e * e,
            e * e * e};
}

/// d/deta (order 1) or d2/deta2 (order 2) of the cubic shapes, in reference coordinates.
[[nodiscard]] inline std::array<double, 4> cubic_shape_derivs(LocalCoordinate coord, int order) {
    const double e = coord.value();
    const double r = 1.0 - e;
    switch (order) {
        case 1:
            return {-3.0 * r * r,
                    -3.0 - 6.0 * r + 9.0 * r * r,
                    3.0 + 6.0 * e - 9.0 * e * e,
                    3.0 * e * e};
        case 2:
            return {6.0 * r, 6.0 - 18.0 * r, 6.0 - 18.0 * e, 6.0 * e};
        default:
            throw DomainError("cubic_shape_derivs supports order 1 or 2, got " + std::to_string(order));
    }
}

/// Quadratic weights (Phi_{m-1}, Phi_m, Phi_{m+1}) at eta. They sum to 2.
[[nodiscard]] inline std::array<double, 3> quadratic_weight_values(LocalCoordinate coord) {
    const double e = coord.value();
    const double r = 1.0 - e;
    return {r * r, 1.0 + 2.0 * e - 2.0 * e * e, e * e};
}

/// d/deta of the quadratic weights
[[nodiscard]] inline std::array<double, 3> quadratic_weight_derivs(LocalCoordinate coord) {
    const double e = coord.value();
    return {-2.0 * (1.0 - e), 2.0 - 4.0 * e, 2.0 * e};
}

/// Value and physical derivatives of the spline at a node
struct NodalValues {
    double u;
    double u_x;
    double u_xx;
};

[[nodiscard]] inline NodalValues nodal_values(const SplineCoefVector& delta, const Mesh& mesh, std::size_t m) {
    if (m > mesh.elements()) {
        throw IndexError("node index " + std::to_string(m) + " outside 0.." + std::to_string(mesh.elements()));
    }
    if (delta.elements() != mesh.elements()) {
        throw ShapeError("coefficient vector does not match mesh");
    }
    const long j = static_cast<long>(m);
    const double left = delta[j - 1];
    const double mid = delta[j];
    const double right = delta[j + 1];
    const double h = mesh.h();
    return {left + 4.0 * mid + right,
            3.0 * (right - left) / h,
            6.0 * (left - 2.0 * mid + right) / (h * h)};
}

/// Nodal value u_m only
[[nodiscard]] inline double nodal_value(const SplineCoefVector& delta, long m) noexcept {
    return delta[m - 1] + 4.0 * delta[m] + delta[m + 1];
}

/// Element containing x and the local coordinate of x in it. x = b maps to the last element, eta = 1.
struct ElementLocation {
    std::size_t element;
    double eta;
};

[[nodiscard]] inline ElementLocation locate(const Mesh& mesh, double x) {
    if (!(x >= mesh.a() && x <= mesh.b())) {
        throw DomainError("x=" + std::to_string(x) + " outside mesh interval");
    }
    const double s = (x - mesh.a()) / mesh.h();
    std::size_t m = static_cast<std::size_t>(std::floor(s));
    if (m >= mesh.elements()) m = mesh.elements() - 1;
    double eta = s - static_cast<double>(m);
    if (eta < 0.0) eta = 0.0;
    if (eta > 1.0) eta = 1.0;
    return {m, eta};
}

[[nodiscard]] inline double evaluate_spline(const SplineCoefVector& delta, const Mesh& mesh, double x) {
    const auto [m, eta] = locate(mesh, x);
    const auto phi = cubic_shape_values(eta);
    const long j = static_cast<long>(m);
    return delta[j - 1] * phi[0] + delta[j] * phi[1] + delta[j + 1] * phi[2] + delta[j + 2] * phi[3];
}

}  // namespace grlw
