/**
 * @file banded.hpp
 * @brief Fixed-band matrix storage, banded LU without pivoting, and banded mat-vec
 */

#pragma once

#include "grlw/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace grlw {

/// Square matrix with kl sub-diagonals and ku super-diagonals.
///
/// Entry (i,j) is stored iff -kl <= j-i <= ku, at bands_[(j-i+kl)*n + i]
/// (one row of storage per diagonal).
class BandedMatrix {
public:
    BandedMatrix() = default;

    BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku)
        : n_(n), kl_(kl), ku_(ku), bands_((kl + ku + 1) * n, 0.0) {}

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] std::size_t lower() const noexcept { return kl_; }
    [[nodiscard]] std::size_t upper() const noexcept { return ku_; }

    [[nodiscard]] bool in_band(std::size_t i, std::size_t j) const noexcept {
        return i < n_ && j < n_ && j + kl_ >= i && j <= i + ku_;
    }

    /// Stored entry; throws for positions outside the band.
    double& operator()(std::size_t i, std::size_t j) {
        if (!in_band(i, j)) throw IndexError(out_of_band(i, j));
        return bands_[index(i, j)];
    }

    /// Any entry; zero outside the band.
    double operator()(std::size_t i, std::size_t j) const noexcept {
        return in_band(i, j) ? bands_[index(i, j)] : 0.0;
    }

    [[nodiscard]] std::span<const double> storage() const noexcept { return bands_; }

    static BandedMatrix identity(std::size_t n, std::size_t kl, std::size_t ku) {
        BandedMatrix m(n, kl, ku);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    friend bool operator==(const BandedMatrix&, const BandedMatrix&) = default;

private:
    [[nodiscard]] std::size_t index(std::size_t i, std::size_t j) const noexcept {
        return (j + kl_ - i) * n_ + i;
    }

    static std::string out_of_band(std::size_t i, std::size_t j) {
        return "entry (" + std::to_string(i) + "," + std::to_string(j) + ") outside band";
    }

    std::size_t n_ = 0;
    std::size_t kl_ = 0;
    std::size_t ku_ = 0;
    std::vector<double> bands_;
};

/// y = M x over the stored band
[[nodiscard]] inline std::vector<double> banded_matvec(const BandedMatrix& m, std::span<const double> x) {
    const std::size_t n = m.size();
    if (x.size() != n) {
        throw ShapeError("banded_matvec: vector length " + std::to_string(x.size()) + " != " + std::to_string(n));
    }
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j0 = i >= m.lower() ? i - m.lower() : 0;
        const std::size_t j1 = std::min(n - 1, i + m.upper());
        double s = 0.0;
        for (std::size_t j = j0; j <= j1; ++j) s += m(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

/// LU factors of a banded matrix, stored in place: unit-lower L below the
/// diagonal, U on and above. Same bandwidths as the input.
class BandedLU {
public:
    static constexpr double kPivotTolerance = 1e-300;

    explicit BandedLU(BandedMatrix m) : lu_(std::move(m)) {
        const std::size_t n = lu_.size();
        const std::size_t kl = lu_.lower();
        const std::size_t ku = lu_.upper();
        for (std::size_t k = 0; k < n; ++k) {
            const double pivot = lu_(k, k);
            if (!(std::abs(pivot) > kPivotTolerance)) throw SingularMatrixError(k, pivot);
            const std::size_t i_end = std::min(n - 1, k + kl);
            const std::size_t j_end = std::min(n - 1, k + ku);
            for (std::size_t i = k + 1; i <= i_end; ++i) {
                const double l = lu_(i, k) / pivot;
                lu_(i, k) = l;
                if (l == 0.0) continue;
                for (std::size_t j = k + 1; j <= j_end; ++j) lu_(i, j) -= l * lu_(k, j);
            }
        }
    }

    [[nodiscard]] std::vector<double> solve(std::span<const double> rhs) const {
        const std::size_t n = lu_.size();
        if (rhs.size() != n) throw ShapeError("banded solve: rhs length mismatch");
        std::vector<double> x(rhs.begin(), rhs.end());
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j0 = i >= lu_.lower() ? i - lu_.lower() : 0;
            for (std::size_t j = j0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
        }
        for (std::size_t ii = n; ii-- > 0;) {
            const std::size_t j1 = std::min(n - 1, ii + lu_.upper());
            for (std::size_t j = ii + 1; j <= j1; ++j) x[ii] -= lu_(ii, j) * x[j];
            x[ii] /= lu_(ii, ii);
        }
        return x;
    }

    [[nodiscard]] const BandedMatrix& factors() const noexcept { return lu_; }

private:
    BandedMatrix lu_;
};

struct SolveResult {
    std::vector<double> x;
    double residual;  ///< ||M x - rhs||_inf
};

[[nodiscard]] inline SolveResult banded_lu_solve(const BandedMatrix& m, std::span<const double> rhs) {
    if (rhs.size() != m.size()) throw ShapeError("banded_lu_solve: rhs length mismatch");
    const BandedLU lu(m);
    SolveResult out{lu.solve(rhs), 0.0};
    const auto check = banded_matvec(m, out.x);
    for (std::size_t i = 0; i < check.size(); ++i) out.residual = std::max(out.residual, std::abs(check[i] - rhs[i]));
    return out;
}

}  // namespace grlw
