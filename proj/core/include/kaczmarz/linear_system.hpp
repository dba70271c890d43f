#pragma once

#include <cstddef>
#include <span>

#include "kaczmarz/dense.hpp"

namespace kaczmarz {

using linalg::DenseMatrix;
using linalg::Vector;

/// A consistent-system candidate A x = b with cached squared row norms.
///
/// Construction rejects size mismatches, non-finite data and zero rows, so
/// every row defines a hyperplane.
class LinearSystem {
public:
    LinearSystem(DenseMatrix a, Vector b);

    std::size_t rows() const noexcept { return a_.rows(); }
    std::size_t cols() const noexcept { return a_.cols(); }

    const DenseMatrix& matrix() const noexcept { return a_; }
    const Vector& rhs() const noexcept { return b_; }
    std::span<const double> row(std::size_t i) const { return a_.row(i); }
    double rhs(std::size_t i) const { return b_[i]; }

    const Vector& row_sq_norms() const noexcept { return row_sq_norms_; }
    double row_sq_norm(std::size_t i) const { return row_sq_norms_[i]; }
    double frobenius_sq() const noexcept { return frobenius_sq_; }

    /// <A_i, x> - b_i
    double residual(std::size_t i, std::span<const double> x) const;
    Vector residuals(std::span<const double> x) const;

    /// A^(i) x = b^(i): the system with row i removed.
    LinearSystem without_row(std::size_t i) const;

    /// Same system with row i moved to the last position, others keeping
    /// their relative order.
    LinearSystem with_row_last(std::size_t i) const;

    /// Rows taken in the given order.
    LinearSystem select_rows(std::span<const std::size_t> order) const;

private:
    DenseMatrix a_;
    Vector b_;
    Vector row_sq_norms_;
    double frobenius_sq_ = 0.0;
};

Vector min_norm_solution(const LinearSystem& system);

}  // namespace kaczmarz
