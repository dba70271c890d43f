#include "kaczmarz/linear_system.hpp"

#include <cmath>
#include <string>

#include "kaczmarz/error.hpp"

namespace kaczmarz {

LinearSystem::LinearSystem(DenseMatrix a, Vector b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_.rows() == 0 || a_.cols() == 0) {
        throw DimensionMismatch("linear system needs at least one row and one column");
    }
    if (b_.size() != a_.rows()) {
        throw DimensionMismatch("right-hand side has " + std::to_string(b_.size()) +
                                " entries, matrix has " + std::to_string(a_.rows()) + " rows");
    }
    for (std::size_t i = 0; i < b_.size(); ++i) {
        if (!std::isfinite(b_[i])) {
            throw NonFinite("right-hand side entry " + std::to_string(i + 1) + " is not finite");
        }
    }
    for (double x : a_.entries()) {
        if (!std::isfinite(x)) {
            throw NonFinite("matrix entry is not finite");
        }
    }

    row_sq_norms_.resize(a_.rows());
    for (std::size_t i = 0; i < a_.rows(); ++i) {
        const double sq = linalg::dot(a_.row(i), a_.row(i));
        if (!(sq > 0.0)) {
            throw ZeroRow(i);
        }
        row_sq_norms_[i] = sq;
        frobenius_sq_ += sq;
    }
}

double LinearSystem::residual(std::size_t i, std::span<const double> x) const {
    return linalg::dot(a_.row(i), x) - b_[i];
}

Vector LinearSystem::residuals(std::span<const double> x) const {
    if (x.size() != cols()) {
        throw DimensionMismatch("iterate has length " + std::to_string(x.size()) +
                                ", system has " + std::to_string(cols()) + " unknowns");
    }
    Vector r(rows());
    for (std::size_t i = 0; i < rows(); ++i) {
        r[i] = residual(i, x);
    }
    return r;
}

LinearSystem LinearSystem::select_rows(std::span<const std::size_t> order) const {
    const std::size_t n = cols();
    std::vector<double> entries;
    entries.reserve(order.size() * n);
    Vector b;
    b.reserve(order.size());
    for (std::size_t i : order) {
        if (i >= rows()) {
            throw InvalidArgument("row index " + std::to_string(i + 1) + " out of range");
        }
        const auto r = a_.row(i);
        entries.insert(entries.end(), r.begin(), r.end());
        b.push_back(b_[i]);
    }
    return LinearSystem(DenseMatrix(order.size(), n, std::move(entries)), std::move(b));
}

LinearSystem LinearSystem::without_row(std::size_t i) const {
    if (i >= rows()) {
        throw InvalidArgument("row index " + std::to_string(i + 1) + " out of range");
    }
    if (rows() < 2) {
        throw DimensionMismatch("cannot remove the only row of a system");
    }
    std::vector<std::size_t> order;
    order.reserve(rows() - 1);
    for (std::size_t k = 0; k < rows(); ++k) {
        if (k != i) {
            order.push_back(k);
        }
    }
    return select_rows(order);
}

LinearSystem LinearSystem::with_row_last(std::size_t i) const {
    if (i >= rows()) {
        throw InvalidArgument("row index " + std::to_string(i + 1) + " out of range");
    }
    std::vector<std::size_t> order;
    order.reserve(rows());
    for (std::size_t k = 0; k < rows(); ++k) {
        if (k != i) {
            order.push_back(k);
        }
    }
    order.push_back(i);
    return select_rows(order);
}

Vector min_norm_solution(const LinearSystem& system) {
    return linalg::min_norm_solution(system.matrix(), system.rhs());
}

}  // namespace kaczmarz
