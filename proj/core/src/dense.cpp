#include "kaczmarz/dense.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kaczmarz/error.hpp"

namespace kaczmarz::linalg {

namespace {

constexpr double kRankTolerance = 1e-12;
constexpr double kSingularDiagonal = 1e-300;
constexpr double kMinNormResidualTolerance = 1e-10;

void require_finite(std::span<const double> values) {
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!std::isfinite(values[k])) {
            throw NonFinite("non-finite entry at flat position " + std::to_string(k));
        }
    }
}

void require_square(const DenseMatrix& r, const char* what) {
    if (r.rows() != r.cols()) {
        throw DimensionMismatch(std::string(what) + ": triangular factor must be square, got " +
                                std::to_string(r.rows()) + "x" + std::to_string(r.cols()));
    }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
        throw DimensionMismatch("matrix data has " + std::to_string(data_.size()) +
                                " entries, expected " + std::to_string(rows_ * cols_));
    }
    require_finite(data_);
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) {
            throw DimensionMismatch("ragged matrix literal");
        }
        data_.insert(data_.end(), r.begin(), r.end());
    }
    require_finite(data_);
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix id(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        id(i, i) = 1.0;
    }
    return id;
}

DenseMatrix DenseMatrix::transposed() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            t(j, i) = (*this)(i, j);
        }
    }
    return t;
}

double DenseMatrix::max_abs() const noexcept { return linalg::max_abs(data_); }

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw DimensionMismatch("dot: lengths " + std::to_string(a.size()) + " and " +
                                std::to_string(b.size()));
    }
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        s += a[k] * b[k];
    }
    return s;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double max_abs(std::span<const double> v) noexcept {
    double m = 0.0;
    for (double x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

Vector subtract(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw DimensionMismatch("subtract: lengths differ");
    }
    Vector out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        out[k] = a[k] - b[k];
    }
    return out;
}

Vector multiply(const DenseMatrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) {
        throw DimensionMismatch("multiply: matrix has " + std::to_string(a.cols()) +
                                " columns, vector has " + std::to_string(x.size()));
    }
    Vector y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        y[i] = dot(a.row(i), x);
    }
    return y;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionMismatch("multiply: inner dimensions differ");
    }
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < b.cols(); ++j) {
                c(i, j) += aik * b(k, j);
            }
        }
    }
    return c;
}

QrFactors qr_decompose(const DenseMatrix& a_transpose) {
    const std::size_t n = a_transpose.rows();
    const std::size_t m = a_transpose.cols();
    if (n < m) {
        throw DimensionMismatch("qr_decompose: input is " + std::to_string(n) + "x" +
                                std::to_string(m) + ", needs rows >= cols");
    }

    DenseMatrix work = a_transpose;
    DenseMatrix q = DenseMatrix::identity(n);
    const double rank_tol = kRankTolerance * a_transpose.max_abs();
    std::vector<double> v(n);

    for (std::size_t j = 0; j < m; ++j) {
        double pivot_sq = 0.0;
        for (std::size_t i = j; i < n; ++i) {
            pivot_sq += work(i, j) * work(i, j);
        }
        const double pivot = std::sqrt(pivot_sq);
        if (!(pivot > rank_tol) || pivot == 0.0) {
            throw RankDeficient(j);
        }

        // Reflect onto -sign(x_0) ||x|| e_1 so v never suffers cancellation;
        // signs are normalized after the loop.
        const double alpha = work(j, j) >= 0.0 ? -pivot : pivot;
        const std::size_t len = n - j;
        for (std::size_t i = 0; i < len; ++i) {
            v[i] = work(j + i, j);
        }
        v[0] -= alpha;
        double v_sq = 0.0;
        for (std::size_t i = 0; i < len; ++i) {
            v_sq += v[i] * v[i];
        }
        const double beta = 2.0 / v_sq;

        work(j, j) = alpha;
        for (std::size_t i = j + 1; i < n; ++i) {
            work(i, j) = 0.0;
        }
        for (std::size_t c = j + 1; c < m; ++c) {
            double s = 0.0;
            for (std::size_t i = 0; i < len; ++i) {
                s += v[i] * work(j + i, c);
            }
            s *= beta;
            for (std::size_t i = 0; i < len; ++i) {
                work(j + i, c) -= s * v[i];
            }
        }
        // Q <- Q H_j
        for (std::size_t r = 0; r < n; ++r) {
            double s = 0.0;
            for (std::size_t i = 0; i < len; ++i) {
                s += q(r, j + i) * v[i];
            }
            s *= beta;
            for (std::size_t i = 0; i < len; ++i) {
                q(r, j + i) -= s * v[i];
            }
        }
    }

    DenseMatrix r(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t c = i; c < m; ++c) {
            r(i, c) = work(i, c);
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (r(i, i) < 0.0) {
            for (std::size_t c = i; c < m; ++c) {
                r(i, c) = -r(i, c);
            }
            for (std::size_t row = 0; row < n; ++row) {
                q(row, i) = -q(row, i);
            }
        }
    }

    return QrFactors{std::move(q), std::move(r), n, m};
}

Vector solve_upper_transposed(const DenseMatrix& r, std::span<const double> rhs) {
    require_square(r, "solve_upper_transposed");
    const std::size_t m = r.rows();
    if (rhs.size() != m) {
        throw DimensionMismatch("solve_upper_transposed: rhs length " +
                                std::to_string(rhs.size()) + ", expected " + std::to_string(m));
    }
    Vector y(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (std::abs(r(i, i)) < kSingularDiagonal) {
            throw SingularTriangle(i);
        }
        double s = rhs[i];
        for (std::size_t k = 0; k < i; ++k) {
            s -= r(k, i) * y[k];
        }
        y[i] = s / r(i, i);
    }
    return y;
}

Vector min_norm_solution(const DenseMatrix& a, std::span<const double> b) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (b.size() != m) {
        throw DimensionMismatch("min_norm_solution: rhs length " + std::to_string(b.size()) +
                                ", matrix has " + std::to_string(m) + " rows");
    }
    if (m > n) {
        throw DimensionMismatch("min_norm_solution: needs rows <= cols, got " +
                                std::to_string(m) + "x" + std::to_string(n));
    }

    const QrFactors qr = qr_decompose(a.transposed());
    const Vector y = solve_upper_transposed(qr.r, b);

    // x = Q [y; 0]
    Vector x(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            s += qr.q(i, k) * y[k];
        }
        x[i] = s;
    }

    double x_l1 = 0.0;
    for (double xi : x) {
        x_l1 += std::abs(xi);
    }
    const Vector ax = multiply(a, x);
    const double scale = max_abs(b) + a.max_abs() * x_l1;
    if (max_abs(subtract(ax, b)) > kMinNormResidualTolerance * std::max(scale, 1e-300)) {
        throw Inconsistent("min_norm_solution: residual above tolerance");
    }
    return x;
}

DenseMatrix block_inverse_transposed(const DenseMatrix& r) {
    require_square(r, "block_inverse_transposed");
    const std::size_t m = r.rows();
    DenseMatrix inv(m, m);

    for (std::size_t k = 0; k < m; ++k) {
        const double r_kk = r(k, k);
        if (std::abs(r_kk) < kSingularDiagonal) {
            throw SingularTriangle(k);
        }
        // Bottom-left block of the bordered inverse: -(1/r_kk) c^T Rk^{-T},
        // with c = r(0..k-1, k) and Rk^{-T} the block built so far.
        for (std::size_t j = 0; j < k; ++j) {
            double s = 0.0;
            for (std::size_t l = j; l < k; ++l) {
                s += r(l, k) * inv(l, j);
            }
            inv(k, j) = -s / r_kk;
        }
        inv(k, k) = 1.0 / r_kk;
    }
    return inv;
}

}  // namespace kaczmarz::linalg
