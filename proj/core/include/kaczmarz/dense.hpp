#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace kaczmarz::linalg {

using Vector = std::vector<double>;

/// Row-major dense matrix of finite doubles.
///
/// Entries are checked for NaN/Inf when the matrix is built from data;
/// element access through the mutable accessors is unchecked.
class DenseMatrix {
public:
    DenseMatrix() = default;

    /// Zero-filled rows x cols matrix.
    DenseMatrix(std::size_t rows, std::size_t cols);

    /// Takes ownership of row-major `entries`; throws DimensionMismatch if the
    /// length is not rows*cols and NonFinite on NaN/Inf.
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

    /// Literal construction, e.g. DenseMatrix{{1, 0}, {0, 1}}.
    DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }
    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

    std::span<const double> entries() const noexcept { return data_; }

    DenseMatrix transposed() const;

    /// Largest absolute entry; 0 for an empty matrix.
    double max_abs() const noexcept;

    bool operator==(const DenseMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
double max_abs(std::span<const double> v) noexcept;
Vector subtract(std::span<const double> a, std::span<const double> b);

Vector multiply(const DenseMatrix& a, std::span<const double> x);
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);

/// Q^T A^T = [R; 0] for an n x m input with n >= m.
struct QrFactors {
    DenseMatrix q;  // n x n, orthogonal
    DenseMatrix r;  // m x m, upper triangular, r_ii > 0
    std::size_t source_rows = 0;
    std::size_t source_cols = 0;
};

/// Householder QR with explicitly accumulated Q and a positive diagonal in R,
/// which makes R unique for full column rank input.
///
/// Throws DimensionMismatch when rows < cols and RankDeficient(j) when the
/// j-th pivot norm drops below 1e-12 * max|input|.
QrFactors qr_decompose(const DenseMatrix& a_transpose);

/// Solves R^T y = rhs by forward substitution. Throws SingularTriangle(i)
/// when |r_ii| < 1e-300.
Vector solve_upper_transposed(const DenseMatrix& r, std::span<const double> rhs);

/// Minimal Euclidean norm solution x = Q [R^{-T} b; 0] of a consistent
/// full-row-rank system with rows <= cols.
Vector min_norm_solution(const DenseMatrix& a, std::span<const double> b);

/// R^{-T} built by bordering: each leading block is extended with the row
/// -(1/r_kk) c^T Rk^{-T} and the corner 1/r_kk, where c is the part of
/// column k above the diagonal.
DenseMatrix block_inverse_transposed(const DenseMatrix& r);

}  // namespace kaczmarz::linalg
