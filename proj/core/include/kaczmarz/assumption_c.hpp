#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "kaczmarz/linear_system.hpp"

namespace kaczmarz {

// Assumption C: x_LS != x_LS^(i) for every row i, where x_LS^(i) is the
// minimal-norm solution of the system with row i removed.

struct AssumptionCRecord {
    std::size_t index = 0;
    /// False when the direct path could not be evaluated (inconsistent or
    /// unsupported system); distance and holds_direct are then meaningless.
    bool decidable = true;
    double distance = 0.0;  // ||x_LS - x_LS^(i)||
    bool holds_direct = false;  // distance > eq_tol
    bool borderline = false;  // distance within a factor 10 of eq_tol
    std::optional<double> qr_condition_residual;  // |c^T Rt^{-T} bt - b_i|
    std::optional<bool> holds_qr;
    std::optional<bool> agree;
};

struct AssumptionCReport {
    std::vector<AssumptionCRecord> records;
    double eq_tol = 0.0;
    bool system_rank_ok = false;  // rows <= cols and full row rank

    /// Assumption C holds at every index (all records decidable).
    bool holds() const noexcept;
    std::vector<std::size_t> violated_indices() const;
};

struct QrConditionResult {
    double lhs = 0.0;  // c^T Rt^{-T} bt
    double residual = 0.0;  // |lhs - b_i|
    double threshold = 0.0;  // eq_tol * (1 + |b_i|)
    bool holds = false;  // residual > threshold
};

/// 1e-8 * (1 + ||x_LS||).
double default_eq_tol(const Vector& x_ls);

/// x_LS^(i) = min_norm_solution(A^(i), b^(i)). Requires at least two rows.
Vector leave_one_out_solution(const LinearSystem& system, std::size_t i);

/// Direct route: compares x_LS with every x_LS^(i).
///
/// Full-row-rank systems with rows <= cols use QR minimal-norm solves. Other
/// systems fall back to a greedy independent-row basis; when the system is
/// inconsistent every record is marked undecidable.
AssumptionCReport check_assumption_c_direct(const LinearSystem& system,
                                            std::optional<double> eq_tol = std::nullopt);

/// c^T Rt^{-T} bt for row i moved last: the value b_i must take for the
/// leave-one-out minimal-norm solution to coincide with x_LS.
double scalar_condition_value(const LinearSystem& system, std::size_t i);

/// QR route at one index. Requires rows <= cols and full row rank.
QrConditionResult check_assumption_c_qr(const LinearSystem& system, std::size_t i,
                                        double eq_tol);

/// Both routes at every index, with an agreement flag per index. The QR route
/// is skipped (fields left empty) when the system is not full row rank.
AssumptionCReport cross_validate(const LinearSystem& system,
                                 std::optional<double> eq_tol = std::nullopt);

/// Copy of (a, b) with b_i replaced by scalar_condition_value, so that
/// Assumption C fails at row i by construction.
LinearSystem make_violation_fixture(DenseMatrix a, Vector b, std::size_t i);

}  // namespace kaczmarz
