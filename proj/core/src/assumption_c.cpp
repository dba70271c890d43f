#include "kaczmarz/assumption_c.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kaczmarz/error.hpp"

namespace kaczmarz {

namespace {

constexpr double kIndependenceTolerance = 1e-10;
constexpr double kConsistencyTolerance = 1e-9;
constexpr double kBorderlineFactor = 10.0;

bool has_full_row_rank(const LinearSystem& system) {
    if (system.rows() > system.cols()) {
        return false;
    }
    try {
        linalg::qr_decompose(system.matrix().transposed());
    } catch (const RankDeficient&) {
        return false;
    }
    return true;
}

// Greedy maximal set of linearly independent rows (two-pass Gram-Schmidt).
std::vector<std::size_t> independent_rows(const LinearSystem& system) {
    const std::size_t n = system.cols();
    std::vector<Vector> basis;
    std::vector<std::size_t> picked;
    for (std::size_t i = 0; i < system.rows() && basis.size() < n; ++i) {
        const auto a_i = system.row(i);
        Vector v(a_i.begin(), a_i.end());
        for (int pass = 0; pass < 2; ++pass) {
            for (const Vector& q : basis) {
                const double s = linalg::dot(q, v);
                for (std::size_t j = 0; j < n; ++j) {
                    v[j] -= s * q[j];
                }
            }
        }
        const double len = linalg::norm2(v);
        if (len > kIndependenceTolerance * std::sqrt(system.row_sq_norm(i))) {
            for (double& x : v) {
                x /= len;
            }
            basis.push_back(std::move(v));
            picked.push_back(i);
        }
    }
    return picked;
}

// Minimal-norm solution of a possibly rank-deficient or overdetermined
// system, or nullopt when it is inconsistent.
std::optional<Vector> general_min_norm(const LinearSystem& system) {
    const LinearSystem basis_system = system.select_rows(independent_rows(system));
    Vector x;
    try {
        x = min_norm_solution(basis_system);
    } catch (const RankDeficient&) {
        return std::nullopt;
    } catch (const Inconsistent&) {
        return std::nullopt;
    }
    double x_l1 = 0.0;
    for (double v : x) {
        x_l1 += std::abs(v);
    }
    const double scale = linalg::max_abs(system.rhs()) + system.matrix().max_abs() * x_l1;
    if (linalg::max_abs(system.residuals(x)) > kConsistencyTolerance * std::max(scale, 1e-300)) {
        return std::nullopt;
    }
    return x;
}

void require_index(const LinearSystem& system, std::size_t i) {
    if (i >= system.rows()) {
        throw InvalidArgument("row index " + std::to_string(i + 1) + " out of range");
    }
}

}  // namespace

bool AssumptionCReport::holds() const noexcept {
    return std::all_of(records.begin(), records.end(), [](const AssumptionCRecord& r) {
        return r.decidable && r.holds_direct;
    });
}

std::vector<std::size_t> AssumptionCReport::violated_indices() const {
    std::vector<std::size_t> out;
    for (const auto& r : records) {
        if (r.decidable && !r.holds_direct) {
            out.push_back(r.index);
        }
    }
    return out;
}

double default_eq_tol(const Vector& x_ls) { return 1e-8 * (1.0 + linalg::norm2(x_ls)); }

Vector leave_one_out_solution(const LinearSystem& system, std::size_t i) {
    require_index(system, i);
    if (system.rows() < 2) {
        throw DimensionMismatch("leave-one-out needs at least two rows");
    }
    return min_norm_solution(system.without_row(i));
}

AssumptionCReport check_assumption_c_direct(const LinearSystem& system,
                                            std::optional<double> eq_tol) {
    const std::size_t m = system.rows();
    if (m < 2) {
        throw DimensionMismatch("Assumption C check needs at least two rows");
    }
    if (eq_tol && !(*eq_tol >= 0.0)) {
        throw InvalidArgument("eq_tol must be non-negative");
    }

    AssumptionCReport report;
    report.system_rank_ok = has_full_row_rank(system);
    report.records.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        report.records[i].index = i;
    }

    std::optional<Vector> x_ls;
    if (report.system_rank_ok) {
        x_ls = min_norm_solution(system);
    } else {
        x_ls = general_min_norm(system);
    }
    if (!x_ls) {
        for (auto& r : report.records) {
            r.decidable = false;
        }
        report.eq_tol = eq_tol.value_or(0.0);
        return report;
    }
    report.eq_tol = eq_tol.value_or(default_eq_tol(*x_ls));

    for (std::size_t i = 0; i < m; ++i) {
        AssumptionCRecord& rec = report.records[i];
        std::optional<Vector> x_i;
        if (report.system_rank_ok) {
            x_i = leave_one_out_solution(system, i);
        } else {
            x_i = general_min_norm(system.without_row(i));
        }
        if (!x_i) {
            rec.decidable = false;
            continue;
        }
        rec.distance = linalg::norm2(linalg::subtract(*x_ls, *x_i));
        rec.holds_direct = rec.distance > report.eq_tol;
        rec.borderline = rec.distance > report.eq_tol / kBorderlineFactor &&
                         rec.distance < report.eq_tol * kBorderlineFactor;
    }
    return report;
}

double scalar_condition_value(const LinearSystem& system, std::size_t i) {
    require_index(system, i);
    const std::size_t m = system.rows();
    if (m > system.cols()) {
        throw DimensionMismatch("QR condition needs rows <= cols");
    }
    const LinearSystem permuted = system.with_row_last(i);
    const linalg::QrFactors qr = linalg::qr_decompose(permuted.matrix().transposed());

    const std::size_t lead = m - 1;
    DenseMatrix r_lead(lead, lead);
    Vector c(lead);
    for (std::size_t row = 0; row < lead; ++row) {
        for (std::size_t col = row; col < lead; ++col) {
            r_lead(row, col) = qr.r(row, col);
        }
        c[row] = qr.r(row, lead);
    }
    const std::span<const double> b_lead(permuted.rhs().data(), lead);
    const Vector y = linalg::solve_upper_transposed(r_lead, b_lead);
    return linalg::dot(c, y);
}

QrConditionResult check_assumption_c_qr(const LinearSystem& system, std::size_t i,
                                        double eq_tol) {
    QrConditionResult out;
    out.lhs = scalar_condition_value(system, i);
    out.residual = std::abs(out.lhs - system.rhs(i));
    out.threshold = eq_tol * (1.0 + std::abs(system.rhs(i)));
    out.holds = out.residual > out.threshold;
    return out;
}

AssumptionCReport cross_validate(const LinearSystem& system, std::optional<double> eq_tol) {
    AssumptionCReport report = check_assumption_c_direct(system, eq_tol);
    if (!report.system_rank_ok) {
        return report;
    }
    for (auto& rec : report.records) {
        const QrConditionResult qr = check_assumption_c_qr(system, rec.index, report.eq_tol);
        rec.qr_condition_residual = qr.residual;
        rec.holds_qr = qr.holds;
        rec.agree = rec.holds_direct == qr.holds;
    }
    return report;
}

LinearSystem make_violation_fixture(DenseMatrix a, Vector b, std::size_t i) {
    LinearSystem draft(std::move(a), std::move(b));
    const double value = scalar_condition_value(draft, i);
    Vector rhs = draft.rhs();
    rhs[i] = value;
    return LinearSystem(draft.matrix(), std::move(rhs));
}

}  // namespace kaczmarz
