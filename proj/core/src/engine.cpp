#include "kaczmarz/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kaczmarz/error.hpp"

namespace kaczmarz {

namespace {

constexpr std::size_t kStallWindowPerRow = 50;
constexpr double kStallFactor = 0.999;
constexpr double kRoundingFloorUlps = 64.0;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void project_in_place(std::span<double> x, const LinearSystem& system, std::size_t i,
                      double residual) {
    const double step = residual / system.row_sq_norm(i);
    const auto a_i = system.row(i);
    for (std::size_t j = 0; j < x.size(); ++j) {
        x[j] -= step * a_i[j];
    }
}

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

std::size_t inverse_cdf(std::span<const double> cdf, std::size_t last_positive, double u) {
    // First bucket whose cumulative mass exceeds u; rounding in the last
    // partial sum is absorbed by the final bucket with positive mass.
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) {
        return last_positive;
    }
    return static_cast<std::size_t>(it - cdf.begin());
}

std::vector<double> build_cdf(std::span<const double> p, std::size_t& last_positive) {
    if (p.empty()) {
        throw InvalidArgument("empty probability vector");
    }
    std::vector<double> cdf(p.size());
    double acc = 0.0;
    last_positive = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] >= 0.0) || !std::isfinite(p[i])) {
            throw InvalidArgument("probability " + std::to_string(i + 1) +
                                  " is negative or not finite");
        }
        acc += p[i];
        cdf[i] = acc;
        if (p[i] > 0.0) {
            last_positive = i;
        }
    }
    if (!(acc > 0.0)) {
        throw InvalidArgument("probability vector has no mass");
    }
    return cdf;
}

}  // namespace

std::string_view control_name(const ControlStrategy& strategy) noexcept {
    return std::visit(overloaded{
                          [](const Cyclic&) { return std::string_view("cyclic"); },
                          [](const MaxResidual&) { return std::string_view("maxres"); },
                          [](const RandomControl&) { return std::string_view("random"); },
                      },
                      strategy);
}

std::string_view to_string(StopReason reason) noexcept {
    switch (reason) {
        case StopReason::Converged:
            return "converged";
        case StopReason::BudgetExhausted:
            return "budget_exhausted";
    }
    return "unknown";
}

Vector project_onto_hyperplane(std::span<const double> x, const LinearSystem& system,
                               std::size_t i) {
    if (i >= system.rows()) {
        throw InvalidArgument("row index " + std::to_string(i + 1) + " out of range");
    }
    if (x.size() != system.cols()) {
        throw DimensionMismatch("iterate length does not match the number of unknowns");
    }
    Vector out(x.begin(), x.end());
    project_in_place(out, system, i, system.residual(i, x));
    return out;
}

std::size_t select_max_residual(std::span<const double> x, const LinearSystem& system) {
    const Vector r = system.residuals(x);
    std::size_t best = 0;
    double best_abs = std::abs(r[0]);
    for (std::size_t i = 1; i < r.size(); ++i) {
        if (std::abs(r[i]) > best_abs) {
            best_abs = std::abs(r[i]);
            best = i;
        }
    }
    return best;
}

Vector row_distribution(const LinearSystem& system) {
    Vector p(system.rows());
    const double total = system.frobenius_sq();
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = system.row_sq_norm(i) / total;
    }
    return p;
}

std::size_t select_random(std::span<const double> p, SplitMix64& rng) {
    std::size_t last_positive = 0;
    const std::vector<double> cdf = build_cdf(p, last_positive);
    const double u = rng.uniform() * cdf.back();
    return inverse_cdf(cdf, last_positive, u);
}

RowSampler::RowSampler(std::span<const double> p) : cdf_(build_cdf(p, last_positive_)) {}

std::size_t RowSampler::operator()(SplitMix64& rng) const {
    const double u = rng.uniform() * cdf_.back();
    return inverse_cdf(cdf_, last_positive_, u);
}

IterationTrace run_kaczmarz(const LinearSystem& system, const ControlStrategy& strategy,
                            std::span<const double> x0, const RunOptions& options) {
    const std::size_t m = system.rows();
    const std::size_t n = system.cols();
    if (options.max_iters < 1) {
        throw InvalidArgument("max_iters must be at least 1");
    }
    if (!(options.residual_tol >= 0.0)) {
        throw InvalidArgument("residual_tol must be non-negative");
    }
    if (x0.size() != n) {
        throw DimensionMismatch("x0 has length " + std::to_string(x0.size()) + ", expected " +
                                std::to_string(n));
    }
    if (options.reference && options.reference->size() != n) {
        throw DimensionMismatch("reference has length " +
                                std::to_string(options.reference->size()) + ", expected " +
                                std::to_string(n));
    }

    IterationTrace trace;
    trace.x0_outside_hypothesis =
        std::any_of(x0.begin(), x0.end(), [](double v) { return v != 0.0; });
    if (options.reference) {
        trace.distance_to_reference.emplace();
    }

    std::optional<RowSampler> sampler;
    std::optional<SplitMix64> rng;
    if (const auto* random = std::get_if<RandomControl>(&strategy)) {
        sampler.emplace(row_distribution(system));
        rng.emplace(random->seed);
    }

    // Scale of |<A_i, x>| + |b_i|, for the rounding floor of the stall test.
    Vector row_l1(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (double aij : system.row(i)) {
            row_l1[i] += std::abs(aij);
        }
    }

    Vector x(x0.begin(), x0.end());
    Vector r(m);
    const std::size_t window = kStallWindowPerRow * m;
    double best_before_window = std::numeric_limits<double>::infinity();
    double best_in_window = std::numeric_limits<double>::infinity();
    bool guard_active = options.stagnation_guard;

    for (std::size_t k = 0;; ++k) {
        const double x_inf = linalg::max_abs(x);
        double max_abs_r = 0.0;
        double magnitude = 0.0;
        std::size_t argmax = 0;
        for (std::size_t i = 0; i < m; ++i) {
            r[i] = system.residual(i, x);
            const double a = std::abs(r[i]);
            if (a > max_abs_r) {
                max_abs_r = a;
                argmax = i;
            }
            magnitude = std::max(magnitude, row_l1[i] * x_inf + std::abs(system.rhs(i)));
        }

        if (trace.distance_to_reference) {
            trace.distance_to_reference->push_back(
                linalg::norm2(linalg::subtract(x, *options.reference)));
        }
        if (options.record_iterates) {
            trace.iterates.push_back(x);
        }

        if (max_abs_r <= options.residual_tol) {
            trace.stop_reason = StopReason::Converged;
            trace.iterations_run = k;
            trace.final_residual_max_abs = max_abs_r;
            break;
        }
        if (k == options.max_iters) {
            trace.stop_reason = StopReason::BudgetExhausted;
            trace.iterations_run = k;
            trace.final_residual_max_abs = max_abs_r;
            break;
        }

        if (guard_active) {
            best_in_window = std::min(best_in_window, max_abs_r);
            if ((k + 1) % window == 0) {
                const double floor =
                    kRoundingFloorUlps * std::numeric_limits<double>::epsilon() * magnitude;
                if (std::isfinite(best_before_window) &&
                    best_in_window > kStallFactor * best_before_window && best_in_window > floor) {
                    // Full row rank means consistent for every b: the stall is
                    // slow convergence, so stop checking.
                    if (!has_full_row_rank(system)) {
                        throw InconsistentSuspected(k);
                    }
                    guard_active = false;
                }
                best_before_window = std::min(best_before_window, best_in_window);
                best_in_window = std::numeric_limits<double>::infinity();
            }
        }

        const std::size_t i_k = std::visit(overloaded{
                                               [&](const Cyclic&) { return k % m; },
                                               [&](const MaxResidual&) { return argmax; },
                                               [&](const RandomControl&) { return (*sampler)(*rng); },
                                           },
                                           strategy);

        trace.selected_indices.push_back(i_k);
        trace.residual_max_abs.push_back(max_abs_r);
        project_in_place(x, system, i_k, r[i_k]);
    }

    trace.final_iterate = std::move(x);
    return trace;
}

IterationTrace run_kaczmarz(const LinearSystem& system, const ControlStrategy& strategy,
                            const RunOptions& options) {
    const Vector zero(system.cols(), 0.0);
    return run_kaczmarz(system, strategy, zero, options);
}

}  // namespace kaczmarz
