#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "kaczmarz/linear_system.hpp"
#include "kaczmarz/rng.hpp"

namespace kaczmarz {

// Index controls for Algorithm K.
struct Cyclic {};
struct MaxResidual {};
struct RandomControl {
    std::uint64_t seed = 0;
};

using ControlStrategy = std::variant<Cyclic, MaxResidual, RandomControl>;

std::string_view control_name(const ControlStrategy& strategy) noexcept;

enum class StopReason { Converged, BudgetExhausted };

std::string_view to_string(StopReason reason) noexcept;

struct RunOptions {
    std::size_t max_iters = 10'000;
    double residual_tol = 1e-10;
    /// When set, ||x^k - reference|| is recorded before every step and at exit.
    std::optional<Vector> reference;
    /// Keep every iterate x^0 .. x^K in the trace.
    bool record_iterates = false;
    /// Throw InconsistentSuspected when the max residual stalls on a system
    /// that is not full row rank.
    bool stagnation_guard = true;
};

struct IterationTrace {
    std::vector<std::size_t> selected_indices;
    /// max_i |<A_i, x^k> - b_i| before step k.
    std::vector<double> residual_max_abs;
    /// Length iterations_run + 1 when a reference was given.
    std::optional<std::vector<double>> distance_to_reference;
    /// x^0 .. x^K, only with RunOptions::record_iterates.
    std::vector<Vector> iterates;
    Vector final_iterate;
    double final_residual_max_abs = 0.0;
    std::size_t iterations_run = 0;
    StopReason stop_reason = StopReason::BudgetExhausted;
    /// x^0 != 0: the recurrence guarantee for maxres/random controls is only
    /// established for a zero start.
    bool x0_outside_hypothesis = false;
};

/// Orthogonal projection of x onto H_i = {y : <y, A_i> = b_i}.
Vector project_onto_hyperplane(std::span<const double> x, const LinearSystem& system,
                               std::size_t i);

/// argmax_i |<A_i, x> - b_i|, lowest index on ties.
std::size_t select_max_residual(std::span<const double> x, const LinearSystem& system);

/// p_i = ||A_i||^2 / ||A||_F^2.
Vector row_distribution(const LinearSystem& system);

/// One inverse-CDF draw from p; consumes exactly one value of `rng`.
std::size_t select_random(std::span<const double> p, SplitMix64& rng);

/// Inverse-CDF sampler with the cumulative table precomputed. Draws are
/// identical to select_random on the same distribution and generator.
class RowSampler {
public:
    explicit RowSampler(std::span<const double> p);

    std::size_t operator()(SplitMix64& rng) const;

    std::span<const double> cumulative() const noexcept { return cdf_; }

private:
    std::vector<double> cdf_;
    std::size_t last_positive_ = 0;
};

/// Algorithm K: x^{k+1} = P_{H_{i_k}}(x^k) with i_k chosen by `strategy`.
///
/// Stops once the max residual is <= options.residual_tol (Converged) or after
/// options.max_iters steps (BudgetExhausted). With the stagnation guard on,
/// throws InconsistentSuspected when the smallest max residual of a window of
/// 50*m steps is not below 0.999 times the best value seen before that window,
/// unless the residual already sits at rounding level. A stall on a system
/// with full row rank (always consistent) switches the guard off instead.
IterationTrace run_kaczmarz(const LinearSystem& system, const ControlStrategy& strategy,
                            std::span<const double> x0, const RunOptions& options = {});

/// Same, starting from x^0 = 0.
IterationTrace run_kaczmarz(const LinearSystem& system, const ControlStrategy& strategy,
                            const RunOptions& options = {});

}  // namespace kaczmarz
