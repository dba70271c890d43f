#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "kaczmarz/engine.hpp"
#include "kaczmarz/error.hpp"
#include "oracle.hpp"

using namespace kaczmarz;
namespace la = kaczmarz::linalg;

TEST(SplitMix64, ReferenceOutputAndDeterminism) {
    SplitMix64 g(0);
    EXPECT_EQ(g(), 0xe220a8397b1dcdafULL);
    SplitMix64 a(99);
    SplitMix64 b(99);
    for (int k = 0; k < 100; ++k) {
        ASSERT_EQ(a(), b());
    }
    SplitMix64 c(5);
    for (int k = 0; k < 1000; ++k) {
        const double u = c.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}

TEST(Projection, Examples) {
    const LinearSystem axis(DenseMatrix{{1, 0}}, Vector{1});
    EXPECT_EQ(project_onto_hyperplane(Vector{0, 0}, axis, 0), (Vector{1, 0}));
    EXPECT_EQ(project_onto_hyperplane(Vector{1, 7}, axis, 0), (Vector{1, 7}));

    const LinearSystem diag(DenseMatrix{{1, 1}}, Vector{2});
    EXPECT_EQ(project_onto_hyperplane(Vector{0, 0}, diag, 0), (Vector{1, 1}));

    EXPECT_THROW(project_onto_hyperplane(Vector{0, 0}, diag, 1), InvalidArgument);
    EXPECT_THROW(project_onto_hyperplane(Vector{0}, diag, 0), DimensionMismatch);
}

TEST(Projection, LandsOnHyperplaneAndIgnoresRowScaling) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng() % 6;
        const auto a = oracle::random_matrix(rng, 1, n);
        const Vector b = oracle::random_vector(rng, 1);
        const Vector x = oracle::random_vector(rng, n);
        const LinearSystem s(a, b);
        const Vector p = project_onto_hyperplane(x, s, 0);
        const double lhs = la::dot(p, s.row(0));
        EXPECT_NEAR(lhs, b[0], 1e-12 * (std::abs(b[0]) + la::norm2(s.row(0)) * la::norm2(p)));

        const double c = scale(rng);
        std::vector<double> scaled(a.entries().begin(), a.entries().end());
        for (double& v : scaled) {
            v *= c;
        }
        const LinearSystem s2(DenseMatrix(1, n, scaled), Vector{b[0] * c});
        const Vector p2 = project_onto_hyperplane(x, s2, 0);
        EXPECT_LE(oracle::distance(p, p2), 1e-12 * (1.0 + la::norm2(p)));
    }
}

TEST(SelectMaxResidual, Examples) {
    const Vector zero{0, 0, 0};
    EXPECT_EQ(select_max_residual(zero, LinearSystem(DenseMatrix::identity(3), Vector{3, 5, 2})), 1u);
    EXPECT_EQ(select_max_residual(zero, LinearSystem(DenseMatrix::identity(3), Vector{5, -5, 1})), 0u);

    const LinearSystem s(DenseMatrix{{1, 0, 0}, {0, 1, 0}}, Vector{2, 3});
    const Vector x_ls = min_norm_solution(s);
    EXPECT_EQ(select_max_residual(x_ls, s), 0u);
    EXPECT_EQ(la::max_abs(s.residuals(x_ls)), 0.0);
}

TEST(RowDistribution, Examples) {
    const Vector p = row_distribution(LinearSystem(DenseMatrix{{1, 0, 0}, {1, 1, 1}}, Vector{0, 0}));
    EXPECT_EQ(p, (Vector{0.25, 0.75}));

    const Vector u = row_distribution(LinearSystem(DenseMatrix::identity(4), Vector{1, 2, 3, 4}));
    EXPECT_EQ(u, (Vector{0.25, 0.25, 0.25, 0.25}));

    std::mt19937_64 rng(8);
    const LinearSystem s(oracle::random_matrix(rng, 5, 4), oracle::random_vector(rng, 5));
    const Vector q = row_distribution(s);
    long double total = 0.0L;
    for (double v : q) {
        EXPECT_GT(v, 0.0);
        total += v;
    }
    EXPECT_NEAR(static_cast<double>(total), 1.0, 1e-14);
}

TEST(SelectRandom, DegenerateAndEmpirical) {
    SplitMix64 rng(1);
    for (int k = 0; k < 100; ++k) {
        ASSERT_EQ(select_random(Vector{1.0}, rng), 0u);
    }

    SplitMix64 g(2024);
    const Vector p{0.25, 0.75};
    std::size_t ones = 0;
    constexpr int draws = 100'000;
    for (int k = 0; k < draws; ++k) {
        ones += select_random(p, g);
    }
    const double freq = static_cast<double>(ones) / draws;
    EXPECT_GE(freq, 0.745);
    EXPECT_LE(freq, 0.755);
}

TEST(SelectRandom, DeterministicAndMatchesSampler) {
    const Vector p{0.5, 0.5};
    SplitMix64 a(77);
    SplitMix64 b(77);
    for (int k = 0; k < 1000; ++k) {
        ASSERT_EQ(select_random(p, a), select_random(p, b));
    }

    const Vector q{0.1, 0.0, 0.2, 0.7, 0.0};
    const RowSampler sampler(q);
    SplitMix64 c(5);
    SplitMix64 d(5);
    for (int k = 0; k < 10'000; ++k) {
        const std::size_t i = sampler(c);
        ASSERT_EQ(i, select_random(q, d));
        ASSERT_NE(i, 1u);
        ASSERT_NE(i, 4u);
    }
    EXPECT_THROW(RowSampler(Vector{}), InvalidArgument);
    EXPECT_THROW(RowSampler(Vector{0.5, -0.1}), InvalidArgument);
}

TEST(RunKaczmarz, IdentityConvergesInTwoSteps) {
    const LinearSystem s(DenseMatrix::identity(2), Vector{1, 1});
    RunOptions opt;
    opt.residual_tol = 1e-10;
    const IterationTrace t = run_kaczmarz(s, MaxResidual{}, opt);
    EXPECT_EQ(t.stop_reason, StopReason::Converged);
    EXPECT_EQ(t.iterations_run, 2u);
    EXPECT_EQ(t.selected_indices, (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(t.final_iterate, (Vector{1, 1}));
    EXPECT_FALSE(t.x0_outside_hypothesis);
}

TEST(RunKaczmarz, CyclicReachesMinNormSolution) {
    const LinearSystem s(DenseMatrix{{2, 0}, {3, 3}}, Vector{2, 9});
    RunOptions opt;
    opt.residual_tol = 1e-10;
    const IterationTrace t = run_kaczmarz(s, Cyclic{}, opt);
    EXPECT_EQ(t.stop_reason, StopReason::Converged);
    EXPECT_LE(oracle::distance(t.final_iterate, min_norm_solution(s)), 1e-8);
    for (std::size_t k = 0; k < t.iterations_run; ++k) {
        ASSERT_EQ(t.selected_indices[k], k % 2);
    }
}

TEST(RunKaczmarz, TraceInvariantsOnRandomSystems) {
    std::mt19937_64 rng(99);
    const std::vector<ControlStrategy> strategies{Cyclic{}, MaxResidual{}, RandomControl{7}};
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t m = 2 + rng() % 5;
        const auto s = oracle::random_system(rng, m, m + 3, 1e3);
        const Vector x_ls = oracle::normal_equations_min_norm(s);
        for (const auto& strategy : strategies) {
            RunOptions opt;
            opt.max_iters = 2000;
            opt.residual_tol = 1e-12;
            opt.reference = x_ls;
            opt.record_iterates = true;
            const IterationTrace t = run_kaczmarz(s, strategy, opt);

            ASSERT_EQ(t.selected_indices.size(), t.iterations_run);
            ASSERT_EQ(t.residual_max_abs.size(), t.iterations_run);
            ASSERT_EQ(t.distance_to_reference->size(), t.iterations_run + 1);
            ASSERT_EQ(t.iterates.size(), t.iterations_run + 1);

            const auto& dist = *t.distance_to_reference;
            for (std::size_t k = 0; k < t.iterations_run; ++k) {
                const std::size_t i = t.selected_indices[k];
                ASSERT_LT(i, m);
                const Vector& next = t.iterates[k + 1];
                // Interpolation of the selected equation.
                const double scale = std::abs(s.rhs(i)) + la::norm2(s.row(i)) * la::norm2(next);
                EXPECT_NEAR(la::dot(next, s.row(i)), s.rhs(i), 1e-10 * scale);
                // Fejer monotonicity.
                EXPECT_LE(dist[k + 1], dist[k] + 1e-12);
                // Iterates stay in range(A^T).
                const Vector ax = la::multiply(s.matrix(), next);
                const Vector back = oracle::normal_equations_min_norm(oracle::to_rows(s.matrix()), ax);
                EXPECT_LE(oracle::distance(next, back), 1e-8 * (1.0 + la::norm2(next)));
            }
        }
    }
}

TEST(RunKaczmarz, BitIdenticalReruns) {
    std::mt19937_64 rng(4);
    const auto s = oracle::random_system(rng, 5, 8);
    RunOptions opt;
    opt.max_iters = 500;
    opt.residual_tol = 0.0;
    for (const ControlStrategy& strategy :
         std::vector<ControlStrategy>{Cyclic{}, MaxResidual{}, RandomControl{123}}) {
        const IterationTrace a = run_kaczmarz(s, strategy, opt);
        const IterationTrace b = run_kaczmarz(s, strategy, opt);
        EXPECT_EQ(a.selected_indices, b.selected_indices);
        EXPECT_EQ(a.residual_max_abs, b.residual_max_abs);
        EXPECT_EQ(a.final_iterate, b.final_iterate);
    }
    const IterationTrace r1 = run_kaczmarz(s, RandomControl{1}, opt);
    const IterationTrace r2 = run_kaczmarz(s, RandomControl{2}, opt);
    EXPECT_NE(r1.selected_indices, r2.selected_indices);
}

TEST(RunKaczmarz, BudgetExhaustionAndZeroTolerance) {
    std::mt19937_64 rng(12);
    const auto s = oracle::random_system(rng, 4, 6);
    RunOptions opt;
    opt.max_iters = 3;
    const IterationTrace t = run_kaczmarz(s, Cyclic{}, opt);
    EXPECT_EQ(t.stop_reason, StopReason::BudgetExhausted);
    EXPECT_EQ(t.iterations_run, 3u);

    // tol = 0 runs into rounding level; the stall guard must stay quiet.
    opt.max_iters = 20'000;
    opt.residual_tol = 0.0;
    for (const ControlStrategy& strategy :
         std::vector<ControlStrategy>{Cyclic{}, MaxResidual{}, RandomControl{3}}) {
        const IterationTrace z = run_kaczmarz(s, strategy, opt);
        EXPECT_LE(z.final_residual_max_abs, 1e-13);
    }
}

TEST(RunKaczmarz, InconsistentSystemIsFlagged) {
    const LinearSystem s(DenseMatrix{{1, 0}, {1, 0}, {0, 1}}, Vector{0, 1, 1});
    RunOptions opt;
    opt.max_iters = 100'000;
    EXPECT_THROW(run_kaczmarz(s, Cyclic{}, opt), InconsistentSuspected);
    EXPECT_THROW(run_kaczmarz(s, MaxResidual{}, opt), InconsistentSuspected);

    opt.stagnation_guard = false;
    opt.max_iters = 1000;
    EXPECT_EQ(run_kaczmarz(s, Cyclic{}, opt).stop_reason, StopReason::BudgetExhausted);
}

TEST(RunKaczmarz, SlowFullRankSystemIsNotFlagged) {
    // Nearly parallel rows: consistent but converging far slower than the
    // stall window demands.
    const LinearSystem s(DenseMatrix{{1, 0, 0}, {1, 1e-3, 0}, {0, 0, 1}}, Vector{1, 2, 3});
    RunOptions opt;
    opt.max_iters = 5000;
    for (const ControlStrategy& strategy :
         std::vector<ControlStrategy>{Cyclic{}, MaxResidual{}, RandomControl{1}}) {
        EXPECT_EQ(run_kaczmarz(s, strategy, opt).stop_reason, StopReason::BudgetExhausted);
    }

    // Same geometry with a duplicated row and a conflicting b is inconsistent.
    const LinearSystem bad(DenseMatrix{{1, 0, 0}, {1, 0, 0}, {0, 0, 1}}, Vector{0, 1, 3});
    EXPECT_THROW(run_kaczmarz(bad, Cyclic{}, opt), InconsistentSuspected);
}

TEST(RunKaczmarz, NonzeroStartIsFlagged) {
    const LinearSystem s(DenseMatrix::identity(2), Vector{1, 1});
    const IterationTrace t = run_kaczmarz(s, MaxResidual{}, Vector{0.5, 0.0});
    EXPECT_TRUE(t.x0_outside_hypothesis);
    EXPECT_EQ(t.stop_reason, StopReason::Converged);
}

TEST(RunKaczmarz, RejectsBadArguments) {
    const LinearSystem s(DenseMatrix::identity(2), Vector{1, 1});
    RunOptions opt;
    opt.max_iters = 0;
    EXPECT_THROW(run_kaczmarz(s, Cyclic{}, opt), InvalidArgument);
    opt.max_iters = 1;
    opt.residual_tol = -1.0;
    EXPECT_THROW(run_kaczmarz(s, Cyclic{}, opt), InvalidArgument);
    opt.residual_tol = 0.0;
    EXPECT_THROW(run_kaczmarz(s, Cyclic{}, Vector{1.0}, opt), DimensionMismatch);
    opt.reference = Vector{1, 2, 3};
    EXPECT_THROW(run_kaczmarz(s, Cyclic{}, opt), DimensionMismatch);
}

TEST(ControlStrategy, Names) {
    EXPECT_EQ(control_name(Cyclic{}), "cyclic");
    EXPECT_EQ(control_name(MaxResidual{}), "maxres");
    EXPECT_EQ(control_name(RandomControl{1}), "random");
    EXPECT_EQ(to_string(StopReason::Converged), "converged");
}
