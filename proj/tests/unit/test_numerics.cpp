#include "gbtwin/numerics.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace gbtwin;
using gbtwin::testing::enumerate_box_qp;
using gbtwin::testing::qp_objective;
using gbtwin::testing::random_gram;
using gbtwin::testing::random_normal;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) {
        out[i++] = x;
    }
    return out;
}

Vector random_upper(std::mt19937_64& rng, Eigen::Index n) {
    std::uniform_real_distribution<double> u(0.1, 3.0);
    Vector out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out[i] = u(rng);
    }
    return out;
}

}  // namespace

TEST(SolveSpd, IdentityAndDiagonal) {
    const Matrix eye = Matrix::Identity(2, 2);
    EXPECT_TRUE(solve_spd(eye, eye, 0.0).isApprox(eye));

    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = 4.0;
    const Matrix x = solve_spd(d, Matrix::Ones(2, 1), 0.0);
    EXPECT_NEAR(x(0, 0), 0.5, 1e-15);
    EXPECT_NEAR(x(1, 0), 0.25, 1e-15);
}

TEST(SolveSpd, ResidualOnRandomInstances) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> size(1, 20);
    for (int trial = 0; trial < 1000; ++trial) {
        const Eigen::Index n = size(rng);
        const Matrix m = random_gram(rng, n, n + 3);
        const Matrix b = random_normal(rng, n, 3);
        const double delta = trial % 2 == 0 ? 1e-4 : 0.0;
        const Matrix x = solve_spd(m, b, delta);
        const Matrix shifted = m + delta * Matrix::Identity(n, n);
        const double residual = (shifted * x - b).cwiseAbs().maxCoeff();
        ASSERT_LE(residual, 1e-8 * (1.0 + b.cwiseAbs().maxCoeff())) << "trial " << trial;
    }
}

TEST(SolveSpd, RejectsIndefiniteAndMismatchedShapes) {
    Matrix m(2, 2);
    m << 1.0, 2.0, 2.0, 1.0;
    EXPECT_THROW((void)solve_spd(m, Matrix::Identity(2, 2), 0.0), NotPositiveDefinite);
    EXPECT_THROW((void)solve_spd(Matrix::Identity(2, 2), Matrix::Ones(3, 1), 0.0), DimensionMismatch);
    EXPECT_THROW((void)solve_spd(Matrix::Identity(2, 3), Matrix::Ones(2, 1), 0.0), DimensionMismatch);
    EXPECT_THROW((void)solve_spd(Matrix::Identity(2, 2), Matrix::Ones(2, 1), -1.0), InvalidArgument);
}

TEST(BoxQp, RejectsInvalidProblems) {
    Matrix asym(2, 2);
    asym << 1.0, 0.5, 0.0, 1.0;
    EXPECT_THROW(BoxQp(asym, vec({1, 1}), vec({1, 1})), InvalidArgument);
    EXPECT_THROW(BoxQp(Matrix::Identity(2, 2), vec({1, 1}), vec({1, -1})), InvalidArgument);
    EXPECT_THROW(BoxQp(Matrix::Identity(2, 2), vec({1}), vec({1, 1})), DimensionMismatch);
    Matrix nan = Matrix::Identity(2, 2);
    nan(0, 0) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(BoxQp(nan, vec({1, 1}), vec({1, 1})), InvalidArgument);
    EXPECT_THROW(BoxQp(Matrix::Identity(2, 2), vec({1, 1}), vec({1, 1}), Matrix::Ones(2, 1)), InvalidArgument);
}

TEST(SolveBoxQp, ScalarExamples) {
    const DualSolution clipped = solve_box_qp(BoxQp(Matrix::Ones(1, 1), vec({10}), vec({1})));
    EXPECT_DOUBLE_EQ(clipped.x[0], 1.0);
    const DualSolution interior = solve_box_qp(BoxQp(Matrix::Ones(1, 1), vec({0.3}), vec({1})));
    EXPECT_NEAR(interior.x[0], 0.3, 1e-12);
}

TEST(SolveBoxQp, DiagonalExampleMatchesEnumeration) {
    const Matrix m = 2.0 * Matrix::Identity(2, 2);
    const BoxQp qp(m, vec({1, 5}), vec({2, 2}));
    const DualSolution s = solve_box_qp(qp);
    EXPECT_NEAR(s.x[0], 0.5, 1e-10);
    EXPECT_NEAR(s.x[1], 2.0, 1e-10);
    const auto oracle = enumerate_box_qp(m, vec({1, 5}), vec({2, 2}));
    EXPECT_NEAR((s.x - oracle.x).cwiseAbs().maxCoeff(), 0.0, 1e-10);
}

TEST(SolveBoxQp, MatchesExhaustiveOracleOnPositiveDefiniteProblems) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> size(1, 8);
    std::normal_distribution<double> lin(0.0, 2.0);
    for (int trial = 0; trial < 300; ++trial) {
        const Eigen::Index n = size(rng);
        const Matrix m = random_gram(rng, n, n + 2);
        Vector c(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            c[i] = lin(rng);
        }
        const Vector u = random_upper(rng, n);
        const DualSolution s = solve_box_qp(BoxQp(m, c, u));
        const auto oracle = enumerate_box_qp(m, c, u);
        ASSERT_LE((s.x - oracle.x).cwiseAbs().maxCoeff(), 1e-5) << "trial " << trial;
        ASSERT_NEAR(qp_objective(m, c, s.x), oracle.objective, 1e-8 * std::max(1.0, std::abs(oracle.objective)));
    }
}

TEST(SolveBoxQp, MatchesOracleObjectiveOnRankDeficientProblems) {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> size(2, 8);
    std::normal_distribution<double> lin(0.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::Index n = size(rng);
        const Eigen::Index rank = std::max<Eigen::Index>(1, n / 2);
        const Matrix g = random_normal(rng, n, rank);
        const Matrix m = g * g.transpose();
        Vector c(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            c[i] = lin(rng);
        }
        const Vector u = random_upper(rng, n);
        const BoxQp qp(m, c, u, g);
        const DualSolution s = solve_box_qp(qp);
        const auto oracle = enumerate_box_qp(m, c, u);
        ASSERT_NEAR(qp_objective(m, c, s.x), oracle.objective, 1e-8 * std::max(1.0, std::abs(oracle.objective)))
            << "trial " << trial;
        ASSERT_LE(s.kkt_residual, default_qp_tolerance);
    }
}

TEST(SolveBoxQp, ObjectiveNeverDecreases) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Index n = 40;
        const Matrix g = random_normal(rng, n, 6);
        const Matrix m = g * g.transpose() + 1e-3 * Matrix::Identity(n, n);
        const Vector c = random_normal(rng, n, 1).col(0).cwiseAbs();
        const Vector u = random_upper(rng, n);
        const DualSolution s = solve_box_qp(BoxQp(m, c, u));
        ASSERT_FALSE(s.objective_trace.empty());
        for (std::size_t i = 1; i < s.objective_trace.size(); ++i) {
            const double prev = s.objective_trace[i - 1];
            ASSERT_GE(s.objective_trace[i], prev - 1e-12 * std::max(1.0, std::abs(prev))) << "step " << i;
        }
        EXPECT_NEAR(s.objective, qp_objective(m, c, s.x), 1e-9 * std::max(1.0, std::abs(s.objective)));
    }
}

TEST(SolveBoxQp, SolutionStaysInsideTheBox) {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Index n = 25;
        const Matrix m = random_gram(rng, n, 5);
        const Vector c = random_normal(rng, n, 1).col(0);
        const Vector u = random_upper(rng, n);
        const DualSolution s = solve_box_qp(BoxQp(m, c, u));
        for (Eigen::Index i = 0; i < n; ++i) {
            ASSERT_GE(s.x[i], 0.0);
            ASSERT_LE(s.x[i], u[i]);
        }
        ASSERT_LE(s.kkt_residual, default_qp_tolerance);
    }
}

TEST(SolveBoxQp, FactoredAndDenseFormsAgree) {
    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 30; ++trial) {
        const Eigen::Index n = 30;
        const Matrix g = random_normal(rng, n, 4);
        const Matrix m = g * g.transpose();
        const Vector c = random_normal(rng, n, 1).col(0);
        const Vector u = random_upper(rng, n);
        const DualSolution dense = solve_box_qp(BoxQp(m, c, u));
        const DualSolution factored = solve_box_qp(BoxQp(m, c, u, g));
        EXPECT_NEAR(dense.objective, factored.objective, 1e-8 * std::max(1.0, std::abs(dense.objective)));
        EXPECT_LE((m * (dense.x - factored.x)).cwiseAbs().maxCoeff(), 1e-5);
    }
}

TEST(SolveBoxQp, BudgetExhaustionCarriesBestIterate) {
    std::mt19937_64 rng(16);
    const Eigen::Index n = 60;
    const Matrix g = random_normal(rng, n, 50);
    const Matrix m = g * g.transpose();
    const Vector c = random_normal(rng, n, 1).col(0).cwiseAbs() * 10.0;
    const Vector u = Vector::Constant(n, 100.0);
    try {
        (void)solve_box_qp(BoxQp(m, c, u), 1e-300, 1);
        FAIL() << "expected DidNotConverge";
    } catch (const DidNotConverge& e) {
        const DualSolution& best = e.best();
        EXPECT_EQ(best.x.size(), n);
        EXPECT_GT(best.kkt_residual, 1e-300);
        EXPECT_EQ(best.iterations, 1u);
        EXPECT_NEAR(best.objective, qp_objective(m, c, best.x), 1e-9 * std::abs(best.objective));
    }
}

TEST(SolveBoxQp, RejectsNonPositiveTolerance) {
    const BoxQp qp(Matrix::Ones(1, 1), vec({1}), vec({1}));
    EXPECT_THROW((void)solve_box_qp(qp, 0.0), InvalidArgument);
}

TEST(SolveBoxQp, EmptyProblemIsTriviallySolved) {
    const DualSolution s = solve_box_qp(BoxQp(Matrix(0, 0), Vector(0), Vector(0)));
    EXPECT_EQ(s.x.size(), 0);
    EXPECT_EQ(s.kkt_residual, 0.0);
}
