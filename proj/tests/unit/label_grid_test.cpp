#include <gmfc/errors.hpp>
#include <gmfc/label_grid.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

namespace gmfc {
namespace {

TEST(LabelGrid, MidpointNodesAndWeights) {
    const LabelGrid g1 = build_grid(1);
    EXPECT_DOUBLE_EQ(g1.point(0), 0.5);
    EXPECT_DOUBLE_EQ(g1.weight(0), 1.0);

    const LabelGrid g2 = build_grid(2);
    EXPECT_DOUBLE_EQ(g2.point(0), 0.25);
    EXPECT_DOUBLE_EQ(g2.point(1), 0.75);
    EXPECT_DOUBLE_EQ(g2.weight(1), 0.5);

    const LabelGrid g4 = build_grid(4);
    const double expected[] = {0.125, 0.375, 0.625, 0.875};
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_DOUBLE_EQ(g4.point(i), expected[i]);
        EXPECT_DOUBLE_EQ(g4.weight(i), 0.25);
    }
}

TEST(LabelGrid, WeightsSumToOneAndPointsIncrease) {
    for (std::size_t n : {1u, 3u, 7u, 64u, 1000u}) {
        const LabelGrid g = build_grid(n);
        const auto w = g.weights();
        EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-15 * static_cast<double>(n));
        for (std::size_t i = 1; i < n; ++i) EXPECT_LT(g.point(i - 1), g.point(i));
        EXPECT_GT(g.point(0), 0.0);
        EXPECT_LT(g.point(n - 1), 1.0);
    }
}

TEST(LabelGrid, EmptyGridRejected) { EXPECT_THROW(build_grid(0), DomainError); }

TEST(SampleKernel, ConstantIdentityBlocks) {
    const LabelGrid g = build_grid(2);
    const Kernel k = sample_kernel(KernelFunction([](double, double) { return Eigen::MatrixXd::Identity(2, 2); }), g);
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(Eigen::MatrixXd(k.block(i, j)), Eigen::MatrixXd::Identity(2, 2));
    }
}

TEST(SampleKernel, ProductOfMidpoints) {
    const Kernel k = sample_kernel(ScalarKernelFunction([](double u, double v) { return u * v; }), build_grid(2));
    Eigen::Matrix2d expected;
    expected << 0.0625, 0.1875, 0.1875, 0.5625;
    EXPECT_EQ(k.dense(), Eigen::MatrixXd(expected));
}

TEST(SampleKernel, ZeroAndNonFinite) {
    const LabelGrid g = build_grid(3);
    EXPECT_TRUE(sample_kernel(ScalarKernelFunction([](double, double) { return 0.0; }), g).dense().isZero(0.0));
    EXPECT_THROW(sample_kernel(ScalarKernelFunction([](double u, double) { return 1.0 / (u - u); }), g), DomainError);
}

TEST(ApplyKernel, HandQuadratureSums) {
    const LabelGrid g = build_grid(2);
    const Kernel uv = sample_kernel(ScalarKernelFunction([](double u, double v) { return u * v; }), g);
    const LabelField y = apply_kernel(uv, Eigen::Vector2d(1.0, 1.0), g);
    EXPECT_DOUBLE_EQ(y(0), 0.125);
    EXPECT_DOUBLE_EQ(y(1), 0.375);

    const LabelGrid g5 = build_grid(5);
    const Kernel id = sample_kernel(KernelFunction([](double, double) { return Eigen::MatrixXd::Identity(2, 2); }), g5);
    const LabelField c = LabelField::Constant(10, 3.0);
    EXPECT_LT((apply_kernel(id, c, g5) - c).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_TRUE(apply_kernel(Kernel(5, 2, 2), c, g5).isZero(0.0));
    EXPECT_THROW(apply_kernel(id, LabelField::Zero(3), g5), DomainError);
}

TEST(ApplyKernel, Linear) {
    const LabelGrid g = build_grid(6);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> z;
    Kernel k(6, 2, 2, Eigen::MatrixXd::NullaryExpr(12, 12, [&] { return z(rng); }));
    const LabelField x = LabelField::NullaryExpr(12, [&] { return z(rng); });
    const LabelField y = LabelField::NullaryExpr(12, [&] { return z(rng); });
    const LabelField lhs = apply_kernel(k, 2.5 * x - 0.75 * y, g);
    const LabelField rhs = 2.5 * apply_kernel(k, x, g) - 0.75 * apply_kernel(k, y, g);
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(ApplyKernel, SecondOrderUnderRefinement) {
    // int_0^1 exp(u v) dv at u = 1/2 through the labels that sit at u = 1/2 for n = 3, 9, 27.
    auto f = ScalarKernelFunction([](double u, double v) { return std::exp(u * v); });
    const double exact = 2.0 * (std::exp(0.5) - 1.0);
    double previous = 0.0;
    for (std::size_t n : {3u, 9u, 27u}) {
        const LabelGrid g = build_grid(n);
        const LabelField y = apply_kernel(sample_kernel(f, g), LabelField::Ones(static_cast<Eigen::Index>(n)), g);
        const double err = std::abs(y(static_cast<Eigen::Index>(n / 2)) - exact);
        if (previous > 0.0) EXPECT_NEAR(previous / err, 9.0, 0.2);
        previous = err;
    }
}

TEST(OperatorNorm, ZeroConstantAndHandCase) {
    const LabelGrid g = build_grid(4);
    EXPECT_EQ(operator_norm(Kernel(4, 1, 1), g).value, 0.0);
    const Kernel c = sample_kernel(ScalarKernelFunction([](double, double) { return -2.5; }), g);
    EXPECT_NEAR(operator_norm(c, g).value, 2.5, 1e-10);

    const LabelGrid g2 = build_grid(2);
    const Kernel uv = sample_kernel(ScalarKernelFunction([](double u, double v) { return u * v; }), g2);
    Eigen::Matrix2d weighted;
    weighted << 0.03125, 0.09375, 0.09375, 0.28125;
    const double expected = Eigen::JacobiSVD<Eigen::MatrixXd>(weighted).singularValues()(0);
    const OperatorNorm norm = operator_norm(uv, g2);
    EXPECT_TRUE(norm.converged);
    EXPECT_NEAR(norm.value, expected, 1e-10 * expected);
}

TEST(OperatorNorm, MatchesSvdAndBoundsApply) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> z;
    const LabelGrid g = build_grid(9);
    const Kernel k(9, 2, 2, Eigen::MatrixXd::NullaryExpr(18, 18, [&] { return z(rng); }));
    const Eigen::VectorXd sw = expanded_weights(g, 2).cwiseSqrt();
    const Eigen::MatrixXd weighted = sw.asDiagonal() * k.dense() * sw.asDiagonal();
    const double svd = Eigen::JacobiSVD<Eigen::MatrixXd>(weighted).singularValues()(0);
    const double norm = operator_norm(k, g).value;
    EXPECT_NEAR(norm, svd, 1e-8 * svd);
    for (int trial = 0; trial < 20; ++trial) {
        const LabelField x = LabelField::NullaryExpr(18, [&] { return z(rng); });
        EXPECT_LE(weighted_norm(apply_kernel(k, x, g), g), norm * weighted_norm(x, g) * (1.0 + 1e-9));
    }
}

}  // namespace
}  // namespace gmfc
