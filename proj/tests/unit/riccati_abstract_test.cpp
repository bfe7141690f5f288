#include "oracles.hpp"

#include <gmfc/errors.hpp>
#include <gmfc/riccati_abstract.hpp>
#include <gmfc/riccati_system.hpp>
#include <gmfc/systemic_risk.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

namespace gmfc {
namespace {

Kernel constant(std::size_t n, double c) {
    const auto nn = static_cast<Eigen::Index>(n);
    return Kernel(n, 1, 1, Eigen::MatrixXd::Constant(nn, nn, c));
}

ProblemData scalar_problem(std::size_t n, double a, double b, double c, double d) {
    CoefficientField f = CoefficientField::zeros(n, 1, 1);
    f.A.assign(n, Eigen::MatrixXd::Constant(1, 1, a));
    f.B.assign(n, Eigen::MatrixXd::Constant(1, 1, b));
    f.C.assign(n, Eigen::MatrixXd::Constant(1, 1, c));
    f.D.assign(n, Eigen::MatrixXd::Constant(1, 1, d));
    return make_problem(build_grid(n), f, Horizon{0, 1}, 1.0);
}

LabelMatrices constant_K(std::size_t n, double k) { return LabelMatrices(n, Eigen::MatrixXd::Constant(1, 1, k)); }

TEST(Psi, Examples) {
    ProblemData p = testing::random_problem(1, 3, 2, 1);
    const Kernel out = psi(LabelMatrices(3, Eigen::MatrixXd::Zero(2, 2)), Kernel(3, 2, 2), p);
    EXPECT_LT(testing::max_abs_diff(out.dense(), symmetrize(p.G_Q).dense()), 1e-15);

    const ProblemData q = scalar_problem(4, 1.0, 0, 0, 0);
    EXPECT_LT((psi(constant_K(4, 0), constant(4, 1.0), q).dense().array() - 2.0).abs().maxCoeff(), 1e-15);

    const double g = 0.7;
    ProblemData one = scalar_problem(1, 0, 0, 0, 0);
    one.G_A = constant(1, g);
    EXPECT_NEAR(psi(constant_K(1, 1.0), Kernel(1, 1, 1), one).dense()(0, 0), 2 * g, 1e-15);
    one.G_C = constant(1, g);
    EXPECT_NEAR(psi(constant_K(1, 1.0), Kernel(1, 1, 1), one).dense()(0, 0), 2 * g + g * g, 1e-15);
}

TEST(VGain, Examples) {
    const ProblemData p = scalar_problem(3, 0, 0, 0, 0);
    EXPECT_TRUE(v_gain(constant_K(3, 2.0), Kernel(3, 1, 1), p).dense().isZero(0.0));
    const ProblemData b = scalar_problem(3, 0, 1, 0, 0);
    EXPECT_TRUE((v_gain(constant_K(3, 0.0), constant(3, 0.3), b).dense().array() == 0.3).all());
    ProblemData d = scalar_problem(3, 0, 0, 0, 1);
    d.G_C = constant(3, 3.0);
    EXPECT_TRUE((v_gain(constant_K(3, 2.0), Kernel(3, 1, 1), d).dense().array() == 6.0).all());
}

TEST(FRhs, Examples) {
    const ProblemData z = scalar_problem(3, 0.4, 1, 0, 0);
    EXPECT_TRUE(f_rhs(constant_K(3, 0.0), Kernel(3, 1, 1), z).dense().isZero(0.0));
    const ProblemData p = scalar_problem(5, 0, 1, 0, 0);
    const double c = 0.6;
    EXPECT_LT((f_rhs(constant_K(5, 0.0), constant(5, c), p).dense().array() + c * c).abs().maxCoeff(), 1e-15);
}

TEST(FRhs, MatchesLiteralDisplayEvenOffManifold) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const ProblemData p = testing::random_problem(seed, 4, 2, 2);
        LabelMatrices K;
        for (std::size_t i = 0; i < 4; ++i) {
            const Eigen::MatrixXd l = Eigen::MatrixXd::Random(2, 2);
            K.push_back(l * l.transpose());
        }
        const Kernel kbar = testing::random_kernel(seed + 100, 4, 2, 2, 1.0);
        const Kernel a = f_rhs(K, kbar, p);
        const Kernel b = testing::literal_F(K, kbar, p);
        EXPECT_LT(testing::max_abs_diff(a.dense(), b.dense()), 1e-12) << seed;
    }
}

TEST(FRhs, FlipConsistencyOnTheSymmetricManifold) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const ProblemData p = testing::random_problem(seed, 4, 2, 2);
        const LabelMatrices K(4, Eigen::MatrixXd::Identity(2, 2));
        const Kernel kbar = symmetrize(testing::random_kernel(seed + 50, 4, 2, 2, 1.0));
        const Kernel f = f_rhs(K, kbar, p);
        EXPECT_LT(flip_symmetry_deviation(f), 1e-13);
        const Kernel lhs = f_rhs(K, flip_transpose(kbar), p);
        EXPECT_LT(testing::max_abs_diff(lhs.dense(), flip_transpose(f).dense()), 1e-13);
    }
}

TEST(FRhs, LocallyLipschitzWithStableConstant) {
    const ProblemData p = testing::random_problem(3, 4, 2, 2);
    const LabelMatrices K(4, 0.5 * Eigen::MatrixXd::Identity(2, 2));
    std::vector<double> fitted;
    for (double scale : {0.01, 0.1, 1.0, 10.0, 100.0}) {
        double worst = 0.0;
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            const Kernel a = scale * testing::random_kernel(2 * seed, 4, 2, 2, 1.0);
            const Kernel b = scale * testing::random_kernel(2 * seed + 1, 4, 2, 2, 1.0);
            const double lhs = operator_norm(f_rhs(K, a, p) - f_rhs(K, b, p), p.grid).value;
            const double na = operator_norm(a, p.grid).value;
            const double nb = operator_norm(b, p.grid).value;
            const double dab = operator_norm(a - b, p.grid).value;
            worst = std::max(worst, lhs / ((1.0 + na + nb) * dab));
        }
        fitted.push_back(worst);
    }
    const auto [lo, hi] = std::minmax_element(fitted.begin(), fitted.end());
    EXPECT_TRUE(std::isfinite(*hi));
    EXPECT_LT(*hi / *lo, 20.0);
}

TEST(AbstractRiccati, ZeroKernelsGiveZeroPath) {
    ProblemData p = testing::random_problem(4, 3, 2, 1, {.noise_terms = false, .cost_kernels = false});
    p.G_A = Kernel(3, 2, 2);
    const RiccatiSolution s = solve_system(p, TimeGrid(0, 1, 40));
    for (const auto& k : s.barK.nodes) EXPECT_TRUE(k.dense().isZero(0.0));
    const BarKDiagnostics d = diagnostics(s.barK);
    EXPECT_EQ(d.max_symmetry_deviation, 0.0);
    EXPECT_EQ(d.max_operator_norm, 0.0);
    EXPECT_EQ(d.residual, 0.0);
}

TEST(AbstractRiccati, TerminalSliceAndSymmetry) {
    const ProblemData p = testing::random_problem(6, 3, 2, 2);
    const RiccatiSolution s = solve_system(p, TimeGrid(0, 1, 100));
    EXPECT_EQ(s.barK.nodes.back().dense(), symmetrize(p.G_H).dense());
    const BarKDiagnostics d = diagnostics(s.barK);
    EXPECT_LE(d.max_symmetry_deviation, 1e-10);
    EXPECT_LE(d.max_projection_drift, 1e-10);
    EXPECT_TRUE(std::isfinite(d.max_operator_norm));
}

TEST(AbstractRiccati, MatchesMonolithicReference) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const ProblemData p = testing::random_problem(seed, 2, 1, 1);
        const TimeGrid tg(0, 1, 100);
        const RiccatiSolution s = solve_system(p, tg);
        const testing::FlatSolution ref = testing::flat_reference(p, tg, 10);
        double worst = 0.0;
        for (std::size_t t = 0; t < tg.nodes(); ++t) {
            worst = std::max(worst, testing::max_abs_diff(s.barK.nodes[t].dense(), ref.barK[t].dense()));
            for (std::size_t i = 0; i < 2; ++i) worst = std::max(worst, testing::max_abs_diff(s.K.nodes[t][i], ref.K[t][i]));
        }
        EXPECT_LT(worst, 1e-7) << seed;
    }
}

TEST(AbstractRiccati, HomogeneousNormEqualsMaxK) {
    const SystemicRiskParams params = homogeneous_systemic_risk_preset();
    const LabelGrid g = build_grid(8);
    const ProblemData p = build_model(params, g);
    const RiccatiSolution s = solve_system(p, TimeGrid(0, params.T, 200));
    double max_k = 0.0;
    for (const auto& slice : s.K.nodes) max_k = std::max(max_k, slice[0](0, 0));
    EXPECT_NEAR(diagnostics(s.barK).max_operator_norm, max_k, 1e-9);
}

TEST(AbstractRiccati, NormCeilingIsEnforced) {
    const ProblemData p = build_model(systemic_risk_preset(), build_grid(4));
    const KPath K = solve_standard_riccati(p, TimeGrid(0, 1, 20));
    AbstractRiccatiOptions opts;
    opts.norm_ceiling = 1e-3;
    EXPECT_THROW((void)solve_abstract_riccati(K, p, opts), SolverError);
}

}  // namespace
}  // namespace gmfc
