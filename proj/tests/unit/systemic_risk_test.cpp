#include "oracles.hpp"

#include <gmfc/errors.hpp>
#include <gmfc/riccati_system.hpp>
#include <gmfc/systemic_risk.hpp>

#include <gtest/gtest.h>

#include <cmath>

namespace gmfc {
namespace {

SystemicRiskParams flat(double k, double eta, double r) {
    SystemicRiskParams p = homogeneous_systemic_risk_preset();
    p.k = k;
    p.eta = [eta](double) { return eta; };
    p.r = [r](double) { return r; };
    return p;
}

TEST(ExplicitK, Examples) {
    const SystemicRiskParams params = systemic_risk_preset();
    const LabelGrid g = build_grid(16);
    const Eigen::VectorXd terminal = explicit_K(params, g, params.T);
    for (std::size_t i = 0; i < 16; ++i) EXPECT_NEAR(terminal(static_cast<Eigen::Index>(i)), params.r(g.point(i)), 1e-14);

    SystemicRiskParams spot = flat(0.0, 1.0, 1.0);
    spot.r = [](double) { return 0.0; };
    EXPECT_NEAR(explicit_K(spot, build_grid(1), 0.0)(0), std::tanh(1.0), 1e-14);
    EXPECT_NEAR(std::tanh(1.0), 0.761594, 1e-6);

    SystemicRiskParams tiny = flat(-0.5, 1e-14, 1.0);
    tiny.r = [](double) { return 0.0; };
    EXPECT_LT(std::abs(explicit_K(tiny, build_grid(1), 0.0)(0)), 1e-13);
}

TEST(ExplicitK, SolvesItsOwnOde) {
    const SystemicRiskParams params = systemic_risk_preset();
    const LabelGrid g = build_grid(5);
    const double h = 1e-5;
    for (double t : {0.1, 0.5, 0.9}) {
        const Eigen::VectorXd k = explicit_K(params, g, t);
        const Eigen::VectorXd dk = (explicit_K(params, g, t + h) - explicit_K(params, g, t - h)) / (2 * h);
        for (std::size_t i = 0; i < 5; ++i) {
            const auto ii = static_cast<Eigen::Index>(i);
            const double res = dk(ii) + 2 * params.k * k(ii) + params.eta(g.point(i)) - k(ii) * k(ii);
            EXPECT_LT(std::abs(res), 1e-8);
        }
    }
}

TEST(BuildModel, CoefficientsAndKernels) {
    const SystemicRiskParams params = systemic_risk_preset();
    const LabelGrid g = build_grid(6);
    const ProblemData p = build_model(params, g);
    EXPECT_EQ(p.state_dim(), 1u);
    EXPECT_EQ(p.control_dim(), 1u);
    for (std::size_t i = 0; i < 6; ++i) {
        EXPECT_EQ(p.coeffs.A[i](0, 0), params.k);
        EXPECT_EQ(p.coeffs.B[i](0, 0), 1.0);
        EXPECT_EQ(p.coeffs.gamma[i](0), params.sigma(g.point(i)));
        EXPECT_EQ(p.coeffs.beta[i](0), 0.0);
        for (std::size_t j = 0; j < 6; ++j) EXPECT_EQ(p.G_A.block(i, j)(0, 0), -params.k * params.G_k(g.point(i), g.point(j)));
    }
    EXPECT_TRUE(validate(p).passed());
}

TEST(BuildModel, HomogeneousCostKernelsAreConstant) {
    const ProblemData p = build_model(homogeneous_systemic_risk_preset(), build_grid(7));
    EXPECT_LT((p.G_Q.dense().array() + 1.0).abs().maxCoeff(), 1e-14);
    EXPECT_LT((p.G_H.dense().array() + 0.5).abs().maxCoeff(), 1e-14);
}

TEST(BuildModel, ZeroGraphonsDecouple) {
    SystemicRiskParams params = systemic_risk_preset();
    params.G_k = params.G_eta = params.G_r = [](double, double) { return 0.0; };
    const ProblemData p = build_model(params, build_grid(5));
    EXPECT_TRUE(p.G_A.dense().isZero(0.0));
    EXPECT_TRUE(p.G_Q.dense().isZero(0.0));
    EXPECT_TRUE(p.G_H.dense().isZero(0.0));
    const RiccatiSolution s = solve_system(p, TimeGrid(0, 1, 20));
    for (const auto& k : s.barK.nodes) EXPECT_TRUE(k.dense().isZero(0.0));
}

TEST(BuildModel, RejectsInvalidParameters) {
    SystemicRiskParams params = systemic_risk_preset();
    params.k = 0.1;
    EXPECT_THROW((void)build_model(params, build_grid(3)), DomainError);
    params = systemic_risk_preset();
    params.sigma = [](double u) { return u - 0.5; };
    EXPECT_THROW((void)build_model(params, build_grid(3)), DomainError);
}

TEST(Solver, MatchesClosedFormOnHeterogeneousPreset) {
    const SystemicRiskParams params = systemic_risk_preset();
    const ProblemData p = build_model(params, build_grid(16));
    const KPath k = solve_standard_riccati(p, TimeGrid(0, params.T, 1000));
    EXPECT_LE(explicit_K_deviation(params, p, k), 1e-6);
}

TEST(Solver, ModelKernelEquationResidual) {
    const SystemicRiskParams params = systemic_risk_preset();
    const ProblemData p = build_model(params, build_grid(8));
    const RiccatiSolution s = solve_system(p, TimeGrid(0, params.T, 1000));
    EXPECT_LT(kernel_equation_residual(params, p, s), 1e-5);
}

TEST(Solver, HomogeneousReference) {
    const SystemicRiskParams params = homogeneous_systemic_risk_preset();
    const LabelGrid g = build_grid(8);
    const ProblemData p = build_model(params, g);
    const TimeGrid tg(0, params.T, 1000);
    const RiccatiSolution s = solve_system(p, tg);
    const HomogeneousReference ref = homogeneous_reference(params, g, tg);
    double kbar = 0.0, lambda = 0.0;
    for (std::size_t t = 0; t < tg.nodes(); ++t) {
        kbar = std::max(kbar, (s.barK.nodes[t].dense().array() - ref.barK[t]).abs().maxCoeff());
        lambda = std::max(lambda, (s.Lambda.nodes[t].array() - ref.Lambda[t]).abs().maxCoeff());
        EXPECT_TRUE(s.Y.nodes[t].isZero(0.0));
        EXPECT_EQ(ref.Y[t], 0.0);
    }
    EXPECT_LE(kbar, 1e-6);
    EXPECT_LE(lambda, 1e-6);
    EXPECT_THROW((void)homogeneous_reference(systemic_risk_preset(), g, tg), DomainError);
}

TEST(Solver, KIsMonotoneInEta) {
    const LabelGrid g = build_grid(1);
    const TimeGrid tg(0, 1, 200);
    std::vector<double> previous;
    for (double eta : {0.1, 0.5, 1.0, 2.0, 4.0}) {
        const ProblemData p = build_model(flat(-0.5, eta, 0.5), g);
        const KPath k = solve_standard_riccati(p, tg);
        std::vector<double> current;
        for (const auto& slice : k.nodes) current.push_back(slice[0](0, 0));
        if (!previous.empty()) {
            for (std::size_t t = 0; t < current.size(); ++t) EXPECT_GE(current[t], previous[t]);
        }
        previous = current;
    }
}

}  // namespace
}  // namespace gmfc
