#include "oracles.hpp"

#include <gmfc/errors.hpp>
#include <gmfc/problem_io.hpp>

#include <gtest/gtest.h>

#include <filesystem>

namespace gmfc {
namespace {

const char* kToy = R"(grid:
  n: 4
horizon:
  t0: 0
  T: 2
dimensions:
  state: 1
  control: 1
coefficients:
  A: {expr: "-0.5*u"}
  B: {value: 1}
  Q: {value: 1}
  R: {value: [[2]]}
  H: {table: [0.1, 0.2, 0.3, 0.4]}
kernels:
  form: standard
  G_A: {expr: "u*v"}
initial:
  mean: {expr: "1 + u"}
  covariance: {value: 0.04}
)";

void expect_same(const ProblemData& a, const ProblemData& b) {
    EXPECT_EQ(a.grid, b.grid);
    EXPECT_EQ(a.horizon.t0, b.horizon.t0);
    EXPECT_EQ(a.horizon.T, b.horizon.T);
    EXPECT_EQ(a.coercivity, b.coercivity);
    const auto& x = a.coeffs;
    const auto& y = b.coeffs;
    for (std::size_t i = 0; i < a.labels(); ++i) {
        EXPECT_EQ(x.A[i], y.A[i]);
        EXPECT_EQ(x.B[i], y.B[i]);
        EXPECT_EQ(x.C[i], y.C[i]);
        EXPECT_EQ(x.D[i], y.D[i]);
        EXPECT_EQ(x.Q[i], y.Q[i]);
        EXPECT_EQ(x.R[i], y.R[i]);
        EXPECT_EQ(x.H[i], y.H[i]);
        EXPECT_EQ(x.beta[i], y.beta[i]);
        EXPECT_EQ(x.gamma[i], y.gamma[i]);
    }
    EXPECT_EQ(a.G_A.dense(), b.G_A.dense());
    EXPECT_EQ(a.G_C.dense(), b.G_C.dense());
    EXPECT_EQ(a.G_Q.dense(), b.G_Q.dense());
    EXPECT_EQ(a.G_H.dense(), b.G_H.dense());
}

TEST(ProblemIo, ParsesAllEntryForms) {
    const ProblemFile f = parse_problem(kToy);
    const ProblemData& p = f.problem;
    EXPECT_EQ(p.labels(), 4u);
    EXPECT_EQ(p.horizon.T, 2.0);
    EXPECT_DOUBLE_EQ(p.coeffs.A[1](0, 0), -0.5 * 0.375);
    EXPECT_EQ(p.coeffs.R[3](0, 0), 2.0);
    EXPECT_EQ(p.coeffs.H[2](0, 0), 0.3);
    EXPECT_EQ(p.coercivity, 2.0);
    EXPECT_TRUE(p.G_Q.dense().isZero(0.0));
    EXPECT_DOUBLE_EQ(f.initial.mean(0)(0), 1.125);
    EXPECT_EQ(f.initial.covariance(2)(0, 0), 0.04);
}

TEST(ProblemIo, ExpressionKernelMatchesDirectSampling) {
    const ProblemData p = parse_problem(kToy).problem;
    const Kernel direct = sample_kernel(ScalarKernelFunction([](double u, double v) { return u * v; }), p.grid);
    EXPECT_EQ(p.G_A.dense(), direct.dense());
}

TEST(ProblemIo, RoundTripIsExact) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const ProblemData p = testing::random_problem(seed, 3, 2, 2);
        const InitialCondition init = testing::random_initial(seed, 3, 2);
        const ProblemFile back = parse_problem(dump_problem(p, &init));
        expect_same(p, back.problem);
        for (std::size_t i = 0; i < 3; ++i) {
            EXPECT_EQ(back.initial.mean(i), init.mean(i));
            EXPECT_EQ(back.initial.covariance(i), init.covariance(i));
        }
    }
}

TEST(ProblemIo, SaveAndLoadThroughAFile) {
    const ProblemData p = testing::random_problem(99, 2, 1, 1);
    const auto path = std::filesystem::temp_directory_path() / "gmfc_problem_io_test.yaml";
    save_problem(p, path.string());
    expect_same(p, load_problem(path.string()).problem);
    std::filesystem::remove(path);
}

TEST(ProblemIo, CenteredAndSymmetricForms) {
    const std::string base = R"(grid: {n: 3}
horizon: {T: 1}
dimensions: {state: 1, control: 1}
coefficients:
  Q: {value: 0.5}
  H: {value: 0.25}
  R: {value: 1}
)";
    const ProblemData centered =
        parse_problem(base + "kernels:\n  form: centered\n  tilde_G_Q: {expr: \"1\"}\n  tilde_G_H: {expr: \"1\"}\n").problem;
    EXPECT_LT((centered.G_Q.dense().array() + 0.5).abs().maxCoeff(), 1e-15);
    EXPECT_LT((centered.G_H.dense().array() + 0.25).abs().maxCoeff(), 1e-15);
    const ProblemData sym = parse_problem(base +
                                          "kernels:\n  form: symmetric\n  tilde_G_Q: {expr: \"1\"}\n  tilde_G_H: {expr: \"1\"}\n"
                                          "  Q_bar: {value: 2}\n  H_bar: {value: 3}\n")
                                .problem;
    EXPECT_LT((sym.G_Q.dense().array() - 2.0).abs().maxCoeff(), 1e-15);
    EXPECT_LT((sym.G_H.dense().array() - 3.0).abs().maxCoeff(), 1e-15);
}

TEST(ProblemIo, MissingFieldIsNamed) {
    const std::string text = "grid: {n: 2}\nhorizon: {T: 1}\ndimensions: {state: 1, control: 1}\ncoefficients:\n  Q: {value: 1}\n";
    try {
        (void)parse_problem(text);
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.field(), "coefficients.R");
        EXPECT_EQ(e.line(), 5u);
    }
}

TEST(ProblemIo, BadShapeReportsLineAndField) {
    const std::string text =
        "grid: {n: 2}\nhorizon: {T: 1}\ndimensions: {state: 2, control: 1}\ncoefficients:\n  R: {value: 1}\n"
        "  A: {value: [[1, 2], [3]]}\n";
    try {
        (void)parse_problem(text);
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.field(), "coefficients.A");
        EXPECT_EQ(e.line(), 6u);
    }
}

TEST(ProblemIo, MalformedYamlAndExpressions) {
    try {
        (void)parse_problem("grid: {n: 2\nhorizon: [\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_GT(e.line(), 0u);
    }
    const std::string bad_expr =
        "grid: {n: 2}\nhorizon: {T: 1}\ndimensions: {state: 1, control: 1}\ncoefficients:\n  R: {value: 1}\n"
        "  A: {expr: \"u +* 2\"}\n";
    EXPECT_THROW((void)parse_problem(bad_expr), ParseError);
    EXPECT_THROW((void)load_problem("/nonexistent/problem.yaml"), ParseError);
}

TEST(ProblemIo, RejectsInvalidHorizonAndCovariance) {
    EXPECT_THROW((void)parse_problem("grid: {n: 2}\nhorizon: {t0: 1, T: 1}\ndimensions: {state: 1, control: 1}\n"
                                     "coefficients:\n  R: {value: 1}\n"),
                 ParseError);
    EXPECT_THROW((void)parse_problem("grid: {n: 2}\nhorizon: {T: 1}\ndimensions: {state: 1, control: 1}\n"
                                     "coefficients:\n  R: {value: 1}\ninitial:\n  covariance: {value: -1}\n"),
                 ParseError);
}

}  // namespace
}  // namespace gmfc
