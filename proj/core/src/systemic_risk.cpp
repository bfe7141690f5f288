#include "gmfc/systemic_risk.hpp"

#include "gmfc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gmfc {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

LabelMatrices scalar_field(const LabelGrid& grid, const std::function<double(double)>& f) {
    LabelMatrices out;
    out.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out.emplace_back(Eigen::MatrixXd::Constant(1, 1, f(grid.point(i))));
    return out;
}

double closed_form(double k, double eta, double r, double tau) {
    const double root = std::sqrt(k * k + eta);
    const double dp = k + root;
    const double dm = k - root;
    const double e = std::exp((dp - dm) * tau);
    const double num = -eta * (e - 1.0) - r * (dp * e - dm);
    const double den = (dm * e - dp) - r * (e - 1.0);
    if (den == 0.0 || !std::isfinite(den)) throw DomainError("explicit K: vanishing denominator");
    return num / den;
}

}  // namespace

SystemicRiskParams systemic_risk_preset() {
    SystemicRiskParams p;
    p.k = -0.5;
    p.T = 1.0;
    p.sigma = [](double u) { return 0.5 + 0.2 * std::cos(two_pi * u); };
    p.eta = [](double u) { return 1.0 + 0.5 * std::cos(two_pi * u); };
    p.r = [](double u) { return 0.5 + 0.25 * std::sin(two_pi * u); };
    p.G_k = [](double u, double v) { return 0.5 + 0.4 * std::cos(two_pi * (u - v)); };
    p.G_eta = [](double u, double v) { return 0.6 + 0.3 * std::cos(two_pi * (u - v)); };
    p.G_r = [](double u, double v) { return 0.7 + 0.2 * std::cos(two_pi * (u - v)); };
    p.initial_mean = [](double u) { return 1.0 + 0.5 * std::sin(two_pi * u); };
    p.initial_variance = [](double) { return 0.04; };
    return p;
}

SystemicRiskParams homogeneous_systemic_risk_preset() {
    SystemicRiskParams p;
    p.k = -0.5;
    p.T = 1.0;
    p.sigma = [](double) { return 0.5; };
    p.eta = [](double) { return 1.0; };
    p.r = [](double) { return 0.5; };
    p.G_k = [](double, double) { return 1.0; };
    p.G_eta = [](double, double) { return 1.0; };
    p.G_r = [](double, double) { return 1.0; };
    p.initial_mean = [](double) { return 1.0; };
    p.initial_variance = [](double) { return 0.04; };
    return p;
}

void check_params(const SystemicRiskParams& params, const LabelGrid& grid) {
    if (!(params.k <= 0.0)) throw DomainError("systemic risk: the mean-reversion rate k must be <= 0");
    if (!(params.T > 0.0)) throw DomainError("systemic risk: horizon must be positive");
    if (!params.sigma || !params.eta || !params.r || !params.G_k || !params.G_eta || !params.G_r) {
        throw DomainError("systemic risk: all coefficient functions must be set");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double u = grid.point(i);
        if (!(params.sigma(u) > 0.0)) throw DomainError("systemic risk: sigma must be positive at label " + std::to_string(i));
        if (!(params.eta(u) > 0.0)) throw DomainError("systemic risk: eta must be positive at label " + std::to_string(i));
        if (!(params.r(u) > 0.0)) throw DomainError("systemic risk: r must be positive at label " + std::to_string(i));
    }
}

ProblemData build_model(const SystemicRiskParams& params, const LabelGrid& grid) {
    check_params(params, grid);
    const std::size_t n = grid.size();
    CoefficientField c = CoefficientField::zeros(n, 1, 1);
    c.A.assign(n, Eigen::MatrixXd::Constant(1, 1, params.k));
    c.B.assign(n, Eigen::MatrixXd::Ones(1, 1));
    c.Q = scalar_field(grid, params.eta);
    c.H = scalar_field(grid, params.r);
    for (std::size_t i = 0; i < n; ++i) c.gamma[i] = Eigen::VectorXd::Constant(1, params.sigma(grid.point(i)));

    ProblemData p = make_problem(grid, std::move(c), Horizon{0.0, params.T}, 1.0);
    p.G_A = sample_kernel(params.G_k, p.grid);
    p.G_A *= -params.k;
    const Kernel tilde_q = sample_kernel(params.G_eta, p.grid);
    const Kernel tilde_h = sample_kernel(params.G_r, p.grid);
    return from_centered(tilde_q, tilde_h, std::move(p));
}

InitialCondition initial_condition(const SystemicRiskParams& params, const LabelGrid& grid) {
    std::vector<Eigen::VectorXd> means;
    std::vector<Eigen::MatrixXd> covs;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double u = grid.point(i);
        means.emplace_back(Eigen::VectorXd::Constant(1, params.initial_mean ? params.initial_mean(u) : 0.0));
        covs.emplace_back(Eigen::MatrixXd::Constant(1, 1, params.initial_variance ? params.initial_variance(u) : 0.0));
    }
    return InitialCondition::gaussian(std::move(means), std::move(covs));
}

Eigen::VectorXd explicit_K(const SystemicRiskParams& params, const LabelGrid& grid, double t) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double u = grid.point(i);
        out(static_cast<Eigen::Index>(i)) = closed_form(params.k, params.eta(u), params.r(u), params.T - t);
    }
    return out;
}

HomogeneousReference homogeneous_reference(const SystemicRiskParams& params, const LabelGrid& grid,
                                           const TimeGrid& tg) {
    check_params(params, grid);
    const double u0 = grid.point(0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double u = grid.point(i);
        if (params.sigma(u) != params.sigma(u0) || params.eta(u) != params.eta(u0) || params.r(u) != params.r(u0)) {
            throw DomainError("homogeneous reference: coefficients vary across labels");
        }
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double v = grid.point(j);
            if (params.G_k(u, v) != 1.0 || params.G_eta(u, v) != 1.0 || params.G_r(u, v) != 1.0) {
                throw DomainError("homogeneous reference: graphons must be identically one");
            }
        }
    }
    const double eta = params.eta(u0);
    const double r = params.r(u0);
    const double s2 = params.sigma(u0) * params.sigma(u0);
    const std::size_t steps = tg.steps();
    HomogeneousReference ref;
    ref.grid = tg;
    ref.K.resize(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) ref.K[k] = closed_form(params.k, eta, r, params.T - tg.node(k));
    ref.barK.resize(steps + 1);
    std::transform(ref.K.begin(), ref.K.end(), ref.barK.begin(), [](double x) { return -x; });
    ref.Y.assign(steps + 1, 0.0);
    ref.Lambda.assign(steps + 1, 0.0);
    for (std::size_t k = steps; k-- > 0;) {
        const double mid = closed_form(params.k, eta, r, params.T - 0.5 * (tg.node(k) + tg.node(k + 1)));
        ref.Lambda[k] = ref.Lambda[k + 1] + s2 * tg.dt() / 6.0 * (ref.K[k] + 4.0 * mid + ref.K[k + 1]);
    }
    return ref;
}

double kernel_equation_residual(const SystemicRiskParams& params, const ProblemData& p, const RiccatiSolution& s) {
    const std::size_t n = p.labels();
    const auto nn = static_cast<Eigen::Index>(n);
    const double k = params.k;
    const Eigen::MatrixXd gk = sample_kernel(params.G_k, p.grid).dense();
    const Eigen::MatrixXd g_eta = p.G_Q.dense();
    const Eigen::MatrixXd w = expanded_weights(p.grid, 1).asDiagonal();
    const std::size_t steps = s.grid.steps();
    const double dt = s.grid.dt();
    double worst = 0.0;
    for (std::size_t t = 1; t < steps; ++t) {
        const Eigen::MatrixXd& kb = s.barK.nodes[t].dense();
        Eigen::VectorXd kv(nn);
        for (std::size_t i = 0; i < n; ++i) kv(static_cast<Eigen::Index>(i)) = s.K.nodes[t][i](0, 0);
        const Eigen::MatrixXd ku = kv.replicate(1, nn);   // K^u along rows
        const Eigen::MatrixXd kvv = ku.transpose();        // K^v along columns
        const Eigen::MatrixXd dot = (s.barK.nodes[t + 1].dense() - s.barK.nodes[t - 1].dense()) / (2.0 * dt);
        const Eigen::MatrixXd res = dot - k * gk.cwiseProduct(ku) - k * gk.cwiseProduct(kvv) + 2.0 * k * kb -
                                    k * kb * w * gk - k * gk * w * kb + g_eta - kb.cwiseProduct(ku + kvv) -
                                    kb * w * kb;
        worst = std::max(worst, res.cwiseAbs().maxCoeff());
    }
    return worst;
}

double explicit_K_deviation(const SystemicRiskParams& params, const ProblemData& p, const KPath& K) {
    double worst = 0.0;
    for (std::size_t t = 0; t < K.nodes.size(); ++t) {
        const Eigen::VectorXd ref = explicit_K(params, p.grid, K.grid.node(t));
        for (std::size_t i = 0; i < p.labels(); ++i) {
            worst = std::max(worst, std::abs(K.nodes[t][i](0, 0) - ref(static_cast<Eigen::Index>(i))));
        }
    }
    return worst;
}

}  // namespace gmfc
