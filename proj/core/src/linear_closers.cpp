#include "gmfc/linear_closers.hpp"

#include "gmfc/errors.hpp"

#include <algorithm>

namespace gmfc {

namespace {

bool forcing_vanishes(const CoefficientField& c) {
    for (std::size_t i = 0; i < c.labels(); ++i) {
        if (!c.beta[i].isZero(0.0) || !c.gamma[i].isZero(0.0)) return false;
    }
    return true;
}

LabelField stack(const std::vector<Eigen::VectorXd>& v) {
    if (v.empty()) return {};
    const Eigen::Index d = v.front().size();
    LabelField out(static_cast<Eigen::Index>(v.size()) * d);
    for (std::size_t i = 0; i < v.size(); ++i) out.segment(static_cast<Eigen::Index>(i) * d, d) = v[i];
    return out;
}

}  // namespace

Eigen::VectorXd gamma_term(const CoefficientField& c, std::size_t i, const Eigen::MatrixXd& K_i,
                           const Eigen::VectorXd& y_i) {
    return c.D[i].transpose() * (K_i * c.gamma[i]) + c.B[i].transpose() * y_i;
}

LabelField y_rhs(const LabelMatrices& K, const Kernel& kbar, const LabelField& y, const ProblemData& p) {
    const std::size_t n = p.labels();
    const auto d = static_cast<Eigen::Index>(p.state_dim());
    const auto m = static_cast<Eigen::Index>(p.control_dim());
    const auto& c = p.coeffs;
    const Eigen::VectorXd wd = expanded_weights(p.grid, p.state_dim());
    const Eigen::VectorXd wm = expanded_weights(p.grid, p.control_dim());

    LabelField k_gamma(static_cast<Eigen::Index>(n) * d);
    LabelField oinv_gamma(static_cast<Eigen::Index>(n) * m);
    LabelField out(static_cast<Eigen::Index>(n) * d);
    for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        const Eigen::VectorXd yi = y.segment(ii * d, d);
        k_gamma.segment(ii * d, d) = K[i] * c.gamma[i];
        const OGain o = o_gain(c, i, K[i]);
        const Eigen::VectorXd g = o.solve(gamma_term(c, i, K[i], yi));
        oinv_gamma.segment(ii * m, m) = g;
        out.segment(ii * d, d) = c.A[i].transpose() * yi + K[i] * c.beta[i] +
                                 c.C[i].transpose() * (K[i] * c.gamma[i]) -
                                 u_gain(c, i, K[i]).transpose() * g;
    }
    const Kernel v = v_gain(K, kbar, p);
    out.noalias() += p.G_A.dense().transpose() * wd.cwiseProduct(y);
    out.noalias() += p.G_C.dense().transpose() * wd.cwiseProduct(k_gamma);
    out.noalias() += kbar.dense() * wd.cwiseProduct(stack(c.beta));
    out.noalias() -= v.dense().transpose() * wm.cwiseProduct(oinv_gamma);
    return out;
}

YPath solve_Y(const KPath& K, const BarKPath& barK, const ProblemData& p) {
    p.check_consistency();
    const TimeGrid& tg = K.grid;
    if (!(barK.grid == tg)) throw DomainError("solve_Y: K and Kbar live on different time grids");
    const std::size_t steps = tg.steps();
    const double dt = tg.dt();
    const auto len = static_cast<Eigen::Index>(p.labels() * p.state_dim());

    YPath path;
    path.grid = tg;
    if (forcing_vanishes(p.coeffs)) {
        path.trivial = true;
        path.nodes.assign(steps + 1, LabelField::Zero(len));
        path.midpoints.assign(steps, LabelField::Zero(len));
        path.rates.assign(steps + 1, LabelField::Zero(len));
        return path;
    }

    path.nodes.resize(steps + 1);
    path.rates.resize(steps + 1);
    LabelField y = LabelField::Zero(len);
    path.nodes[steps] = y;
    path.rates[steps] = y_rhs(K.nodes[steps], barK.nodes[steps], y, p);
    for (std::size_t k = steps; k-- > 0;) {
        const LabelField& f1 = path.rates[k + 1];
        const LabelField f2 = y_rhs(K.midpoints[k], barK.midpoints[k], y + 0.5 * dt * f1, p);
        const LabelField f3 = y_rhs(K.midpoints[k], barK.midpoints[k], y + 0.5 * dt * f2, p);
        const LabelField f4 = y_rhs(K.nodes[k], barK.nodes[k], y + dt * f3, p);
        y += (dt / 6.0) * (f1 + 2.0 * f2 + 2.0 * f3 + f4);
        if (!y.allFinite()) throw SolverError("linear equation for Y blew up", std::nullopt, tg.node(k));
        path.nodes[k] = y;
        path.rates[k] = y_rhs(K.nodes[k], barK.nodes[k], y, p);
    }
    path.midpoints.resize(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        path.midpoints[k] =
            0.5 * (path.nodes[k] + path.nodes[k + 1]) + (dt / 8.0) * (path.rates[k + 1] - path.rates[k]);
    }
    for (std::size_t k = 1; k < steps; ++k) {
        const LabelField r = (path.nodes[k + 1] - path.nodes[k - 1]) / (2.0 * dt) + path.rates[k];
        if (r.size() > 0) path.residual = std::max(path.residual, r.cwiseAbs().maxCoeff());
    }
    return path;
}

Eigen::VectorXd lambda_integrand(const LabelMatrices& K, const LabelField& y, const ProblemData& p) {
    const std::size_t n = p.labels();
    const auto d = static_cast<Eigen::Index>(p.state_dim());
    const auto& c = p.coeffs;
    Eigen::VectorXd out(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const Eigen::VectorXd yi = y.segment(static_cast<Eigen::Index>(i) * d, d);
        const Eigen::VectorXd g = gamma_term(c, i, K[i], yi);
        const OGain o = o_gain(c, i, K[i]);
        out(static_cast<Eigen::Index>(i)) =
            c.gamma[i].dot(K[i] * c.gamma[i]) + 2.0 * yi.dot(c.beta[i]) - g.dot(o.solve(g));
    }
    return out;
}

LambdaPath solve_Lambda(const KPath& K, const YPath& Y, const ProblemData& p) {
    p.check_consistency();
    const TimeGrid& tg = K.grid;
    if (!(Y.grid == tg)) throw DomainError("solve_Lambda: K and Y live on different time grids");
    const std::size_t steps = tg.steps();
    const auto n = static_cast<Eigen::Index>(p.labels());

    LambdaPath path;
    path.grid = tg;
    path.nodes.assign(steps + 1, Eigen::VectorXd::Zero(n));
    if (forcing_vanishes(p.coeffs)) {
        path.trivial = true;
        return path;
    }
    Eigen::VectorXd g_right = lambda_integrand(K.nodes[steps], Y.nodes[steps], p);
    for (std::size_t k = steps; k-- > 0;) {
        const Eigen::VectorXd g_mid = lambda_integrand(K.midpoints[k], Y.midpoints[k], p);
        const Eigen::VectorXd g_left = lambda_integrand(K.nodes[k], Y.nodes[k], p);
        path.nodes[k] = path.nodes[k + 1] + (tg.dt() / 6.0) * (g_left + 4.0 * g_mid + g_right);
        g_right = g_left;
    }
    return path;
}

}  // namespace gmfc
