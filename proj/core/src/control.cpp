#include "gmfc/control.hpp"

#include "gmfc/errors.hpp"
#include "gmfc/linear_closers.hpp"
#include "gmfc/riccati_abstract.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace gmfc {

LabelField AffinePolicy::mean_part(std::size_t h, const LabelField& xbar, const LabelGrid& grid) const {
    const Eigen::VectorXd wd = expanded_weights(grid, state_dim);
    LabelField out = offset[h];
    out.noalias() += mean_gain[h].dense() * wd.cwiseProduct(xbar);
    return out;
}

LabelField AffinePolicy::mean_control(std::size_t h, const LabelField& xbar, const LabelGrid& grid) const {
    LabelField out = mean_part(h, xbar, grid);
    const auto d = static_cast<Eigen::Index>(state_dim);
    const auto m = static_cast<Eigen::Index>(control_dim);
    for (std::size_t i = 0; i < labels; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        out.segment(ii * m, m) += state_gain[h][i] * xbar.segment(ii * d, d);
    }
    return out;
}

AffinePolicy zero_policy(const ProblemData& p, const TimeGrid& tg) {
    AffinePolicy a;
    a.grid = tg;
    a.labels = p.labels();
    a.state_dim = p.state_dim();
    a.control_dim = p.control_dim();
    const std::size_t hn = 2 * tg.steps() + 1;
    const auto d = static_cast<Eigen::Index>(a.state_dim);
    const auto m = static_cast<Eigen::Index>(a.control_dim);
    a.state_gain.assign(hn, LabelMatrices(a.labels, Eigen::MatrixXd::Zero(m, d)));
    a.mean_gain.assign(hn, Kernel(a.labels, a.control_dim, a.state_dim));
    a.offset.assign(hn, LabelField::Zero(static_cast<Eigen::Index>(a.labels) * m));
    return a;
}

FeedbackLaw build_feedback(const RiccatiSolution& s, const ProblemData& p) {
    const TimeGrid& tg = s.grid;
    FeedbackLaw law;
    law.policy = zero_policy(p, tg);
    const std::size_t hn = law.policy.half_nodes();
    const std::size_t n = p.labels();
    const auto d = static_cast<Eigen::Index>(p.state_dim());
    const auto m = static_cast<Eigen::Index>(p.control_dim());
    law.O.assign(hn, LabelMatrices(n));
    for (std::size_t h = 0; h < hn; ++h) {
        const LabelMatrices& K = s.K.at_half(h);
        const Kernel& kbar = s.barK.at_half(h);
        const LabelField& y = s.Y.at_half(h);
        LabelMatrices neg_oinv(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto ii = static_cast<Eigen::Index>(i);
            const OGain o = o_gain(p.coeffs, i, K[i]);
            law.O[h][i] = o.matrix();
            neg_oinv[i] = -o.inverse();
            law.policy.state_gain[h][i] = -o.solve(u_gain(p.coeffs, i, K[i]));
            law.policy.offset[h].segment(ii * m, m) = -o.solve(gamma_term(p.coeffs, i, K[i], y.segment(ii * d, d)));
        }
        law.policy.mean_gain[h] = left_multiply(neg_oinv, v_gain(K, kbar, p));
    }
    return law;
}

AffinePolicy shifted(AffinePolicy policy, double eps) {
    for (auto& o : policy.offset) o.array() += eps;
    return policy;
}

AffinePolicy scaled_gains(AffinePolicy policy, double factor) {
    for (auto& slice : policy.state_gain) {
        for (auto& s : slice) s *= factor;
    }
    for (auto& g : policy.mean_gain) g *= factor;
    return policy;
}

AffinePolicy without_mean_gain(AffinePolicy policy) {
    for (auto& g : policy.mean_gain) g.dense().setZero();
    return policy;
}

InitialCondition InitialCondition::deterministic(std::vector<Eigen::VectorXd> means) {
    std::vector<Eigen::MatrixXd> covs;
    covs.reserve(means.size());
    for (const auto& m : means) covs.emplace_back(Eigen::MatrixXd::Zero(m.size(), m.size()));
    InitialCondition ic = gaussian(std::move(means), std::move(covs));
    ic.deterministic_ = true;
    return ic;
}

InitialCondition InitialCondition::gaussian(std::vector<Eigen::VectorXd> means, std::vector<Eigen::MatrixXd> covariances) {
    if (means.size() != covariances.size()) throw DomainError("initial condition: one covariance per label required");
    InitialCondition ic;
    ic.deterministic_ = true;
    for (std::size_t i = 0; i < means.size(); ++i) {
        const auto& c = covariances[i];
        if (c.rows() != means[i].size() || c.cols() != means[i].size() || !c.allFinite() || !means[i].allFinite()) {
            throw DomainError("initial condition: bad shape or non-finite entry at label " + std::to_string(i));
        }
        const double asym = c.size() == 0 ? 0.0 : (c - c.transpose()).cwiseAbs().maxCoeff();
        if (asym > 1e-12 * std::max(1.0, c.cwiseAbs().maxCoeff())) {
            throw DomainError("initial covariance is not symmetric at label " + std::to_string(i));
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (c + c.transpose()));
        if (es.eigenvalues().size() > 0 && es.eigenvalues().minCoeff() < -1e-12) {
            throw DomainError("initial covariance is not positive semidefinite at label " + std::to_string(i));
        }
        const Eigen::VectorXd sq = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        ic.factors_.push_back(es.eigenvectors() * sq.asDiagonal() * es.eigenvectors().transpose());
        if (!c.isZero(0.0)) ic.deterministic_ = false;
    }
    ic.means_ = std::move(means);
    ic.covs_ = std::move(covariances);
    return ic;
}

LabelField InitialCondition::stacked_means() const {
    if (means_.empty()) return {};
    const Eigen::Index d = means_.front().size();
    LabelField out(static_cast<Eigen::Index>(means_.size()) * d);
    for (std::size_t i = 0; i < means_.size(); ++i) out.segment(static_cast<Eigen::Index>(i) * d, d) = means_[i];
    return out;
}

namespace {

LabelField mean_drift(const ProblemData& p, const AffinePolicy& policy, std::size_t h, const LabelField& xbar,
                      LabelField* control_out) {
    const auto d = static_cast<Eigen::Index>(p.state_dim());
    const auto m = static_cast<Eigen::Index>(p.control_dim());
    const LabelField abar = policy.mean_control(h, xbar, p.grid);
    LabelField out = apply_kernel(p.G_A, xbar, p.grid);
    for (std::size_t i = 0; i < p.labels(); ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        out.segment(ii * d, d) += p.coeffs.A[i] * xbar.segment(ii * d, d) + p.coeffs.beta[i] +
                                  p.coeffs.B[i] * abar.segment(ii * m, m);
    }
    if (control_out) *control_out = abar;
    return out;
}

}  // namespace

MeanFlow solve_mean_flow(const ProblemData& p, const AffinePolicy& policy, const InitialCondition& init) {
    p.check_consistency();
    if (policy.labels != p.labels() || policy.state_dim != p.state_dim() || policy.control_dim != p.control_dim()) {
        throw DomainError("mean flow: policy does not match the problem dimensions");
    }
    if (init.labels() != p.labels()) throw DomainError("mean flow: initial condition has the wrong label count");
    const TimeGrid& tg = policy.grid;
    const std::size_t steps = tg.steps();
    const double dt = tg.dt();

    MeanFlow flow;
    flow.grid = tg;
    flow.means.resize(steps + 1);
    flow.controls.resize(steps + 1);
    LabelField x = init.stacked_means();
    for (std::size_t k = 0; k < steps; ++k) {
        flow.means[k] = x;
        const LabelField f1 = mean_drift(p, policy, 2 * k, x, &flow.controls[k]);
        const LabelField f2 = mean_drift(p, policy, 2 * k + 1, x + 0.5 * dt * f1, nullptr);
        const LabelField f3 = mean_drift(p, policy, 2 * k + 1, x + 0.5 * dt * f2, nullptr);
        const LabelField f4 = mean_drift(p, policy, 2 * k + 2, x + dt * f3, nullptr);
        x += (dt / 6.0) * (f1 + 2.0 * f2 + 2.0 * f3 + f4);
        if (!x.allFinite()) throw SolverError("mean flow blew up", std::nullopt, tg.node(k + 1));
    }
    flow.means[steps] = x;
    flow.controls[steps] = policy.mean_control(2 * steps, x, p.grid);
    return flow;
}

}  // namespace gmfc
