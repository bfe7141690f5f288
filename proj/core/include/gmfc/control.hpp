#pragma once

#include "gmfc/label_grid.hpp"
#include "gmfc/model.hpp"
#include "gmfc/riccati_system.hpp"
#include "gmfc/time_grid.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace gmfc {

/// Control law affine in the own state and the mean field:
///   alpha_i(t) = S_i(t) x + sum_j w_j M(t)(i,j) xbar_j + o_i(t).
/// Stored on half-nodes h = 0..2*steps so RK4 stages can read it.
struct AffinePolicy {
    TimeGrid grid;
    std::size_t labels = 0;
    std::size_t state_dim = 0;
    std::size_t control_dim = 0;
    std::vector<LabelMatrices> state_gain;
    std::vector<Kernel> mean_gain;
    std::vector<LabelField> offset;

    [[nodiscard]] std::size_t half_nodes() const noexcept { return state_gain.size(); }

    /// sum_j w_j M(i,j) xbar_j + o_i for all i, stacked (length n*m).
    [[nodiscard]] LabelField mean_part(std::size_t h, const LabelField& xbar, const LabelGrid& grid) const;

    /// Expected control for every label given the mean field (length n*m).
    [[nodiscard]] LabelField mean_control(std::size_t h, const LabelField& xbar, const LabelGrid& grid) const;
};

/// Zero control on the grid.
AffinePolicy zero_policy(const ProblemData& p, const TimeGrid& tg);

/// The optimal law together with O at each half-node (needed by the penalty term).
struct FeedbackLaw {
    AffinePolicy policy;
    std::vector<LabelMatrices> O;
};

/// alpha = -O^{-1}(U x + int V xbar + Gamma).
FeedbackLaw build_feedback(const RiccatiSolution& s, const ProblemData& p);

/// Offset shifted by eps in every control component.
AffinePolicy shifted(AffinePolicy policy, double eps);
/// State and mean-field gains multiplied by `factor`; offset unchanged.
AffinePolicy scaled_gains(AffinePolicy policy, double factor);
/// Mean-field gain removed.
AffinePolicy without_mean_gain(AffinePolicy policy);

/// Per-label Gaussian initial law (covariance zero for deterministic data).
class InitialCondition {
public:
    static InitialCondition deterministic(std::vector<Eigen::VectorXd> means);
    /// Throws DomainError if a covariance is not symmetric PSD.
    static InitialCondition gaussian(std::vector<Eigen::VectorXd> means, std::vector<Eigen::MatrixXd> covariances);

    [[nodiscard]] std::size_t labels() const noexcept { return means_.size(); }
    [[nodiscard]] const Eigen::VectorXd& mean(std::size_t i) const { return means_[i]; }
    [[nodiscard]] const Eigen::MatrixXd& covariance(std::size_t i) const { return covs_[i]; }
    /// Symmetric square root of the covariance, used for sampling.
    [[nodiscard]] const Eigen::MatrixXd& factor(std::size_t i) const { return factors_[i]; }
    [[nodiscard]] LabelField stacked_means() const;
    [[nodiscard]] bool is_deterministic() const noexcept { return deterministic_; }

private:
    std::vector<Eigen::VectorXd> means_;
    std::vector<Eigen::MatrixXd> covs_;
    std::vector<Eigen::MatrixXd> factors_;
    bool deterministic_ = true;
};

/// Label means and expected controls along the flow of a policy.
struct MeanFlow {
    TimeGrid grid;
    std::vector<LabelField> means;
    std::vector<LabelField> controls;
};

/// Forward RK4 for the expectation of the controlled dynamics.
MeanFlow solve_mean_flow(const ProblemData& p, const AffinePolicy& policy, const InitialCondition& init);

}  // namespace gmfc
