#pragma once

#include "gmfc/control.hpp"
#include "gmfc/model.hpp"
#include "gmfc/riccati_system.hpp"

#include <functional>
#include <string>
#include <vector>

namespace gmfc {

/// Interbank lending model: scalar log-reserves mean-reverting towards a
/// graphon-weighted average, controlled by central-bank lending, with centered
/// quadratic penalties.
struct SystemicRiskParams {
    double k = 0.0;  // mean-reversion rate, k <= 0
    double T = 1.0;
    std::function<double(double)> sigma, eta, r;
    ScalarKernelFunction G_k, G_eta, G_r;
    /// Gaussian initial reserves.
    std::function<double(double)> initial_mean, initial_variance;
};

/// Heterogeneous preset: periodic label profiles and graphons.
SystemicRiskParams systemic_risk_preset();
/// Label-constant coefficients with all graphons identically one.
SystemicRiskParams homogeneous_systemic_risk_preset();

/// Throws DomainError naming the violated condition.
void check_params(const SystemicRiskParams& params, const LabelGrid& grid);

/// d = m = 1, A = k, G_A = -k G_k, B = 1, C = D = 0, beta = 0, gamma = sigma,
/// Q = eta, H = r, R = 1, cost kernels from the centered formulation.
ProblemData build_model(const SystemicRiskParams& params, const LabelGrid& grid);

InitialCondition initial_condition(const SystemicRiskParams& params, const LabelGrid& grid);

/// Closed-form solution of K' + 2kK + eta - K^2 = 0, K(T) = r, at every label.
Eigen::VectorXd explicit_K(const SystemicRiskParams& params, const LabelGrid& grid, double t);

/// Closed-form objects of the homogeneous model on a time grid.
struct HomogeneousReference {
    TimeGrid grid;
    std::vector<double> K;       // per node
    std::vector<double> barK;    // -K
    std::vector<double> Lambda;  // sigma^2 int_t^T K
    std::vector<double> Y;       // zero
};

/// Rejects parameters that vary across labels or graphons that are not identically one.
HomogeneousReference homogeneous_reference(const SystemicRiskParams& params, const LabelGrid& grid,
                                           const TimeGrid& tg);

/// Max over interior nodes of the residual of the model's own kernel Riccati
/// equation, evaluated on a solver path by central differences.
double kernel_equation_residual(const SystemicRiskParams& params, const ProblemData& p, const RiccatiSolution& s);

/// Max |K_solver - explicit_K| over nodes and labels.
double explicit_K_deviation(const SystemicRiskParams& params, const ProblemData& p, const KPath& K);

}  // namespace gmfc
