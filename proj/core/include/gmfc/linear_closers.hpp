#pragma once

#include "gmfc/label_grid.hpp"
#include "gmfc/model.hpp"
#include "gmfc/riccati_abstract.hpp"
#include "gmfc/riccati_standard.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace gmfc {

/// Gamma_i = D_i^T K_i gamma_i + B_i^T y_i  (m-vector).
Eigen::VectorXd gamma_term(const CoefficientField& c, std::size_t i, const Eigen::MatrixXd& K_i,
                           const Eigen::VectorXd& y_i);

/// Right-hand side of the first-order equation Y' + rhs(Y) = 0 at one time slice.
///
/// rhs_u(y) = A_u^T y_u + int G_A(v,u)^T y_v dv + K_u beta_u + C_u^T K_u gamma_u
///          + int G_C(v,u)^T K_v gamma_v dv + int Kbar(u,v) beta_v dv
///          - U_u^T O_u^{-1} Gamma_u - int V(v,u)^T O_v^{-1} Gamma_v dv.
LabelField y_rhs(const LabelMatrices& K, const Kernel& kbar, const LabelField& y, const ProblemData& p);

struct YPath {
    TimeGrid grid;
    std::vector<LabelField> nodes;
    /// Cubic Hermite values at step midpoints.
    std::vector<LabelField> midpoints;
    std::vector<LabelField> rates;
    double residual = 0.0;
    /// True when beta = gamma = 0 and the zero solution was returned directly.
    bool trivial = false;

    [[nodiscard]] const LabelField& at_half(std::size_t h) const {
        return h % 2 == 0 ? nodes[h / 2] : midpoints[h / 2];
    }
};

/// Backward RK4 from Y(T) = 0.
YPath solve_Y(const KPath& K, const BarKPath& barK, const ProblemData& p);

struct LambdaPath {
    TimeGrid grid;
    /// nodes[k](i) = Lambda_i(t_k).
    std::vector<Eigen::VectorXd> nodes;
    bool trivial = false;
};

/// Integrand <K gamma, gamma> + 2 <Y, beta> - <Gamma, O^{-1} Gamma> for every label.
Eigen::VectorXd lambda_integrand(const LabelMatrices& K, const LabelField& y, const ProblemData& p);

/// Backward Simpson quadrature per step, using the midpoint values of K and Y.
LambdaPath solve_Lambda(const KPath& K, const YPath& Y, const ProblemData& p);

}  // namespace gmfc
