#pragma once

#include "gmfc/kernel_ops.hpp"
#include "gmfc/model.hpp"
#include "gmfc/time_grid.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace gmfc {

/// A_i^T k + k A_i + C_i^T k C_i + Q_i.
Eigen::MatrixXd phi(const CoefficientField& c, std::size_t i, const Eigen::MatrixXd& kappa);

/// B_i^T k + D_i^T k C_i  (m x d).
Eigen::MatrixXd u_gain(const CoefficientField& c, std::size_t i, const Eigen::MatrixXd& kappa);

/// O_i(k) = R_i + D_i^T k D_i together with its Cholesky factor.
class OGain {
public:
    /// Throws SolverError naming `label` if `o` is not positive definite.
    OGain(Eigen::MatrixXd o, std::size_t label);

    [[nodiscard]] const Eigen::MatrixXd& matrix() const noexcept { return o_; }
    /// O^{-1} rhs.
    [[nodiscard]] Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const { return llt_.solve(rhs); }
    [[nodiscard]] Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const { return llt_.solve(rhs); }
    [[nodiscard]] Eigen::MatrixXd inverse() const;

private:
    Eigen::MatrixXd o_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
};

OGain o_gain(const CoefficientField& c, std::size_t i, const Eigen::MatrixXd& kappa);

/// Phi_i(k) - U_i(k)^T O_i(k)^{-1} U_i(k), symmetrized. K' = -riccati_rhs(K).
Eigen::MatrixXd riccati_rhs(const CoefficientField& c, std::size_t i, const Eigen::MatrixXd& kappa);

/// Per-label K on a time grid. `midpoints[k]` holds K at t_k + dt/2; both come
/// from one RK4 solve on the doubled grid.
struct KPath {
    TimeGrid grid;
    std::vector<LabelMatrices> nodes;
    std::vector<LabelMatrices> midpoints;
    /// max over interior nodes and labels of |central difference + rhs|.
    double residual = 0.0;
    /// max over nodes and labels of the spectral norm of K.
    double max_norm = 0.0;

    [[nodiscard]] const LabelMatrices& at_half(std::size_t h) const {
        return h % 2 == 0 ? nodes[h / 2] : midpoints[h / 2];
    }
};

struct StandardRiccatiOptions {
    double psd_tolerance = -1e-8;
};

/// Backward RK4 from K(T) = H with symmetric projection; labels solved independently.
/// Throws SolverError (label, time) on blow-up, PSD loss or a singular O.
KPath solve_standard_riccati(const ProblemData& p, const TimeGrid& tg, const StandardRiccatiOptions& options = {});

}  // namespace gmfc
