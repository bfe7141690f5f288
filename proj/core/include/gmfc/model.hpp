#pragma once

#include "gmfc/kernel_ops.hpp"
#include "gmfc/label_grid.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

namespace gmfc {

/// Per-label model data sampled at the grid labels. Time-constant.
///
/// A, C, Q, H are d x d; B, D are d x m; R is m x m; beta and gamma are
/// d-vectors. gamma is the state-independent part of the (scalar-noise)
/// diffusion coefficient.
struct CoefficientField {
    std::size_t state_dim = 0;
    std::size_t control_dim = 0;
    LabelMatrices A, B, C, D, Q, R, H;
    std::vector<Eigen::VectorXd> beta, gamma;

    [[nodiscard]] std::size_t labels() const noexcept { return A.size(); }

    /// All-zero dynamics and costs except R = I.
    static CoefficientField zeros(std::size_t labels, std::size_t state_dim, std::size_t control_dim);
};

struct Horizon {
    double t0 = 0.0;
    double T = 1.0;
};

/// Complete LQ problem instance in standard form. Immutable after construction
/// by convention; every solver takes it by const reference.
struct ProblemData {
    LabelGrid grid;
    CoefficientField coeffs;
    Kernel G_A, G_C, G_Q, G_H;
    Horizon horizon;
    double coercivity = 1.0;

    [[nodiscard]] std::size_t labels() const noexcept { return grid.size(); }
    [[nodiscard]] std::size_t state_dim() const noexcept { return coeffs.state_dim; }
    [[nodiscard]] std::size_t control_dim() const noexcept { return coeffs.control_dim; }

    /// Shapes, finiteness, horizon and coercivity sign. Throws DomainError.
    void check_consistency() const;
};

/// Zero-kernel problem with the given coefficients.
ProblemData make_problem(LabelGrid grid, CoefficientField coeffs, Horizon horizon, double coercivity);

struct ValidationReport {
    std::vector<double> min_eig_Q, min_eig_H, min_eig_R;
    double min_eig_SQ = 0.0;
    double min_eig_SH = 0.0;
    bool q_ok = true, h_ok = true, r_ok = true, sq_ok = true, sh_ok = true;
    /// Human-readable reasons, naming label indices.
    std::vector<std::string> failures;

    [[nodiscard]] bool passed() const noexcept { return q_ok && h_ok && r_ok && sq_ok && sh_ok; }
};

/// Report-only positivity diagnostics: per-label eigenvalues of Q, H, R and the
/// smallest eigenvalue of the weighted symmetric matrices
/// S(i,j) = delta_ij Q_i + sqrt(w_i) G_Q^S(i,j) sqrt(w_j) (likewise for H).
ValidationReport validate(const ProblemData& p, double tolerance = -1e-8);

/// Standard-form cost kernel of a centered penalty
/// E<W (X - int tG X), (X - int tG X)>:
/// int tG(u,w) W_w tG(w,v) dw - W_u tG(u,v) - tG(u,v) W_v.
/// `tilde` must be flip-transpose symmetric (DomainError otherwise).
Kernel centered_cost_kernel(const Kernel& tilde, const LabelMatrices& weight, const LabelGrid& grid);

/// Standard-form cost kernel of the penalty <int tG x, Wbar int tG x>:
/// int tG(w,u)^T Wbar_w tG(w,v) dw.
Kernel symmetric_cost_kernel(const Kernel& tilde, const LabelMatrices& weight_bar, const LabelGrid& grid);

/// Replace base.G_Q / base.G_H by the centered-form kernels built from base's Q and H.
ProblemData from_centered(const Kernel& tilde_GQ, const Kernel& tilde_GH, ProblemData base);

/// Replace base.G_Q / base.G_H by the symmetric-form kernels with weights Qbar, Hbar.
ProblemData from_symmetric(const Kernel& tilde_GQ, const LabelMatrices& Q_bar, const Kernel& tilde_GH,
                           const LabelMatrices& H_bar, ProblemData base);

/// Smallest eigenvalue of a symmetric matrix (symmetrized first).
double min_symmetric_eigenvalue(const Eigen::MatrixXd& m);

}  // namespace gmfc
