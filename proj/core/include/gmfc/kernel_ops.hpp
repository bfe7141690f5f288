#pragma once

#include "gmfc/label_grid.hpp"

#include <Eigen/Dense>

#include <vector>

namespace gmfc {

/// One matrix per label (coefficients, Riccati slices, gains).
using LabelMatrices = std::vector<Eigen::MatrixXd>;

/// (G(u,v) + G(v,u)^T) / 2. Exactly flip-transpose symmetric on output.
Kernel symmetrize(const Kernel& g);

/// G(u,v) -> G(v,u)^T. An involution.
Kernel flip_transpose(const Kernel& g);

/// Block (i,j) = sum_k w_k G1(i,k) G2(k,j).
Kernel compose(const Kernel& g1, const Kernel& g2, const LabelGrid& grid);

/// max_{i,j} max-abs-entry of G(i,j) - G(j,i)^T.
double flip_symmetry_deviation(const Kernel& g);

struct SymmetryCheck {
    double deviation = 0.0;
    bool passed = true;
};
SymmetryCheck check_flip_symmetry(const Kernel& g, double tol);

/// Block (i,j) = L_i G(i,j).
Kernel left_multiply(const LabelMatrices& left, const Kernel& g);

/// Block (i,j) = G(i,j) R_j.
Kernel right_multiply(const Kernel& g, const LabelMatrices& right);

/// Block (i,j) = w_j G(i,j); the quadrature-weighted kernel used as a right factor.
Kernel weight_columns(const Kernel& g, const LabelGrid& grid);

/// Block-diagonal kernel with blocks D_i on the diagonal (unweighted).
Kernel block_diagonal(const LabelMatrices& diag);

/// Transpose every entry of a label-indexed matrix list.
LabelMatrices transposed(const LabelMatrices& m);

}  // namespace gmfc
