#pragma once

#include "gmfc/label_grid.hpp"
#include "gmfc/model.hpp"
#include "gmfc/riccati_standard.hpp"
#include "gmfc/time_grid.hpp"

#include <cstddef>
#include <vector>

namespace gmfc {

/// Psi(K, kbar): the part of the kernel Riccati right-hand side that is
/// affine in kbar. Evaluated exactly as written, also off the symmetric manifold.
Kernel psi(const LabelMatrices& K, const Kernel& kbar, const ProblemData& p);

/// V(K, kbar)(i,j) = B_i^T kbar(i,j) + D_i^T K_i G_C(i,j)  (m x d blocks).
Kernel v_gain(const LabelMatrices& K, const Kernel& kbar, const ProblemData& p);

/// F(K, kbar) = Psi - U^T O^{-1} V - (U^T O^{-1} V)^flip - int V^T O^{-1} V.
Kernel f_rhs(const LabelMatrices& K, const Kernel& kbar, const ProblemData& p);
/// F at node `t_index` of `K`.
Kernel f_rhs(std::size_t t_index, const Kernel& kbar, const KPath& K, const ProblemData& p);

/// Kernel Riccati solution. `midpoints[k]` is the cubic Hermite value at
/// t_k + dt/2 built from the node values and node slopes.
struct BarKPath {
    TimeGrid grid;
    std::vector<Kernel> nodes;
    std::vector<Kernel> midpoints;
    /// F evaluated at each node (the slope is -F).
    std::vector<Kernel> rates;
    std::vector<double> operator_norms;
    /// Flip-symmetry deviation of each RK4 update before projection.
    std::vector<double> projection_drift;
    double residual = 0.0;

    [[nodiscard]] const Kernel& at_half(std::size_t h) const {
        return h % 2 == 0 ? nodes[h / 2] : midpoints[h / 2];
    }
};

struct AbstractRiccatiOptions {
    /// Operator-norm ceiling; exceeding it is reported as divergence.
    double norm_ceiling = 1e6;
    PowerIterationOptions power{};
};

/// Backward RK4 from symmetrize(G_H) with flip-transpose projection after each step.
BarKPath solve_abstract_riccati(const KPath& K, const ProblemData& p, const AbstractRiccatiOptions& options = {});

struct BarKDiagnostics {
    double max_symmetry_deviation = 0.0;
    double max_projection_drift = 0.0;
    double max_operator_norm = 0.0;
    double residual = 0.0;
};

BarKDiagnostics diagnostics(const BarKPath& path);

}  // namespace gmfc
