#include "gmfc/kernel_ops.hpp"

#include "gmfc/errors.hpp"

#include <algorithm>

namespace gmfc {

Kernel symmetrize(const Kernel& g) {
    if (g.block_rows() != g.block_cols()) throw DomainError("symmetrize needs square blocks");
    Eigen::MatrixXd s = 0.5 * (g.dense() + g.dense().transpose());
    // Average once and mirror so the result is bitwise symmetric.
    s.triangularView<Eigen::StrictlyLower>() = s.transpose().triangularView<Eigen::StrictlyLower>();
    return Kernel(g.labels(), g.block_rows(), g.block_cols(), std::move(s));
}

Kernel flip_transpose(const Kernel& g) {
    return Kernel(g.labels(), g.block_cols(), g.block_rows(), g.dense().transpose());
}

Kernel compose(const Kernel& g1, const Kernel& g2, const LabelGrid& grid) {
    if (g1.labels() != g2.labels() || g1.labels() != grid.size()) {
        throw DomainError("compose: label counts disagree");
    }
    if (g1.block_cols() != g2.block_rows()) throw DomainError("compose: inner block dimensions disagree");
    const Eigen::VectorXd w = expanded_weights(grid, g1.block_cols());
    Eigen::MatrixXd out = g1.dense() * (w.asDiagonal() * g2.dense());
    return Kernel(g1.labels(), g1.block_rows(), g2.block_cols(), std::move(out));
}

double flip_symmetry_deviation(const Kernel& g) {
    if (g.block_rows() != g.block_cols()) throw DomainError("flip symmetry needs square blocks");
    if (g.dense().size() == 0) return 0.0;
    return (g.dense() - g.dense().transpose()).cwiseAbs().maxCoeff();
}

SymmetryCheck check_flip_symmetry(const Kernel& g, double tol) {
    SymmetryCheck c;
    c.deviation = flip_symmetry_deviation(g);
    c.passed = c.deviation <= tol;
    return c;
}

Kernel left_multiply(const LabelMatrices& left, const Kernel& g) {
    const std::size_t n = g.labels();
    if (left.size() != n) throw DomainError("left_multiply: need one matrix per label");
    const auto rows = static_cast<std::size_t>(left.empty() ? 0 : left.front().rows());
    Kernel out(n, rows, g.block_cols());
    for (std::size_t i = 0; i < n; ++i) {
        if (left[i].cols() != static_cast<Eigen::Index>(g.block_rows()) ||
            left[i].rows() != static_cast<Eigen::Index>(rows)) {
            throw DomainError("left_multiply: factor shape mismatch");
        }
        const auto r0 = static_cast<Eigen::Index>(i * g.block_rows());
        const auto br = static_cast<Eigen::Index>(g.block_rows());
        out.dense().middleRows(static_cast<Eigen::Index>(i * rows), static_cast<Eigen::Index>(rows)).noalias() =
            left[i] * g.dense().middleRows(r0, br);
    }
    return out;
}

Kernel right_multiply(const Kernel& g, const LabelMatrices& right) {
    const std::size_t n = g.labels();
    if (right.size() != n) throw DomainError("right_multiply: need one matrix per label");
    const auto cols = static_cast<std::size_t>(right.empty() ? 0 : right.front().cols());
    Kernel out(n, g.block_rows(), cols);
    for (std::size_t j = 0; j < n; ++j) {
        if (right[j].rows() != static_cast<Eigen::Index>(g.block_cols()) ||
            right[j].cols() != static_cast<Eigen::Index>(cols)) {
            throw DomainError("right_multiply: factor shape mismatch");
        }
        const auto c0 = static_cast<Eigen::Index>(j * g.block_cols());
        const auto bc = static_cast<Eigen::Index>(g.block_cols());
        out.dense().middleCols(static_cast<Eigen::Index>(j * cols), static_cast<Eigen::Index>(cols)).noalias() =
            g.dense().middleCols(c0, bc) * right[j];
    }
    return out;
}

Kernel weight_columns(const Kernel& g, const LabelGrid& grid) {
    if (g.labels() != grid.size()) throw DomainError("weight_columns: label counts disagree");
    Eigen::MatrixXd out = g.dense() * expanded_weights(grid, g.block_cols()).asDiagonal();
    return Kernel(g.labels(), g.block_rows(), g.block_cols(), std::move(out));
}

Kernel block_diagonal(const LabelMatrices& diag) {
    const std::size_t n = diag.size();
    const auto r = static_cast<std::size_t>(n == 0 ? 0 : diag.front().rows());
    const auto c = static_cast<std::size_t>(n == 0 ? 0 : diag.front().cols());
    Kernel out(n, r, c);
    for (std::size_t i = 0; i < n; ++i) out.block(i, i) = diag[i];
    return out;
}

LabelMatrices transposed(const LabelMatrices& m) {
    LabelMatrices out;
    out.reserve(m.size());
    for (const auto& x : m) out.emplace_back(x.transpose());
    return out;
}

}  // namespace gmfc
