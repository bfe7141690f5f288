#include "gmfc/label_grid.hpp"

#include "gmfc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gmfc {

LabelGrid build_grid(std::size_t n) {
    if (n == 0) {
        throw DomainError("label grid needs at least one label");
    }
    LabelGrid grid;
    grid.points_.resize(n);
    grid.weights_.assign(n, 1.0 / static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        grid.points_[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    }
    return grid;
}

Kernel::Kernel(std::size_t labels, std::size_t block_rows, std::size_t block_cols)
    : labels_(labels),
      rows_(block_rows),
      cols_(block_cols),
      dense_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels * block_rows),
                                   static_cast<Eigen::Index>(labels * block_cols))) {}

Kernel::Kernel(std::size_t labels, std::size_t block_rows, std::size_t block_cols, Eigen::MatrixXd dense)
    : labels_(labels), rows_(block_rows), cols_(block_cols), dense_(std::move(dense)) {
    if (dense_.rows() != static_cast<Eigen::Index>(labels * block_rows) ||
        dense_.cols() != static_cast<Eigen::Index>(labels * block_cols)) {
        throw DomainError("kernel storage does not match labels x block shape");
    }
}

Kernel& Kernel::operator+=(const Kernel& other) {
    if (!same_shape(other)) throw DomainError("kernel shape mismatch in +=");
    dense_ += other.dense_;
    return *this;
}

Kernel& Kernel::operator-=(const Kernel& other) {
    if (!same_shape(other)) throw DomainError("kernel shape mismatch in -=");
    dense_ -= other.dense_;
    return *this;
}

Kernel& Kernel::operator*=(double s) {
    dense_ *= s;
    return *this;
}

Kernel sample_kernel(const KernelFunction& f, const LabelGrid& grid) {
    const std::size_t n = grid.size();
    if (n == 0) throw DomainError("sample_kernel on an empty grid");
    const Eigen::MatrixXd first = f(grid.point(0), grid.point(0));
    Kernel out(n, static_cast<std::size_t>(first.rows()), static_cast<std::size_t>(first.cols()));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const Eigen::MatrixXd b = (i == 0 && j == 0) ? first : f(grid.point(i), grid.point(j));
            if (b.rows() != first.rows() || b.cols() != first.cols()) {
                throw DomainError("kernel function returned blocks of varying shape");
            }
            if (!b.allFinite()) {
                throw DomainError("kernel function is not finite at (" + std::to_string(grid.point(i)) + ", " +
                                  std::to_string(grid.point(j)) + ")");
            }
            out.block(i, j) = b;
        }
    }
    return out;
}

Kernel sample_kernel(const ScalarKernelFunction& f, const LabelGrid& grid) {
    return sample_kernel(
        [&f](double u, double v) {
            Eigen::MatrixXd m(1, 1);
            m(0, 0) = f(u, v);
            return m;
        },
        grid);
}

Eigen::VectorXd expanded_weights(const LabelGrid& grid, std::size_t dim) {
    Eigen::VectorXd w(static_cast<Eigen::Index>(grid.size() * dim));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        w.segment(static_cast<Eigen::Index>(i * dim), static_cast<Eigen::Index>(dim)).setConstant(grid.weight(i));
    }
    return w;
}

LabelField apply_kernel(const Kernel& g, const LabelField& x, const LabelGrid& grid) {
    if (g.labels() != grid.size()) throw DomainError("kernel and grid disagree on label count");
    if (x.size() != static_cast<Eigen::Index>(grid.size() * g.block_cols())) {
        throw DomainError("field length does not match kernel block columns");
    }
    const Eigen::VectorXd wx = expanded_weights(grid, g.block_cols()).cwiseProduct(x);
    return g.dense() * wx;
}

double weighted_norm(const LabelField& x, const LabelGrid& grid) {
    if (grid.size() == 0 || x.size() % static_cast<Eigen::Index>(grid.size()) != 0) {
        throw DomainError("field length is not a multiple of the label count");
    }
    const auto dim = static_cast<std::size_t>(x.size()) / grid.size();
    return std::sqrt(expanded_weights(grid, dim).dot(x.cwiseAbs2()));
}

OperatorNorm operator_norm(const Kernel& g, const LabelGrid& grid, const PowerIterationOptions& options,
                           Eigen::VectorXd* warm_start) {
    if (g.labels() != grid.size()) throw DomainError("kernel and grid disagree on label count");
    const Eigen::VectorXd row_scale = expanded_weights(grid, g.block_rows()).cwiseSqrt();
    const Eigen::VectorXd col_scale = expanded_weights(grid, g.block_cols()).cwiseSqrt();
    const Eigen::MatrixXd m = row_scale.asDiagonal() * g.dense() * col_scale.asDiagonal();

    OperatorNorm result;
    if (m.size() == 0 || m.cwiseAbs().maxCoeff() == 0.0) {
        result.value = 0.0;
        return result;
    }

    Eigen::VectorXd x;
    if (warm_start != nullptr && warm_start->size() == m.cols() && warm_start->norm() > 0.0) {
        x = *warm_start;
    } else {
        // Mostly-constant start with a small ramp so it is never orthogonal to a
        // dominant constant or linear mode.
        x.resize(m.cols());
        for (Eigen::Index k = 0; k < x.size(); ++k) {
            x[k] = 1.0 + 0.1 * static_cast<double>(k) / static_cast<double>(x.size());
        }
    }
    x.normalize();

    double lambda = 0.0;
    result.converged = false;
    for (std::size_t it = 1; it <= options.max_iterations; ++it) {
        Eigen::VectorXd y = m.transpose() * (m * x);
        const double next = x.dot(y);
        const double ny = y.norm();
        result.iterations = it;
        if (ny == 0.0) {
            lambda = 0.0;
            result.converged = true;
            break;
        }
        x = y / ny;
        if (std::abs(next - lambda) <= options.relative_tolerance * std::abs(next)) {
            lambda = next;
            result.converged = true;
            break;
        }
        lambda = next;
    }
    result.value = std::sqrt(std::max(lambda, 0.0));
    if (warm_start != nullptr) *warm_start = x;
    return result;
}

}  // namespace gmfc
