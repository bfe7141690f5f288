#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace gmfc {

/// Uniform composite-midpoint discretization of the label space U = [0, 1].
///
/// Every integral over U in the library is the weighted sum with these weights,
/// so there is exactly one quadrature rule in play.
class LabelGrid {
public:
    LabelGrid() = default;

    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] std::span<const double> points() const noexcept { return points_; }
    [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
    [[nodiscard]] double point(std::size_t i) const { return points_[i]; }
    [[nodiscard]] double weight(std::size_t i) const { return weights_[i]; }

    friend bool operator==(const LabelGrid&, const LabelGrid&) = default;

private:
    friend LabelGrid build_grid(std::size_t n);
    std::vector<double> points_;
    std::vector<double> weights_;
};

/// u_i = (i - 1/2)/n, w_i = 1/n. Throws DomainError for n = 0.
LabelGrid build_grid(std::size_t n);

/// Dense kernel on the label grid: an n x n array of (rows x cols) blocks.
///
/// Storage is one (n*rows) x (n*cols) matrix, block (i, j) ~ G(u_i, u_j). With
/// this layout the flip-transpose G(u,v) -> G(v,u)^T is the plain matrix
/// transpose and kernel composition is a single GEMM.
class Kernel {
public:
    Kernel() = default;
    Kernel(std::size_t labels, std::size_t block_rows, std::size_t block_cols);
    Kernel(std::size_t labels, std::size_t block_rows, std::size_t block_cols, Eigen::MatrixXd dense);

    [[nodiscard]] std::size_t labels() const noexcept { return labels_; }
    [[nodiscard]] std::size_t block_rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t block_cols() const noexcept { return cols_; }

    [[nodiscard]] auto block(std::size_t i, std::size_t j) {
        return dense_.block(static_cast<Eigen::Index>(i * rows_), static_cast<Eigen::Index>(j * cols_),
                            static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
    }
    [[nodiscard]] auto block(std::size_t i, std::size_t j) const {
        return dense_.block(static_cast<Eigen::Index>(i * rows_), static_cast<Eigen::Index>(j * cols_),
                            static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
    }

    [[nodiscard]] const Eigen::MatrixXd& dense() const noexcept { return dense_; }
    [[nodiscard]] Eigen::MatrixXd& dense() noexcept { return dense_; }

    [[nodiscard]] bool same_shape(const Kernel& other) const noexcept {
        return labels_ == other.labels_ && rows_ == other.rows_ && cols_ == other.cols_;
    }
    [[nodiscard]] bool all_finite() const { return dense_.allFinite(); }

    Kernel& operator+=(const Kernel& other);
    Kernel& operator-=(const Kernel& other);
    Kernel& operator*=(double s);

    friend Kernel operator+(Kernel a, const Kernel& b) { return a += b; }
    friend Kernel operator-(Kernel a, const Kernel& b) { return a -= b; }
    friend Kernel operator*(double s, Kernel a) { return a *= s; }

private:
    std::size_t labels_ = 0;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Eigen::MatrixXd dense_;
};

using KernelFunction = std::function<Eigen::MatrixXd(double, double)>;
using ScalarKernelFunction = std::function<double(double, double)>;

/// Block (i, j) = f(u_i, u_j). Rejects non-finite values and inconsistent block shapes.
Kernel sample_kernel(const KernelFunction& f, const LabelGrid& grid);
Kernel sample_kernel(const ScalarKernelFunction& f, const LabelGrid& grid);

/// Stacked per-label field: entries [i*dim, (i+1)*dim) belong to label i.
using LabelField = Eigen::VectorXd;

/// Quadrature surrogate of the integral operator: out_i = sum_j w_j G(i,j) x_j.
LabelField apply_kernel(const Kernel& g, const LabelField& x, const LabelGrid& grid);

/// Weighted l2 norm sqrt(sum_i w_i |x_i|^2) of a stacked field.
double weighted_norm(const LabelField& x, const LabelGrid& grid);

struct OperatorNorm {
    double value = 0.0;
    std::size_t iterations = 0;
    bool converged = true;
};

struct PowerIterationOptions {
    double relative_tolerance = 1e-10;
    std::size_t max_iterations = 10'000;
};

/// Operator norm of the discretized integral operator: the largest singular
/// value of the matrix with blocks sqrt(w_i) G(i,j) sqrt(w_j), by power
/// iteration on M^T M. `warm_start` (length n*cols) seeds the iteration and,
/// when given, receives the final iterate.
OperatorNorm operator_norm(const Kernel& g, const LabelGrid& grid, const PowerIterationOptions& options = {},
                           Eigen::VectorXd* warm_start = nullptr);

/// Expand per-label weights to a stacked field of length n*dim.
Eigen::VectorXd expanded_weights(const LabelGrid& grid, std::size_t dim);

}  // namespace gmfc
