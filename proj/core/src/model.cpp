#include "gmfc/model.hpp"

#include "gmfc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace gmfc {

namespace {

void require_shape(const LabelMatrices& m, std::size_t n, Eigen::Index rows, Eigen::Index cols, const char* name) {
    if (m.size() != n) {
        throw DomainError(std::string("coefficient ") + name + " has " + std::to_string(m.size()) +
                          " labels, expected " + std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (m[i].rows() != rows || m[i].cols() != cols) {
            throw DomainError(std::string("coefficient ") + name + "[" + std::to_string(i) + "] has shape " +
                              std::to_string(m[i].rows()) + "x" + std::to_string(m[i].cols()) + ", expected " +
                              std::to_string(rows) + "x" + std::to_string(cols));
        }
        if (!m[i].allFinite()) {
            throw DomainError(std::string("coefficient ") + name + "[" + std::to_string(i) + "] is not finite");
        }
    }
}

void require_vectors(const std::vector<Eigen::VectorXd>& v, std::size_t n, Eigen::Index d, const char* name) {
    if (v.size() != n) throw DomainError(std::string("coefficient ") + name + " has wrong label count");
    for (std::size_t i = 0; i < n; ++i) {
        if (v[i].size() != d || !v[i].allFinite()) {
            throw DomainError(std::string("coefficient ") + name + "[" + std::to_string(i) +
                              "] has wrong length or is not finite");
        }
    }
}

void require_kernel(const Kernel& g, std::size_t n, std::size_t d, const char* name) {
    if (g.labels() != n || g.block_rows() != d || g.block_cols() != d) {
        throw DomainError(std::string("kernel ") + name + " does not match grid/state dimension");
    }
    if (!g.all_finite()) throw DomainError(std::string("kernel ") + name + " is not finite");
}

Eigen::MatrixXd weighted_symmetric_matrix(const LabelMatrices& local, const Kernel& g, const LabelGrid& grid) {
    const Kernel gs = symmetrize(g);
    const std::size_t d = g.block_rows();
    const Eigen::VectorXd sw = expanded_weights(grid, d).cwiseSqrt();
    Eigen::MatrixXd s = sw.asDiagonal() * gs.dense() * sw.asDiagonal();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        s.block(static_cast<Eigen::Index>(i * d), static_cast<Eigen::Index>(i * d), static_cast<Eigen::Index>(d),
                static_cast<Eigen::Index>(d)) += local[i];
    }
    return s;
}

}  // namespace

CoefficientField CoefficientField::zeros(std::size_t labels, std::size_t state_dim, std::size_t control_dim) {
    const auto d = static_cast<Eigen::Index>(state_dim);
    const auto m = static_cast<Eigen::Index>(control_dim);
    CoefficientField c;
    c.state_dim = state_dim;
    c.control_dim = control_dim;
    c.A.assign(labels, Eigen::MatrixXd::Zero(d, d));
    c.B.assign(labels, Eigen::MatrixXd::Zero(d, m));
    c.C.assign(labels, Eigen::MatrixXd::Zero(d, d));
    c.D.assign(labels, Eigen::MatrixXd::Zero(d, m));
    c.Q.assign(labels, Eigen::MatrixXd::Zero(d, d));
    c.R.assign(labels, Eigen::MatrixXd::Identity(m, m));
    c.H.assign(labels, Eigen::MatrixXd::Zero(d, d));
    c.beta.assign(labels, Eigen::VectorXd::Zero(d));
    c.gamma.assign(labels, Eigen::VectorXd::Zero(d));
    return c;
}

void ProblemData::check_consistency() const {
    const std::size_t n = grid.size();
    if (n == 0) throw DomainError("problem has an empty label grid");
    if (coeffs.state_dim == 0 || coeffs.control_dim == 0) throw DomainError("state and control dimensions must be >= 1");
    const auto d = static_cast<Eigen::Index>(coeffs.state_dim);
    const auto m = static_cast<Eigen::Index>(coeffs.control_dim);
    require_shape(coeffs.A, n, d, d, "A");
    require_shape(coeffs.B, n, d, m, "B");
    require_shape(coeffs.C, n, d, d, "C");
    require_shape(coeffs.D, n, d, m, "D");
    require_shape(coeffs.Q, n, d, d, "Q");
    require_shape(coeffs.R, n, m, m, "R");
    require_shape(coeffs.H, n, d, d, "H");
    require_vectors(coeffs.beta, n, d, "beta");
    require_vectors(coeffs.gamma, n, d, "gamma");
    require_kernel(G_A, n, coeffs.state_dim, "G_A");
    require_kernel(G_C, n, coeffs.state_dim, "G_C");
    require_kernel(G_Q, n, coeffs.state_dim, "G_Q");
    require_kernel(G_H, n, coeffs.state_dim, "G_H");
    if (!(horizon.T > horizon.t0) || !std::isfinite(horizon.t0) || !std::isfinite(horizon.T)) {
        throw DomainError("horizon must satisfy t0 < T");
    }
    if (!(coercivity > 0.0)) throw DomainError("coercivity constant must be positive");
}

ProblemData make_problem(LabelGrid grid, CoefficientField coeffs, Horizon horizon, double coercivity) {
    ProblemData p;
    const std::size_t n = grid.size();
    const std::size_t d = coeffs.state_dim;
    p.grid = std::move(grid);
    p.coeffs = std::move(coeffs);
    p.G_A = Kernel(n, d, d);
    p.G_C = Kernel(n, d, d);
    p.G_Q = Kernel(n, d, d);
    p.G_H = Kernel(n, d, d);
    p.horizon = horizon;
    p.coercivity = coercivity;
    p.check_consistency();
    return p;
}

double min_symmetric_eigenvalue(const Eigen::MatrixXd& m) {
    if (m.size() == 0) return 0.0;
    const Eigen::MatrixXd s = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

ValidationReport validate(const ProblemData& p, double tolerance) {
    ValidationReport report;
    const std::size_t n = p.labels();
    const auto asym = [](const Eigen::MatrixXd& x) {
        return x.size() == 0 ? 0.0 : (x - x.transpose()).cwiseAbs().maxCoeff();
    };
    const double sym_tol = 1e-12;
    for (std::size_t i = 0; i < n; ++i) {
        const double q = min_symmetric_eigenvalue(p.coeffs.Q[i]);
        const double h = min_symmetric_eigenvalue(p.coeffs.H[i]);
        const double r = min_symmetric_eigenvalue(p.coeffs.R[i]);
        report.min_eig_Q.push_back(q);
        report.min_eig_H.push_back(h);
        report.min_eig_R.push_back(r);
        if (q < tolerance || asym(p.coeffs.Q[i]) > sym_tol) {
            report.q_ok = false;
            report.failures.push_back("Q[" + std::to_string(i) + "] is not symmetric PSD (min eigenvalue " +
                                      std::to_string(q) + ")");
        }
        if (h < tolerance || asym(p.coeffs.H[i]) > sym_tol) {
            report.h_ok = false;
            report.failures.push_back("H[" + std::to_string(i) + "] is not symmetric PSD (min eigenvalue " +
                                      std::to_string(h) + ")");
        }
        if (r < p.coercivity + tolerance || asym(p.coeffs.R[i]) > sym_tol) {
            report.r_ok = false;
            report.failures.push_back("R[" + std::to_string(i) + "] violates coercivity: min eigenvalue " +
                                      std::to_string(r) + " < c = " + std::to_string(p.coercivity));
        }
    }
    report.min_eig_SQ = min_symmetric_eigenvalue(weighted_symmetric_matrix(p.coeffs.Q, p.G_Q, p.grid));
    report.min_eig_SH = min_symmetric_eigenvalue(weighted_symmetric_matrix(p.coeffs.H, p.G_H, p.grid));
    if (report.min_eig_SQ < tolerance) {
        report.sq_ok = false;
        report.failures.push_back("running-cost positivity check fails: min eigenvalue of S_Q is " +
                                  std::to_string(report.min_eig_SQ));
    }
    if (report.min_eig_SH < tolerance) {
        report.sh_ok = false;
        report.failures.push_back("terminal-cost positivity check fails: min eigenvalue of S_H is " +
                                  std::to_string(report.min_eig_SH));
    }
    return report;
}

Kernel centered_cost_kernel(const Kernel& tilde, const LabelMatrices& weight, const LabelGrid& grid) {
    if (tilde.block_rows() != tilde.block_cols()) throw DomainError("centered kernel must have square blocks");
    const double scale = tilde.dense().size() == 0 ? 1.0 : std::max(1.0, tilde.dense().cwiseAbs().maxCoeff());
    const double dev = flip_symmetry_deviation(tilde);
    if (dev > 1e-12 * scale) {
        std::ostringstream os;
        os << "centered formulation needs a flip-transpose symmetric kernel (deviation " << dev << ")";
        throw DomainError(os.str());
    }
    if (weight.size() != grid.size()) throw DomainError("centered kernel: one weight matrix per label required");
    // int tG(u,w) W_w tG(w,v) dw
    Kernel out = compose(tilde, left_multiply(weight, tilde), grid);
    out -= left_multiply(weight, tilde);
    out -= right_multiply(tilde, weight);
    return out;
}

Kernel symmetric_cost_kernel(const Kernel& tilde, const LabelMatrices& weight_bar, const LabelGrid& grid) {
    if (weight_bar.size() != grid.size()) throw DomainError("symmetric kernel: one weight matrix per label required");
    if (tilde.block_rows() != tilde.block_cols()) throw DomainError("symmetric kernel must have square blocks");
    return compose(flip_transpose(tilde), left_multiply(weight_bar, tilde), grid);
}

ProblemData from_centered(const Kernel& tilde_GQ, const Kernel& tilde_GH, ProblemData base) {
    base.check_consistency();
    base.G_Q = centered_cost_kernel(tilde_GQ, base.coeffs.Q, base.grid);
    base.G_H = centered_cost_kernel(tilde_GH, base.coeffs.H, base.grid);
    base.check_consistency();
    return base;
}

ProblemData from_symmetric(const Kernel& tilde_GQ, const LabelMatrices& Q_bar, const Kernel& tilde_GH,
                           const LabelMatrices& H_bar, ProblemData base) {
    base.check_consistency();
    base.G_Q = symmetric_cost_kernel(tilde_GQ, Q_bar, base.grid);
    base.G_H = symmetric_cost_kernel(tilde_GH, H_bar, base.grid);
    base.check_consistency();
    return base;
}

}  // namespace gmfc
