#include "gmfc/riccati_standard.hpp"

#include "gmfc/errors.hpp"
#include "gmfc/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gmfc {

namespace {

Eigen::MatrixXd sym(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

double spectral_norm(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

Eigen::MatrixXd phi(const CoefficientField& c, std::size_t i, const Eigen::MatrixXd& kappa) {
    return c.A[i].transpose() * kappa + kappa * c.A[i] + c.C[i].transpose() * kappa * c.C[i] + c.Q[i];
}

Eigen::MatrixXd u_gain(const CoefficientField& c, std::size_t i, const Eigen::MatrixXd& kappa) {
    return c.B[i].transpose() * kappa + c.D[i].transpose() * kappa * c.C[i];
}

OGain::OGain(Eigen::MatrixXd o, std::size_t label) : o_(std::move(o)), llt_(o_) {
    bool ok = llt_.info() == Eigen::Success && o_.allFinite();
    if (ok) {
        const auto diag = llt_.matrixLLT().diagonal();
        ok = diag.size() == 0 || diag.minCoeff() > 0.0;
    }
    if (!ok) {
        throw SolverError("O = R + D^T K D is not positive definite at label " + std::to_string(label), label);
    }
}

Eigen::MatrixXd OGain::inverse() const {
    return llt_.solve(Eigen::MatrixXd::Identity(o_.rows(), o_.cols()));
}

OGain o_gain(const CoefficientField& c, std::size_t i, const Eigen::MatrixXd& kappa) {
    return OGain(sym(c.R[i] + c.D[i].transpose() * kappa * c.D[i]), i);
}

Eigen::MatrixXd riccati_rhs(const CoefficientField& c, std::size_t i, const Eigen::MatrixXd& kappa) {
    const Eigen::MatrixXd u = u_gain(c, i, kappa);
    const OGain o = o_gain(c, i, kappa);
    return sym(phi(c, i, kappa) - u.transpose() * o.solve(u));
}

KPath solve_standard_riccati(const ProblemData& p, const TimeGrid& tg, const StandardRiccatiOptions& options) {
    p.check_consistency();
    const std::size_t n = p.labels();
    const std::size_t steps = tg.steps();
    const std::size_t fine = 2 * steps;
    const double h = 0.5 * tg.dt();

    KPath path;
    path.grid = tg;
    path.nodes.assign(steps + 1, LabelMatrices(n));
    path.midpoints.assign(steps, LabelMatrices(n));
    std::vector<double> label_norm(n, 0.0);

    const auto& c = p.coeffs;
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            Eigen::MatrixXd k = c.H[i];
            path.nodes[steps][i] = k;
            double norm = spectral_norm(k);
            for (std::size_t s = fine; s-- > 0;) {
                const Eigen::MatrixXd k1 = riccati_rhs(c, i, k);
                const Eigen::MatrixXd k2 = riccati_rhs(c, i, sym(k + 0.5 * h * k1));
                const Eigen::MatrixXd k3 = riccati_rhs(c, i, sym(k + 0.5 * h * k2));
                const Eigen::MatrixXd k4 = riccati_rhs(c, i, sym(k + h * k3));
                k = sym(k + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
                const double t = tg.half_node(s);
                if (!k.allFinite()) {
                    std::ostringstream os;
                    os << "standard Riccati blew up at label " << i << ", t = " << t;
                    throw SolverError(os.str(), i, t);
                }
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k, Eigen::EigenvaluesOnly);
                if (es.eigenvalues().minCoeff() < options.psd_tolerance) {
                    std::ostringstream os;
                    os << "standard Riccati lost positive semidefiniteness at label " << i << ", t = " << t
                       << " (min eigenvalue " << es.eigenvalues().minCoeff() << ")";
                    throw SolverError(os.str(), i, t);
                }
                norm = std::max(norm, es.eigenvalues().cwiseAbs().maxCoeff());
                if (s % 2 == 0) {
                    path.nodes[s / 2][i] = k;
                } else {
                    path.midpoints[s / 2][i] = k;
                }
            }
            label_norm[i] = norm;
        }
    });

    double residual = 0.0;
    for (std::size_t k = 1; k < steps; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            const Eigen::MatrixXd fd = (path.nodes[k + 1][i] - path.nodes[k - 1][i]) / (2.0 * tg.dt());
            const Eigen::MatrixXd r = fd + riccati_rhs(c, i, path.nodes[k][i]);
            residual = std::max(residual, r.cwiseAbs().maxCoeff());
        }
    }
    path.residual = residual;
    path.max_norm = label_norm.empty() ? 0.0 : *std::max_element(label_norm.begin(), label_norm.end());
    return path;
}

}  // namespace gmfc
