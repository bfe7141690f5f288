#include "gmfc/riccati_abstract.hpp"

#include "gmfc/errors.hpp"
#include "gmfc/kernel_ops.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gmfc {

namespace {

LabelMatrices products(const LabelMatrices& left_t, const LabelMatrices& right) {
    // left_t[i]^T * right[i]
    LabelMatrices out(right.size());
    for (std::size_t i = 0; i < right.size(); ++i) out[i] = left_t[i].transpose() * right[i];
    return out;
}

void check_slice(const LabelMatrices& K, const Kernel& kbar, const ProblemData& p) {
    if (K.size() != p.labels() || kbar.labels() != p.labels() || kbar.block_rows() != p.state_dim() ||
        kbar.block_cols() != p.state_dim()) {
        throw DomainError("kernel Riccati: K slice or kernel does not match the problem dimensions");
    }
}

}  // namespace

Kernel psi(const LabelMatrices& K, const Kernel& kbar, const ProblemData& p) {
    check_slice(K, kbar, p);
    const auto& c = p.coeffs;
    Kernel part = left_multiply(K, p.G_A);
    part += left_multiply(products(c.C, K), p.G_C);
    part += left_multiply(transposed(c.A), kbar);
    part += compose(flip_transpose(p.G_A), kbar, p.grid);
    Kernel out = part + flip_transpose(part);
    out += symmetrize(compose(flip_transpose(p.G_C), left_multiply(K, p.G_C), p.grid));
    out += symmetrize(p.G_Q);
    return out;
}

Kernel v_gain(const LabelMatrices& K, const Kernel& kbar, const ProblemData& p) {
    check_slice(K, kbar, p);
    const auto& c = p.coeffs;
    Kernel v = left_multiply(transposed(c.B), kbar);
    v += left_multiply(products(c.D, K), p.G_C);
    return v;
}

Kernel f_rhs(const LabelMatrices& K, const Kernel& kbar, const ProblemData& p) {
    const std::size_t n = p.labels();
    Kernel out = psi(K, kbar, p);
    const Kernel v = v_gain(K, kbar, p);

    LabelMatrices ut_oinv(n), oinv(n);
    for (std::size_t i = 0; i < n; ++i) {
        const OGain o = o_gain(p.coeffs, i, K[i]);
        oinv[i] = o.inverse();
        ut_oinv[i] = u_gain(p.coeffs, i, K[i]).transpose() * oinv[i];
    }
    const Kernel z = left_multiply(ut_oinv, v);
    out -= z;
    out -= flip_transpose(z);
    out -= symmetrize(compose(flip_transpose(v), left_multiply(oinv, v), p.grid));
    return out;
}

Kernel f_rhs(std::size_t t_index, const Kernel& kbar, const KPath& K, const ProblemData& p) {
    if (t_index >= K.nodes.size()) throw DomainError("f_rhs: time index out of range");
    return f_rhs(K.nodes[t_index], kbar, p);
}

BarKPath solve_abstract_riccati(const KPath& K, const ProblemData& p, const AbstractRiccatiOptions& options) {
    p.check_consistency();
    const TimeGrid& tg = K.grid;
    const std::size_t steps = tg.steps();
    const double dt = tg.dt();
    if (K.nodes.size() != steps + 1 || K.midpoints.size() != steps) {
        throw DomainError("kernel Riccati: K path does not match its time grid");
    }

    BarKPath path;
    path.grid = tg;
    path.nodes.resize(steps + 1);
    path.rates.resize(steps + 1);
    path.operator_norms.assign(steps + 1, 0.0);
    path.projection_drift.assign(steps, 0.0);

    Eigen::VectorXd warm;
    auto record = [&](std::size_t k, const Kernel& kb) {
        const OperatorNorm norm = operator_norm(kb, p.grid, options.power, &warm);
        path.operator_norms[k] = norm.value;
        if (!kb.all_finite() || !std::isfinite(norm.value)) {
            std::ostringstream os;
            os << "kernel Riccati blew up at t = " << tg.node(k);
            throw SolverError(os.str(), std::nullopt, tg.node(k));
        }
        if (norm.value > options.norm_ceiling) {
            std::ostringstream os;
            os << "kernel Riccati operator norm " << norm.value << " exceeds the ceiling " << options.norm_ceiling
               << " at t = " << tg.node(k);
            throw SolverError(os.str(), std::nullopt, tg.node(k));
        }
    };

    Kernel kb = symmetrize(p.G_H);
    path.nodes[steps] = kb;
    record(steps, kb);
    path.rates[steps] = f_rhs(K.nodes[steps], kb, p);

    for (std::size_t k = steps; k-- > 0;) {
        const LabelMatrices& k_mid = K.midpoints[k];
        const Kernel& f1 = path.rates[k + 1];
        const Kernel f2 = f_rhs(k_mid, kb + (0.5 * dt) * f1, p);
        const Kernel f3 = f_rhs(k_mid, kb + (0.5 * dt) * f2, p);
        const Kernel f4 = f_rhs(K.nodes[k], kb + dt * f3, p);
        Kernel next = kb;
        next.dense() += (dt / 6.0) * (f1.dense() + 2.0 * f2.dense() + 2.0 * f3.dense() + f4.dense());
        path.projection_drift[k] = flip_symmetry_deviation(next);
        kb = symmetrize(next);
        path.nodes[k] = kb;
        record(k, kb);
        path.rates[k] = f_rhs(K.nodes[k], kb, p);
    }

    path.midpoints.resize(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        Kernel mid = path.nodes[k] + path.nodes[k + 1];
        mid *= 0.5;
        mid.dense() += (dt / 8.0) * (path.rates[k + 1].dense() - path.rates[k].dense());
        path.midpoints[k] = std::move(mid);
    }

    double residual = 0.0;
    for (std::size_t k = 1; k < steps; ++k) {
        const Eigen::MatrixXd r =
            (path.nodes[k + 1].dense() - path.nodes[k - 1].dense()) / (2.0 * dt) + path.rates[k].dense();
        if (r.size() > 0) residual = std::max(residual, r.cwiseAbs().maxCoeff());
    }
    path.residual = residual;
    return path;
}

BarKDiagnostics diagnostics(const BarKPath& path) {
    BarKDiagnostics d;
    for (const Kernel& kb : path.nodes) d.max_symmetry_deviation = std::max(d.max_symmetry_deviation, flip_symmetry_deviation(kb));
    for (double x : path.projection_drift) d.max_projection_drift = std::max(d.max_projection_drift, x);
    for (double x : path.operator_norms) d.max_operator_norm = std::max(d.max_operator_norm, x);
    d.residual = path.residual;
    return d;
}

}  // namespace gmfc
