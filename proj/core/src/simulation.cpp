#include "gmfc/simulation.hpp"

#include "gmfc/errors.hpp"
#include "gmfc/parallel.hpp"

#include <boost/random/normal_distribution.hpp>

#include <cmath>

namespace gmfc {

namespace {

constexpr std::uint32_t kInitialStream = 0;
constexpr std::uint32_t kIncrementStream = 1;

/// Mean-field inputs of one node, stacked over labels.
struct NodeTerms {
    LabelField policy_mean;     // n*m
    LabelField reference_mean;  // n*m, empty without reference
    LabelField drift_field;     // int G_A xbar, n*d
    LabelField noise_field;     // int G_C xbar, n*d
};

NodeTerms node_terms(const ProblemData& p, const AffinePolicy& policy, const FeedbackLaw* reference, std::size_t k,
                     const LabelField& xbar) {
    NodeTerms t;
    t.policy_mean = policy.mean_part(2 * k, xbar, p.grid);
    if (reference) t.reference_mean = reference->policy.mean_part(2 * k, xbar, p.grid);
    t.drift_field = apply_kernel(p.G_A, xbar, p.grid);
    t.noise_field = apply_kernel(p.G_C, xbar, p.grid);
    return t;
}

struct LabelRun {
    Eigen::MatrixXd X;  // d x M
    Eigen::RowVectorXd running, terminal, penalty;
    // Scratch reused across steps.
    Eigen::MatrixXd alpha, diff, drift, vol, state_tmp, control_tmp;
    Eigen::RowVectorXd dw;
};

class Stepper {
public:
    Stepper(const ProblemData& p, const AffinePolicy& policy, const SimulationOptions& o, Ensemble& ens)
        : p_(p), policy_(policy), opt_(o), ens_(ens) {}

    void initialize(std::size_t i, const InitialCondition& init, LabelRun& run) const {
        const auto d = static_cast<Eigen::Index>(p_.state_dim());
        const auto M = static_cast<Eigen::Index>(opt_.paths);
        run.X.resize(d, M);
        run.running = Eigen::RowVectorXd::Zero(M);
        run.terminal = Eigen::RowVectorXd::Zero(M);
        run.penalty = Eigen::RowVectorXd::Zero(M);
        if (init.is_deterministic()) {
            run.X.colwise() = init.mean(i);
            return;
        }
        auto eng = make_stream(opt_.seed, kInitialStream, i, 0);
        boost::random::normal_distribution<double> normal;
        Eigen::MatrixXd z(d, M);
        for (Eigen::Index c = 0; c < M; ++c) {
            for (Eigen::Index r = 0; r < d; ++r) z(r, c) = normal(eng);
        }
        run.X.noalias() = init.factor(i) * z;
        run.X.colwise() += init.mean(i);
    }

    /// Record costs and moments at node k, then advance to k+1 unless k is terminal.
    void process(std::size_t i, std::size_t k, const NodeTerms& t, LabelRun& run) const {
        const auto& c = p_.coeffs;
        const auto d = static_cast<Eigen::Index>(p_.state_dim());
        const auto m = static_cast<Eigen::Index>(p_.control_dim());
        const auto ii = static_cast<Eigen::Index>(i);
        const auto M = static_cast<Eigen::Index>(opt_.paths);
        const std::size_t steps = policy_.grid.steps();
        const double dt = policy_.grid.dt();
        const std::size_t h = 2 * k;

        Eigen::MatrixXd& alpha = run.alpha;
        alpha.noalias() = policy_.state_gain[h][i] * run.X;
        alpha.colwise() += t.policy_mean.segment(ii * m, m);

        const double w = (k == 0 || k == steps) ? 0.5 * dt : dt;
        run.state_tmp.noalias() = c.Q[i] * run.X;
        run.control_tmp.noalias() = c.R[i] * alpha;
        run.running += w * (run.X.cwiseProduct(run.state_tmp).colwise().sum() +
                            alpha.cwiseProduct(run.control_tmp).colwise().sum());
        if (opt_.reference) {
            run.diff.noalias() = opt_.reference->policy.state_gain[h][i] * run.X;
            run.diff = alpha - run.diff;
            run.diff.colwise() -= t.reference_mean.segment(ii * m, m);
            run.control_tmp.noalias() = opt_.reference->O[h][i] * run.diff;
            run.penalty += w * run.diff.cwiseProduct(run.control_tmp).colwise().sum();
        }

        const Eigen::VectorXd mean = run.X.rowwise().mean();
        ens_.empirical_mean[k].segment(ii * d, d) = mean;
        if (M > 1) {
            ens_.empirical_variance[k].segment(ii * d, d) =
                (run.X.colwise() - mean).array().square().rowwise().sum() / static_cast<double>(M - 1);
        }
        if (ens_.path_set) {
            ens_.path_set->states[i].middleRows(static_cast<Eigen::Index>(k) * d, d) = run.X;
            ens_.path_set->controls[i].middleRows(static_cast<Eigen::Index>(k) * m, m) = alpha;
        }

        if (k == steps) {
            run.state_tmp.noalias() = c.H[i] * run.X;
            run.terminal = run.X.cwiseProduct(run.state_tmp).colwise().sum();
            if (!run.X.allFinite()) throw SolverError("simulation overflow", i, policy_.grid.node(k));
            return;
        }

        run.drift.noalias() = c.A[i] * run.X;
        run.drift.noalias() += c.B[i] * alpha;
        run.drift.colwise() += t.drift_field.segment(ii * d, d) + c.beta[i];
        run.vol.setZero(d, M);
        if (!c.C[i].isZero(0.0)) run.vol.noalias() += c.C[i] * run.X;
        if (!c.D[i].isZero(0.0)) run.vol.noalias() += c.D[i] * alpha;
        run.vol.colwise() += t.noise_field.segment(ii * d, d) + c.gamma[i];

        auto eng = make_stream(opt_.seed, kIncrementStream, i, k);
        boost::random::normal_distribution<double> normal;
        run.dw.resize(M);
        const double sq = std::sqrt(dt);
        for (Eigen::Index col = 0; col < M; ++col) run.dw(col) = sq * normal(eng);

        run.X += dt * run.drift;
        run.X.array() += run.vol.array().rowwise() * run.dw.array();
        if (k % 64 == 0 && !run.X.allFinite()) {
            throw SolverError("simulation overflow", i, policy_.grid.node(k + 1));
        }
    }

private:
    const ProblemData& p_;
    const AffinePolicy& policy_;
    const SimulationOptions& opt_;
    Ensemble& ens_;
};

}  // namespace

std::mt19937_64 make_stream(std::uint64_t seed, std::uint32_t purpose, std::size_t label, std::size_t step) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32), purpose,
                      static_cast<std::uint32_t>(label & 0xffffffffu), static_cast<std::uint32_t>(label >> 32),
                      static_cast<std::uint32_t>(step & 0xffffffffu), static_cast<std::uint32_t>(step >> 32)};
    return std::mt19937_64(seq);
}

LabelField PathSet::empirical_mean(std::size_t k) const {
    const auto d = static_cast<Eigen::Index>(state_dim);
    LabelField out(static_cast<Eigen::Index>(states.size()) * d);
    for (std::size_t i = 0; i < states.size(); ++i) {
        out.segment(static_cast<Eigen::Index>(i) * d, d) =
            states[i].middleRows(static_cast<Eigen::Index>(k) * d, d).rowwise().mean();
    }
    return out;
}

Ensemble simulate(const ProblemData& p, const AffinePolicy& policy, const MeanFlow& means, const InitialCondition& init,
                  const SimulationOptions& options) {
    p.check_consistency();
    if (options.paths == 0) throw DomainError("simulate: at least one path is required");
    if (init.labels() != p.labels()) throw DomainError("simulate: initial condition has the wrong label count");
    if (policy.labels != p.labels() || policy.state_dim != p.state_dim() || policy.control_dim != p.control_dim()) {
        throw DomainError("simulate: policy does not match the problem dimensions");
    }
    const TimeGrid& tg = policy.grid;
    if (!options.particle_mode && !(means.grid == tg)) throw DomainError("simulate: mean flow and policy grids differ");
    if (options.reference && !(options.reference->policy.grid == tg)) {
        throw DomainError("simulate: reference law lives on a different grid");
    }
    const std::size_t n = p.labels();
    const std::size_t steps = tg.steps();
    const auto M = static_cast<Eigen::Index>(options.paths);
    const auto d = static_cast<Eigen::Index>(p.state_dim());

    Ensemble ens;
    ens.grid = tg;
    ens.paths = options.paths;
    ens.seed = options.seed;
    ens.particle_mode = options.particle_mode;
    ens.running_cost.resize(static_cast<Eigen::Index>(n), M);
    ens.terminal_cost.resize(static_cast<Eigen::Index>(n), M);
    ens.penalty.resize(static_cast<Eigen::Index>(n), M);
    ens.empirical_mean.assign(steps + 1, LabelField::Zero(static_cast<Eigen::Index>(n) * d));
    ens.empirical_variance.assign(steps + 1, LabelField::Zero(static_cast<Eigen::Index>(n) * d));
    if (options.store_paths) {
        PathSet ps;
        ps.grid = tg;
        ps.paths = options.paths;
        ps.state_dim = p.state_dim();
        ps.control_dim = p.control_dim();
        ps.states.assign(n, Eigen::MatrixXd(static_cast<Eigen::Index>((steps + 1) * p.state_dim()), M));
        ps.controls.assign(n, Eigen::MatrixXd(static_cast<Eigen::Index>((steps + 1) * p.control_dim()), M));
        ens.path_set = std::move(ps);
    }

    Stepper stepper(p, policy, options, ens);
    std::vector<LabelRun> runs(n);

    if (!options.particle_mode) {
        ens.mean_field = means.means;
        std::vector<NodeTerms> terms(steps + 1);
        for (std::size_t k = 0; k <= steps; ++k) terms[k] = node_terms(p, policy, options.reference, k, means.means[k]);
        parallel_for(n, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                stepper.initialize(i, init, runs[i]);
                for (std::size_t k = 0; k <= steps; ++k) stepper.process(i, k, terms[k], runs[i]);
            }
        });
    } else {
        ens.mean_field.resize(steps + 1);
        parallel_for(n, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) stepper.initialize(i, init, runs[i]);
        });
        for (std::size_t k = 0; k <= steps; ++k) {
            LabelField xbar(static_cast<Eigen::Index>(n) * d);
            for (std::size_t i = 0; i < n; ++i) xbar.segment(static_cast<Eigen::Index>(i) * d, d) = runs[i].X.rowwise().mean();
            ens.mean_field[k] = xbar;
            const NodeTerms t = node_terms(p, policy, options.reference, k, xbar);
            parallel_for(n, [&](std::size_t begin, std::size_t end) {
                for (std::size_t i = begin; i < end; ++i) stepper.process(i, k, t, runs[i]);
            });
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        ens.running_cost.row(ii) = runs[i].running;
        ens.terminal_cost.row(ii) = runs[i].terminal;
        ens.penalty.row(ii) = runs[i].penalty;
    }
    return ens;
}

double kernel_quadratic(const Kernel& g, const LabelField& x, const LabelGrid& grid) {
    const Eigen::VectorXd wx = expanded_weights(grid, g.block_rows()).cwiseProduct(x);
    return wx.dot(g.dense() * wx);
}

CostEstimate evaluate_cost(const ProblemData& p, const Ensemble& ens, const MeanFlow& means) {
    if (!(means.grid == ens.grid)) throw DomainError("evaluate_cost: ensemble and mean flow grids differ");
    const std::size_t n = p.labels();
    const std::size_t steps = ens.grid.steps();
    const double dt = ens.grid.dt();
    const auto M = static_cast<double>(ens.paths);

    CostEstimate c;
    double var_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        const Eigen::RowVectorXd total = ens.running_cost.row(ii) + ens.terminal_cost.row(ii);
        const double mean = total.mean();
        const double w = p.grid.weight(i);
        c.individual += w * mean;
        if (ens.paths > 1) {
            const double var = (total.array() - mean).square().sum() / (M - 1.0);
            var_sum += w * w * var;
        }
    }
    for (std::size_t k = 0; k <= steps; ++k) {
        const double w = (k == 0 || k == steps) ? 0.5 * dt : dt;
        c.mean_field += w * kernel_quadratic(p.G_Q, means.means[k], p.grid);
    }
    c.mean_field += kernel_quadratic(p.G_H, means.means[steps], p.grid);
    c.value = c.individual + c.mean_field;
    c.standard_error = std::sqrt(var_sum / M);
    return c;
}

namespace {

void check_paths(const ProblemData& p, const PathSet& paths) {
    if (paths.states.size() != p.labels() || paths.controls.size() != p.labels() || paths.state_dim != p.state_dim() ||
        paths.control_dim != p.control_dim() || paths.paths == 0) {
        throw DomainError("path set does not match the problem");
    }
}

}  // namespace

double standard_cost_on_paths(const ProblemData& p, const PathSet& paths) {
    check_paths(p, paths);
    const auto& c = p.coeffs;
    const std::size_t steps = paths.grid.steps();
    const double dt = paths.grid.dt();
    const auto d = static_cast<Eigen::Index>(p.state_dim());
    const auto m = static_cast<Eigen::Index>(p.control_dim());
    const auto M = static_cast<double>(paths.paths);
    double total = 0.0;
    for (std::size_t i = 0; i < p.labels(); ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k <= steps; ++k) {
            const double w = (k == 0 || k == steps) ? 0.5 * dt : dt;
            const auto x = paths.states[i].middleRows(static_cast<Eigen::Index>(k) * d, d);
            const auto a = paths.controls[i].middleRows(static_cast<Eigen::Index>(k) * m, m);
            acc += w * ((x.cwiseProduct(c.Q[i] * x)).sum() + (a.cwiseProduct(c.R[i] * a)).sum());
            if (k == steps) acc += (x.cwiseProduct(c.H[i] * x)).sum();
        }
        total += p.grid.weight(i) * acc / M;
    }
    for (std::size_t k = 0; k <= steps; ++k) {
        const double w = (k == 0 || k == steps) ? 0.5 * dt : dt;
        total += w * kernel_quadratic(p.G_Q, paths.empirical_mean(k), p.grid);
    }
    total += kernel_quadratic(p.G_H, paths.empirical_mean(steps), p.grid);
    return total;
}

double centered_cost_on_paths(const ProblemData& p, const Kernel& tilde_GQ, const Kernel& tilde_GH,
                              const PathSet& paths) {
    check_paths(p, paths);
    const auto& c = p.coeffs;
    const std::size_t steps = paths.grid.steps();
    const double dt = paths.grid.dt();
    const auto d = static_cast<Eigen::Index>(p.state_dim());
    const auto m = static_cast<Eigen::Index>(p.control_dim());
    const auto M = static_cast<double>(paths.paths);
    std::vector<LabelField> centre_q(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) centre_q[k] = apply_kernel(tilde_GQ, paths.empirical_mean(k), p.grid);
    const LabelField centre_h = apply_kernel(tilde_GH, paths.empirical_mean(steps), p.grid);

    double total = 0.0;
    for (std::size_t i = 0; i < p.labels(); ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        double acc = 0.0;
        for (std::size_t k = 0; k <= steps; ++k) {
            const double w = (k == 0 || k == steps) ? 0.5 * dt : dt;
            Eigen::MatrixXd x = paths.states[i].middleRows(static_cast<Eigen::Index>(k) * d, d);
            const auto a = paths.controls[i].middleRows(static_cast<Eigen::Index>(k) * m, m);
            Eigen::MatrixXd xq = x;
            xq.colwise() -= centre_q[k].segment(ii * d, d);
            acc += w * ((xq.cwiseProduct(c.Q[i] * xq)).sum() + (a.cwiseProduct(c.R[i] * a)).sum());
            if (k == steps) {
                x.colwise() -= centre_h.segment(ii * d, d);
                acc += (x.cwiseProduct(c.H[i] * x)).sum();
            }
        }
        total += p.grid.weight(i) * acc / M;
    }
    return total;
}

}  // namespace gmfc
